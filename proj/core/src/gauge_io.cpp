#include "eowilson/gauge_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "eowilson/errors.hpp"

namespace eowilson {

namespace {

template <class U>
void put_le(std::ostream& out, U value) {
  std::array<unsigned char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <class U>
U get_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw LayoutError("gauge file is truncated");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

void put_real(std::ostream& out, double v, int bytes_per_real) {
  if (bytes_per_real == 4)
    put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  else
    put_le(out, std::bit_cast<std::uint64_t>(v));
}

double get_real(std::istream& in, int bytes_per_real) {
  if (bytes_per_real == 4) return std::bit_cast<float>(get_le<std::uint32_t>(in));
  return std::bit_cast<double>(get_le<std::uint64_t>(in));
}

}  // namespace

void write_gauge(std::ostream& out, const ScalarGaugeField& gauge, int bytes_per_real) {
  if (bytes_per_real != 4 && bytes_per_real != 8)
    throw LayoutError("gauge precision must be 4 or 8 bytes per real");
  out.write(kGaugeMagic, sizeof(kGaugeMagic));
  put_le<std::uint32_t>(out, kGaugeFileVersion);
  for (int n : gauge.size) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(bytes_per_real));
  // Lexicographic site order with x fastest is exactly [t][z][y][x].
  for (const auto& site : gauge.links)
    for (const ColorMatrix& u : site)
      for (int r = 0; r < kNumColors; ++r)
        for (int c = 0; c < kNumColors; ++c) {
          put_real(out, u(r, c).real(), bytes_per_real);
          put_real(out, u(r, c).imag(), bytes_per_real);
        }
  if (!out) throw LayoutError("failed writing gauge configuration");
}

void write_gauge_file(const std::filesystem::path& path, const ScalarGaugeField& gauge,
                      int bytes_per_real) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LayoutError("cannot open " + path.string() + " for writing");
  write_gauge(out, gauge, bytes_per_real);
}

ScalarGaugeField read_gauge(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof(magic))) throw LayoutError("gauge file is truncated");
  if (std::memcmp(magic, kGaugeMagic, sizeof(magic)) != 0)
    throw LayoutError("not a gauge configuration (bad magic)");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kGaugeFileVersion)
    throw LayoutError("unsupported gauge file version " + std::to_string(version));
  Dims size{};
  for (int& n : size) {
    const auto v = get_le<std::uint32_t>(in);
    if (v == 0 || v > (1u << 20)) throw LayoutError("implausible lattice extent in gauge file");
    n = static_cast<int>(v);
  }
  const int bytes_per_real = get_le<std::uint8_t>(in);
  if (bytes_per_real != 4 && bytes_per_real != 8)
    throw LayoutError("unsupported gauge precision " + std::to_string(bytes_per_real));

  ScalarGaugeField gauge(size);
  for (auto& site : gauge.links)
    for (ColorMatrix& u : site)
      for (int r = 0; r < kNumColors; ++r)
        for (int c = 0; c < kNumColors; ++c) {
          const double re = get_real(in, bytes_per_real);
          const double im = get_real(in, bytes_per_real);
          u(r, c) = {re, im};
        }
  return gauge;
}

ScalarGaugeField read_gauge_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LayoutError("cannot open " + path.string());
  return read_gauge(in);
}

}  // namespace eowilson
