#pragma once

// Gauge configuration files.
//
// Little-endian binary:
//   char[4]  magic "EOWG"
//   u32      version (1)
//   u32 x 4  NX, NY, NZ, NT
//   u8       precision: bytes per real, 4 (single) or 8 (double)
// followed by the links of the full lattice in
//   [t][z][y][x][dir][row][col][re,im]
// order. Readers return the double-precision scalar field; pack_gauge()
// converts it to the kernel layout.

#include <filesystem>
#include <iosfwd>

#include "eowilson/layout.hpp"

namespace eowilson {

inline constexpr char kGaugeMagic[4] = {'E', 'O', 'W', 'G'};
inline constexpr std::uint32_t kGaugeFileVersion = 1;

// bytes_per_real must be 4 or 8. Throws LayoutError on I/O failure.
void write_gauge(std::ostream& out, const ScalarGaugeField& gauge, int bytes_per_real);
void write_gauge_file(const std::filesystem::path& path, const ScalarGaugeField& gauge,
                      int bytes_per_real);

// Throws LayoutError on bad magic, unknown version or precision, or a
// truncated stream.
ScalarGaugeField read_gauge(std::istream& in);
ScalarGaugeField read_gauge_file(const std::filesystem::path& path);

}  // namespace eowilson
