#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

#include "eowilson/errors.hpp"
#include "eowilson/gauge_io.hpp"

using namespace eowilson;

namespace {

std::string serialize(const ScalarGaugeField& g, int bytes) {
  std::ostringstream out(std::ios::binary);
  write_gauge(out, g, bytes);
  return out.str();
}

ScalarGaugeField parse(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_gauge(in);
}

}  // namespace

TEST(GaugeIo, DoubleRoundTripIsExact) {
  const ScalarGaugeField g = random_gauge({4, 2, 2, 4}, 9);
  const ScalarGaugeField back = parse(serialize(g, 8));
  EXPECT_EQ(back.size, g.size);
  EXPECT_EQ(back.links, g.links);
}

TEST(GaugeIo, SingleRoundTripRoundsToFloat) {
  const ScalarGaugeField g = random_gauge({2, 2, 2, 2}, 4);
  const ScalarGaugeField back = parse(serialize(g, 4));
  for (std::size_t s = 0; s < g.links.size(); ++s)
    for (int mu = 0; mu < 4; ++mu)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const Complex z = g.links[s][mu](a, b);
          EXPECT_EQ(back.links[s][mu](a, b),
                    Complex(static_cast<float>(z.real()), static_cast<float>(z.imag())));
        }
}

TEST(GaugeIo, HeaderLayout) {
  const std::string bytes = serialize(unit_gauge({2, 4, 6, 8}), 4);
  ASSERT_GE(bytes.size(), 25u);
  EXPECT_EQ(bytes.substr(0, 4), "EOWG");
  std::uint32_t words[5];
  std::memcpy(words, bytes.data() + 4, sizeof(words));
  EXPECT_EQ(words[0], 1u);
  EXPECT_EQ(words[1], 2u);
  EXPECT_EQ(words[2], 4u);
  EXPECT_EQ(words[3], 6u);
  EXPECT_EQ(words[4], 8u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[24]), 4);
  EXPECT_EQ(bytes.size(), 25u + 2 * 4 * 6 * 8 * 4 * 18 * 4);
  // First link is U_x at the origin, first real is its (0,0) real part.
  float first;
  std::memcpy(&first, bytes.data() + 25, sizeof(first));
  EXPECT_EQ(first, 1.0f);
}

TEST(GaugeIo, RejectsMalformedInput) {
  const std::string good = serialize(unit_gauge({2, 2, 2, 2}), 8);
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(parse(bad_magic), LayoutError);
  std::string bad_version = good;
  bad_version[4] = 7;
  EXPECT_THROW(parse(bad_version), LayoutError);
  std::string bad_precision = good;
  bad_precision[24] = 2;
  EXPECT_THROW(parse(bad_precision), LayoutError);
  EXPECT_THROW(parse(good.substr(0, good.size() - 1)), LayoutError);
  EXPECT_THROW(parse(good.substr(0, 10)), LayoutError);
  EXPECT_THROW(parse(""), LayoutError);
  EXPECT_THROW(serialize(unit_gauge({2, 2, 2, 2}), 2), LayoutError);
}

TEST(GaugeIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "eowilson_gauge_io_test.bin";
  const ScalarGaugeField g = random_gauge({2, 2, 4, 2}, 1);
  write_gauge_file(path, g, 8);
  EXPECT_EQ(read_gauge_file(path).links, g.links);
  std::filesystem::remove(path);
  EXPECT_THROW(read_gauge_file(path), LayoutError);
}
