#include "eowilson/random.hpp"

#include <cmath>
#include <numbers>

namespace eowilson {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamMix = 0xD1B54A32D192ED03ULL;
}  // namespace

std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, RngStream stream)
    : key_(splitmix64_finalize(seed ^ (static_cast<std::uint64_t>(stream) * kStreamMix))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return splitmix64_finalize(key_ + kGolden * (counter + 1));
}

double CounterRng::uniform(std::uint64_t counter) const {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
  const double u1 = uniform(2 * counter);
  const double u2 = uniform(2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ColorMatrix random_su3(const CounterRng& rng, std::uint64_t index) {
  ColorMatrix m;
  std::uint64_t c = index * 18;
  for (int a = 0; a < kNumColors; ++a)
    for (int b = 0; b < kNumColors; ++b) {
      const double re = rng.normal(c++);
      const double im = rng.normal(c++);
      m(a, b) = {re, im};
    }
  return reunitarize(m);
}

Spinor random_spinor(const CounterRng& rng, std::uint64_t index) {
  Spinor s;
  std::uint64_t c = index * 24;
  for (int i = 0; i < kNumSpins; ++i)
    for (int a = 0; a < kNumColors; ++a) {
      const double re = rng.normal(c++);
      const double im = rng.normal(c++);
      s[i][a] = {re, im};
    }
  return s;
}

}  // namespace eowilson
