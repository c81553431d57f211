#pragma once

// Counter-based random numbers: value i of stream s under seed k is
//   splitmix64_finalize(k' + golden * (i + 1)),  k' = splitmix64_finalize(k ^ (s * golden2))
// so any element can be generated independently of every other one. Field
// generators index by global site, which keeps random fields identical
// across tilings, domain grids and thread counts.

#include <cstdint>

#include "eowilson/algebra.hpp"

namespace eowilson {

enum class RngStream : std::uint64_t { kGauge = 1, kSpinor = 2, kSource = 3, kAux = 4 };

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, RngStream stream = RngStream::kAux);

  std::uint64_t bits(std::uint64_t counter) const;
  // Uniform in (0, 1).
  double uniform(std::uint64_t counter) const;
  // Standard normal via Box-Muller on counters 2c and 2c + 1.
  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64_finalize(std::uint64_t z);

// Gaussian 3x3 matrix from 18 consecutive normals, then reunitarized.
ColorMatrix random_su3(const CounterRng& rng, std::uint64_t index);
Spinor random_spinor(const CounterRng& rng, std::uint64_t index);

}  // namespace eowilson
