#pragma once

// Scalar complex, color and spin algebra (always double precision).
//
// Spin projection follows the chiral (DeGrand-Rossi) basis. Every gamma_mu
// has one nonzero entry per row, of value +-1 or +-i, and couples spin rows
// {0,1} only to {2,3}. (1 +- gamma_mu) therefore has rank 2: its upper two
// components are kept as a half spinor and the lower two are rebuilt from
// them with a single phase each. The tables are derived from the dense
// matrices at compile time, so a different basis is a data change here.

#include <array>
#include <complex>
#include <cstdint>

#include "eowilson/geometry.hpp"

namespace eowilson {

using Complex = std::complex<double>;
using ColorVector = std::array<Complex, kNumColors>;
using Spinor = std::array<ColorVector, kNumSpins>;          // [spin][color]
using HalfSpinor = std::array<ColorVector, kNumHalfSpins>;  // [spin][color]

struct ColorMatrix {
  std::array<std::array<Complex, kNumColors>, kNumColors> m{};

  Complex& operator()(int a, int b) { return m[a][b]; }
  const Complex& operator()(int a, int b) const { return m[a][b]; }

  static ColorMatrix identity();
  friend bool operator==(const ColorMatrix&, const ColorMatrix&) = default;
};

ColorMatrix operator*(const ColorMatrix& a, const ColorMatrix& b);
ColorMatrix dagger(const ColorMatrix& u);
Complex determinant(const ColorMatrix& u);
// max |(U^dagger U - 1)_{ab}| and |det U - 1|, whichever is larger.
double unitarity_defect(const ColorMatrix& u);

enum class Sign : int { kMinus = -1, kPlus = 1 };
constexpr int value(Sign s) { return static_cast<int>(s); }
constexpr Sign opposite(Sign s) { return s == Sign::kPlus ? Sign::kMinus : Sign::kPlus; }

enum class Phase : std::int8_t { kPlusOne, kMinusOne, kPlusI, kMinusI };

constexpr Phase negate(Phase p) {
  switch (p) {
    case Phase::kPlusOne: return Phase::kMinusOne;
    case Phase::kMinusOne: return Phase::kPlusOne;
    case Phase::kPlusI: return Phase::kMinusI;
    default: return Phase::kPlusI;
  }
}
constexpr Phase with_sign(Phase p, Sign s) { return s == Sign::kPlus ? p : negate(p); }
Complex to_complex(Phase p);

// Dense 4x4 matrix with entries in {0, +-1, +-i}, stored as integer (re, im).
struct UnitGamma {
  std::array<std::array<std::array<int, 2>, kNumSpins>, kNumSpins> e{};
};

struct GammaConvention {
  std::array<UnitGamma, kNumDims> dense{};
  // gamma_mu[i][perm[mu][i]] == phase[mu][i]; the only nonzero in row i.
  std::array<std::array<int, kNumSpins>, kNumDims> perm{};
  std::array<std::array<Phase, kNumSpins>, kNumDims> phase{};
  // gamma5 = gamma1 gamma2 gamma3 gamma4 is diagonal with these signs.
  std::array<int, kNumSpins> gamma5{};
};

namespace detail {

constexpr UnitGamma make_gamma(const int (&re)[4][4], const int (&im)[4][4]) {
  UnitGamma g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g.e[i][j] = {re[i][j], im[i][j]};
  return g;
}

constexpr UnitGamma multiply(const UnitGamma& a, const UnitGamma& b) {
  UnitGamma c;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      int re = 0, im = 0;
      for (int k = 0; k < 4; ++k) {
        re += a.e[i][k][0] * b.e[k][j][0] - a.e[i][k][1] * b.e[k][j][1];
        im += a.e[i][k][0] * b.e[k][j][1] + a.e[i][k][1] * b.e[k][j][0];
      }
      c.e[i][j] = {re, im};
    }
  return c;
}

constexpr Phase phase_of(const std::array<int, 2>& z) {
  if (z[0] == 1 && z[1] == 0) return Phase::kPlusOne;
  if (z[0] == -1 && z[1] == 0) return Phase::kMinusOne;
  if (z[0] == 0 && z[1] == 1) return Phase::kPlusI;
  if (z[0] == 0 && z[1] == -1) return Phase::kMinusI;
  throw "gamma entry is not a unit phase";
}

constexpr GammaConvention derive_convention(const std::array<UnitGamma, kNumDims>& dense) {
  GammaConvention c;
  c.dense = dense;
  for (int mu = 0; mu < kNumDims; ++mu) {
    for (int i = 0; i < kNumSpins; ++i) {
      int found = -1;
      for (int j = 0; j < kNumSpins; ++j) {
        if (dense[mu].e[i][j][0] != 0 || dense[mu].e[i][j][1] != 0) {
          if (found >= 0) throw "gamma row has more than one nonzero";
          found = j;
        }
      }
      if (found < 0) throw "gamma row is empty";
      if ((i < 2) == (found < 2)) throw "gamma does not couple upper and lower spin pairs";
      c.perm[mu][i] = found;
      c.phase[mu][i] = phase_of(dense[mu].e[i][found]);
    }
  }
  const UnitGamma g5 =
      multiply(multiply(dense[kX], dense[kY]), multiply(dense[kZ], dense[kT]));
  for (int i = 0; i < kNumSpins; ++i) {
    for (int j = 0; j < kNumSpins; ++j)
      if (i != j && (g5.e[i][j][0] != 0 || g5.e[i][j][1] != 0)) throw "gamma5 is not diagonal";
    if (g5.e[i][i][1] != 0 || (g5.e[i][i][0] != 1 && g5.e[i][i][0] != -1))
      throw "gamma5 diagonal is not +-1";
    c.gamma5[i] = g5.e[i][i][0];
  }
  return c;
}

// clang-format off
inline constexpr int kZero[4][4] = {{0,0,0,0},{0,0,0,0},{0,0,0,0},{0,0,0,0}};
inline constexpr int kG1Im[4][4] = {{0,0,0,1},{0,0,1,0},{0,-1,0,0},{-1,0,0,0}};
inline constexpr int kG2Re[4][4] = {{0,0,0,-1},{0,0,1,0},{0,1,0,0},{-1,0,0,0}};
inline constexpr int kG3Im[4][4] = {{0,0,1,0},{0,0,0,-1},{-1,0,0,0},{0,1,0,0}};
inline constexpr int kG4Re[4][4] = {{0,0,1,0},{0,0,0,1},{1,0,0,0},{0,1,0,0}};
// clang-format on

}  // namespace detail

inline constexpr GammaConvention kDeGrandRossi = detail::derive_convention({
    detail::make_gamma(detail::kZero, detail::kG1Im),
    detail::make_gamma(detail::kG2Re, detail::kZero),
    detail::make_gamma(detail::kZero, detail::kG3Im),
    detail::make_gamma(detail::kG4Re, detail::kZero),
});

// The convention compiled into every kernel.
inline constexpr const GammaConvention& kGamma = kDeGrandRossi;

ColorVector su3_mul(const ColorMatrix& u, const ColorVector& v);
ColorVector su3_dag_mul(const ColorMatrix& u, const ColorVector& v);

// Upper two spin components of (1 + sign * gamma_mu) s.
HalfSpinor project(int mu, Sign sign, const Spinor& s);
// acc += the four-spinor (1 + sign * gamma_mu) s whose upper half is h.
void reconstruct_accumulate(int mu, Sign sign, const HalfSpinor& h, Spinor& acc);

Spinor apply_gamma5(const Spinor& s);

// Gram-Schmidt on rows 0 and 1, row 2 = conj(row0 x row1). Throws
// DegenerateInputError when a row norm drops below 1e-30.
ColorMatrix reunitarize(const ColorMatrix& m);

}  // namespace eowilson
