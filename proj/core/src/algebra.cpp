#include "eowilson/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "eowilson/errors.hpp"

namespace eowilson {

ColorMatrix ColorMatrix::identity() {
  ColorMatrix u;
  for (int a = 0; a < kNumColors; ++a) u(a, a) = 1.0;
  return u;
}

ColorMatrix operator*(const ColorMatrix& a, const ColorMatrix& b) {
  ColorMatrix c;
  for (int i = 0; i < kNumColors; ++i)
    for (int j = 0; j < kNumColors; ++j)
      for (int k = 0; k < kNumColors; ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

ColorMatrix dagger(const ColorMatrix& u) {
  ColorMatrix d;
  for (int a = 0; a < kNumColors; ++a)
    for (int b = 0; b < kNumColors; ++b) d(a, b) = std::conj(u(b, a));
  return d;
}

Complex determinant(const ColorMatrix& u) {
  return u(0, 0) * (u(1, 1) * u(2, 2) - u(1, 2) * u(2, 1)) -
         u(0, 1) * (u(1, 0) * u(2, 2) - u(1, 2) * u(2, 0)) +
         u(0, 2) * (u(1, 0) * u(2, 1) - u(1, 1) * u(2, 0));
}

double unitarity_defect(const ColorMatrix& u) {
  const ColorMatrix p = dagger(u) * u;
  double worst = std::abs(determinant(u) - 1.0);
  for (int a = 0; a < kNumColors; ++a)
    for (int b = 0; b < kNumColors; ++b)
      worst = std::max(worst, std::abs(p(a, b) - (a == b ? 1.0 : 0.0)));
  return worst;
}

Complex to_complex(Phase p) {
  switch (p) {
    case Phase::kPlusOne: return {1.0, 0.0};
    case Phase::kMinusOne: return {-1.0, 0.0};
    case Phase::kPlusI: return {0.0, 1.0};
    default: return {0.0, -1.0};
  }
}

ColorVector su3_mul(const ColorMatrix& u, const ColorVector& v) {
  ColorVector w{};
  for (int a = 0; a < kNumColors; ++a)
    for (int b = 0; b < kNumColors; ++b) w[a] += u(a, b) * v[b];
  return w;
}

ColorVector su3_dag_mul(const ColorMatrix& u, const ColorVector& v) {
  ColorVector w{};
  for (int a = 0; a < kNumColors; ++a)
    for (int b = 0; b < kNumColors; ++b) w[a] += std::conj(u(b, a)) * v[b];
  return w;
}

HalfSpinor project(int mu, Sign sign, const Spinor& s) {
  if (mu < 0 || mu >= kNumDims) throw BoundsError("direction out of range");
  HalfSpinor h{};
  for (int i = 0; i < kNumHalfSpins; ++i) {
    const Complex ph = to_complex(with_sign(kGamma.phase[mu][i], sign));
    const int j = kGamma.perm[mu][i];
    for (int c = 0; c < kNumColors; ++c) h[i][c] = s[i][c] + ph * s[j][c];
  }
  return h;
}

void reconstruct_accumulate(int mu, Sign sign, const HalfSpinor& h, Spinor& acc) {
  if (mu < 0 || mu >= kNumDims) throw BoundsError("direction out of range");
  for (int i = 0; i < kNumHalfSpins; ++i)
    for (int c = 0; c < kNumColors; ++c) acc[i][c] += h[i][c];
  for (int k = kNumHalfSpins; k < kNumSpins; ++k) {
    const Complex ph = to_complex(with_sign(kGamma.phase[mu][k], sign));
    const int j = kGamma.perm[mu][k];
    for (int c = 0; c < kNumColors; ++c) acc[k][c] += ph * h[j][c];
  }
}

Spinor apply_gamma5(const Spinor& s) {
  Spinor r = s;
  for (int i = 0; i < kNumSpins; ++i)
    for (int c = 0; c < kNumColors; ++c) r[i][c] *= static_cast<double>(kGamma.gamma5[i]);
  return r;
}

ColorMatrix reunitarize(const ColorMatrix& m) {
  constexpr double kMinNorm = 1e-30;
  ColorMatrix u = m;
  auto norm = [&](int row) {
    double n = 0.0;
    for (int b = 0; b < kNumColors; ++b) n += std::norm(u(row, b));
    return std::sqrt(n);
  };

  double n0 = norm(0);
  if (!(n0 >= kMinNorm)) throw DegenerateInputError("reunitarize: first row is degenerate");
  for (int b = 0; b < kNumColors; ++b) u(0, b) /= n0;

  Complex overlap = 0.0;
  for (int b = 0; b < kNumColors; ++b) overlap += std::conj(u(0, b)) * u(1, b);
  for (int b = 0; b < kNumColors; ++b) u(1, b) -= overlap * u(0, b);
  double n1 = norm(1);
  if (!(n1 >= kMinNorm)) throw DegenerateInputError("reunitarize: second row is degenerate");
  for (int b = 0; b < kNumColors; ++b) u(1, b) /= n1;

  u(2, 0) = std::conj(u(0, 1) * u(1, 2) - u(0, 2) * u(1, 1));
  u(2, 1) = std::conj(u(0, 2) * u(1, 0) - u(0, 0) * u(1, 2));
  u(2, 2) = std::conj(u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0));
  return u;
}

}  // namespace eowilson
