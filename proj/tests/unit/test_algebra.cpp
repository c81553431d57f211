#include <gtest/gtest.h>

#include <algorithm>

#include <cmath>

#include "eowilson/algebra.hpp"
#include "eowilson/errors.hpp"
#include "test_support.hpp"

using namespace eowilson;
using namespace eowilson::testing_support;

namespace {

ColorVector triple_loop(const ColorMatrix& u, const ColorVector& v, bool dag) {
  ColorVector w{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) w[a] += (dag ? std::conj(u.m[b][a]) : u.m[a][b]) * v[b];
  return w;
}

}  // namespace

TEST(GammaConvention, SquaresToOneAndIsHermitian) {
  for (int mu = 0; mu < kNumDims; ++mu) {
    const DenseSpin g = dense_gamma(mu);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Complex sq = 0;
        for (int k = 0; k < 4; ++k) sq += g[i][k] * g[k][j];
        EXPECT_EQ(sq, Complex(i == j ? 1.0 : 0.0, 0.0)) << "mu=" << mu;
        EXPECT_EQ(g[i][j], std::conj(g[j][i])) << "mu=" << mu;
      }
  }
}

TEST(GammaConvention, GammasAnticommute) {
  for (int mu = 0; mu < kNumDims; ++mu)
    for (int nu = mu + 1; nu < kNumDims; ++nu) {
      const DenseSpin a = dense_gamma(mu), b = dense_gamma(nu);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          Complex s = 0;
          for (int k = 0; k < 4; ++k) s += a[i][k] * b[k][j] + b[i][k] * a[k][j];
          EXPECT_EQ(s, Complex(0.0, 0.0));
        }
    }
}

TEST(GammaConvention, Gamma5IsChiralDiagonal) {
  // gamma5 = gamma_x gamma_y gamma_z gamma_t, diagonal in this basis.
  DenseSpin prod{};
  for (int i = 0; i < 4; ++i) prod[i][i] = 1;
  for (int mu = 0; mu < 4; ++mu) {
    const DenseSpin g = dense_gamma(mu);
    DenseSpin next{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) next[i][j] += prod[i][k] * g[k][j];
    prod = next;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_EQ(prod[i][j], i == j ? Complex(kGamma.gamma5[i], 0) : Complex(0, 0)) << i << j;
  EXPECT_EQ(std::count(kGamma.gamma5.begin(), kGamma.gamma5.end(), 1), 2);
  const Spinor s = random_test_spinor(3);
  const Spinor g5 = apply_gamma5(s);
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 3; ++c) EXPECT_EQ(g5[i][c], static_cast<double>(kGamma.gamma5[i]) * s[i][c]);
}

TEST(Su3, MultiplyIdentityAndPermutation) {
  const ColorVector v{Complex(1, 0.5), Complex(2, -1), Complex(3, 0)};
  EXPECT_EQ(su3_mul(ColorMatrix::identity(), v), v);
  EXPECT_EQ(su3_dag_mul(ColorMatrix::identity(), v), v);

  ColorMatrix cyc;  // rows pick components 1, 2, 0
  cyc(0, 1) = cyc(1, 2) = cyc(2, 0) = 1.0;
  EXPECT_EQ(determinant(cyc), Complex(1.0, 0.0));
  const ColorVector w = su3_mul(cyc, ColorVector{1.0, 2.0, 3.0});
  EXPECT_EQ(w, (ColorVector{2.0, 3.0, 1.0}));
  EXPECT_EQ(su3_dag_mul(cyc, w), (ColorVector{1.0, 2.0, 3.0}));
}

TEST(Su3, DiagonalPhasesConjugateUnderDagger) {
  ColorMatrix d;
  const double th[3] = {0.3, -1.1, 0.8};
  for (int a = 0; a < 3; ++a) d(a, a) = std::polar(1.0, th[a]);
  const ColorVector v{Complex(1, 2), Complex(-0.5, 0.25), Complex(0, 1)};
  const ColorVector w = su3_dag_mul(d, v);
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(std::abs(w[a] - std::polar(1.0, -th[a]) * v[a]), 0.0, 1e-15);
}

TEST(Su3, RandomMatchesTripleLoopAndInverts) {
  for (std::uint64_t k = 0; k < 50; ++k) {
    const ColorMatrix u = random_test_link(11, k);
    const Spinor s = random_test_spinor(12, k);
    const ColorVector v = s[0];
    EXPECT_LE(max_abs_diff(su3_mul(u, v), triple_loop(u, v, false)), 1e-15);
    EXPECT_LE(max_abs_diff(su3_dag_mul(u, v), triple_loop(u, v, true)), 1e-15);
    EXPECT_LE(max_abs_diff(su3_dag_mul(u, su3_mul(u, v)), v), 1e-13);
  }
}

TEST(SpinProjection, ZeroInZeroOut) {
  const Spinor zero{};
  for (int mu = 0; mu < kNumDims; ++mu)
    for (Sign sg : {Sign::kPlus, Sign::kMinus}) {
      const HalfSpinor h = project(mu, sg, zero);
      for (const auto& row : h)
        for (const auto& z : row) EXPECT_EQ(z, Complex(0, 0));
      Spinor acc = random_test_spinor(1);
      const Spinor before = acc;
      reconstruct_accumulate(mu, sg, HalfSpinor{}, acc);
      EXPECT_EQ(acc, before);
    }
}

// project + reconstruct equals the dense (1 +- gamma_mu) product.
TEST(SpinProjection, MatchesDenseGamma) {
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Spinor s = random_test_spinor(5, k);
    for (int mu = 0; mu < kNumDims; ++mu)
      for (Sign sg : {Sign::kPlus, Sign::kMinus}) {
        Spinor acc{};
        reconstruct_accumulate(mu, sg, project(mu, sg, s), acc);
        EXPECT_LE(max_abs_diff(acc, dense_one_plus_gamma(mu, sg, s)), 4 * 2.3e-16 * 8)
            << "mu=" << mu << " sign=" << value(sg);
      }
  }
}

TEST(SpinProjection, ComplementarySignsSumToTwice) {
  const Spinor s = random_test_spinor(8);
  for (int mu = 0; mu < kNumDims; ++mu) {
    Spinor acc{};
    reconstruct_accumulate(mu, Sign::kPlus, project(mu, Sign::kPlus, s), acc);
    reconstruct_accumulate(mu, Sign::kMinus, project(mu, Sign::kMinus, s), acc);
    for (int i = 0; i < 4; ++i)
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(acc[i][c] - 2.0 * s[i][c]), 0.0, 1e-14);
  }
}

// Sum over the eight hop terms with unit links on a constant field is 8 s.
TEST(SpinProjection, EightHopTermsOnConstantField) {
  const Spinor s = random_test_spinor(9);
  Spinor acc{};
  for (int mu = 0; mu < kNumDims; ++mu)
    for (Sign sg : {Sign::kPlus, Sign::kMinus}) {
      HalfSpinor h = project(mu, sg, s);
      for (auto& row : h) row = su3_mul(ColorMatrix::identity(), row);
      reconstruct_accumulate(mu, sg, h, acc);
    }
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(acc[i][c] - 8.0 * s[i][c]), 0.0, 1e-13);
}

// (1 +- gamma) (x) U applied through project / multiply / reconstruct.
TEST(SpinProjection, HopTermMatchesDenseSpinColorProduct) {
  for (std::uint64_t k = 0; k < 10; ++k) {
    const Spinor s = random_test_spinor(21, k);
    const ColorMatrix u = random_test_link(22, k);
    for (int mu = 0; mu < kNumDims; ++mu)
      for (Sign sg : {Sign::kPlus, Sign::kMinus}) {
        HalfSpinor h = project(mu, sg, s);
        for (auto& row : h) row = su3_mul(u, row);
        Spinor acc{};
        reconstruct_accumulate(mu, sg, h, acc);
        Spinor us;
        for (int i = 0; i < 4; ++i) us[i] = triple_loop(u, s[i], false);
        EXPECT_LE(max_abs_diff(acc, dense_one_plus_gamma(mu, sg, us)), 1e-14);
      }
  }
}

TEST(SpinProjection, RejectsBadDirection) {
  EXPECT_THROW(project(4, Sign::kPlus, Spinor{}), BoundsError);
  EXPECT_THROW(project(-1, Sign::kPlus, Spinor{}), BoundsError);
}

TEST(Reunitarize, IdentityAndScaledIdentity) {
  EXPECT_EQ(reunitarize(ColorMatrix::identity()), ColorMatrix::identity());
  ColorMatrix two;
  for (int a = 0; a < 3; ++a) two(a, a) = 2.0;
  EXPECT_LE(unitarity_defect(reunitarize(two)), 1e-15);
  const ColorMatrix r = reunitarize(two);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) EXPECT_NEAR(std::abs(r(a, b) - (a == b ? 1.0 : 0.0)), 0.0, 1e-15);
}

TEST(Reunitarize, RandomMatricesBecomeSpecialUnitary) {
  const CounterRng rng(77);
  for (std::uint64_t k = 0; k < 200; ++k) {
    ColorMatrix m;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) m(a, b) = {rng.normal(k * 18 + 6 * a + 2 * b), rng.normal(k * 18 + 6 * a + 2 * b + 1)};
    EXPECT_LE(unitarity_defect(reunitarize(m)), 1e-12);
  }
}

TEST(Reunitarize, RejectsDegenerateRows) {
  EXPECT_THROW(reunitarize(ColorMatrix{}), DegenerateInputError);
  ColorMatrix parallel;
  parallel(0, 0) = parallel(1, 0) = 1.0;
  EXPECT_THROW(reunitarize(parallel), DegenerateInputError);
}
