#include <gtest/gtest.h>

#include "eowilson/errors.hpp"
#include "eowilson/oracle.hpp"
#include "test_support.hpp"

using namespace eowilson;
using namespace eowilson::testing_support;

namespace {
const Dims kTwo{2, 2, 2, 2};
const Dims kFour{4, 4, 4, 4};
}  // namespace

TEST(Oracle, ZeroKappaIsIdentity) {
  const ScalarGaugeField u = random_gauge(kFour, 1);
  const ScalarSpinorField f = random_spinor_field(kFour, 2);
  EXPECT_EQ(naive_apply_dw(u, f, 0.0).sites, f.sites);
  const DenseOperator d = build_dense(random_gauge(kTwo, 1), 0.0, DenseKind::kFull);
  for (int r = 0; r < d.rows(); ++r)
    for (int c = 0; c < d.cols(); ++c) ASSERT_EQ(d(r, c), Complex(r == c ? 1.0 : 0.0, 0.0));
}

TEST(Oracle, UnitGaugeConstantField) {
  const Spinor s = random_test_spinor(3);
  const ScalarSpinorField out = naive_apply_dw(unit_gauge(kFour), constant_spinor_field(kFour, s), 0.1);
  Spinor expect;
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 3; ++c) expect[i][c] = 0.2 * s[i][c];
  for (const Spinor& x : out.sites) ASSERT_LE(max_abs_diff(x, expect), 1e-15);
}

TEST(Oracle, DenseMatchesSiteLoopOnTwoToTheFourth) {
  const ScalarGaugeField u = random_gauge(kTwo, 4);
  const DenseOperator d = build_dense(u, 0.13, DenseKind::kFull);
  EXPECT_EQ(d.rows(), 12 * 16);
  for (std::uint64_t seed : {5, 6}) {
    const ScalarSpinorField f = random_spinor_field(kTwo, seed);
    EXPECT_LE(relative_l2(d.apply(f), naive_apply_dw(u, f, 0.13)), 1e-13);
  }
}

TEST(Oracle, DenseIsGamma5Hermitian) {
  const DenseOperator d = build_dense(random_gauge(kTwo, 7), 0.14, DenseKind::kFull);
  const DenseOperator h = gamma5_conjugate(d);
  EXPECT_LE(h.max_abs_difference(d.adjoint()), 1e-12);
  const DenseOperator m = build_dense(random_gauge(kTwo, 7), 0.14, DenseKind::kPreconditioned);
  EXPECT_LE(gamma5_conjugate(m).max_abs_difference(m.adjoint()), 1e-12);
}

TEST(Oracle, EvenEvenBlockIsIdentity) {
  const ScalarGaugeField u = random_gauge(kFour, 8);
  const DenseOperator full = build_dense(u, 0.12, DenseKind::kFull);
  const DenseOperator deo = build_dense(u, 0.12, DenseKind::kEvenOdd);
  EXPECT_EQ(deo.rows(), 12 * 128);
  EXPECT_EQ(deo.cols(), 12 * 128);
  // Rows and columns of full indexed by site; pick even/even and even/odd pairs.
  const Dims size = kFour;
  auto parity = [&](std::int64_t s) {
    const SiteCoord c = from_lexicographic(s, size);
    return (c.x + c.y + c.z + c.t) % 2;
  };
  for (int r = 0; r < full.rows(); ++r)
    for (int c = 0; c < full.cols(); ++c) {
      const std::int64_t rs = full.row_sites()[r / 12], cs = full.col_sites()[c / 12];
      if (parity(rs) == parity(cs)) ASSERT_EQ(full(r, c), Complex(r == c ? 1.0 : 0.0, 0.0));
    }
  // D_eo embedded in the full matrix.
  for (int r = 0; r < deo.rows(); r += 7)
    for (int c = 0; c < deo.cols(); c += 5) {
      const std::int64_t rs = deo.row_sites()[r / 12], cs = deo.col_sites()[c / 12];
      ASSERT_EQ(parity(rs), 0);
      ASSERT_EQ(parity(cs), 1);
      ASSERT_EQ(deo(r, c), full(static_cast<int>(rs) * 12 + r % 12, static_cast<int>(cs) * 12 + c % 12));
    }
}

TEST(Oracle, PreconditionedIsOneMinusBlockProduct) {
  const ScalarGaugeField u = random_gauge(kTwo, 9);
  const DenseOperator deo = build_dense(u, 0.11, DenseKind::kEvenOdd);
  const DenseOperator doe = build_dense(u, 0.11, DenseKind::kOddEven);
  const DenseOperator m = build_dense(u, 0.11, DenseKind::kPreconditioned);
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      Complex p = 0;
      for (int k = 0; k < deo.cols(); ++k) p += deo(r, k) * doe(k, c);
      ASSERT_LE(std::abs(m(r, c) - ((r == c ? 1.0 : 0.0) - p)), 1e-14);
    }
}

TEST(Oracle, FreeFieldConstantModeEigenvalue) {
  const double kappa = 0.1;
  const DenseOperator d = build_dense(unit_gauge(kFour), kappa, DenseKind::kFull);
  const Spinor s = random_test_spinor(10);
  const ScalarSpinorField f = constant_spinor_field(kFour, s);
  Spinor scaled;
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 3; ++c) scaled[i][c] = (1 - 8 * kappa) * s[i][c];
  EXPECT_LE(relative_l2(d.apply(f), constant_spinor_field(kFour, scaled)), 1e-14);
}

TEST(Oracle, PlaneWaveSymbolMatchesSiteLoop) {
  const Spinor amp = random_test_spinor(11);
  for (const std::array<int, 4>& modes : {std::array<int, 4>{1, 0, 0, 0}, std::array<int, 4>{1, 3, 2, 1}}) {
    const ScalarSpinorField w = plane_wave(kFour, modes, amp);
    const ScalarSpinorField out = naive_apply_dw(unit_gauge(kFour), w, 0.12);
    EXPECT_LE(relative_l2(out, plane_wave(kFour, modes, free_field_symbol(kFour, modes, 0.12, amp))), 1e-13);
  }
  const Spinor zero_mode = free_field_symbol(kFour, {0, 0, 0, 0}, 0.1, amp);
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 3; ++c) EXPECT_LE(std::abs(zero_mode[i][c] - 0.2 * amp[i][c]), 1e-15);
}

TEST(Oracle, ShiftsRollPeriodically) {
  const ScalarSpinorField f = random_spinor_field({4, 2, 6, 2}, 12);
  const Spinor s = random_test_spinor(13);
  const ScalarSpinorField c = constant_spinor_field({4, 2, 6, 2}, s);
  for (int mu = 0; mu < 4; ++mu) {
    EXPECT_EQ(naive_shift(c, mu, 1).sites, c.sites);
    EXPECT_EQ(naive_shift(naive_shift(f, mu, 1), mu, -1).sites, f.sites);
  }
  // Around a plaquette.
  const ScalarSpinorField p = naive_shift(naive_shift(naive_shift(naive_shift(f, 0, 1), 2, 1), 0, -1), 2, -1);
  EXPECT_EQ(p.sites, f.sites);
  // out(x) = in(x + mu)
  const ScalarSpinorField up = naive_shift(f, 2, 1);
  EXPECT_EQ(up.at({1, 1, 5, 0}), f.at({1, 1, 0, 0}));
  EXPECT_EQ(up.at({1, 1, 2, 1}), f.at({1, 1, 3, 1}));
}

TEST(Oracle, HopMaskSelectsTerms) {
  const ScalarGaugeField u = random_gauge(kFour, 14);
  const ScalarSpinorField f = random_spinor_field(kFour, 15);
  OracleOptions none, fwd, bwd;
  none.include_hop = [](const SiteCoord&, int, int) { return false; };
  fwd.include_hop = [](const SiteCoord&, int, int step) { return step > 0; };
  bwd.include_hop = [](const SiteCoord&, int, int step) { return step < 0; };
  for (const Spinor& s : naive_hopping(u, f, 0.1, none).sites) ASSERT_EQ(s, Spinor{});
  const auto a = naive_hopping(u, f, 0.1, fwd), b = naive_hopping(u, f, 0.1, bwd);
  const auto all = naive_hopping(u, f, 0.1);
  for (std::size_t i = 0; i < all.sites.size(); ++i) {
    Spinor sum;
    for (int k = 0; k < 4; ++k)
      for (int c = 0; c < 3; ++c) sum[k][c] = a.sites[i][k][c] + b.sites[i][k][c];
    ASSERT_LE(max_abs_diff(sum, all.sites[i]), 1e-14);
  }
}

TEST(Oracle, AntiperiodicFlipsBoundaryLinks) {
  const Spinor s = random_test_spinor(16);
  const ScalarSpinorField c = constant_spinor_field(kFour, s);
  OracleOptions ap;
  ap.antiperiodic_t = true;
  const ScalarSpinorField out = naive_hopping(unit_gauge(kFour), c, 0.1, ap);
  // Interior t sites see the periodic result; t = 0 and t = 3 lose one t hop's sign.
  EXPECT_LE(max_abs_diff(out.at({0, 0, 0, 1}), naive_hopping(unit_gauge(kFour), c, 0.1).at({0, 0, 0, 1})), 1e-15);
  EXPECT_GT(max_abs_diff(out.at({0, 0, 0, 0}), naive_hopping(unit_gauge(kFour), c, 0.1).at({0, 0, 0, 0})), 1e-3);
}

TEST(Oracle, DenseSizeGuard) {
  EXPECT_THROW(build_dense(unit_gauge({4, 4, 4, 6}), 0.1, DenseKind::kFull), SizeError);
  EXPECT_NO_THROW(build_dense(unit_gauge(kTwo), 0.1, DenseKind::kOddEven));
}

TEST(Oracle, GammaAndRestriction) {
  const Spinor s = random_test_spinor(17);
  for (int mu = 0; mu < 4; ++mu) EXPECT_LE(max_abs_diff(apply_gamma(mu, apply_gamma(mu, s)), s), 0.0);
  const ScalarSpinorField f = random_spinor_field(kTwo, 18);
  const ScalarSpinorField e = restrict_parity(f, Parity::kEven), o = restrict_parity(f, Parity::kOdd);
  for (std::size_t i = 0; i < f.sites.size(); ++i) {
    const bool even = e.sites[i] != Spinor{};
    ASSERT_NE(even, o.sites[i] != Spinor{});
  }
  EXPECT_NEAR(norm2(e) + norm2(o), norm2(f), 1e-12);
  EXPECT_EQ(relative_l2(f, f), 0.0);
}
