#pragma once

// Naive scalar reference for the packed kernels: a literal site loop over
// the stencil and dense matrices on tiny lattices. Always double precision,
// single-threaded.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "eowilson/algebra.hpp"
#include "eowilson/layout.hpp"

namespace eowilson {

struct OracleOptions {
  bool antiperiodic_t = false;
  // When set, only hops for which this returns true contribute; `site` is
  // the output site and `step` +1 (forward) or -1 (backward).
  std::function<bool(const SiteCoord& site, int mu, int step)> include_hop;
};

// -kappa sum_mu [(1 - gamma_mu) U_mu(x) src(x + mu) + (1 + gamma_mu) U_mu(x - mu)^dagger src(x - mu)]
ScalarSpinorField naive_hopping(const ScalarGaugeField& gauge, const ScalarSpinorField& src,
                                double kappa, const OracleOptions& options = {});
// src + naive_hopping(src)
ScalarSpinorField naive_apply_dw(const ScalarGaugeField& gauge, const ScalarSpinorField& src,
                                 double kappa, const OracleOptions& options = {});

// out(x) = src(x + step * mu), periodic.
ScalarSpinorField naive_shift(const ScalarSpinorField& src, int mu, int step);

// Keeps the sites of one parity, zeroes the others.
ScalarSpinorField restrict_parity(const ScalarSpinorField& src, Parity parity);

enum class DenseKind {
  kFull,            // D_W on all sites
  kEvenOdd,         // D_eo: even rows, odd columns
  kOddEven,         // D_oe: odd rows, even columns
  kPreconditioned,  // 1 - D_eo D_oe on even sites
};

inline constexpr std::int64_t kDenseMaxVolume = 256;

class DenseOperator {
 public:
  DenseOperator(int rows, int cols, std::vector<std::int64_t> row_sites,
                std::vector<std::int64_t> col_sites, Dims size);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Complex& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Complex& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  // Lexicographic site of a row/column block; component = 12 * k + 3 * spin + color.
  const std::vector<std::int64_t>& row_sites() const { return row_sites_; }
  const std::vector<std::int64_t>& col_sites() const { return col_sites_; }
  static int component(int spin, int color) { return spin * kNumColors + color; }

  // Reads the column sites of src, writes the row sites of the result.
  ScalarSpinorField apply(const ScalarSpinorField& src) const;
  DenseOperator adjoint() const;
  // max |A_rc - B_rc|
  double max_abs_difference(const DenseOperator& other) const;

 private:
  int rows_, cols_;
  std::vector<std::int64_t> row_sites_, col_sites_;
  Dims size_;
  std::vector<Complex> data_;  // row-major
};

// Columns are the operator applied to basis vectors. Throws SizeError when
// the lattice volume exceeds kDenseMaxVolume.
DenseOperator build_dense(const ScalarGaugeField& gauge, double kappa, DenseKind kind,
                          const OracleOptions& options = {});

// Conjugates a full or preconditioned dense operator by gamma5 (square only).
DenseOperator gamma5_conjugate(const DenseOperator& a);

// gamma_mu s from the dense matrices.
Spinor apply_gamma(int mu, const Spinor& s);

// u exp(i p.x) with p_mu = 2 pi n_mu / L_mu.
ScalarSpinorField plane_wave(const Dims& size, const std::array<int, kNumDims>& modes,
                             const Spinor& u);
// Free-field (U = 1) D_W on the plane wave's amplitude:
// (1 - 2 kappa sum cos p) u + 2 i kappa sum sin p gamma_mu u.
Spinor free_field_symbol(const Dims& size, const std::array<int, kNumDims>& modes, double kappa,
                         const Spinor& u);

// Relative L2 distance |a - b| / |b| over all sites (|a - b| when b is zero).
double relative_l2(const ScalarSpinorField& a, const ScalarSpinorField& b);
double norm2(const ScalarSpinorField& a);
Complex inner(const ScalarSpinorField& a, const ScalarSpinorField& b);

}  // namespace eowilson
