#pragma once

// Vector operations on packed spinor fields. Reductions accumulate each
// block in double, then combine the block partials in a fixed pairwise tree,
// so results do not depend on the thread count.

#include <complex>

#include "eowilson/layout.hpp"

namespace eowilson {

template <class Real>
void copy(const PackedSpinorField<Real>& src, PackedSpinorField<Real>& dst);
// x *= a
template <class Real>
void scale(double a, PackedSpinorField<Real>& x);
// y += a x
template <class Real>
void axpy(double a, const PackedSpinorField<Real>& x, PackedSpinorField<Real>& y);
// y = x + a y
template <class Real>
void xpay(const PackedSpinorField<Real>& x, double a, PackedSpinorField<Real>& y);
// out = x - y
template <class Real>
void subtract(const PackedSpinorField<Real>& x, const PackedSpinorField<Real>& y,
              PackedSpinorField<Real>& out);

template <class Real>
double norm2(const PackedSpinorField<Real>& x);
// sum conj(x) y
template <class Real>
std::complex<double> inner(const PackedSpinorField<Real>& x, const PackedSpinorField<Real>& y);

// out = gamma5 in; in and out may alias.
template <class Real>
void apply_gamma5(const PackedSpinorField<Real>& in, PackedSpinorField<Real>& out);

// True when any component is NaN or infinite.
template <class Real>
bool has_non_finite(const PackedSpinorField<Real>& x);

// Pairwise sum in a fixed order.
double tree_sum(std::span<const double> values);

}  // namespace eowilson
