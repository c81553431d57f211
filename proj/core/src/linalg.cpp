#include "eowilson/linalg.hpp"

#include <cmath>
#include <vector>

#include "eowilson/errors.hpp"

namespace eowilson {

namespace {

template <class Real>
void check_size(const PackedSpinorField<Real>& a, const PackedSpinorField<Real>& b) {
  if (a.size() != b.size()) throw LayoutError("spinor fields differ in size");
  a.check_compatible(b);
}

template <class Real>
std::int64_t num_blocks(const PackedSpinorField<Real>& x) {
  return static_cast<std::int64_t>(x.size() / PackedSpinorField<Real>::kBlockReals);
}

}  // namespace

double tree_sum(std::span<const double> values) {
  std::vector<double> level(values.begin(), values.end());
  if (level.empty()) return 0.0;
  while (level.size() > 1) {
    std::size_t half = (level.size() + 1) / 2;
    for (std::size_t i = 0; i < level.size() / 2; ++i) level[i] = level[2 * i] + level[2 * i + 1];
    if (level.size() % 2) level[half - 1] = level.back();
    level.resize(half);
  }
  return level[0];
}

template <class Real>
void copy(const PackedSpinorField<Real>& src, PackedSpinorField<Real>& dst) {
  check_size(src, dst);
  const Real* s = src.data();
  Real* d = dst.data();
  const auto n = static_cast<std::int64_t>(src.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) d[i] = s[i];
}

template <class Real>
void scale(double a, PackedSpinorField<Real>& x) {
  const Real k = static_cast<Real>(a);
  Real* d = x.data();
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) d[i] *= k;
}

template <class Real>
void axpy(double a, const PackedSpinorField<Real>& x, PackedSpinorField<Real>& y) {
  check_size(x, y);
  const Real k = static_cast<Real>(a);
  const Real* xs = x.data();
  Real* ys = y.data();
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) ys[i] += k * xs[i];
}

template <class Real>
void xpay(const PackedSpinorField<Real>& x, double a, PackedSpinorField<Real>& y) {
  check_size(x, y);
  const Real k = static_cast<Real>(a);
  const Real* xs = x.data();
  Real* ys = y.data();
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) ys[i] = xs[i] + k * ys[i];
}

template <class Real>
void subtract(const PackedSpinorField<Real>& x, const PackedSpinorField<Real>& y,
              PackedSpinorField<Real>& out) {
  check_size(x, y);
  check_size(x, out);
  const Real* xs = x.data();
  const Real* ys = y.data();
  Real* o = out.data();
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) o[i] = xs[i] - ys[i];
}

template <class Real>
double norm2(const PackedSpinorField<Real>& x) {
  constexpr int B = PackedSpinorField<Real>::kBlockReals;
  const std::int64_t nb = num_blocks(x);
  std::vector<double> partial(nb);
  const Real* d = x.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    double s = 0;
    for (int i = 0; i < B; ++i) {
      const double v = d[b * B + i];
      s += v * v;
    }
    partial[b] = s;
  }
  return tree_sum(partial);
}

template <class Real>
std::complex<double> inner(const PackedSpinorField<Real>& x, const PackedSpinorField<Real>& y) {
  check_size(x, y);
  constexpr int V = PackedSpinorField<Real>::kVlen;
  constexpr int B = PackedSpinorField<Real>::kBlockReals;
  const std::int64_t nb = num_blocks(x);
  std::vector<double> re(nb), im(nb);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const Real* xb = x.data() + b * B;
    const Real* yb = y.data() + b * B;
    double sr = 0, si = 0;
    for (int c = 0; c < kNumColors; ++c)
      for (int s = 0; s < kNumSpins; ++s) {
        const int r0 = PackedSpinorField<Real>::offset(c, s, 0);
        const int i0 = PackedSpinorField<Real>::offset(c, s, 1);
        for (int l = 0; l < V; ++l) {
          const double xr = xb[r0 + l], xi = xb[i0 + l];
          const double yr = yb[r0 + l], yi = yb[i0 + l];
          sr += xr * yr + xi * yi;
          si += xr * yi - xi * yr;
        }
      }
    re[b] = sr;
    im[b] = si;
  }
  return {tree_sum(re), tree_sum(im)};
}

template <class Real>
void apply_gamma5(const PackedSpinorField<Real>& in, PackedSpinorField<Real>& out) {
  check_size(in, out);
  constexpr int V = PackedSpinorField<Real>::kVlen;
  constexpr int B = PackedSpinorField<Real>::kBlockReals;
  const std::int64_t nb = num_blocks(in);
  std::array<Real, kNumSpins> sign{};
  for (int s = 0; s < kNumSpins; ++s) sign[s] = static_cast<Real>(kGamma.gamma5[s]);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const Real* ib = in.data() + b * B;
    Real* ob = out.data() + b * B;
    for (int c = 0; c < kNumColors; ++c)
      for (int s = 0; s < kNumSpins; ++s)
        for (int ri = 0; ri < 2; ++ri) {
          const int o = PackedSpinorField<Real>::offset(c, s, ri);
          for (int l = 0; l < V; ++l) ob[o + l] = sign[s] * ib[o + l];
        }
  }
}

template <class Real>
bool has_non_finite(const PackedSpinorField<Real>& x) {
  const Real* d = x.data();
  const auto n = static_cast<std::int64_t>(x.size());
  int bad = 0;
#pragma omp parallel for schedule(static) reduction(| : bad)
  for (std::int64_t i = 0; i < n; ++i) bad |= !std::isfinite(d[i]);
  return bad != 0;
}

#define EOWILSON_INSTANTIATE_LINALG(Real)                                                     \
  template void copy<Real>(const PackedSpinorField<Real>&, PackedSpinorField<Real>&);         \
  template void scale<Real>(double, PackedSpinorField<Real>&);                                \
  template void axpy<Real>(double, const PackedSpinorField<Real>&, PackedSpinorField<Real>&); \
  template void xpay<Real>(const PackedSpinorField<Real>&, double, PackedSpinorField<Real>&); \
  template void subtract<Real>(const PackedSpinorField<Real>&, const PackedSpinorField<Real>&, \
                               PackedSpinorField<Real>&);                                     \
  template double norm2<Real>(const PackedSpinorField<Real>&);                                \
  template std::complex<double> inner<Real>(const PackedSpinorField<Real>&,                   \
                                            const PackedSpinorField<Real>&);                  \
  template void apply_gamma5<Real>(const PackedSpinorField<Real>&, PackedSpinorField<Real>&); \
  template bool has_non_finite<Real>(const PackedSpinorField<Real>&);

EOWILSON_INSTANTIATE_LINALG(float)
EOWILSON_INSTANTIATE_LINALG(double)

}  // namespace eowilson
