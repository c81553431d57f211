#include "eowilson/oracle.hpp"

#include <cmath>
#include <numbers>

#include "eowilson/errors.hpp"

namespace eowilson {

ScalarSpinorField naive_hopping(const ScalarGaugeField& gauge, const ScalarSpinorField& src,
                                double kappa, const OracleOptions& options) {
  if (gauge.size != src.size) throw LayoutError("gauge and spinor sizes differ");
  const Dims& size = src.size;
  ScalarSpinorField out(size);
  const int nt = size[kT];
  for (std::int64_t i = 0; i < volume(size); ++i) {
    const SiteCoord x = from_lexicographic(i, size);
    Spinor acc{};
    for (int mu = 0; mu < kNumDims; ++mu) {
      if (!options.include_hop || options.include_hop(x, mu, +1)) {
        const SiteCoord y = shifted(x, size, mu, +1);
        double phase = 1.0;
        if (options.antiperiodic_t && mu == kT && x.t == nt - 1) phase = -1.0;
        const HalfSpinor h = project(mu, Sign::kMinus, src.at(y));
        HalfSpinor w;
        for (int s = 0; s < kNumHalfSpins; ++s) {
          w[s] = su3_mul(gauge.at(x, mu), h[s]);
          for (auto& c : w[s]) c *= phase;
        }
        reconstruct_accumulate(mu, Sign::kMinus, w, acc);
      }
      if (!options.include_hop || options.include_hop(x, mu, -1)) {
        const SiteCoord y = shifted(x, size, mu, -1);
        double phase = 1.0;
        if (options.antiperiodic_t && mu == kT && y.t == nt - 1) phase = -1.0;
        const HalfSpinor h = project(mu, Sign::kPlus, src.at(y));
        HalfSpinor w;
        for (int s = 0; s < kNumHalfSpins; ++s) {
          w[s] = su3_dag_mul(gauge.at(y, mu), h[s]);
          for (auto& c : w[s]) c *= phase;
        }
        reconstruct_accumulate(mu, Sign::kPlus, w, acc);
      }
    }
    Spinor& o = out.sites[i];
    for (int s = 0; s < kNumSpins; ++s)
      for (int c = 0; c < kNumColors; ++c) o[s][c] = -kappa * acc[s][c];
  }
  return out;
}

ScalarSpinorField naive_apply_dw(const ScalarGaugeField& gauge, const ScalarSpinorField& src,
                                 double kappa, const OracleOptions& options) {
  ScalarSpinorField out = naive_hopping(gauge, src, kappa, options);
  for (std::size_t i = 0; i < out.sites.size(); ++i)
    for (int s = 0; s < kNumSpins; ++s)
      for (int c = 0; c < kNumColors; ++c) out.sites[i][s][c] += src.sites[i][s][c];
  return out;
}

ScalarSpinorField naive_shift(const ScalarSpinorField& src, int mu, int step) {
  ScalarSpinorField out(src.size);
  for (std::int64_t i = 0; i < volume(src.size); ++i) {
    const SiteCoord x = from_lexicographic(i, src.size);
    out.sites[i] = src.at(shifted(x, src.size, mu, step));
  }
  return out;
}

ScalarSpinorField restrict_parity(const ScalarSpinorField& src, Parity parity) {
  ScalarSpinorField out(src.size);
  for (std::int64_t i = 0; i < volume(src.size); ++i) {
    const SiteCoord x = from_lexicographic(i, src.size);
    if (((x.x + x.y + x.z + x.t) & 1) == index(parity)) out.sites[i] = src.sites[i];
  }
  return out;
}

DenseOperator::DenseOperator(int rows, int cols, std::vector<std::int64_t> row_sites,
                             std::vector<std::int64_t> col_sites, Dims size)
    : rows_(rows),
      cols_(cols),
      row_sites_(std::move(row_sites)),
      col_sites_(std::move(col_sites)),
      size_(size),
      data_(static_cast<std::size_t>(rows) * cols) {}

ScalarSpinorField DenseOperator::apply(const ScalarSpinorField& src) const {
  if (src.size != size_) throw LayoutError("dense operator and field sizes differ");
  std::vector<Complex> in(cols_);
  constexpr int kSite = kNumSpins * kNumColors;
  for (std::size_t k = 0; k < col_sites_.size(); ++k)
    for (int s = 0; s < kNumSpins; ++s)
      for (int c = 0; c < kNumColors; ++c)
        in[k * kSite + component(s, c)] = src.sites[col_sites_[k]][s][c];
  ScalarSpinorField out(size_);
  for (std::size_t k = 0; k < row_sites_.size(); ++k)
    for (int s = 0; s < kNumSpins; ++s)
      for (int c = 0; c < kNumColors; ++c) {
        const int r = static_cast<int>(k) * kSite + component(s, c);
        Complex sum = 0;
        for (int j = 0; j < cols_; ++j) sum += (*this)(r, j) * in[j];
        out.sites[row_sites_[k]][s][c] = sum;
      }
  return out;
}

DenseOperator DenseOperator::adjoint() const {
  DenseOperator a(cols_, rows_, col_sites_, row_sites_, size_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) a(c, r) = std::conj((*this)(r, c));
  return a;
}

double DenseOperator::max_abs_difference(const DenseOperator& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw LayoutError("dense shapes differ");
  double m = 0;
  for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

namespace {

std::vector<std::int64_t> sites_of(const Dims& size, int parity) {
  std::vector<std::int64_t> out;
  for (std::int64_t i = 0; i < volume(size); ++i) {
    const SiteCoord x = from_lexicographic(i, size);
    if (parity < 0 || ((x.x + x.y + x.z + x.t) & 1) == parity) out.push_back(i);
  }
  return out;
}

}  // namespace

DenseOperator build_dense(const ScalarGaugeField& gauge, double kappa, DenseKind kind,
                          const OracleOptions& options) {
  const Dims& size = gauge.size;
  if (volume(size) > kDenseMaxVolume)
    throw SizeError("dense operator limited to " + std::to_string(kDenseMaxVolume) + " sites");
  constexpr int kSite = kNumSpins * kNumColors;
  const int even = index(Parity::kEven), odd = index(Parity::kOdd);
  std::vector<std::int64_t> rows, cols;
  switch (kind) {
    case DenseKind::kFull: rows = cols = sites_of(size, -1); break;
    case DenseKind::kEvenOdd: rows = sites_of(size, even), cols = sites_of(size, odd); break;
    case DenseKind::kOddEven: rows = sites_of(size, odd), cols = sites_of(size, even); break;
    case DenseKind::kPreconditioned: rows = cols = sites_of(size, even); break;
  }
  DenseOperator a(static_cast<int>(rows.size()) * kSite, static_cast<int>(cols.size()) * kSite,
                  rows, cols, size);
  ScalarSpinorField basis(size);
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (int s = 0; s < kNumSpins; ++s)
      for (int c = 0; c < kNumColors; ++c) {
        basis.sites[cols[k]][s][c] = 1.0;
        ScalarSpinorField col;
        if (kind == DenseKind::kFull) {
          col = naive_apply_dw(gauge, basis, kappa, options);
        } else if (kind == DenseKind::kPreconditioned) {
          const ScalarSpinorField hop = naive_hopping(gauge, basis, kappa, options);
          col = naive_hopping(gauge, hop, kappa, options);
          for (std::size_t i = 0; i < col.sites.size(); ++i)
            for (int s2 = 0; s2 < kNumSpins; ++s2)
              for (int c2 = 0; c2 < kNumColors; ++c2)
                col.sites[i][s2][c2] = basis.sites[i][s2][c2] - col.sites[i][s2][c2];
        } else {
          col = naive_hopping(gauge, basis, kappa, options);
        }
        basis.sites[cols[k]][s][c] = 0.0;
        const int j = static_cast<int>(k) * kSite + DenseOperator::component(s, c);
        for (std::size_t r = 0; r < rows.size(); ++r)
          for (int s2 = 0; s2 < kNumSpins; ++s2)
            for (int c2 = 0; c2 < kNumColors; ++c2)
              a(static_cast<int>(r) * kSite + DenseOperator::component(s2, c2), j) =
                  col.sites[rows[r]][s2][c2];
      }
  return a;
}

DenseOperator gamma5_conjugate(const DenseOperator& a) {
  constexpr int kSite = kNumSpins * kNumColors;
  DenseOperator g = a;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      g(r, c) = static_cast<double>(kGamma.gamma5[(r % kSite) / kNumColors] *
                                    kGamma.gamma5[(c % kSite) / kNumColors]) *
                a(r, c);
  return g;
}

Spinor apply_gamma(int mu, const Spinor& s) {
  Spinor out{};
  for (int i = 0; i < kNumSpins; ++i)
    for (int j = 0; j < kNumSpins; ++j) {
      const auto& e = kGamma.dense[mu].e[i][j];
      const Complex g(e[0], e[1]);
      if (g == Complex(0)) continue;
      for (int c = 0; c < kNumColors; ++c) out[i][c] += g * s[j][c];
    }
  return out;
}

ScalarSpinorField plane_wave(const Dims& size, const std::array<int, kNumDims>& modes,
                             const Spinor& u) {
  ScalarSpinorField out(size);
  for (std::int64_t i = 0; i < volume(size); ++i) {
    const SiteCoord x = from_lexicographic(i, size);
    double phase = 0;
    for (int mu = 0; mu < kNumDims; ++mu)
      phase += 2.0 * std::numbers::pi * modes[mu] * x[mu] / size[mu];
    const Complex e = std::polar(1.0, phase);
    for (int s = 0; s < kNumSpins; ++s)
      for (int c = 0; c < kNumColors; ++c) out.sites[i][s][c] = e * u[s][c];
  }
  return out;
}

Spinor free_field_symbol(const Dims& size, const std::array<int, kNumDims>& modes, double kappa,
                         const Spinor& u) {
  double cos_sum = 0;
  Spinor out{};
  for (int s = 0; s < kNumSpins; ++s) out[s] = u[s];
  for (int mu = 0; mu < kNumDims; ++mu) {
    const double p = 2.0 * std::numbers::pi * modes[mu] / size[mu];
    cos_sum += std::cos(p);
    const Spinor g = apply_gamma(mu, u);
    const Complex k(0.0, 2.0 * kappa * std::sin(p));
    for (int s = 0; s < kNumSpins; ++s)
      for (int c = 0; c < kNumColors; ++c) out[s][c] += k * g[s][c];
  }
  const double diag = 1.0 - 2.0 * kappa * cos_sum;
  for (int s = 0; s < kNumSpins; ++s)
    for (int c = 0; c < kNumColors; ++c) out[s][c] += (diag - 1.0) * u[s][c];
  return out;
}

double norm2(const ScalarSpinorField& a) {
  double n = 0;
  for (const auto& site : a.sites)
    for (const auto& cv : site)
      for (const auto& z : cv) n += std::norm(z);
  return n;
}

Complex inner(const ScalarSpinorField& a, const ScalarSpinorField& b) {
  if (a.size != b.size) throw LayoutError("field sizes differ");
  Complex sum = 0;
  for (std::size_t i = 0; i < a.sites.size(); ++i)
    for (int s = 0; s < kNumSpins; ++s)
      for (int c = 0; c < kNumColors; ++c) sum += std::conj(a.sites[i][s][c]) * b.sites[i][s][c];
  return sum;
}

double relative_l2(const ScalarSpinorField& a, const ScalarSpinorField& b) {
  if (a.size != b.size) throw LayoutError("field sizes differ");
  double diff = 0;
  for (std::size_t i = 0; i < a.sites.size(); ++i)
    for (int s = 0; s < kNumSpins; ++s)
      for (int c = 0; c < kNumColors; ++c) diff += std::norm(a.sites[i][s][c] - b.sites[i][s][c]);
  const double ref = norm2(b);
  return ref > 0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

}  // namespace eowilson
