#include "eowilson/layout.hpp"

#include <algorithm>

#include "eowilson/errors.hpp"
#include "eowilson/random.hpp"

namespace eowilson {

ScalarSpinorField::ScalarSpinorField(const Dims& s) : size(s), sites(volume(s)) {}

ScalarGaugeField::ScalarGaugeField(const Dims& s) : size(s), links(volume(s)) {}

ScalarGaugeField unit_gauge(const Dims& size) {
  ScalarGaugeField g(size);
  for (auto& site : g.links) site.fill(ColorMatrix::identity());
  return g;
}

ScalarGaugeField random_gauge(const Dims& size, std::uint64_t seed) {
  ScalarGaugeField g(size);
  const CounterRng rng(seed, RngStream::kGauge);
  const auto n = static_cast<std::int64_t>(g.links.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < n; ++s)
    for (int mu = 0; mu < kNumDims; ++mu)
      g.links[s][mu] = random_su3(rng, static_cast<std::uint64_t>(s) * kNumDims + mu);
  return g;
}

ScalarSpinorField random_spinor_field(const Dims& size, std::uint64_t seed) {
  ScalarSpinorField f(size);
  const CounterRng rng(seed, RngStream::kSpinor);
  const auto n = static_cast<std::int64_t>(f.sites.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < n; ++s) f.sites[s] = random_spinor(rng, static_cast<std::uint64_t>(s));
  return f;
}

ScalarSpinorField constant_spinor_field(const Dims& size, const Spinor& value) {
  ScalarSpinorField f(size);
  std::fill(f.sites.begin(), f.sites.end(), value);
  return f;
}

namespace {

template <int Vlen>
void check_vlen(const LatticeGeometry& geom) {
  if (geom.vlen() != Vlen)
    throw LayoutError("geometry has vlen " + std::to_string(geom.vlen()) +
                      " but the field precision needs " + std::to_string(Vlen));
}

void check_global_size(const Dims& have, const LatticeGeometry& geom) {
  if (have != geom.global_size())
    throw LayoutError("scalar field " + to_string(have) + " does not match lattice " +
                      to_string(geom.global_size()));
}

}  // namespace

template <class Real>
PackedSpinorField<Real>::PackedSpinorField(const LatticeGeometry& geom, Parity parity)
    : geom_(geom), parity_(parity) {
  check_vlen<kVlen>(geom_);
  data_.assign(static_cast<std::size_t>(geom_.num_domains()) * domain_reals(), Real(0));
}

template <class Real>
void PackedSpinorField<Real>::set_zero() {
  std::fill(data_.begin(), data_.end(), Real(0));
}

template <class Real>
void PackedSpinorField<Real>::check_compatible(const PackedSpinorField& other) const {
  if (!(geom_ == other.geom_)) throw LayoutError("spinor fields have different geometries");
  if (parity_ != other.parity_) throw LayoutError("spinor fields have different parities");
}

template <class Real>
PackedGaugeField<Real>::PackedGaugeField(const LatticeGeometry& geom) : geom_(geom) {
  check_vlen<kVlen>(geom_);
  data_.assign(static_cast<std::size_t>(geom_.num_domains()) * domain_reals(), Real(0));
}

template <class Real>
PackedSpinorField<Real> pack_spinor(const ScalarSpinorField& src, Parity parity,
                                    const LatticeGeometry& geom) {
  check_global_size(src.size, geom);
  PackedSpinorField<Real> out(geom, parity);
  constexpr int V = PackedSpinorField<Real>::kVlen;
  const int nblocks = geom.blocks_per_parity();
  for (int d = 0; d < geom.num_domains(); ++d) {
#pragma omp parallel for schedule(static)
    for (int b = 0; b < nblocks; ++b) {
      Real* blk = out.block(d, b);
      for (int lane = 0; lane < V; ++lane) {
        const Spinor& s = src.at(geom.to_global(d, geom.site(parity, b, lane)));
        for (int c = 0; c < kNumColors; ++c)
          for (int i = 0; i < kNumSpins; ++i) {
            blk[PackedSpinorField<Real>::offset(c, i, 0) + lane] = static_cast<Real>(s[i][c].real());
            blk[PackedSpinorField<Real>::offset(c, i, 1) + lane] = static_cast<Real>(s[i][c].imag());
          }
      }
    }
  }
  return out;
}

template <class Real>
void unpack_spinor_into(const PackedSpinorField<Real>& src, ScalarSpinorField& dst) {
  const LatticeGeometry& geom = src.geometry();
  check_global_size(dst.size, geom);
  constexpr int V = PackedSpinorField<Real>::kVlen;
  const int nblocks = geom.blocks_per_parity();
  for (int d = 0; d < geom.num_domains(); ++d) {
#pragma omp parallel for schedule(static)
    for (int b = 0; b < nblocks; ++b) {
      const Real* blk = src.block(d, b);
      for (int lane = 0; lane < V; ++lane) {
        Spinor& s = dst.at(geom.to_global(d, geom.site(src.parity(), b, lane)));
        for (int c = 0; c < kNumColors; ++c)
          for (int i = 0; i < kNumSpins; ++i)
            s[i][c] = {blk[PackedSpinorField<Real>::offset(c, i, 0) + lane],
                       blk[PackedSpinorField<Real>::offset(c, i, 1) + lane]};
      }
    }
  }
}

template <class Real>
ScalarSpinorField unpack_spinor(const PackedSpinorField<Real>& src) {
  ScalarSpinorField out(src.geometry().global_size());
  unpack_spinor_into(src, out);
  return out;
}

template <class Real>
FermionField<Real> pack_fermion(const ScalarSpinorField& src, const LatticeGeometry& geom) {
  FermionField<Real> f(geom);
  f.even = pack_spinor<Real>(src, Parity::kEven, geom);
  f.odd = pack_spinor<Real>(src, Parity::kOdd, geom);
  return f;
}

template <class Real>
ScalarSpinorField unpack_fermion(const FermionField<Real>& src) {
  ScalarSpinorField out(src.even.geometry().global_size());
  unpack_spinor_into(src.even, out);
  unpack_spinor_into(src.odd, out);
  return out;
}

template <class Real>
PackedGaugeField<Real> pack_gauge(const ScalarGaugeField& src, const LatticeGeometry& geom) {
  check_global_size(src.size, geom);
  PackedGaugeField<Real> out(geom);
  constexpr int V = PackedGaugeField<Real>::kVlen;
  const int nblocks = geom.blocks_per_parity();
  for (int d = 0; d < geom.num_domains(); ++d)
    for (int mu = 0; mu < kNumDims; ++mu)
      for (Parity p : {Parity::kEven, Parity::kOdd}) {
#pragma omp parallel for schedule(static)
        for (int b = 0; b < nblocks; ++b) {
          Real* blk = out.link(d, mu, p, b);
          for (int lane = 0; lane < V; ++lane) {
            const ColorMatrix& u = src.at(geom.to_global(d, geom.site(p, b, lane)), mu);
            for (int r = 0; r < kNumColors; ++r)
              for (int c = 0; c < kNumColors; ++c) {
                blk[PackedGaugeField<Real>::offset(r, c, 0) + lane] = static_cast<Real>(u(r, c).real());
                blk[PackedGaugeField<Real>::offset(r, c, 1) + lane] = static_cast<Real>(u(r, c).imag());
              }
          }
        }
      }
  return out;
}

template <class Real>
ScalarGaugeField unpack_gauge(const PackedGaugeField<Real>& src) {
  const LatticeGeometry& geom = src.geometry();
  ScalarGaugeField out(geom.global_size());
  constexpr int V = PackedGaugeField<Real>::kVlen;
  const int nblocks = geom.blocks_per_parity();
  for (int d = 0; d < geom.num_domains(); ++d)
    for (int mu = 0; mu < kNumDims; ++mu)
      for (Parity p : {Parity::kEven, Parity::kOdd})
        for (int b = 0; b < nblocks; ++b) {
          const Real* blk = src.link(d, mu, p, b);
          for (int lane = 0; lane < V; ++lane) {
            ColorMatrix& u = out.at(geom.to_global(d, geom.site(p, b, lane)), mu);
            for (int r = 0; r < kNumColors; ++r)
              for (int c = 0; c < kNumColors; ++c)
                u(r, c) = {blk[PackedGaugeField<Real>::offset(r, c, 0) + lane],
                           blk[PackedGaugeField<Real>::offset(r, c, 1) + lane]};
          }
        }
  return out;
}

DatasetSize dataset_size(const LatticeGeometry& geom, int bytes_per_real) {
  DatasetSize s;
  const std::int64_t half = static_cast<std::int64_t>(geom.blocks_per_parity()) * geom.vlen() *
                            geom.num_domains();
  s.gauge_reals = static_cast<std::int64_t>(kNumDims) * kEvenOdd * half * kLinkComponents;
  s.spinor_reals = kEvenOdd * half * kSpinorComponents;
  s.gauge_bytes = s.gauge_reals * bytes_per_real;
  s.spinor_bytes = s.spinor_reals * bytes_per_real;
  return s;
}

#define EOWILSON_INSTANTIATE_LAYOUT(Real)                                                      \
  template class PackedSpinorField<Real>;                                                      \
  template class PackedGaugeField<Real>;                                                       \
  template PackedSpinorField<Real> pack_spinor<Real>(const ScalarSpinorField&, Parity,         \
                                                     const LatticeGeometry&);                  \
  template ScalarSpinorField unpack_spinor<Real>(const PackedSpinorField<Real>&);              \
  template void unpack_spinor_into<Real>(const PackedSpinorField<Real>&, ScalarSpinorField&);  \
  template FermionField<Real> pack_fermion<Real>(const ScalarSpinorField&,                     \
                                                 const LatticeGeometry&);                      \
  template ScalarSpinorField unpack_fermion<Real>(const FermionField<Real>&);                  \
  template PackedGaugeField<Real> pack_gauge<Real>(const ScalarGaugeField&,                    \
                                                   const LatticeGeometry&);                    \
  template ScalarGaugeField unpack_gauge<Real>(const PackedGaugeField<Real>&);

EOWILSON_INSTANTIATE_LAYOUT(float)
EOWILSON_INSTANTIATE_LAYOUT(double)

}  // namespace eowilson
