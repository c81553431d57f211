#pragma once

// AoSoA field containers.
//
// A packed spinor field holds one parity of every domain, domains back to
// back, each in the order
//   [t][z][NY/vleny][NX/2/vlenx][color][spin][re,im][lane]
// and a packed gauge field holds, per domain,
//   [dir][parity][t][z][NY/vleny][NX/2/vlenx][row][col][re,im][lane].
// Real and imaginary parts sit in separate lane vectors.
//
// Scalar fields are the site-ordered (x fastest) double-precision
// representation over the full global lattice used by the oracle and I/O.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eowilson/algebra.hpp"
#include "eowilson/aligned.hpp"
#include "eowilson/geometry.hpp"
#include "eowilson/lanes.hpp"

namespace eowilson {

struct ScalarSpinorField {
  Dims size{};
  std::vector<Spinor> sites;

  ScalarSpinorField() = default;
  explicit ScalarSpinorField(const Dims& size);

  Spinor& at(const SiteCoord& c) { return sites[lexicographic(c, size)]; }
  const Spinor& at(const SiteCoord& c) const { return sites[lexicographic(c, size)]; }
};

struct ScalarGaugeField {
  Dims size{};
  // links[site][mu] = U_mu(site), the link from site to site + mu.
  std::vector<std::array<ColorMatrix, kNumDims>> links;

  ScalarGaugeField() = default;
  explicit ScalarGaugeField(const Dims& size);

  ColorMatrix& at(const SiteCoord& c, int mu) { return links[lexicographic(c, size)][mu]; }
  const ColorMatrix& at(const SiteCoord& c, int mu) const {
    return links[lexicographic(c, size)][mu];
  }
};

ScalarGaugeField unit_gauge(const Dims& size);
ScalarGaugeField random_gauge(const Dims& size, std::uint64_t seed);
ScalarSpinorField random_spinor_field(const Dims& size, std::uint64_t seed);
ScalarSpinorField constant_spinor_field(const Dims& size, const Spinor& value);

// Reals per lane-vector block.
inline constexpr int kSpinorComponents = kNumColors * kNumSpins * 2;
inline constexpr int kLinkComponents = kNumColors * kNumColors * 2;
inline constexpr int kHalfSpinorComponents = kNumColors * kNumHalfSpins * 2;

template <class Real>
class PackedSpinorField {
 public:
  using value_type = Real;
  static constexpr int kVlen = lanes::kWidth<Real>;
  static constexpr int kBlockReals = kSpinorComponents * kVlen;

  // Zero-initialized. Throws LayoutError if geom.vlen() != kVlen.
  PackedSpinorField(const LatticeGeometry& geom, Parity parity);

  const LatticeGeometry& geometry() const { return geom_; }
  Parity parity() const { return parity_; }

  std::size_t size() const { return data_.size(); }
  Real* data() { return data_.data(); }
  const Real* data() const { return data_.data(); }
  std::span<Real> values() { return {data_.data(), data_.size()}; }
  std::span<const Real> values() const { return {data_.data(), data_.size()}; }

  std::size_t domain_reals() const {
    return static_cast<std::size_t>(geom_.blocks_per_parity()) * kBlockReals;
  }
  Real* block(int domain, int block) {
    return data_.data() + domain * domain_reals() + static_cast<std::size_t>(block) * kBlockReals;
  }
  const Real* block(int domain, int block) const {
    return data_.data() + domain * domain_reals() + static_cast<std::size_t>(block) * kBlockReals;
  }

  // Offset of a component's lane vector inside a block.
  static constexpr int offset(int color, int spin, int reim) {
    return ((color * kNumSpins + spin) * 2 + reim) * kVlen;
  }

  void set_zero();
  // Throws LayoutError on geometry or parity mismatch.
  void check_compatible(const PackedSpinorField& other) const;

 private:
  LatticeGeometry geom_;
  Parity parity_;
  aligned_vector<Real> data_;
};

template <class Real>
class PackedGaugeField {
 public:
  using value_type = Real;
  static constexpr int kVlen = lanes::kWidth<Real>;
  static constexpr int kBlockReals = kLinkComponents * kVlen;

  explicit PackedGaugeField(const LatticeGeometry& geom);

  const LatticeGeometry& geometry() const { return geom_; }
  std::size_t size() const { return data_.size(); }
  Real* data() { return data_.data(); }
  const Real* data() const { return data_.data(); }

  std::size_t domain_reals() const {
    return static_cast<std::size_t>(kNumDims) * kEvenOdd * geom_.blocks_per_parity() * kBlockReals;
  }
  Real* link(int domain, int mu, Parity parity, int block) {
    return data_.data() + offset_of(domain, mu, parity, block);
  }
  const Real* link(int domain, int mu, Parity parity, int block) const {
    return data_.data() + offset_of(domain, mu, parity, block);
  }
  static constexpr int offset(int row, int col, int reim) {
    return ((row * kNumColors + col) * 2 + reim) * kVlen;
  }

 private:
  std::size_t offset_of(int domain, int mu, Parity parity, int block) const {
    return domain * domain_reals() +
           ((static_cast<std::size_t>(mu) * kEvenOdd + index(parity)) * geom_.blocks_per_parity() +
            block) *
               kBlockReals;
  }

  LatticeGeometry geom_;
  aligned_vector<Real> data_;
};

template <class Real>
struct FermionField {
  PackedSpinorField<Real> even;
  PackedSpinorField<Real> odd;

  explicit FermionField(const LatticeGeometry& geom)
      : even(geom, Parity::kEven), odd(geom, Parity::kOdd) {}

  PackedSpinorField<Real>& operator[](Parity p) { return p == Parity::kEven ? even : odd; }
  const PackedSpinorField<Real>& operator[](Parity p) const {
    return p == Parity::kEven ? even : odd;
  }
};

// Throws LayoutError when the scalar field's size differs from the
// geometry's global size.
template <class Real>
PackedSpinorField<Real> pack_spinor(const ScalarSpinorField& src, Parity parity,
                                    const LatticeGeometry& geom);
// Sites of the other parity are left zero.
template <class Real>
ScalarSpinorField unpack_spinor(const PackedSpinorField<Real>& src);
// Writes only the sites of src's parity.
template <class Real>
void unpack_spinor_into(const PackedSpinorField<Real>& src, ScalarSpinorField& dst);

template <class Real>
FermionField<Real> pack_fermion(const ScalarSpinorField& src, const LatticeGeometry& geom);
template <class Real>
ScalarSpinorField unpack_fermion(const FermionField<Real>& src);

template <class Real>
PackedGaugeField<Real> pack_gauge(const ScalarGaugeField& src, const LatticeGeometry& geom);
template <class Real>
ScalarGaugeField unpack_gauge(const PackedGaugeField<Real>& src);

// Storage accounting, in reals and bytes, over the whole global lattice.
struct DatasetSize {
  std::int64_t gauge_reals = 0;   // 4 directions x V sites x 18
  std::int64_t spinor_reals = 0;  // one full (both parity) spinor: V x 24
  std::int64_t gauge_bytes = 0;
  std::int64_t spinor_bytes = 0;
};
DatasetSize dataset_size(const LatticeGeometry& geom, int bytes_per_real);

}  // namespace eowilson
