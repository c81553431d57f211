#pragma once

// Lane shuffles that realize a one-site stencil shift on packed data.
//
// For an output block and a direction, the shifted vector is built from the
// source vector at the same block position ("current") and the one at the
// adjacent block ("neighbor"). Three shapes occur:
//
//   kSelectTable  table(perm, select(keep_current, current, neighbor))
//   kExtract      ext(current, neighbor, imm)   step +1
//                 ext(neighbor, current, imm)   step -1
//   kNeighbor     neighbor as is (whole-vector move, z/t and vleny == 1)
//
// The tables are derived by probing the geometry's own site <-> lane map, so
// they stay consistent with the layout for every tiling shape.

#include <array>
#include <vector>

#include "eowilson/geometry.hpp"
#include "eowilson/lanes.hpp"

namespace eowilson {

enum class ShiftKind { kSelectTable, kExtract, kNeighbor };

template <class Real>
struct LaneShift {
  static constexpr int kVlen = lanes::kWidth<Real>;
  using Vec = lanes::LaneVector<Real, kVlen>;

  ShiftKind kind = ShiftKind::kNeighbor;
  int step = 1;
  int imm = 0;
  lanes::Predicate<Real, kVlen> keep_current = lanes::Predicate<Real, kVlen>::all(true);
  lanes::IndexVector<Real, kVlen> perm = lanes::IndexVector<Real, kVlen>::identity();

  // Any lane-vector backend with the same width.
  template <class V>
  V apply(const V& current, const V& neighbor) const {
    switch (kind) {
      case ShiftKind::kSelectTable: return table(perm, select(keep_current, current, neighbor));
      case ShiftKind::kExtract:
        return step > 0 ? ext(current, neighbor, imm) : ext(neighbor, current, imm);
      default: return neighbor;
    }
  }

  // Whether output lane `lane` reads from the neighbor vector.
  bool reads_neighbor(int lane) const;
};

template <class Real>
class ShiftTables {
 public:
  // Fetch of in(x + step * mu) into the lanes of an output block whose
  // row_base() is `row_base`.
  const LaneShift<Real>& fetch(int mu, int step, int row_base) const {
    return table_[mu][step > 0 ? 1 : 0][row_base];
  }
  LaneShift<Real>& fetch(int mu, int step, int row_base) {
    return table_[mu][step > 0 ? 1 : 0][row_base];
  }

  const Tiling& tiling() const { return tiling_; }

  // Debug hook: swaps two permutation entries of the +x table so that
  // oracle comparisons must fail.
  void corrupt();

  template <class R>
  friend ShiftTables<R> make_shift_tables(const LatticeGeometry& geom);

 private:
  Tiling tiling_;
  std::array<std::array<std::array<LaneShift<Real>, 2>, 2>, kNumDims> table_;
};

// Throws ConfigError when a tiling cannot be served by one select + table
// (a source lane needed from both vectors).
template <class Real>
ShiftTables<Real> make_shift_tables(const LatticeGeometry& geom);

// Where each output lane's value comes from, from the geometry alone.
struct LaneSource {
  bool from_neighbor = false;
  int lane = 0;
};
std::vector<LaneSource> probe_lane_sources(const Tiling& tiling, int mu, int step, int row_base);

}  // namespace eowilson
