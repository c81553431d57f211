#include "eowilson/shift_tables.hpp"

#include <utility>

#include "eowilson/errors.hpp"

namespace eowilson {

std::vector<LaneSource> probe_lane_sources(const Tiling& tiling, int mu, int step, int row_base) {
  // 4 x 4 blocks in x, y; the output block (bx = by = 1) has distinct
  // neighbours on both sides.
  const Dims probe_size{2 * tiling.vlenx * 4, tiling.vleny * 4, 2, 2};
  const LatticeGeometry probe(probe_size, tiling.vlen(), tiling);
  const Parity out_parity = Parity::kEven;
  BlockCoord centre{1, 1, 0, 0};
  if (probe.row_base(out_parity, centre) != row_base) centre.z = 1;
  const int centre_block = probe.block_index(centre);

  std::vector<LaneSource> sources(tiling.vlen());
  for (int lane = 0; lane < tiling.vlen(); ++lane) {
    const SiteCoord site = probe.site(out_parity, centre_block, lane);
    const SiteCoord nb = shifted(site, probe_size, mu, step);
    const PackedAddress addr = probe.address(nb);
    sources[lane].lane = addr.lane;
    sources[lane].from_neighbor = addr.block != centre_block;
  }
  return sources;
}

template <class Real>
bool LaneShift<Real>::reads_neighbor(int lane) const {
  switch (kind) {
    case ShiftKind::kSelectTable: {
      const int src = perm[lane];
      return src < kVlen && !keep_current[src];
    }
    case ShiftKind::kExtract:
      return step > 0 ? (imm + lane >= kVlen) : (imm + lane < kVlen);
    default: return true;
  }
}

namespace {

template <class Real>
LaneShift<Real> build_shift(const Tiling& tiling, int mu, int step, int row_base) {
  constexpr int V = lanes::kWidth<Real>;
  const std::vector<LaneSource> src = probe_lane_sources(tiling, mu, step, row_base);

  LaneShift<Real> s;
  s.step = step;

  bool all_neighbor_identity = true;
  for (int l = 0; l < V; ++l)
    all_neighbor_identity = all_neighbor_identity && src[l].from_neighbor && src[l].lane == l;
  if (all_neighbor_identity) {
    s.kind = ShiftKind::kNeighbor;
    return s;
  }

  // concat(first, second)[imm + l]; first = current for step +1.
  for (int imm = 0; imm < V; ++imm) {
    bool match = true;
    for (int l = 0; l < V && match; ++l) {
      const int k = imm + l;
      const bool in_second = k >= V;
      const bool from_neighbor = step > 0 ? in_second : !in_second;
      match = src[l].from_neighbor == from_neighbor && src[l].lane == (in_second ? k - V : k);
    }
    if (match) {
      s.kind = ShiftKind::kExtract;
      s.imm = imm;
      return s;
    }
  }

  s.kind = ShiftKind::kSelectTable;
  std::vector<int> need_current(V, 0), need_neighbor(V, 0);
  for (int l = 0; l < V; ++l) (src[l].from_neighbor ? need_neighbor : need_current)[src[l].lane] = 1;
  for (int m = 0; m < V; ++m) {
    if (need_current[m] && need_neighbor[m])
      throw ConfigError("tiling " + to_string(tiling) +
                        " needs lane " + std::to_string(m) +
                        " from both vectors; one select cannot merge them");
    s.keep_current.set(m, !need_neighbor[m]);
  }
  for (int l = 0; l < V; ++l) s.perm.set(l, src[l].lane);
  return s;
}

}  // namespace

template <class Real>
ShiftTables<Real> make_shift_tables(const LatticeGeometry& geom) {
  if (geom.vlen() != lanes::kWidth<Real>)
    throw ConfigError("shift tables: geometry vlen " + std::to_string(geom.vlen()) +
                      " does not match the lane width");
  ShiftTables<Real> t;
  t.tiling_ = geom.tiling();
  for (int mu = 0; mu < kNumDims; ++mu)
    for (int dir = 0; dir < 2; ++dir)
      for (int rb = 0; rb < 2; ++rb) {
        const int step = dir == 0 ? -1 : 1;
        if (mu == kZ || mu == kT) {
          t.table_[mu][dir][rb].kind = ShiftKind::kNeighbor;
          t.table_[mu][dir][rb].step = step;
        } else {
          t.table_[mu][dir][rb] = build_shift<Real>(geom.tiling(), mu, step, rb);
        }
      }
  return t;
}

template <class Real>
void ShiftTables<Real>::corrupt() {
  for (int rb = 0; rb < 2; ++rb) {
    LaneShift<Real>& s = table_[kX][1][rb];
    s.kind = ShiftKind::kSelectTable;
    const int a = s.perm[0];
    s.perm.set(0, s.perm[1]);
    s.perm.set(1, a);
  }
}

template struct LaneShift<float>;
template struct LaneShift<double>;
template class ShiftTables<float>;
template class ShiftTables<double>;
template ShiftTables<float> make_shift_tables<float>(const LatticeGeometry&);
template ShiftTables<double> make_shift_tables<double>(const LatticeGeometry&);

}  // namespace eowilson
