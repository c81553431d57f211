#include "eowilson/geometry.hpp"

#include <charconv>
#include <sstream>

#include "eowilson/errors.hpp"

namespace eowilson {

namespace {

int floor_div(int a, int b) { return (a >= 0) ? a / b : -((-a + b - 1) / b); }
int mod(int a, int b) { return a - floor_div(a, b) * b; }

std::string coord_string(const SiteCoord& c) {
  std::ostringstream os;
  os << '(' << c.x << ',' << c.y << ',' << c.z << ',' << c.t << ')';
  return os.str();
}

}  // namespace

std::int64_t volume(const Dims& d) {
  std::int64_t v = 1;
  for (int n : d) v *= n;
  return v;
}

std::string to_string(const Dims& d) {
  return std::to_string(d[0]) + "x" + std::to_string(d[1]) + "x" + std::to_string(d[2]) + "x" +
         std::to_string(d[3]);
}

Dims parse_dims(const std::string& text) {
  Dims d{};
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int mu = 0; mu < kNumDims; ++mu) {
    auto [next, ec] = std::from_chars(p, end, d[mu]);
    if (ec != std::errc{} || d[mu] <= 0) throw ConfigError("malformed extent '" + text + "'");
    p = next;
    if (mu < kNumDims - 1) {
      if (p == end || (*p != 'x' && *p != 'X')) throw ConfigError("malformed extent '" + text + "'");
      ++p;
    }
  }
  if (p != end) throw ConfigError("malformed extent '" + text + "'");
  return d;
}

Tiling parse_tiling(const std::string& text) {
  Tiling t;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  auto r1 = std::from_chars(p, end, t.vlenx);
  if (r1.ec != std::errc{} || r1.ptr == end || (*r1.ptr != 'x' && *r1.ptr != 'X'))
    throw ConfigError("malformed tiling '" + text + "'");
  auto r2 = std::from_chars(r1.ptr + 1, end, t.vleny);
  if (r2.ec != std::errc{} || r2.ptr != end || t.vlenx <= 0 || t.vleny <= 0)
    throw ConfigError("malformed tiling '" + text + "'");
  return t;
}

std::string to_string(const Tiling& t) {
  return std::to_string(t.vlenx) + "x" + std::to_string(t.vleny);
}

int SiteCoord::operator[](int mu) const {
  switch (mu) {
    case kX: return x;
    case kY: return y;
    case kZ: return z;
    default: return t;
  }
}

int& SiteCoord::operator[](int mu) {
  switch (mu) {
    case kX: return x;
    case kY: return y;
    case kZ: return z;
    default: return t;
  }
}

DomainGrid::DomainGrid(const Dims& extent) : extent_(extent), size_(1) {
  for (int n : extent_) {
    if (n <= 0) throw ConfigError("domain grid extents must be positive: " + to_string(extent_));
    size_ *= n;
  }
}

Dims DomainGrid::coord(int rank) const {
  if (rank < 0 || rank >= size_) throw BoundsError("rank out of range");
  Dims c{};
  for (int mu = 0; mu < kNumDims; ++mu) {
    c[mu] = rank % extent_[mu];
    rank /= extent_[mu];
  }
  return c;
}

int DomainGrid::rank(const Dims& coord) const {
  int r = 0;
  for (int mu = kNumDims - 1; mu >= 0; --mu) {
    if (coord[mu] < 0 || coord[mu] >= extent_[mu]) throw BoundsError("domain coordinate out of range");
    r = r * extent_[mu] + coord[mu];
  }
  return r;
}

int DomainGrid::neighbor(int rank, int mu, int step) const {
  Dims c = coord(rank);
  c[mu] = mod(c[mu] + step, extent_[mu]);
  return this->rank(c);
}

LatticeGeometry::LatticeGeometry(const Dims& global_size, const DomainGrid& grid, int vlen,
                                 Tiling tiling)
    : global_(global_size), local_{}, grid_(grid), vlen_(vlen), tiling_(tiling) {
  for (int mu = 0; mu < kNumDims; ++mu) {
    if (global_[mu] <= 0) throw ConfigError("lattice extents must be positive: " + to_string(global_));
    if (global_[mu] % grid_.extent(mu) != 0)
      throw ConfigError("lattice " + to_string(global_) + " is not divisible by domain grid " +
                        to_string(grid_.extent()));
    local_[mu] = global_[mu] / grid_.extent(mu);
  }
  for (int mu = 0; mu < kNumDims; ++mu)
    if (local_[mu] % 2 != 0) throw ConfigError("local extents must be even: " + to_string(local_));
  if (tiling_.vlenx <= 0 || tiling_.vleny <= 0 || tiling_.vlen() != vlen_)
    throw ConfigError("tiling " + to_string(tiling_) + " does not cover " + std::to_string(vlen_) +
                      " lanes");
  if (tiling_.vlenx < 2) throw ConfigError("vlenx must be at least 2");
  if (local_[kX] % (kEvenOdd * tiling_.vlenx) != 0)
    throw ConfigError("local NX=" + std::to_string(local_[kX]) + " is not a multiple of 2*vlenx=" +
                      std::to_string(kEvenOdd * tiling_.vlenx));
  if (local_[kY] % tiling_.vleny != 0)
    throw ConfigError("local NY=" + std::to_string(local_[kY]) + " is not a multiple of vleny=" +
                      std::to_string(tiling_.vleny));
}

bool LatticeGeometry::in_bounds(const SiteCoord& c) const {
  for (int mu = 0; mu < kNumDims; ++mu)
    if (c[mu] < 0 || c[mu] >= local_[mu]) return false;
  return true;
}

Parity LatticeGeometry::parity(const SiteCoord& c) const {
  if (!in_bounds(c)) throw BoundsError("site " + coord_string(c) + " outside local lattice");
  return static_cast<Parity>((c.x + c.y + c.z + c.t) & 1);
}

int LatticeGeometry::eo_compact_x(const SiteCoord& c) const {
  if (!in_bounds(c)) throw BoundsError("site " + coord_string(c) + " outside local lattice");
  return c.x / 2;
}

LaneBlock LatticeGeometry::lane_and_block(int xc, int y) const {
  if (xc < 0 || xc >= half_nx() || y < 0 || y >= local_[kY])
    throw BoundsError("compacted coordinate (" + std::to_string(xc) + "," + std::to_string(y) +
                      ") outside local lattice");
  LaneBlock lb;
  lb.lane = (y % tiling_.vleny) * tiling_.vlenx + (xc % tiling_.vlenx);
  lb.bx = xc / tiling_.vlenx;
  lb.by = y / tiling_.vleny;
  return lb;
}

int LatticeGeometry::block_index(const BlockCoord& b) const {
  return ((b.t * local_[kZ] + b.z) * blocks_y() + b.by) * blocks_x() + b.bx;
}

BlockCoord LatticeGeometry::block_coord(int block) const {
  if (block < 0 || block >= blocks_per_parity()) throw BoundsError("block index out of range");
  BlockCoord b;
  b.bx = block % blocks_x();
  block /= blocks_x();
  b.by = block % blocks_y();
  block /= blocks_y();
  b.z = block % local_[kZ];
  b.t = block / local_[kZ];
  return b;
}

PackedAddress LatticeGeometry::address(const SiteCoord& c) const {
  PackedAddress a;
  a.parity = parity(c);
  LaneBlock lb = lane_and_block(eo_compact_x(c), c.y);
  a.block = block_index(BlockCoord{lb.bx, lb.by, c.z, c.t});
  a.lane = lb.lane;
  return a;
}

SiteCoord LatticeGeometry::site(Parity parity, int block, int lane) const {
  if (lane < 0 || lane >= vlen_) throw BoundsError("lane out of range");
  BlockCoord b = block_coord(block);
  const int lx = lane % tiling_.vlenx;
  const int ly = lane / tiling_.vlenx;
  SiteCoord c;
  c.y = b.by * tiling_.vleny + ly;
  c.z = b.z;
  c.t = b.t;
  const int xc = b.bx * tiling_.vlenx + lx;
  c.x = 2 * xc + ((index(parity) + c.y + c.z + c.t) & 1);
  return c;
}

int LatticeGeometry::row_base(Parity parity, const BlockCoord& b) const {
  return (index(parity) + b.by * tiling_.vleny + b.z + b.t) & 1;
}

SiteCoord LatticeGeometry::to_global(int rank, const SiteCoord& local) const {
  const Dims c = grid_.coord(rank);
  SiteCoord g = local;
  for (int mu = 0; mu < kNumDims; ++mu) g[mu] += c[mu] * local_[mu];
  return g;
}

int LatticeGeometry::owner(const SiteCoord& global, SiteCoord* local) const {
  Dims c{};
  SiteCoord l = global;
  for (int mu = 0; mu < kNumDims; ++mu) {
    if (global[mu] < 0 || global[mu] >= global_[mu]) throw BoundsError("global site out of range");
    c[mu] = global[mu] / local_[mu];
    l[mu] = global[mu] % local_[mu];
  }
  if (local != nullptr) *local = l;
  return grid_.rank(c);
}

SiteCoord shifted(const SiteCoord& c, const Dims& size, int mu, int step) {
  SiteCoord r = c;
  r[mu] = mod(c[mu] + step, size[mu]);
  return r;
}

std::int64_t lexicographic(const SiteCoord& c, const Dims& size) {
  return c.x + static_cast<std::int64_t>(size[kX]) *
                   (c.y + static_cast<std::int64_t>(size[kY]) *
                              (c.z + static_cast<std::int64_t>(size[kZ]) * c.t));
}

SiteCoord from_lexicographic(std::int64_t index, const Dims& size) {
  SiteCoord c;
  c.x = static_cast<int>(index % size[kX]);
  index /= size[kX];
  c.y = static_cast<int>(index % size[kY]);
  index /= size[kY];
  c.z = static_cast<int>(index % size[kZ]);
  c.t = static_cast<int>(index / size[kZ]);
  return c;
}

}  // namespace eowilson
