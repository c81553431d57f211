#pragma once

// Lattice coordinates, parity and the even-odd / 2D lane-tiling index maps.
//
// A local lattice of NX x NY x NZ x NT sites is split by parity. Within one
// parity the x coordinate is compacted (xc = x / 2), and the (xc, y) plane is
// tiled into vlenx x vleny patches, each patch living in one lane vector:
//
//   lane = (y % vleny) * vlenx + (xc % vlenx)     x fastest inside a tile
//   bx   = xc / vlenx,  by = y / vleny
//   block = ((t * NZ + z) * NBY + by) * NBX + bx
//
// Every other index table in the library (shift tables, halo predicates,
// unpack permutations) is generated from these functions.

#include <array>
#include <cstdint>
#include <string>

namespace eowilson {

inline constexpr int kNumDims = 4;
inline constexpr int kNumColors = 3;
inline constexpr int kNumSpins = 4;
inline constexpr int kNumHalfSpins = 2;
inline constexpr int kEvenOdd = 2;

enum Direction : int { kX = 0, kY = 1, kZ = 2, kT = 3 };

enum class Parity : int { kEven = 0, kOdd = 1 };

constexpr Parity opposite(Parity p) {
  return p == Parity::kEven ? Parity::kOdd : Parity::kEven;
}
constexpr int index(Parity p) { return static_cast<int>(p); }

// Extents or coordinates ordered (x, y, z, t).
using Dims = std::array<int, kNumDims>;

std::int64_t volume(const Dims& d);
std::string to_string(const Dims& d);
// Parses "AxBxCxD"; throws ConfigError.
Dims parse_dims(const std::string& text);

struct SiteCoord {
  int x = 0, y = 0, z = 0, t = 0;

  int operator[](int mu) const;
  int& operator[](int mu);
  friend bool operator==(const SiteCoord&, const SiteCoord&) = default;
};

struct LaneBlock {
  int lane = 0;
  int bx = 0;
  int by = 0;
  friend bool operator==(const LaneBlock&, const LaneBlock&) = default;
};

struct BlockCoord {
  int bx = 0, by = 0, z = 0, t = 0;
  friend bool operator==(const BlockCoord&, const BlockCoord&) = default;
};

// Address of a site inside one domain's parity-split packed arrays.
struct PackedAddress {
  Parity parity = Parity::kEven;
  int block = 0;
  int lane = 0;
  friend bool operator==(const PackedAddress&, const PackedAddress&) = default;
};

struct Tiling {
  int vlenx = 4;
  int vleny = 4;
  int vlen() const { return vlenx * vleny; }
  friend bool operator==(const Tiling&, const Tiling&) = default;
};

// "VXxVY"
Tiling parse_tiling(const std::string& text);
std::string to_string(const Tiling& t);

// Cartesian arrangement of domains, x fastest in the rank order. Periodic.
class DomainGrid {
 public:
  DomainGrid() : DomainGrid(Dims{1, 1, 1, 1}) {}
  explicit DomainGrid(const Dims& extent);

  const Dims& extent() const { return extent_; }
  int extent(int mu) const { return extent_[mu]; }
  int size() const { return size_; }

  Dims coord(int rank) const;
  int rank(const Dims& coord) const;
  // Rank one step up (step = +1) or down (step = -1) along mu.
  int neighbor(int rank, int mu, int step) const;

 private:
  Dims extent_;
  int size_;
};

class LatticeGeometry {
 public:
  // Throws ConfigError unless: every size positive and even locally, global
  // divisible by the grid, vlenx * vleny == vlen, vlenx >= 2, local NX a
  // multiple of 2 * vlenx and local NY a multiple of vleny.
  LatticeGeometry(const Dims& global_size, const DomainGrid& grid, int vlen, Tiling tiling);
  LatticeGeometry(const Dims& global_size, int vlen, Tiling tiling)
      : LatticeGeometry(global_size, DomainGrid{}, vlen, tiling) {}

  const Dims& global_size() const { return global_; }
  const Dims& local_size() const { return local_; }
  int local_size(int mu) const { return local_[mu]; }
  const DomainGrid& grid() const { return grid_; }
  int num_domains() const { return grid_.size(); }

  int vlen() const { return vlen_; }
  int vlenx() const { return tiling_.vlenx; }
  int vleny() const { return tiling_.vleny; }
  const Tiling& tiling() const { return tiling_; }

  int half_nx() const { return local_[kX] / kEvenOdd; }
  int blocks_x() const { return half_nx() / tiling_.vlenx; }
  int blocks_y() const { return local_[kY] / tiling_.vleny; }
  // Blocks (lane vectors per component) in one parity of one domain.
  int blocks_per_parity() const { return blocks_x() * blocks_y() * local_[kZ] * local_[kT]; }

  std::int64_t local_volume() const { return volume(local_); }
  std::int64_t global_volume() const { return volume(global_); }

  bool in_bounds(const SiteCoord& c) const;

  // (x + y + z + t) mod 2 of a local site; BoundsError when outside.
  Parity parity(const SiteCoord& c) const;
  // floor(x / 2); BoundsError when outside.
  int eo_compact_x(const SiteCoord& c) const;
  // BoundsError unless xc < NX/2 and y < NY.
  LaneBlock lane_and_block(int xc, int y) const;

  int block_index(const BlockCoord& b) const;
  BlockCoord block_coord(int block) const;

  PackedAddress address(const SiteCoord& c) const;
  SiteCoord site(Parity parity, int block, int lane) const;

  // Parity of x-offset for lane row 0 of a block: sites in lane row ly sit at
  // x = 2 * xc + ((row_base + ly) & 1). Depends only on parity, by, z, t.
  int row_base(Parity parity, const BlockCoord& b) const;

  // Local -> global coordinates for the given rank, and the inverse.
  SiteCoord to_global(int rank, const SiteCoord& local) const;
  int owner(const SiteCoord& global, SiteCoord* local) const;

  friend bool operator==(const LatticeGeometry& a, const LatticeGeometry& b) {
    return a.global_ == b.global_ && a.grid_.extent() == b.grid_.extent() &&
           a.vlen_ == b.vlen_ && a.tiling_ == b.tiling_;
  }

 private:
  Dims global_;
  Dims local_;
  DomainGrid grid_;
  int vlen_;
  Tiling tiling_;
};

// Periodic step of a global coordinate.
SiteCoord shifted(const SiteCoord& c, const Dims& size, int mu, int step);

// Lexicographic index of a site, x fastest.
std::int64_t lexicographic(const SiteCoord& c, const Dims& size);
SiteCoord from_lexicographic(std::int64_t index, const Dims& size);

}  // namespace eowilson
