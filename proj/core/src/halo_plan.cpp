#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>

#include "eowilson/errors.hpp"
#include "eowilson/halo.hpp"

namespace eowilson {

template <class Real>
bool HaloPlan<Real>::empty() const {
  for (const auto& ch : channels_)
    if (ch.active) return false;
  return true;
}

namespace {

struct FaceLanes {
  int block = 0;
  std::vector<int> lanes;
  std::vector<SiteCoord> sites;
};

// Blocks of `parity` with at least one site at coordinate `value` along mu,
// in block order, with the matching lanes in ascending order.
std::vector<FaceLanes> face_lanes(const LatticeGeometry& geom, Parity parity, int mu, int value) {
  std::vector<FaceLanes> out;
  for (int b = 0; b < geom.blocks_per_parity(); ++b) {
    FaceLanes f;
    f.block = b;
    for (int lane = 0; lane < geom.vlen(); ++lane) {
      const SiteCoord s = geom.site(parity, b, lane);
      if (s[mu] == value) {
        f.lanes.push_back(lane);
        f.sites.push_back(s);
      }
    }
    if (!f.lanes.empty()) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

template <class Real>
HaloPlan<Real> make_halo_plan(const LatticeGeometry& geom, Parity output_parity,
                              bool enforce_self_comm) {
  constexpr int V = lanes::kWidth<Real>;
  if (geom.vlen() != V) throw ConfigError("halo plan: geometry vlen does not match the lane width");
  for (int mu = 0; mu < kNumDims; ++mu)
    if (geom.global_size()[mu] != geom.local_size(mu) * geom.grid().extent(mu))
      throw ConfigError("halo plan: lattice is not divisible by the domain grid");

  HaloPlan<Real> plan;
  plan.output_parity_ = output_parity;
  const Parity source = opposite(output_parity);
  const int nblocks = geom.blocks_per_parity();
  std::vector<std::vector<RecvRef>> per_block(nblocks);

  for (int mu = 0; mu < kNumDims; ++mu) {
    plan.communicated_[mu] = enforce_self_comm || geom.grid().extent(mu) > 1;
    for (Travel travel : {Travel::kDown, Travel::kUp}) {
      FaceChannel<Real>& ch = plan.channels_[channel_index(mu, travel)];
      ch.mu = mu;
      ch.travel = travel;
      ch.active = plan.communicated_[mu];
      if (!ch.active) continue;

      const int top = geom.local_size(mu) - 1;
      const int send_value = travel == Travel::kDown ? 0 : top;
      const int recv_value = travel == Travel::kDown ? top : 0;
      const auto send_faces = face_lanes(geom, source, mu, send_value);
      const auto recv_faces = face_lanes(geom, output_parity, mu, recv_value);
      if (send_faces.size() != recv_faces.size())
        throw std::logic_error("halo plan: send and receive faces differ in block count");

      std::size_t offset = 0;
      for (std::size_t i = 0; i < send_faces.size(); ++i) {
        const FaceLanes& sf = send_faces[i];
        const FaceLanes& rf = recv_faces[i];
        if (sf.lanes.size() != rf.lanes.size())
          throw std::logic_error("halo plan: send and receive lane counts differ");
        // j-th sent site must be the mu-neighbour of the j-th receiving site
        // across the domain boundary.
        for (std::size_t j = 0; j < sf.lanes.size(); ++j)
          for (int nu = 0; nu < kNumDims; ++nu)
            if (nu != mu && sf.sites[j][nu] != rf.sites[j][nu])
              throw std::logic_error("halo plan: face sites are not aligned");

        const int count = static_cast<int>(sf.lanes.size());
        FaceEntry<Real> se, re;
        se.block = sf.block;
        re.block = rf.block;
        se.count = re.count = count;
        se.offset = re.offset = offset;
        se.whole = re.whole = count == V;
        se.prefix = re.prefix = true;
        for (int j = 0; j < count; ++j) {
          se.active.set(sf.lanes[j], true);
          se.prefix = se.prefix && sf.lanes[j] == j;
          re.active.set(rf.lanes[j], true);
          re.prefix = re.prefix && rf.lanes[j] == j;
          re.unpack.set(rf.lanes[j], j);
        }
        per_block[re.block].push_back(
            RecvRef{channel_index(mu, travel), static_cast<int>(ch.recv.size())});
        ch.send.push_back(se);
        ch.recv.push_back(re);
        ch.total_lanes += count;
        offset += static_cast<std::size_t>(count) * kHalfSpinorComponents;
      }
      ch.buffer_reals = offset;
    }
  }

  plan.recv_offsets_.assign(nblocks + 1, 0);
  for (int b = 0; b < nblocks; ++b) {
    plan.recv_offsets_[b + 1] = plan.recv_offsets_[b] + static_cast<int>(per_block[b].size());
    plan.recv_refs_.insert(plan.recv_refs_.end(), per_block[b].begin(), per_block[b].end());
  }
  return plan;
}

template <class Real>
HaloBuffers<Real>::HaloBuffers(const HaloPlan<Real>& plan) {
  for (int c = 0; c < kNumChannels; ++c) {
    send[c].assign(plan.channel(c).buffer_reals, Real(0));
    recv[c].assign(plan.channel(c).buffer_reals, Real(0));
  }
}

template <>
float halo_poison<float>() {
  return std::bit_cast<float>(std::uint32_t{0x7FA5A5A5u});
}
template <>
double halo_poison<double>() {
  return std::bit_cast<double>(std::uint64_t{0x7FF4A5A5A5A5A5A5ull});
}

template <class Real>
std::size_t count_poisoned(std::span<const Real> data) {
  const Real poison = halo_poison<Real>();
  std::size_t n = 0;
  for (const Real& v : data) n += std::memcmp(&v, &poison, sizeof(Real)) == 0;
  return n;
}

template class HaloPlan<float>;
template class HaloPlan<double>;
template struct HaloBuffers<float>;
template struct HaloBuffers<double>;
template HaloPlan<float> make_halo_plan<float>(const LatticeGeometry&, Parity, bool);
template HaloPlan<double> make_halo_plan<double>(const LatticeGeometry&, Parity, bool);
template std::size_t count_poisoned<float>(std::span<const float>);
template std::size_t count_poisoned<double>(std::span<const double>);

}  // namespace eowilson
