#pragma once

// Boundary exchange for the hopping term.
//
// Each direction mu carries two channels:
//   kDown  half spinors (1 - gamma_mu) psi from the lower face, sent to the
//          rank below, which multiplies U_mu(x) on arrival (forward hop);
//   kUp    half spinors U_mu^dagger (1 + gamma_mu) psi from the upper face,
//          sent to the rank above, which only reconstructs (backward hop).
// EO1 packs the send side of every channel in per-direction loops over the
// face blocks; EO2 runs one loop over all output blocks and applies whatever
// channels touch each block. The bulk kernel contributes nothing on the
// lanes a channel fills, so bulk + EO2 is the complete operator.
//
// Buffer entry layout: [entry][color][spin(2)][re,im][count] reals, where
// count is the number of face lanes in that block vector.

#include <array>
#include <condition_variable>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "eowilson/aligned.hpp"
#include "eowilson/geometry.hpp"
#include "eowilson/lanes.hpp"
#include "eowilson/layout.hpp"

namespace eowilson {

enum class Travel : int { kDown = 0, kUp = 1 };
constexpr int index(Travel t) { return static_cast<int>(t); }
constexpr int channel_index(int mu, Travel t) { return 2 * mu + index(t); }
inline constexpr int kNumChannels = 2 * kNumDims;

template <class Real>
struct FaceEntry {
  static constexpr int kVlen = lanes::kWidth<Real>;

  int block = 0;
  int count = 0;
  std::size_t offset = 0;  // reals into the channel buffer
  bool whole = false;      // every lane, no shuffle
  bool prefix = false;     // active lanes are exactly 0..count-1
  lanes::Predicate<Real, kVlen> active;
  lanes::IndexVector<Real, kVlen> unpack = lanes::IndexVector<Real, kVlen>::none();
};

template <class Real>
struct FaceChannel {
  int mu = 0;
  Travel travel = Travel::kDown;
  bool active = false;
  // Source-parity blocks on the sending face, in (t, z, by, bx) order.
  std::vector<FaceEntry<Real>> send;
  // Output-parity blocks that consume the received data, same order.
  std::vector<FaceEntry<Real>> recv;
  std::size_t buffer_reals = 0;
  int total_lanes = 0;
};

struct RecvRef {
  int channel = 0;
  int entry = 0;
};

template <class Real>
class HaloPlan {
 public:
  Parity output_parity() const { return output_parity_; }
  Parity source_parity() const { return opposite(output_parity_); }
  bool communicated(int mu) const { return communicated_[mu]; }
  bool empty() const;

  const FaceChannel<Real>& channel(int mu, Travel t) const { return channels_[channel_index(mu, t)]; }
  const FaceChannel<Real>& channel(int c) const { return channels_[c]; }

  // Receive work of one output block (EO2 visits every block once).
  std::span<const RecvRef> recv_for_block(int block) const {
    return {recv_refs_.data() + recv_offsets_[block],
            recv_refs_.data() + recv_offsets_[block + 1]};
  }

  template <class R>
  friend HaloPlan<R> make_halo_plan(const LatticeGeometry& geom, Parity output_parity,
                                    bool enforce_self_comm);

 private:
  Parity output_parity_ = Parity::kEven;
  std::array<bool, kNumDims> communicated_{};
  std::array<FaceChannel<Real>, kNumChannels> channels_;
  std::vector<int> recv_offsets_;
  std::vector<RecvRef> recv_refs_;
};

// A direction communicates when its domain-grid extent exceeds one, or in
// every direction when enforce_self_comm is set (a 1-extent direction then
// sends to its own rank). Throws ConfigError for indivisible decompositions.
template <class Real>
HaloPlan<Real> make_halo_plan(const LatticeGeometry& geom, Parity output_parity,
                              bool enforce_self_comm);

// One domain's send and receive buffers, one pair per channel.
template <class Real>
struct HaloBuffers {
  std::array<aligned_vector<Real>, kNumChannels> send;
  std::array<aligned_vector<Real>, kNumChannels> recv;

  explicit HaloBuffers(const HaloPlan<Real>& plan);
};

// Message passing between domain coordinators.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual int rank() const = 0;
  // Nonblocking; the buffer may be reused as soon as the call returns.
  virtual void post_send(int dest, int tag, std::span<const std::byte> data) = 0;
  // Nonblocking; data is valid after wait_all().
  virtual void post_recv(int source, int tag, std::span<std::byte> data) = 0;
  // Completes every posted receive. Throws CommunicationError.
  virtual void wait_all() = 0;
};

// In-process transport: every domain is a rank inside one process. Messages
// are copied on send and delivered FIFO per (source, destination, tag).
class LoopbackHub {
 public:
  explicit LoopbackHub(int ranks, double timeout_seconds = 60.0);
  std::unique_ptr<Transport> endpoint(int rank);
  int ranks() const { return ranks_; }

 private:
  friend class LoopbackTransport;
  using Key = std::tuple<int, int, int>;  // source, dest, tag

  void deliver(const Key& key, std::vector<std::byte> message);
  std::vector<std::byte> take(const Key& key);

  int ranks_;
  double timeout_seconds_;
  std::mutex mutex_;
  std::condition_variable arrived_;
  std::map<Key, std::vector<std::vector<std::byte>>> mailboxes_;
};

// Bit pattern written into receive buffers before they are posted when
// poisoning is on; a NaN no arithmetic produces.
template <class Real>
Real halo_poison();
template <class Real>
std::size_t count_poisoned(std::span<const Real> data);

class PendingExchange {
 public:
  PendingExchange() = default;
  explicit PendingExchange(Transport* transport) : transport_(transport) {}
  // Blocks until every receive of the exchange has completed.
  void wait();
  bool pending() const { return transport_ != nullptr; }

 private:
  Transport* transport_ = nullptr;
};

// Posts the receives, then the sends, of every active channel. Returns
// immediately; call wait() on the handle before EO2.
template <class Real>
PendingExchange exchange(Transport& transport, const HaloPlan<Real>& plan, const DomainGrid& grid,
                         HaloBuffers<Real>& buffers, bool poison = false);

// EO1: project (and for kUp, multiply U^dagger) the boundary sites of `in`
// for domain `domain` into the send buffers. Each channel is one loop split
// evenly over `threads`; per-thread seconds are added to thread_seconds.
template <class Real>
void pack_boundary_eo1(const PackedSpinorField<Real>& in, const PackedGaugeField<Real>& gauge,
                       const HaloPlan<Real>& plan, int domain, HaloBuffers<Real>& buffers,
                       int threads = 1, std::span<double> thread_seconds = {});

// EO2: out += scale * (reconstructed received contributions), multiplying
// U_mu(x) for data that arrived from above. One loop over all output blocks
// split evenly over `threads`.
template <class Real>
void unpack_boundary_eo2(const HaloBuffers<Real>& buffers, const PackedGaugeField<Real>& gauge,
                         const HaloPlan<Real>& plan, int domain, Real scale,
                         PackedSpinorField<Real>& out, int threads = 1,
                         std::span<double> thread_seconds = {});

}  // namespace eowilson
