#include <chrono>
#include <cstring>
#include <string>

#include "eowilson/errors.hpp"
#include "eowilson/halo.hpp"

namespace eowilson {

class LoopbackTransport final : public Transport {
 public:
  LoopbackTransport(LoopbackHub& hub, int rank) : hub_(hub), rank_(rank) {}

  int rank() const override { return rank_; }

  void post_send(int dest, int tag, std::span<const std::byte> data) override {
    hub_.deliver({rank_, dest, tag}, std::vector<std::byte>(data.begin(), data.end()));
  }

  void post_recv(int source, int tag, std::span<std::byte> data) override {
    pending_.push_back({source, tag, data});
  }

  void wait_all() override {
    auto pending = std::move(pending_);
    pending_.clear();
    for (const Recv& r : pending) {
      const std::vector<std::byte> msg = hub_.take({r.source, rank_, r.tag});
      if (msg.size() != r.data.size())
        throw CommunicationError(r.tag / 2, "message of " + std::to_string(msg.size()) +
                                                " bytes, expected " +
                                                std::to_string(r.data.size()));
      if (!msg.empty()) std::memcpy(r.data.data(), msg.data(), msg.size());
    }
  }

 private:
  struct Recv {
    int source;
    int tag;
    std::span<std::byte> data;
  };

  LoopbackHub& hub_;
  int rank_;
  std::vector<Recv> pending_;
};

LoopbackHub::LoopbackHub(int ranks, double timeout_seconds)
    : ranks_(ranks), timeout_seconds_(timeout_seconds) {
  if (ranks < 1) throw ConfigError("loopback hub needs at least one rank");
}

std::unique_ptr<Transport> LoopbackHub::endpoint(int rank) {
  if (rank < 0 || rank >= ranks_) throw ConfigError("rank out of range: " + std::to_string(rank));
  return std::make_unique<LoopbackTransport>(*this, rank);
}

void LoopbackHub::deliver(const Key& key, std::vector<std::byte> message) {
  {
    std::lock_guard lock(mutex_);
    mailboxes_[key].push_back(std::move(message));
  }
  arrived_.notify_all();
}

std::vector<std::byte> LoopbackHub::take(const Key& key) {
  std::unique_lock lock(mutex_);
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(timeout_seconds_));
  const bool ok = arrived_.wait_until(lock, deadline, [&] {
    auto it = mailboxes_.find(key);
    return it != mailboxes_.end() && !it->second.empty();
  });
  const auto [source, dest, tag] = key;
  if (!ok)
    throw CommunicationError(tag / 2, "timed out waiting for rank " + std::to_string(source) +
                                          " -> " + std::to_string(dest) + " tag " +
                                          std::to_string(tag));
  auto& box = mailboxes_[key];
  std::vector<std::byte> msg = std::move(box.front());
  box.erase(box.begin());
  return msg;
}

void PendingExchange::wait() {
  if (!transport_) return;
  Transport* t = transport_;
  transport_ = nullptr;
  t->wait_all();
}

template <class Real>
PendingExchange exchange(Transport& transport, const HaloPlan<Real>& plan, const DomainGrid& grid,
                         HaloBuffers<Real>& buffers, bool poison) {
  const int rank = transport.rank();
  for (int c = 0; c < kNumChannels; ++c) {
    const FaceChannel<Real>& ch = plan.channel(c);
    if (!ch.active) continue;
    const int step = ch.travel == Travel::kDown ? -1 : 1;
    auto& rbuf = buffers.recv[c];
    if (poison) std::fill(rbuf.begin(), rbuf.end(), halo_poison<Real>());
    transport.post_recv(grid.neighbor(rank, ch.mu, -step), c,
                        std::as_writable_bytes(std::span<Real>(rbuf.data(), rbuf.size())));
  }
  for (int c = 0; c < kNumChannels; ++c) {
    const FaceChannel<Real>& ch = plan.channel(c);
    if (!ch.active) continue;
    const int step = ch.travel == Travel::kDown ? -1 : 1;
    const auto& sbuf = buffers.send[c];
    transport.post_send(grid.neighbor(rank, ch.mu, step), c,
                        std::as_bytes(std::span<const Real>(sbuf.data(), sbuf.size())));
  }
  return PendingExchange(&transport);
}

template PendingExchange exchange<float>(Transport&, const HaloPlan<float>&, const DomainGrid&,
                                         HaloBuffers<float>&, bool);
template PendingExchange exchange<double>(Transport&, const HaloPlan<double>&, const DomainGrid&,
                                          HaloBuffers<double>&, bool);

}  // namespace eowilson
