#include <type_traits>

#include "eowilson/errors.hpp"

#include "eowilson/halo.hpp"
#include "lane_spinor.hpp"
#include "parallel.hpp"

namespace eowilson {

namespace {

using detail::CVec;
using detail::half_offset;
using detail::HalfSpinorV;

template <class Real>
using Vec = lanes::LaneVector<Real, lanes::kWidth<Real>>;

template <class Real>
void pack_entry(const HalfSpinorV<Vec<Real>>& h, const FaceEntry<Real>& e, Real* buf) {
  for (int c = 0; c < kNumColors; ++c)
    for (int s = 0; s < kNumHalfSpins; ++s)
      for (int ri = 0; ri < 2; ++ri) {
        const Vec<Real>& v = ri == 0 ? h[s][c].re : h[s][c].im;
        Real* dst = buf + e.offset + static_cast<std::size_t>(half_offset(c, s, ri)) * e.count;
        if (e.whole)
          v.store(dst);
        else if (e.prefix)
          v.store_first(dst, e.count);
        else
          compact(e.active, v).store_first(dst, e.count);
      }
}

template <class Real>
HalfSpinorV<Vec<Real>> unpack_entry(const FaceEntry<Real>& e, const Real* buf) {
  HalfSpinorV<Vec<Real>> h;
  for (int c = 0; c < kNumColors; ++c)
    for (int s = 0; s < kNumHalfSpins; ++s) {
      Vec<Real> part[2];
      for (int ri = 0; ri < 2; ++ri) {
        const Real* src = buf + e.offset + static_cast<std::size_t>(half_offset(c, s, ri)) * e.count;
        if (e.whole) {
          part[ri] = Vec<Real>::load(src);
        } else {
          part[ri] = Vec<Real>::load_first(src, e.count);
          if (!e.prefix) part[ri] = table(e.unpack, part[ri]);
        }
      }
      h[s][c] = {part[0], part[1]};
    }
  return h;
}

template <int Mu, class Real>
void pack_channel(const PackedSpinorField<Real>& in, const PackedGaugeField<Real>& gauge,
                  const FaceChannel<Real>& ch, Parity source, int domain, Real* buf, int threads,
                  std::span<double> thread_seconds) {
  using V = Vec<Real>;
  const int n = static_cast<int>(ch.send.size());
  detail::parallel_blocks(n, threads, thread_seconds, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const FaceEntry<Real>& e = ch.send[i];
      if (ch.travel == Travel::kDown) {
        pack_entry(detail::project_block<Mu, Sign::kMinus, V>(in.block(domain, e.block)), e, buf);
      } else {
        const auto h = detail::project_block<Mu, Sign::kPlus, V>(in.block(domain, e.block));
        const auto u = detail::load_link<V>(gauge.link(domain, Mu, source, e.block));
        pack_entry(detail::mul_link_dag(u, h), e, buf);
      }
    }
  });
}

template <int Mu, class Real>
void unpack_ref(const FaceChannel<Real>& ch, const FaceEntry<Real>& e, const Real* buf,
                const PackedGaugeField<Real>& gauge, Parity output, int domain,
                detail::SpinorV<Vec<Real>>& acc) {
  using V = Vec<Real>;
  auto h = unpack_entry(e, buf);
  if (ch.travel == Travel::kDown) {
    h = detail::mul_link(detail::load_link<V>(gauge.link(domain, Mu, output, e.block)), h);
    detail::reconstruct_acc<Mu, Sign::kMinus, V>(h, acc);
  } else {
    detail::reconstruct_acc<Mu, Sign::kPlus, V>(h, acc);
  }
}

}  // namespace

template <class Real>
void pack_boundary_eo1(const PackedSpinorField<Real>& in, const PackedGaugeField<Real>& gauge,
                       const HaloPlan<Real>& plan, int domain, HaloBuffers<Real>& buffers,
                       int threads, std::span<double> thread_seconds) {
  if (in.parity() != plan.source_parity())
    throw LayoutError("EO1 input has the wrong parity for this halo plan");
  for (int c = 0; c < kNumChannels; ++c) {
    const FaceChannel<Real>& ch = plan.channel(c);
    if (!ch.active) continue;
    detail::with_direction(ch.mu, [&](auto mu) {
      pack_channel<decltype(mu)::value>(in, gauge, ch, plan.source_parity(), domain,
                                        buffers.send[c].data(), threads, thread_seconds);
    });
  }
}

template <class Real>
void unpack_boundary_eo2(const HaloBuffers<Real>& buffers, const PackedGaugeField<Real>& gauge,
                         const HaloPlan<Real>& plan, int domain, Real scale,
                         PackedSpinorField<Real>& out, int threads,
                         std::span<double> thread_seconds) {
  using V = Vec<Real>;
  if (out.parity() != plan.output_parity())
    throw LayoutError("EO2 output has the wrong parity for this halo plan");
  if (plan.empty()) return;
  const int nblocks = out.geometry().blocks_per_parity();
  detail::parallel_blocks(nblocks, threads, thread_seconds, [&](int lo, int hi) {
    for (int b = lo; b < hi; ++b) {
      const auto refs = plan.recv_for_block(b);
      if (refs.empty()) continue;
      auto acc = detail::zero_spinor<V>();
      for (const RecvRef& r : refs) {
        const FaceChannel<Real>& ch = plan.channel(r.channel);
        const Real* buf = buffers.recv[r.channel].data();
        detail::with_direction(ch.mu, [&](auto mu) {
          unpack_ref<decltype(mu)::value>(ch, ch.recv[r.entry], buf, gauge, plan.output_parity(),
                                          domain, acc);
        });
      }
      detail::accumulate_scaled(acc, scale, out.block(domain, b));
    }
  });
}

#define EOWILSON_INSTANTIATE_HALO(Real)                                                        \
  template void pack_boundary_eo1<Real>(const PackedSpinorField<Real>&,                        \
                                        const PackedGaugeField<Real>&, const HaloPlan<Real>&,  \
                                        int, HaloBuffers<Real>&, int, std::span<double>);      \
  template void unpack_boundary_eo2<Real>(const HaloBuffers<Real>&,                            \
                                          const PackedGaugeField<Real>&,                       \
                                          const HaloPlan<Real>&, int, Real,                    \
                                          PackedSpinorField<Real>&, int, std::span<double>);

EOWILSON_INSTANTIATE_HALO(float)
EOWILSON_INSTANTIATE_HALO(double)

}  // namespace eowilson
