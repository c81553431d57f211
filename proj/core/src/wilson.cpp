#include "eowilson/wilson.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "eowilson/errors.hpp"
#include "eowilson/linalg.hpp"
#include "lane_spinor.hpp"
#include "parallel.hpp"

namespace eowilson {

HoppingParams HoppingParams::from_mass(double mass) {
  const double denom = 8.0 + 2.0 * mass;
  if (denom == 0.0 || !std::isfinite(mass)) throw ConfigError("mass gives an infinite kappa");
  HoppingParams p;
  p.kappa = 1.0 / denom;
  p.validate();
  return p;
}

void HoppingParams::validate() const {
  if (!std::isfinite(kappa)) throw ConfigError("kappa must be finite");
}

std::int64_t hopping_flops(const Dims& lattice) { return kFlopsPerSite * volume(lattice) / 2; }
std::int64_t hopping_flops(const LatticeGeometry& geom) { return hopping_flops(geom.global_size()); }
std::int64_t prec_flops(const LatticeGeometry& geom) { return 2 * hopping_flops(geom); }

namespace {

template <class Real>
using Vec = lanes::LaneVector<Real, lanes::kWidth<Real>>;

// Block-index arithmetic within one domain.
struct BlockGrid {
  std::array<int, kNumDims> extent;
  std::array<int, kNumDims> stride;

  explicit BlockGrid(const LatticeGeometry& g) {
    extent = {g.blocks_x(), g.blocks_y(), g.local_size(kZ), g.local_size(kT)};
    stride = {1, extent[0], extent[0] * extent[1], extent[0] * extent[1] * extent[2]};
  }
  static int coord(const BlockCoord& c, int mu) {
    switch (mu) {
      case 0: return c.bx;
      case 1: return c.by;
      case 2: return c.z;
      default: return c.t;
    }
  }
  // Neighbouring block index, periodic; `wrapped` reports a domain crossing.
  int neighbor(int block, const BlockCoord& c, int mu, int step, bool& wrapped) const {
    const int v = coord(c, mu) + step;
    wrapped = v < 0 || v >= extent[mu];
    if (!wrapped) return block + step * stride[mu];
    return block - step * (extent[mu] - 1) * stride[mu];
  }
};

template <class Real>
struct BulkContext {
  const LatticeGeometry* geom;
  const ShiftTables<Real>* tables;
  const PackedSpinorField<Real>* in;
  const PackedGaugeField<Real>* gauge;
  int domain;
  Parity out_parity;
  std::array<bool, kNumDims> communicated;
  BlockGrid grid;

  const Real* spinor(int block) const { return in->block(domain, block); }
};

template <int Mu, class Real>
void hop_forward(const BulkContext<Real>& ctx, int block, const BlockCoord& bc, int row_base,
                 detail::SpinorV<Vec<Real>>& acc) {
  using V = Vec<Real>;
  const LaneShift<Real>& sh = ctx.tables->fetch(Mu, +1, row_base);
  bool wrapped = false;
  const int nb = ctx.grid.neighbor(block, bc, Mu, +1, wrapped);
  const bool cut = wrapped && ctx.communicated[Mu];
  detail::HalfSpinorV<V> h;
  if (sh.kind == ShiftKind::kNeighbor) {
    if (cut) return;
    h = detail::project_block<Mu, Sign::kMinus, V>(ctx.spinor(nb));
  } else {
    const auto hc = detail::project_block<Mu, Sign::kMinus, V>(ctx.spinor(block));
    const auto hn = cut ? detail::zero_half<V>()
                        : detail::project_block<Mu, Sign::kMinus, V>(ctx.spinor(nb));
    h = detail::shift_half(sh, hc, hn);
  }
  const auto u = detail::load_link<V>(ctx.gauge->link(ctx.domain, Mu, ctx.out_parity, block));
  detail::reconstruct_acc<Mu, Sign::kMinus, V>(detail::mul_link(u, h), acc);
}

template <int Mu, class Real>
void hop_backward(const BulkContext<Real>& ctx, int block, const BlockCoord& bc, int row_base,
                  detail::SpinorV<Vec<Real>>& acc) {
  using V = Vec<Real>;
  const LaneShift<Real>& sh = ctx.tables->fetch(Mu, -1, row_base);
  const Parity src = opposite(ctx.out_parity);
  bool wrapped = false;
  const int nb = ctx.grid.neighbor(block, bc, Mu, -1, wrapped);
  const bool cut = wrapped && ctx.communicated[Mu];
  detail::HalfSpinorV<V> h;
  detail::LinkV<V> u;
  if (sh.kind == ShiftKind::kNeighbor) {
    if (cut) return;
    h = detail::project_block<Mu, Sign::kPlus, V>(ctx.spinor(nb));
    u = detail::load_link<V>(ctx.gauge->link(ctx.domain, Mu, src, nb));
  } else {
    const auto hc = detail::project_block<Mu, Sign::kPlus, V>(ctx.spinor(block));
    const auto uc = detail::load_link<V>(ctx.gauge->link(ctx.domain, Mu, src, block));
    if (cut) {
      h = detail::shift_half(sh, hc, detail::zero_half<V>());
      u = detail::shift_link(sh, uc, detail::zero_link<V>());
    } else {
      h = detail::shift_half(sh, hc, detail::project_block<Mu, Sign::kPlus, V>(ctx.spinor(nb)));
      u = detail::shift_link(sh, uc, detail::load_link<V>(ctx.gauge->link(ctx.domain, Mu, src, nb)));
    }
  }
  detail::reconstruct_acc<Mu, Sign::kPlus, V>(detail::mul_link_dag(u, h), acc);
}

template <class Real>
void bulk_blocks(const BulkContext<Real>& ctx, Real scale, PackedSpinorField<Real>& out, int lo,
                 int hi) {
  using V = Vec<Real>;
  for (int b = lo; b < hi; ++b) {
    const BlockCoord bc = ctx.geom->block_coord(b);
    const int rb = ctx.geom->row_base(ctx.out_parity, bc);
    auto acc = detail::zero_spinor<V>();
    hop_forward<0>(ctx, b, bc, rb, acc);
    hop_backward<0>(ctx, b, bc, rb, acc);
    hop_forward<1>(ctx, b, bc, rb, acc);
    hop_backward<1>(ctx, b, bc, rb, acc);
    hop_forward<2>(ctx, b, bc, rb, acc);
    hop_backward<2>(ctx, b, bc, rb, acc);
    hop_forward<3>(ctx, b, bc, rb, acc);
    hop_backward<3>(ctx, b, bc, rb, acc);
    detail::store_scaled(acc, scale, out.block(ctx.domain, b));
  }
}

void check_same_geometry(const LatticeGeometry& a, const LatticeGeometry& b) {
  if (!(a == b)) throw LayoutError("field geometry does not match the operator");
}

template <class Real>
PackedGaugeField<Real> with_boundary_phases(const PackedGaugeField<Real>& gauge,
                                            const HoppingParams& params) {
  PackedGaugeField<Real> g = gauge;
  if (!params.antiperiodic_t) return g;
  const LatticeGeometry& geom = g.geometry();
  constexpr int V = PackedGaugeField<Real>::kVlen;
  const int nt = geom.global_size()[kT];
  for (int d = 0; d < geom.num_domains(); ++d)
    for (Parity p : {Parity::kEven, Parity::kOdd})
      for (int b = 0; b < geom.blocks_per_parity(); ++b) {
        Real* blk = g.link(d, kT, p, b);
        for (int lane = 0; lane < V; ++lane) {
          if (geom.to_global(d, geom.site(p, b, lane)).t != nt - 1) continue;
          for (int i = 0; i < kLinkComponents; ++i) blk[i * V + lane] = -blk[i * V + lane];
        }
      }
  return g;
}

}  // namespace

template <class Real>
struct WilsonOperator<Real>::DomainState {
  std::unique_ptr<Transport> transport;
  std::array<std::unique_ptr<HaloBuffers<Real>>, kEvenOdd> buffers;
};

template <class Real>
WilsonOperator<Real>::WilsonOperator(const PackedGaugeField<Real>& gauge,
                                     const HoppingParams& params, const OperatorOptions& options)
    : geom_(gauge.geometry()),
      params_(params),
      options_(options),
      gauge_(with_boundary_phases(gauge, params)),
      tables_(make_shift_tables<Real>(geom_)),
      plans_{make_halo_plan<Real>(geom_, Parity::kEven, options.enforce_self_comm),
             make_halo_plan<Real>(geom_, Parity::kOdd, options.enforce_self_comm)},
      timer_(geom_.num_domains(), options.threads < 1 ? 1 : options.threads) {
  params_.validate();
  if (options_.threads < 1) throw ConfigError("thread count must be positive");
  hub_ = std::make_unique<LoopbackHub>(geom_.num_domains(), options_.comm_timeout_seconds);
  for (int d = 0; d < geom_.num_domains(); ++d) {
    auto state = std::make_unique<DomainState>();
    state->transport = hub_->endpoint(d);
    for (Parity p : {Parity::kEven, Parity::kOdd})
      state->buffers[index(p)] = std::make_unique<HaloBuffers<Real>>(plans_[index(p)]);
    domains_.push_back(std::move(state));
  }
  scratch_odd_ = std::make_unique<PackedSpinorField<Real>>(geom_, Parity::kOdd);
  scratch_even_ = std::make_unique<PackedSpinorField<Real>>(geom_, Parity::kEven);
}

template <class Real>
WilsonOperator<Real>::~WilsonOperator() = default;

template <class Real>
void WilsonOperator<Real>::run_domain(int d, const PackedSpinorField<Real>& in,
                                      PackedSpinorField<Real>& out) {
  const Parity outp = out.parity();
  const HaloPlan<Real>& plan = plans_[index(outp)];
  HaloBuffers<Real>& buf = *domains_[d]->buffers[index(outp)];
  const bool halo = mask_.halo && !plan.empty();
  const int threads = options_.threads;
  const Real scale = static_cast<Real>(-params_.kappa);

  PendingExchange pending;
  if (halo) {
    pack_boundary_eo1(in, gauge_, plan, d, buf, threads, timer_.slot(d, Stage::kEo1));
    pending = exchange(*domains_[d]->transport, plan, geom_.grid(), buf, options_.poison_halo);
  }

  BulkContext<Real> ctx{&geom_, &tables_, &in, &gauge_, d, outp, {}, BlockGrid(geom_)};
  for (int mu = 0; mu < kNumDims; ++mu) ctx.communicated[mu] = plan.communicated(mu);
  const int nblocks = geom_.blocks_per_parity();
  detail::parallel_blocks(nblocks, threads, timer_.slot(d, Stage::kBulk), [&](int lo, int hi) {
    if (mask_.bulk) {
      bulk_blocks(ctx, scale, out, lo, hi);
    } else {
      std::fill(out.block(d, lo), out.block(d, hi), Real(0));
    }
  });

  if (!halo) return;
  const auto t0 = std::chrono::steady_clock::now();
  pending.wait();
  timer_.slot(d, Stage::kWait)[0] +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (options_.poison_halo)
    for (int c = 0; c < kNumChannels; ++c)
      if (count_poisoned<Real>({buf.recv[c].data(), buf.recv[c].size()}) > 0)
        throw CommunicationError(c / 2, "receive buffer still holds the poison pattern");
  unpack_boundary_eo2(buf, gauge_, plan, d, scale, out, threads, timer_.slot(d, Stage::kEo2));
}

template <class Real>
void WilsonOperator<Real>::apply_hopping(const PackedSpinorField<Real>& in,
                                         PackedSpinorField<Real>& out) {
  check_same_geometry(in.geometry(), geom_);
  check_same_geometry(out.geometry(), geom_);
  if (out.parity() != opposite(in.parity()))
    throw LayoutError("hopping output must have the parity opposite to the input");
  const int n = geom_.num_domains();
  if (n == 1) {
    run_domain(0, in, out);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> workers;
  workers.reserve(n);
  for (int d = 0; d < n; ++d)
    workers.emplace_back([&, d] {
      try {
        run_domain(d, in, out);
      } catch (...) {
        errors[d] = std::current_exception();
      }
    });
  for (auto& w : workers) w.join();
  // A failing domain makes its peers time out; report the root cause first.
  std::exception_ptr first_comm;
  for (auto& e : errors) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const CommunicationError&) {
      if (!first_comm) first_comm = e;
    } catch (...) {
      throw;
    }
  }
  if (first_comm) std::rethrow_exception(first_comm);
}

template <class Real>
void WilsonOperator<Real>::apply_deo(const PackedSpinorField<Real>& in_odd,
                                     PackedSpinorField<Real>& out_even) {
  if (in_odd.parity() != Parity::kOdd) throw LayoutError("D_eo expects an odd input");
  apply_hopping(in_odd, out_even);
}

template <class Real>
void WilsonOperator<Real>::apply_doe(const PackedSpinorField<Real>& in_even,
                                     PackedSpinorField<Real>& out_odd) {
  if (in_even.parity() != Parity::kEven) throw LayoutError("D_oe expects an even input");
  apply_hopping(in_even, out_odd);
}

template <class Real>
void WilsonOperator<Real>::apply_full(const FermionField<Real>& in, FermionField<Real>& out) {
  apply_hopping(in.odd, out.even);
  axpy(1.0, in.even, out.even);
  apply_hopping(in.even, out.odd);
  axpy(1.0, in.odd, out.odd);
}

template <class Real>
void WilsonOperator<Real>::apply_prec(const PackedSpinorField<Real>& in_even,
                                      PackedSpinorField<Real>& out_even) {
  if (&in_even == &out_even) throw LayoutError("apply_prec needs distinct input and output");
  apply_doe(in_even, *scratch_odd_);
  apply_deo(*scratch_odd_, out_even);
  xpay(in_even, -1.0, out_even);
}

template <class Real>
void WilsonOperator<Real>::apply_prec_dag(const PackedSpinorField<Real>& in_even,
                                          PackedSpinorField<Real>& out_even) {
  apply_gamma5(in_even, *scratch_even_);
  apply_prec(*scratch_even_, out_even);
  apply_gamma5(out_even, out_even);
}

template <class Real>
PackedSpinorField<Real> shift_packed(const PackedSpinorField<Real>& in, int mu, int step,
                                     const ShiftTables<Real>& tables, ShiftBoundary boundary) {
  using V = Vec<Real>;
  if (mu < 0 || mu >= kNumDims || (step != 1 && step != -1))
    throw ConfigError("shift needs a direction in 0..3 and a step of +-1");
  const LatticeGeometry& geom = in.geometry();
  if (!(tables.tiling() == geom.tiling())) throw ConfigError("shift tables do not match the tiling");
  PackedSpinorField<Real> out(geom, opposite(in.parity()));
  const BlockGrid grid(geom);
  const int nblocks = geom.blocks_per_parity();
  for (int d = 0; d < geom.num_domains(); ++d) {
#pragma omp parallel for schedule(static)
    for (int b = 0; b < nblocks; ++b) {
      const BlockCoord bc = geom.block_coord(b);
      const LaneShift<Real>& sh = tables.fetch(mu, step, geom.row_base(out.parity(), bc));
      bool wrapped = false;
      const int nb = grid.neighbor(b, bc, mu, step, wrapped);
      const bool cut = wrapped && boundary == ShiftBoundary::kZero;
      const Real* cur = in.block(d, b);
      const Real* nbp = in.block(d, nb);
      Real* dst = out.block(d, b);
      for (int i = 0; i < kSpinorComponents; ++i) {
        const V n = cut ? V::zero() : V::load(nbp + i * V::width);
        sh.apply(V::load(cur + i * V::width), n).store(dst + i * V::width);
      }
    }
  }
  return out;
}

template class WilsonOperator<float>;
template class WilsonOperator<double>;
template PackedSpinorField<float> shift_packed<float>(const PackedSpinorField<float>&, int, int,
                                                      const ShiftTables<float>&, ShiftBoundary);
template PackedSpinorField<double> shift_packed<double>(const PackedSpinorField<double>&, int, int,
                                                        const ShiftTables<double>&, ShiftBoundary);

}  // namespace eowilson
