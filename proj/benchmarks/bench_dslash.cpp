#include <benchmark/benchmark.h>

#include "eowilson/layout.hpp"
#include "eowilson/oracle.hpp"
#include "eowilson/wilson.hpp"

using namespace eowilson;

namespace {

constexpr double kKappa = 0.125;

Tiling tiling_arg(const benchmark::State& state) {
  return {static_cast<int>(state.range(1)), static_cast<int>(state.range(2))};
}

// M = 1 - D_eo D_oe on an L^4 lattice; counters report GFLOPS at 1368 FLOP/site.
template <class Real>
void BM_Preconditioned(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const Dims size{l, l, l, l};
  const LatticeGeometry geom(size, lanes::kWidth<Real>, tiling_arg(state));
  OperatorOptions options;
  options.threads = static_cast<int>(state.range(3));
  WilsonOperator<Real> op(pack_gauge<Real>(random_gauge(size, 1), geom), {kKappa, false}, options);
  const auto in = pack_spinor<Real>(random_spinor_field(size, 2), Parity::kEven, geom);
  PackedSpinorField<Real> out(geom, Parity::kEven);
  for (auto _ : state) {
    op.apply_prec(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["GFLOPS"] = benchmark::Counter(static_cast<double>(prec_flops(geom)) * 1e-9,
                                                benchmark::Counter::kIsIterationInvariantRate);
}

// Decomposed run: halo exchange through the in-process transport.
template <class Real>
void BM_PreconditionedDomains(benchmark::State& state) {
  const Dims size{32, 16, 16, 16};
  const Dims grid{1, 1, static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  const LatticeGeometry geom(size, DomainGrid(grid), lanes::kWidth<Real>, {4, 4});
  WilsonOperator<Real> op(pack_gauge<Real>(random_gauge(size, 1), geom), {kKappa, false});
  const auto in = pack_spinor<Real>(random_spinor_field(size, 2), Parity::kEven, geom);
  PackedSpinorField<Real> out(geom, Parity::kEven);
  for (auto _ : state) {
    op.apply_prec(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["GFLOPS"] = benchmark::Counter(static_cast<double>(prec_flops(geom)) * 1e-9,
                                                benchmark::Counter::kIsIterationInvariantRate);
}

void BM_NaiveOracle(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const Dims size{l, l, l, l};
  const ScalarGaugeField u = random_gauge(size, 1);
  const ScalarSpinorField src = restrict_parity(random_spinor_field(size, 2), Parity::kEven);
  for (auto _ : state) {
    const ScalarSpinorField odd = restrict_parity(naive_hopping(u, src, kKappa), Parity::kOdd);
    benchmark::DoNotOptimize(naive_hopping(u, odd, kKappa).sites.data());
  }
  state.counters["GFLOPS"] = benchmark::Counter(1368.0 * l * l * l * l * 1e-9,
                                                benchmark::Counter::kIsIterationInvariantRate);
}

}  // namespace

BENCHMARK(BM_Preconditioned<float>)
    ->ArgNames({"L", "vx", "vy", "threads"})
    ->Args({16, 4, 4, 1})
    ->Args({16, 8, 2, 1})
    ->Args({16, 2, 8, 1})
    ->Args({8, 4, 4, 1})
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Preconditioned<double>)
    ->ArgNames({"L", "vx", "vy", "threads"})
    ->Args({16, 2, 4, 1})
    ->Args({16, 4, 2, 1})
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PreconditionedDomains<float>)->ArgName("split")->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NaiveOracle)->ArgName("L")->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
