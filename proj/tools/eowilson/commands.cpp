#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <iostream>

#include "eowilson/errors.hpp"
#include "eowilson/gauge_io.hpp"
#include "eowilson/lanes.hpp"
#include "eowilson/linalg.hpp"
#include "eowilson/oracle.hpp"
#include "eowilson/solver.hpp"
#include "eowilson/wilson.hpp"

namespace eowilson::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class Real>
constexpr double kernel_tolerance() {
  return sizeof(Real) == 4 ? 1e-5 : 1e-12;
}

ScalarGaugeField load_gauge(const RunConfig& cfg) {
  switch (cfg.gauge_source) {
    case GaugeSource::kUnit: return unit_gauge(cfg.lattice);
    case GaugeSource::kFile: {
      ScalarGaugeField g = read_gauge_file(cfg.gauge_file);
      if (g.size != cfg.lattice)
        throw ConfigError("gauge file holds " + to_string(g.size) + " but the lattice is " +
                          to_string(cfg.lattice));
      return g;
    }
    default: return random_gauge(cfg.lattice, cfg.seed);
  }
}

ScalarSpinorField make_source(const RunConfig& cfg) {
  if (cfg.source == SourceKind::kConstant) {
    Spinor one{};
    for (auto& s : one)
      for (auto& c : s) c = 1.0;
    return constant_spinor_field(cfg.lattice, one);
  }
  return random_spinor_field(cfg.lattice, cfg.seed + 1);
}

HoppingParams hopping(const RunConfig& cfg) {
  HoppingParams p;
  p.kappa = cfg.effective_kappa();
  p.antiperiodic_t = cfg.antiperiodic_t;
  return p;
}

OperatorOptions operator_options(const RunConfig& cfg, bool enforce_self_comm) {
  OperatorOptions o;
  o.enforce_self_comm = enforce_self_comm;
  o.threads = cfg.threads;
  return o;
}

template <class Real>
std::unique_ptr<WilsonOperator<Real>> make_operator(const RunConfig& cfg, const ScalarGaugeField& g,
                                                    const LatticeGeometry& geom,
                                                    bool enforce_self_comm) {
  auto op = std::make_unique<WilsonOperator<Real>>(pack_gauge<Real>(g, geom), hopping(cfg),
                                                   operator_options(cfg, enforce_self_comm));
  if (cfg.corrupt_shift_table) op->shift_tables().corrupt();
  return op;
}

Row config_row(const RunConfig& cfg, const Tiling& tiling, const Dims& domains) {
  Row r;
  r.set("command", to_string(cfg.command))
      .set("lattice", to_string(cfg.lattice))
      .set("domains", to_string(domains))
      .set("tiling", to_string(tiling))
      .set("precision", to_string(cfg.precision))
      .set("kappa", cfg.effective_kappa())
      .set("antiperiodic_t", cfg.antiperiodic_t)
      .set("seed", static_cast<std::int64_t>(cfg.seed))
      .set("threads", static_cast<std::int64_t>(cfg.threads))
      .set("enforce_self_comm", cfg.enforce_self_comm)
      .set("gauge", to_string(cfg.gauge_source))
      .set("backend", std::string(lanes::kBackendName));
  return r;
}

// ---- bench -------------------------------------------------------------

template <class Real>
std::vector<Row> bench_rows(const RunConfig& cfg, const LatticeGeometry& geom) {
  const ScalarGaugeField g = load_gauge(cfg);
  auto op = make_operator<Real>(cfg, g, geom, cfg.enforce_self_comm);
  const PackedSpinorField<Real> in = pack_spinor<Real>(make_source(cfg), Parity::kEven, geom);
  PackedSpinorField<Real> out(geom, Parity::kEven);
  for (int i = 0; i < cfg.warmup; ++i) op->apply_prec(in, out);

  std::vector<Row> rows;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    op->timer().reset();
    const auto t0 = Clock::now();
    for (int i = 0; i < cfg.iterations; ++i) op->apply_prec(in, out);
    const double time = seconds_since(t0);
    const std::int64_t flops = prec_flops(geom) * cfg.iterations;
    const StageSummary s = op->timer().summary();

    Row r = config_row(cfg, geom.tiling(), geom.grid().extent());
    r.set("status", std::string("ok"))
        .set("repetition", static_cast<std::int64_t>(rep))
        .set("iterations", static_cast<std::int64_t>(cfg.iterations))
        .set("flops_per_site", kFlopsPerSite)
        .set("flops", flops)
        .set("time_s", time)
        .set("gflops", time > 0 && flops > 0 ? static_cast<double>(flops) / time * 1e-9 : 0.0);
    for (Stage st : {Stage::kBulk, Stage::kEo1, Stage::kEo2, Stage::kWait}) {
      const std::string name(stage_name(st));
      r.set(name + "_max_s", s.max_seconds[index(st)]);
      r.set(name + "_min_s", s.min_seconds[index(st)]);
    }
    r.set("thread_max_s", s.thread_max).set("thread_min_s", s.thread_min);
    const double eo2_min = s.min_seconds[index(Stage::kEo2)];
    r.set("eo2_imbalance", eo2_min > 0 ? s.max_seconds[index(Stage::kEo2)] / eo2_min : 0.0);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<Row> bench_dispatch(const RunConfig& cfg, const LatticeGeometry& geom) {
  return cfg.precision == Precision::kSingle ? bench_rows<float>(cfg, geom)
                                             : bench_rows<double>(cfg, geom);
}

// ---- check -------------------------------------------------------------

struct SuiteResult {
  std::string status;  // pass, fail or skip
  double metric = 0;
  double tolerance = 0;
  std::string note;
};

template <class Real>
ScalarSpinorField apply_packed(WilsonOperator<Real>& op, const ScalarSpinorField& src) {
  const FermionField<Real> in = pack_fermion<Real>(src, op.geometry());
  FermionField<Real> out(op.geometry());
  op.apply_full(in, out);
  return unpack_fermion(out);
}

SuiteResult verdict(double metric, double tol, std::string note = {}) {
  return {metric <= tol ? "pass" : "fail", metric, tol, std::move(note)};
}

template <class Real>
SuiteResult suite_oracle(const RunConfig& cfg, const ScalarGaugeField& g,
                         const ScalarSpinorField& src) {
  const LatticeGeometry geom = make_geometry(cfg);
  auto op = make_operator<Real>(cfg, g, geom, cfg.enforce_self_comm);
  OracleOptions oo;
  oo.antiperiodic_t = cfg.antiperiodic_t;
  const ScalarSpinorField ref = naive_apply_dw(g, src, cfg.effective_kappa(), oo);
  return verdict(relative_l2(apply_packed(*op, src), ref), kernel_tolerance<Real>());
}

// Max relative L2 distance of every result to the first.
double spread(const std::vector<ScalarSpinorField>& results) {
  double worst = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    worst = std::max(worst, relative_l2(results[i], results[0]));
  return worst;
}

template <class Real>
SuiteResult suite_tiling(const RunConfig& cfg, const ScalarGaugeField& g,
                         const ScalarSpinorField& src) {
  std::vector<ScalarSpinorField> results;
  std::string used;
  for (const Tiling& t : sweep_tilings(cfg.precision)) {
    try {
      const LatticeGeometry geom = make_geometry(cfg, t, cfg.domains);
      auto op = make_operator<Real>(cfg, g, geom, cfg.enforce_self_comm);
      results.push_back(apply_packed(*op, src));
      used += (used.empty() ? "" : " ") + to_string(t);
    } catch (const ConfigError&) {
    }
  }
  if (results.size() < 2) return {"skip", 0, kernel_tolerance<Real>(), "fewer than two valid tilings"};
  return verdict(spread(results), kernel_tolerance<Real>(), used);
}

template <class Real>
SuiteResult suite_decomposition(const RunConfig& cfg, const ScalarGaugeField& g,
                                const ScalarSpinorField& src) {
  const std::vector<Dims> grids{{1, 1, 1, 1}, {2, 1, 1, 1}, {1, 1, 2, 2}, {2, 2, 2, 2}};
  std::vector<ScalarSpinorField> results;
  std::string used;
  for (const Dims& grid : grids) {
    try {
      const LatticeGeometry geom = make_geometry(cfg, cfg.effective_tiling(), grid);
      const bool first = results.empty();
      auto op = make_operator<Real>(cfg, g, geom, first ? true : cfg.enforce_self_comm);
      results.push_back(apply_packed(*op, src));
      used += (used.empty() ? "" : " ") + to_string(grid);
    } catch (const ConfigError&) {
    }
  }
  if (results.size() < 2) return {"skip", 0, kernel_tolerance<Real>(), "fewer than two valid grids"};
  return verdict(spread(results), kernel_tolerance<Real>(), used);
}

template <class Real>
SuiteResult suite_gamma5(const RunConfig& cfg, const ScalarGaugeField& g) {
  const LatticeGeometry geom = make_geometry(cfg);
  auto op = make_operator<Real>(cfg, g, geom, cfg.enforce_self_comm);
  const double tol = sizeof(Real) == 4 ? 1e-5 : 1e-10;
  double worst = 0;
  constexpr int kTrials = 4;
  for (int trial = 0; trial < kTrials; ++trial) {
    const ScalarSpinorField psi = random_spinor_field(cfg.lattice, cfg.seed + 100 + 2 * trial);
    const ScalarSpinorField chi = random_spinor_field(cfg.lattice, cfg.seed + 101 + 2 * trial);
    ScalarSpinorField g5d_psi = apply_packed(*op, psi);
    ScalarSpinorField g5d_chi = apply_packed(*op, chi);
    for (auto* f : {&g5d_psi, &g5d_chi})
      for (auto& s : f->sites) s = apply_gamma5(s);
    const Complex a = inner(chi, g5d_psi);
    const Complex b = std::conj(inner(psi, g5d_chi));
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
  }
  return verdict(worst, tol);
}

template <class Real>
SuiteResult suite_roundtrip(const RunConfig& cfg, const ScalarGaugeField& g,
                            const ScalarSpinorField& src) {
  const LatticeGeometry geom = make_geometry(cfg);
  const ScalarSpinorField back = unpack_fermion(pack_fermion<Real>(src, geom));
  double worst = 0;
  for (std::size_t i = 0; i < src.sites.size(); ++i)
    for (int s = 0; s < kNumSpins; ++s)
      for (int c = 0; c < kNumColors; ++c) {
        const Complex want(static_cast<Real>(src.sites[i][s][c].real()),
                           static_cast<Real>(src.sites[i][s][c].imag()));
        worst = std::max(worst, std::abs(back.sites[i][s][c] - want));
      }
  const ScalarGaugeField gback = unpack_gauge(pack_gauge<Real>(g, geom));
  for (std::size_t i = 0; i < g.links.size(); ++i)
    for (int mu = 0; mu < kNumDims; ++mu)
      for (int a = 0; a < kNumColors; ++a)
        for (int b = 0; b < kNumColors; ++b) {
          const Complex want(static_cast<Real>(g.links[i][mu](a, b).real()),
                             static_cast<Real>(g.links[i][mu](a, b).imag()));
          worst = std::max(worst, std::abs(gback.links[i][mu](a, b) - want));
        }
  return verdict(worst, 0.0);
}

template <class Real>
CommandOutput check_rows(const RunConfig& cfg) {
  make_geometry(cfg);  // validate before allocating anything
  const ScalarGaugeField g = load_gauge(cfg);
  const ScalarSpinorField src = random_spinor_field(cfg.lattice, cfg.seed + 1);
  const std::vector<std::pair<std::string, std::function<SuiteResult()>>> suites{
      {"oracle_equivalence", [&] { return suite_oracle<Real>(cfg, g, src); }},
      {"tiling_invariance", [&] { return suite_tiling<Real>(cfg, g, src); }},
      {"decomposition_invariance", [&] { return suite_decomposition<Real>(cfg, g, src); }},
      {"gamma5_hermiticity", [&] { return suite_gamma5<Real>(cfg, g); }},
      {"pack_roundtrip", [&] { return suite_roundtrip<Real>(cfg, g, src); }},
  };
  CommandOutput out;
  for (const auto& [name, run] : suites) {
    const auto t0 = Clock::now();
    const SuiteResult res = run();
    Row r = config_row(cfg, cfg.effective_tiling(), cfg.domains);
    r.set("suite", name)
        .set("status", res.status)
        .set("metric", res.metric)
        .set("tolerance", res.tolerance)
        .set("time_s", seconds_since(t0))
        .set("note", res.note);
    if (res.status == "fail") out.exit_code = kExitCheckFailed;
    out.rows.push_back(std::move(r));
  }
  return out;
}

// ---- solve -------------------------------------------------------------

template <class Real>
CommandOutput solve_rows(const RunConfig& cfg) {
  const LatticeGeometry geom = make_geometry(cfg);
  const ScalarGaugeField g = load_gauge(cfg);
  auto op = make_operator<Real>(cfg, g, geom, cfg.enforce_self_comm);
  const FermionField<Real> eta = pack_fermion<Real>(make_source(cfg), geom);
  SolverParams params;
  params.tol = cfg.effective_tol();
  params.max_iter = cfg.max_iter;
  const auto t0 = Clock::now();
  const SolverResult<Real> res = solve_even_odd(*op, eta, params);
  const double time = seconds_since(t0);

  CommandOutput out;
  Row r = config_row(cfg, geom.tiling(), geom.grid().extent());
  r.set("status", std::string(res.converged ? "converged" : "not_converged"))
      .set("tol", cfg.effective_tol())
      .set("max_iter", static_cast<std::int64_t>(cfg.max_iter))
      .set("iterations", static_cast<std::int64_t>(res.iterations))
      .set("residual", res.residual)
      .set("converged", res.converged)
      .set("time_s", time);
  out.rows.push_back(std::move(r));
  if (!res.converged) out.exit_code = kExitNotConverged;
  return out;
}

}  // namespace

CommandOutput cmd_bench(const RunConfig& cfg) {
  const LatticeGeometry geom = make_geometry(cfg);
  return {bench_dispatch(cfg, geom), kExitOk};
}

CommandOutput cmd_sweep(const RunConfig& cfg) {
  CommandOutput out;
  for (const Tiling& t : sweep_tilings(cfg.precision)) {
    std::optional<LatticeGeometry> geom;
    try {
      geom.emplace(make_geometry(cfg, t, cfg.domains));
    } catch (const ConfigError& e) {
      Row r = config_row(cfg, t, cfg.domains);
      r.set("status", std::string("invalid")).set("note", std::string(e.what()));
      out.rows.push_back(std::move(r));
      continue;
    }
    for (Row& r : bench_dispatch(cfg, *geom)) out.rows.push_back(std::move(r));
  }
  return out;
}

CommandOutput cmd_check(const RunConfig& cfg) {
  return cfg.precision == Precision::kSingle ? check_rows<float>(cfg) : check_rows<double>(cfg);
}

CommandOutput cmd_solve(const RunConfig& cfg) {
  return cfg.precision == Precision::kSingle ? solve_rows<float>(cfg) : solve_rows<double>(cfg);
}

CommandOutput run_command(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::kCheck: return cmd_check(cfg);
    case Command::kBench: return cmd_bench(cfg);
    case Command::kSweep: return cmd_sweep(cfg);
    default: return cmd_solve(cfg);
  }
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const UsageExit& e) {
    (e.code == 0 ? out : err) << e.text;
    return e.code == 0 ? kExitOk : kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  CommandOutput result;
  try {
    result = run_command(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const LayoutError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SizeError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return kExitNumerical;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      err << "cannot open " << cfg.out_path << "\n";
      return kExitConfig;
    }
    sink = &file;
  }
  if (cfg.format == OutputFormat::kJson)
    write_json(*sink, result.rows);
  else
    write_csv(*sink, result.rows);
  return result.exit_code;
}

}  // namespace eowilson::cli
