#include "run_config.hpp"

#include <sstream>

#include <CLI11.hpp>

#include "eowilson/errors.hpp"
#include "eowilson/wilson.hpp"

namespace eowilson::cli {

std::string to_string(Command c) {
  switch (c) {
    case Command::kCheck: return "check";
    case Command::kBench: return "bench";
    case Command::kSweep: return "sweep";
    default: return "solve";
  }
}

std::string to_string(Precision p) { return p == Precision::kSingle ? "single" : "double"; }

std::string to_string(GaugeSource g) {
  switch (g) {
    case GaugeSource::kRandom: return "random";
    case GaugeSource::kUnit: return "unit";
    default: return "file";
  }
}

Tiling RunConfig::effective_tiling() const {
  if (tiling) return *tiling;
  return precision == Precision::kSingle ? Tiling{4, 4} : Tiling{2, 4};
}

double RunConfig::effective_kappa() const {
  return mass ? HoppingParams::from_mass(*mass).kappa : kappa;
}

double RunConfig::effective_tol() const {
  if (tol) return *tol;
  return precision == Precision::kSingle ? 1e-6 : 1e-8;
}

std::vector<Tiling> sweep_tilings(Precision p) {
  if (p == Precision::kSingle) return {{16, 1}, {8, 2}, {4, 4}, {2, 8}};
  return {{8, 1}, {4, 2}, {2, 4}};
}

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Even-odd Wilson operator: checks, benchmarks, tiling sweeps and solves", "eowilson"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string lattice, domains, tiling, precision = "single", format = "csv";
  std::string gauge = "random", source = "random";
  std::optional<double> kappa, mass;

  app.add_option("--lattice", lattice, "Global lattice NXxNYxNZxNT (default 16x16x16x16)");
  app.add_option("--domains", domains, "Domain grid DXxDYxDZxDT (default 1x1x1x1)");
  app.add_option("--tiling", tiling, "Lane tiling VXxVY (default 4x4 single, 2x4 double)");
  app.add_option("--precision", precision, "single or double")
      ->check(CLI::IsMember({"single", "double"}));
  auto* kappa_opt = app.add_option("--kappa", kappa, "Hopping parameter (default 0.125)");
  app.add_option("--mass", mass, "Bare mass; kappa = 1/(8 + 2 mass)")->excludes(kappa_opt);
  app.add_flag("--antiperiodic-t", cfg.antiperiodic_t, "Antiperiodic boundary in t");
  app.add_option("--iters", cfg.iterations, "Timed applications for bench/sweep (default 1000)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--warmup", cfg.warmup, "Untimed applications before timing (default 10)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--repetitions", cfg.repetitions, "Timed runs per row (default 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Random seed (default 1)");
  app.add_option("--threads", cfg.threads, "Threads per domain (default 1)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--enforce-self-comm,!--no-enforce-self-comm", cfg.enforce_self_comm,
               "Exchange halos through the transport even in undecomposed directions (default on)");
  app.add_option("--gauge", gauge, "Gauge source: random, unit or file")
      ->check(CLI::IsMember({"random", "unit", "file"}));
  app.add_option("--gauge-file", cfg.gauge_file, "Read the gauge field from this file");
  app.add_option("--source", source, "Solve/bench source: random or constant")
      ->check(CLI::IsMember({"random", "constant"}));
  app.add_option("--tol", cfg.tol, "Solver relative residual target (default 1e-6 single, 1e-8 double)");
  app.add_option("--max-iter", cfg.max_iter, "Solver iteration limit (default 1000)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out_path, "Write the report here instead of stdout");
  app.add_flag("--corrupt-shift-table", cfg.corrupt_shift_table,
               "Debug: damage the +x shift table so oracle checks must fail");

  auto* check = app.add_subcommand("check", "Run the oracle and invariance suites");
  auto* bench = app.add_subcommand("bench", "Time repeated applications of the reduced operator");
  auto* sweep = app.add_subcommand("sweep", "Bench every tiling shape of the precision");
  auto* solve = app.add_subcommand("solve", "Solve D x = b through the even-odd system");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    throw UsageExit{code == 0 ? 0 : 1, out.str() + err.str()};
  }

  if (check->parsed()) cfg.command = Command::kCheck;
  if (bench->parsed()) cfg.command = Command::kBench;
  if (sweep->parsed()) cfg.command = Command::kSweep;
  if (solve->parsed()) cfg.command = Command::kSolve;

  if (!lattice.empty()) {
    cfg.lattice = parse_dims(lattice);
    cfg.lattice_set = true;
  }
  if (!domains.empty()) cfg.domains = parse_dims(domains);
  if (!tiling.empty()) cfg.tiling = parse_tiling(tiling);
  cfg.precision = precision == "double" ? Precision::kDouble : Precision::kSingle;
  cfg.format = format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  if (kappa) cfg.kappa = *kappa;
  cfg.mass = mass;
  cfg.source = source == "constant" ? SourceKind::kConstant : SourceKind::kRandom;
  if (gauge == "unit") cfg.gauge_source = GaugeSource::kUnit;
  if (gauge == "file" || !cfg.gauge_file.empty()) cfg.gauge_source = GaugeSource::kFile;
  if (cfg.gauge_source == GaugeSource::kFile && cfg.gauge_file.empty())
    throw ConfigError("--gauge file needs --gauge-file");
  if (cfg.tol && !(*cfg.tol > 0)) throw ConfigError("--tol must be positive");
  HoppingParams{cfg.effective_kappa()}.validate();
  return cfg;
}

LatticeGeometry make_geometry(const RunConfig& config, const Tiling& tiling, const Dims& domains) {
  return LatticeGeometry(config.lattice, DomainGrid(domains), config.vlen(), tiling);
}

LatticeGeometry make_geometry(const RunConfig& config) {
  return make_geometry(config, config.effective_tiling(), config.domains);
}

}  // namespace eowilson::cli
