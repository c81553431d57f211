#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eowilson/geometry.hpp"

namespace eowilson::cli {

enum class Command { kCheck, kBench, kSweep, kSolve };
enum class Precision { kSingle, kDouble };
enum class GaugeSource { kRandom, kUnit, kFile };
enum class SourceKind { kRandom, kConstant };
enum class OutputFormat { kCsv, kJson };

using eowilson::to_string;
std::string to_string(Command c);
std::string to_string(Precision p);
std::string to_string(GaugeSource g);

struct RunConfig {
  Command command = Command::kBench;
  Dims lattice{16, 16, 16, 16};
  bool lattice_set = false;
  Dims domains{1, 1, 1, 1};
  // Unset: 4x4 in single precision, 2x4 in double.
  std::optional<Tiling> tiling;
  Precision precision = Precision::kSingle;
  double kappa = 0.125;
  std::optional<double> mass;
  bool antiperiodic_t = false;
  int iterations = 1000;
  int warmup = 10;
  int repetitions = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  bool enforce_self_comm = true;
  GaugeSource gauge_source = GaugeSource::kRandom;
  std::string gauge_file;
  SourceKind source = SourceKind::kRandom;
  // Unset: 1e-6 in single precision, 1e-8 in double.
  std::optional<double> tol;
  int max_iter = 1000;
  OutputFormat format = OutputFormat::kCsv;
  std::string out_path;
  bool corrupt_shift_table = false;

  int vlen() const { return precision == Precision::kSingle ? 16 : 8; }
  Tiling effective_tiling() const;
  double effective_kappa() const;
  double effective_tol() const;
};

// Shapes the tiling sweep visits for a precision.
std::vector<Tiling> sweep_tilings(Precision p);

// Thrown by parse_args for --help (code 0) and malformed command lines
// (code 1); `text` is what should be printed.
struct UsageExit {
  int code;
  std::string text;
};

// Throws UsageExit or ConfigError.
RunConfig parse_args(int argc, const char* const* argv);

// Geometry for the configuration; throws ConfigError when invalid.
LatticeGeometry make_geometry(const RunConfig& config);
LatticeGeometry make_geometry(const RunConfig& config, const Tiling& tiling, const Dims& domains);

}  // namespace eowilson::cli
