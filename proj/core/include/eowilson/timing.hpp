#pragma once

// Per-domain, per-thread stage timers for the hopping kernel.

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace eowilson {

enum class Stage : int { kBulk = 0, kEo1, kEo2, kWait };
inline constexpr int kNumStages = 4;
constexpr int index(Stage s) { return static_cast<int>(s); }
std::string_view stage_name(Stage s);

struct StageSummary {
  // Per stage, extremes of the per-thread seconds over every (domain,
  // thread). The wait stage is timed on each domain's coordinator only.
  std::array<double, kNumStages> max_seconds{};
  std::array<double, kNumStages> min_seconds{};
  // Busy time (bulk + EO1 + EO2) per thread, extremes.
  double thread_max = 0;
  double thread_min = 0;
  int domains = 0;
  int threads = 0;
};

class StageTimer {
 public:
  StageTimer(int domains, int threads);

  // Per-thread accumulators of one domain's stage; kernels add to them.
  std::span<double> slot(int domain, Stage stage);
  std::span<const double> slot(int domain, Stage stage) const;

  void reset();
  StageSummary summary() const;
  int domains() const { return domains_; }
  int threads() const { return threads_; }

 private:
  int domains_;
  int threads_;
  std::vector<double> seconds_;  // [domain][stage][thread]
};

}  // namespace eowilson
