#include "eowilson/timing.hpp"

#include <algorithm>
#include <limits>

#include "eowilson/errors.hpp"

namespace eowilson {

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::kBulk: return "bulk";
    case Stage::kEo1: return "eo1";
    case Stage::kEo2: return "eo2";
    default: return "wait";
  }
}

StageTimer::StageTimer(int domains, int threads) : domains_(domains), threads_(threads) {
  if (domains < 1 || threads < 1) throw ConfigError("timer needs at least one domain and thread");
  seconds_.assign(static_cast<std::size_t>(domains) * kNumStages * threads, 0.0);
}

std::span<double> StageTimer::slot(int domain, Stage stage) {
  return {seconds_.data() + (static_cast<std::size_t>(domain) * kNumStages + index(stage)) * threads_,
          static_cast<std::size_t>(threads_)};
}

std::span<const double> StageTimer::slot(int domain, Stage stage) const {
  return {seconds_.data() + (static_cast<std::size_t>(domain) * kNumStages + index(stage)) * threads_,
          static_cast<std::size_t>(threads_)};
}

void StageTimer::reset() { std::fill(seconds_.begin(), seconds_.end(), 0.0); }

StageSummary StageTimer::summary() const {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  StageSummary s;
  s.domains = domains_;
  s.threads = threads_;
  s.min_seconds.fill(kInf);
  s.thread_min = kInf;
  for (int d = 0; d < domains_; ++d)
    for (int t = 0; t < threads_; ++t) {
      double busy = 0;
      for (int k = 0; k < kNumStages; ++k) {
        const Stage stage = static_cast<Stage>(k);
        if (stage == Stage::kWait && t > 0) continue;
        const double v = slot(d, stage)[t];
        s.max_seconds[k] = std::max(s.max_seconds[k], v);
        s.min_seconds[k] = std::min(s.min_seconds[k], v);
        if (stage != Stage::kWait) busy += v;
      }
      s.thread_max = std::max(s.thread_max, busy);
      s.thread_min = std::min(s.thread_min, busy);
    }
  return s;
}

}  // namespace eowilson
