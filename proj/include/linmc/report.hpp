#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "linmc/explore.hpp"
#include "linmc/sched.hpp"

// Run configurations (scheduler x benchmark x harness), the paper's metric
// set, and CSV/JSON table emission.

namespace linmc {

struct ConfigMetrics {
  std::string scheduler;
  double S = 0;   // schedules explored
  double IH = 0;  // unique incomplete histories
  double UH = 0;  // unique histories
  double NL = 0;  // unique complete histories rejected by WGL
  double quality = 0;      // NL/UH
  double progression = 0;  // UH/S
  double precision = 0;    // NL/S
  double tsSeconds = 0;    // stateful exploration time
  double stSeconds = 0;    // stateless-exploration estimate
  double tcSeconds = 0;    // history checking time
  double ttSeconds = 0;    // TS + TC
  double hf = -1;          // schedules before the first rejected history; -1 = none
  double tfSeconds = -1;   // elapsed time at that schedule
  bool hitCutoff = false;
};

struct RunConfig {
  std::string benchmark;
  std::string harnessName;  // bundled name or file path (for reporting only)
  std::string harnessText;
  SchedulerPolicy policy;
  std::size_t cutoff = 50000;
  int reps = 3;  // derived seeds policy.seed + k, metrics averaged
};

struct RunResult {
  ConfigMetrics metrics;
  std::vector<History> violations;  // unique rejected histories of the last rep
};

RunResult run_config(const RunConfig& config);

// Metrics for one already-computed exploration (a single repetition).
ConfigMetrics metrics_for(const ExplorationReport& report, const HarnessConfig& config,
                          const SchedulerPolicy& policy,
                          std::vector<History>* violations = nullptr);

double stateless_time_estimate(const ExplorationReport& report);

std::string format_mmss(double seconds);

// Table 2/3 layout: rows = metrics, one column per scheduler.
std::string emit_csv(const std::vector<ConfigMetrics>& columns);
nlohmann::json emit_json(const std::vector<ConfigMetrics>& columns);

}  // namespace linmc
