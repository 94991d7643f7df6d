#include "linmc/report.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "linmc/bench.hpp"
#include "linmc/lincheck.hpp"

namespace linmc {

double stateless_time_estimate(const ExplorationReport& report) {
  double st = 0;
  for (const ScheduleStat& stat : report.stats)
    st += static_cast<double>(stat.depth) * report.meanReceiveSeconds;
  return st;
}

ConfigMetrics metrics_for(const ExplorationReport& report, const HarnessConfig& config,
                          const SchedulerPolicy& policy, std::vector<History>* violations) {
  ConfigMetrics m;
  m.scheduler = scheduler_name(policy.kind);
  m.S = static_cast<double>(report.scheduleCount);
  m.hitCutoff = report.hitCutoff;
  m.tsSeconds = report.totalSeconds;
  m.stSeconds = stateless_time_estimate(report);

  std::vector<UniqueHistory> uniques = dedupe_histories(report.histories);
  m.UH = static_cast<double>(uniques.size());
  SequentialSpec spec = SequentialSpec::from_harness(config);

  auto t0 = std::chrono::steady_clock::now();
  // HF/TF are measured at the first schedule whose (first-seen) history WGL
  // rejects; checking order = production order.
  std::size_t firstBad = SIZE_MAX;
  for (const UniqueHistory& u : uniques) {
    if (!u.history.complete) {
      m.IH += 1;
      continue;
    }
    if (!wgl_check(u.history, spec).linearizable) {
      m.NL += 1;
      if (violations) violations->push_back(u.history);
      firstBad = std::min(firstBad, u.firstScheduleIndex);
    }
  }
  m.tcSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.ttSeconds = m.tsSeconds + m.tcSeconds;
  if (firstBad != SIZE_MAX) {
    m.hf = static_cast<double>(firstBad);  // schedules produced before the hit
    m.tfSeconds = report.stats[firstBad].elapsedSeconds;
  }
  m.quality = m.UH > 0 ? m.NL / m.UH : 0;
  m.progression = m.S > 0 ? m.UH / m.S : 0;
  m.precision = m.S > 0 ? m.NL / m.S : 0;
  return m;
}

RunResult run_config(const RunConfig& rc) {
  BenchmarkSystem sys = build_by_name(rc.benchmark);
  HarnessConfig config = parse_harness(rc.harnessText);
  SystemState initial = inject_invocations(sys.initial, config);

  RunResult result;
  ConfigMetrics sum;
  sum.scheduler = scheduler_name(rc.policy.kind);
  int reps = std::max(rc.reps, 1);
  double hfSum = 0, tfSum = 0;
  int hfCount = 0;
  for (int k = 0; k < reps; ++k) {
    SchedulerPolicy policy = rc.policy;
    policy.seed = rc.policy.seed + static_cast<std::uint64_t>(k);
    ExplorationReport report = explore(initial, sys.behavior, config, policy, rc.cutoff);
    result.violations.clear();
    ConfigMetrics m = metrics_for(report, config, policy, &result.violations);
    sum.S += m.S;
    sum.IH += m.IH;
    sum.UH += m.UH;
    sum.NL += m.NL;
    sum.tsSeconds += m.tsSeconds;
    sum.stSeconds += m.stSeconds;
    sum.tcSeconds += m.tcSeconds;
    sum.hitCutoff = sum.hitCutoff || m.hitCutoff;
    if (m.hf >= 0) {
      hfSum += m.hf;
      tfSum += m.tfSeconds;
      ++hfCount;
    }
  }
  sum.S /= reps;
  sum.IH /= reps;
  sum.UH /= reps;
  sum.NL /= reps;
  sum.tsSeconds /= reps;
  sum.stSeconds /= reps;
  sum.tcSeconds /= reps;
  sum.ttSeconds = sum.tsSeconds + sum.tcSeconds;
  if (hfCount > 0) {
    sum.hf = hfSum / hfCount;
    sum.tfSeconds = tfSum / hfCount;
  }
  sum.quality = sum.UH > 0 ? sum.NL / sum.UH : 0;
  sum.progression = sum.S > 0 ? sum.UH / sum.S : 0;
  sum.precision = sum.S > 0 ? sum.NL / sum.S : 0;
  result.metrics = sum;
  return result;
}

std::string format_mmss(double seconds) {
  if (seconds < 0) return "-";
  long total = std::lround(seconds);
  std::ostringstream out;
  out << total / 60 << ":" << (total % 60 < 10 ? "0" : "") << total % 60;
  return out.str();
}

namespace {

std::string pct(double ratio) {
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << ratio * 100 << "%";
  return out.str();
}

std::string dur(double seconds) {
  if (seconds < 0) return "-";
  std::ostringstream out;
  out << format_mmss(seconds) << " (" << std::lround(seconds * 1000) << "ms)";
  return out.str();
}

std::string num(double v) {
  if (v < 0) return "-";
  std::ostringstream out;
  if (v == std::floor(v))
    out << static_cast<long long>(v);
  else
    out << v;
  return out.str();
}

}  // namespace

std::string emit_csv(const std::vector<ConfigMetrics>& columns) {
  std::ostringstream out;
  out << "metric";
  for (const ConfigMetrics& c : columns) out << "," << c.scheduler;
  out << "\n";
  auto row = [&](const std::string& name, auto get) {
    out << name;
    for (const ConfigMetrics& c : columns) out << "," << get(c);
    out << "\n";
  };
  row("#S", [](const ConfigMetrics& c) { return num(c.S); });
  row("#IH", [](const ConfigMetrics& c) { return num(c.IH); });
  row("#UH", [](const ConfigMetrics& c) { return num(c.UH); });
  row("#NL", [](const ConfigMetrics& c) { return num(c.NL); });
  row("NL/UH", [](const ConfigMetrics& c) { return pct(c.quality); });
  row("UH/S", [](const ConfigMetrics& c) { return pct(c.progression); });
  row("NL/S", [](const ConfigMetrics& c) { return pct(c.precision); });
  row("TS", [](const ConfigMetrics& c) { return dur(c.tsSeconds); });
  row("ST", [](const ConfigMetrics& c) { return dur(c.stSeconds); });
  row("TC", [](const ConfigMetrics& c) { return dur(c.tcSeconds); });
  row("TT", [](const ConfigMetrics& c) { return dur(c.ttSeconds); });
  row("#HF", [](const ConfigMetrics& c) { return num(c.hf); });
  row("TF", [](const ConfigMetrics& c) { return dur(c.tfSeconds); });
  row("cutoff", [](const ConfigMetrics& c) { return std::string(c.hitCutoff ? "hit" : "no"); });
  return out.str();
}

nlohmann::json emit_json(const std::vector<ConfigMetrics>& columns) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ConfigMetrics& c : columns) {
    arr.push_back(nlohmann::json{
        {"scheduler", c.scheduler},
        {"S", c.S},
        {"IH", c.IH},
        {"UH", c.UH},
        {"NL", c.NL},
        {"quality", c.quality},
        {"progression", c.progression},
        {"precision", c.precision},
        {"TS_ms", c.tsSeconds * 1000},
        {"TS_mmss", format_mmss(c.tsSeconds)},
        {"ST_ms", c.stSeconds * 1000},
        {"ST_mmss", format_mmss(c.stSeconds)},
        {"TC_ms", c.tcSeconds * 1000},
        {"TC_mmss", format_mmss(c.tcSeconds)},
        {"TT_ms", c.ttSeconds * 1000},
        {"TT_mmss", format_mmss(c.ttSeconds)},
        {"HF", c.hf},
        {"TF_ms", c.tfSeconds < 0 ? -1 : c.tfSeconds * 1000},
        {"hitCutoff", c.hitCutoff},
    });
  }
  return nlohmann::json{{"columns", arr}};
}

}  // namespace linmc
