#pragma once

#include <functional>
#include <vector>

#include "linmc/actor.hpp"
#include "linmc/harness.hpp"
#include "linmc/history.hpp"
#include "linmc/sched.hpp"

// The stateful DFS engine shared by all schedulers: a stack of nodes, each a
// full snapshot plus enabled/explored/backtracking sets, recording one
// schedule per maximal path. SR runs its own restart loop.

namespace linmc {

// A benchmark action failed; the offending schedule prefix rides along.
class ExplorationAbort : public std::runtime_error {
 public:
  ExplorationAbort(const std::string& what, Schedule prefix)
      : std::runtime_error(what), prefix(std::move(prefix)) {}
  Schedule prefix;
};

struct ScheduleStat {
  std::size_t depth = 0;
  double elapsedSeconds = 0;  // since exploration start, at schedule completion
  int delayUsed = 0;          // DB only
};

struct ExplorationReport {
  std::vector<History> histories;  // one per schedule, production order
  std::vector<ScheduleStat> stats;
  std::vector<Schedule> schedules;  // only when options.keepSchedules
  std::size_t scheduleCount = 0;
  bool hitCutoff = false;
  double totalSeconds = 0;        // TS: wall time of the exploration
  double meanReceiveSeconds = 0;  // mean action execution time
  std::size_t receiveExecutions = 0;
  std::size_t maxBacktrackingSize = 0;  // observed across all nodes
};

struct ExploreOptions {
  bool keepSchedules = false;
  // Invoked at every terminal state, before cutoff accounting.
  std::function<void(const Schedule&, const SystemState&, const History&)> onTerminal;
};

ExplorationReport explore(const SystemState& initial, const BehaviorTable& behavior,
                          const HarnessConfig& config, const SchedulerPolicy& policy,
                          std::size_t cutoff, const ExploreOptions& options = {});

// Re-execute a recorded schedule from the initial state, checking each entry
// is pending when its turn comes. Returns the terminal state.
SystemState replay_schedule(const SystemState& initial, const BehaviorTable& behavior,
                            const Schedule& schedule);

}  // namespace linmc
