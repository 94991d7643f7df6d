#include "linmc/explore.hpp"

#include <algorithm>
#include <chrono>
#include <random>

namespace linmc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct EngineNode {
  SystemState state;               // the snapshot: state this node executes from
  std::map<Seq, Receive> enabled;  // by message seq
  std::set<Seq> enabledSeqs;
  NodeBookkeeping book;
  int delayRemaining = 0;  // DB bookkeeping
  AgentId rrCursor = 0;
  int delayUsed = 0;
  std::size_t entryBase = 0;  // full-schedule length before entering this node
};

EngineNode make_node(SystemState state) {
  EngineNode node;
  node.state = std::move(state);
  for (const Receive& r : enabled_receives(node.state)) {
    node.enabledSeqs.insert(r.message.seq);
    node.enabled.emplace(r.message.seq, r);
  }
  return node;
}

// Candidates ordered by (destination, seq) for the seeded tie-break.
std::vector<Seq> ordered_candidates(const EngineNode& node, const std::set<Seq>& pool) {
  std::vector<Seq> out;
  for (const Receive& r : enabled_receives(node.state))
    if (pool.count(r.message.seq) && !node.book.explored.count(r.message.seq))
      out.push_back(r.message.seq);
  return out;
}

class Engine {
 public:
  Engine(const SystemState& initial, const BehaviorTable& behavior,
         const HarnessConfig& config, const SchedulerPolicy& policy, std::size_t cutoff,
         const ExploreOptions& options)
      : initial_(initial),
        behavior_(behavior),
        config_(config),
        policy_(policy),
        cutoff_(cutoff),
        options_(options),
        rng_(policy.seed) {}

  ExplorationReport run() {
    start_ = Clock::now();
    if (policy_.kind == SchedulerKind::SR)
      runRandom();
    else
      runDfs();
    report_.totalSeconds = seconds_since(start_);
    report_.meanReceiveSeconds =
        report_.receiveExecutions ? execSeconds_ / report_.receiveExecutions : 0;
    return report_;
  }

 private:
  void runRandom() {
    std::size_t budget = policy_.srBudget.value_or(2 * cutoff_);
    for (std::size_t iter = 0; iter < budget; ++iter) {
      SystemState state = initial_;
      Schedule schedule;
      for (;;) {
        std::vector<Receive> enabled = enabled_receives(state);
        if (enabled.empty()) break;
        const Receive& r = enabled[rng_() % enabled.size()];
        schedule.entries.push_back(
            ScheduleEntry{static_cast<int>(schedule.entries.size()) + 1, r});
        state = drainClientResponses(timedExecute(state, r, schedule), schedule.entries);
      }
      recordSchedule(schedule, state, 0);
    }
    report_.hitCutoff = true;  // SR always runs its full budget
  }

  void runDfs() {
    stack_.push_back(make_node(initial_));
    stack_.back().delayRemaining = policy_.delayBudget;
    enabledView_.push_back(stack_.back().enabledSeqs);
    for (;;) {
      EngineNode& node = stack_.back();
      if (node.enabled.empty()) {
        Schedule schedule;
        schedule.entries = entries_;
        recordSchedule(schedule, node.state, node.delayUsed);
        if (report_.scheduleCount >= cutoff_) {
          report_.hitCutoff = backtrack();  // true iff unexplored work remained
          return;
        }
        if (!backtrack()) return;
        continue;
      }
      auto [seq, delay] = choose(node);
      if (!seq) {
        if (!backtrack()) return;
        continue;
      }
      descend(*seq, delay);
    }
  }

  // Next receive at this node, or none when the node is exhausted.
  std::pair<std::optional<Seq>, int> choose(const EngineNode& node) {
    std::vector<Seq> candidates;
    std::map<Seq, int> delayOf;
    if (policy_.isDporFamily()) {
      candidates = ordered_candidates(node, node.book.backtracking);
      if (candidates.empty() && node.book.explored.empty())
        candidates = ordered_candidates(node, node.enabledSeqs);
    } else if (policy_.kind == SchedulerKind::DB) {
      delayBranches(node, candidates, delayOf);
    } else {  // EX
      candidates = ordered_candidates(node, node.enabledSeqs);
    }
    if (candidates.empty()) return {std::nullopt, 0};
    Seq pick = candidates[rng_() % candidates.size()];
    auto it = delayOf.find(pick);
    return {pick, it == delayOf.end() ? 0 : it->second};
  }

  // DB: the reachable branch per delay value d is the lowest-seq receive of
  // the d-th agent (round-robin from the cursor) that has enabled receives.
  void delayBranches(const EngineNode& node, std::vector<Seq>& candidates,
                     std::map<Seq, int>& delayOf) {
    std::map<AgentId, Seq> lowest;  // agent -> its lowest enabled seq
    for (const auto& [seq, r] : node.enabled) {
      auto it = lowest.find(r.destination);
      if (it == lowest.end() || seq < it->second) lowest[r.destination] = seq;
    }
    std::vector<AgentId> agents;
    for (const auto& [agent, seq] : lowest) agents.push_back(agent);
    std::size_t begin = 0;
    while (begin < agents.size() && agents[begin] <= node.rrCursor) ++begin;
    int window = std::min<int>(node.delayRemaining + 1, static_cast<int>(agents.size()));
    for (int d = 0; d < window; ++d) {
      AgentId agent = agents[(begin + d) % agents.size()];
      Seq seq = lowest[agent];
      if (node.book.explored.count(seq) || delayOf.count(seq)) continue;
      candidates.push_back(seq);
      delayOf[seq] = d;
    }
  }

  void descend(Seq seq, int delay) {
    EngineNode& node = stack_.back();
    std::size_t base = entries_.size();
    Receive r = node.enabled.at(seq);
    node.book.explored.insert(seq);
    node.book.backtracking.erase(seq);  // picked receives move to explored
    entries_.push_back(ScheduleEntry{static_cast<int>(entries_.size()) + 1, r});
    steps_.push_back(entries_.back());
    SystemState next;
    try {
      next = drainClientResponses(timedExecuteRaw(node.state, r), entries_);
    } catch (const ModelError& e) {
      Schedule prefix;
      prefix.entries = entries_;
      throw ExplorationAbort(e.what(), std::move(prefix));
    }
    for (const auto& [s, m] : next.pending)
      if (!node.state.pending.count(s)) emitter_[s] = steps_.size() - 1;

    EngineNode child = make_node(std::move(next));
    child.entryBase = base;
    child.delayRemaining = node.delayRemaining - delay;
    child.rrCursor = r.destination;
    child.delayUsed = node.delayUsed + delay;
    stack_.push_back(std::move(child));
    enabledView_.push_back(stack_.back().enabledSeqs);
    if (policy_.isDporFamily()) updateBacktracking();
  }

  // DPOR-family update: for every pending message at the new node, find the
  // latest dependent state and extend its backtracking set per policy.
  void updateBacktracking() {
    UpdateView view{steps_, enabledView_, emitter_};
    const EngineNode& top = stack_.back();
    for (const auto& [seq, recv] : top.enabled) {
      if (policy_.kind == SchedulerKind::LV && config_.isExcluded(recv.message.name))
        continue;
      std::optional<std::size_t> i = latest_dependent_index(view, recv, policy_, config_);
      if (!i) continue;
      EngineNode& target = stack_[*i];
      bool coEnabled = target.enabledSeqs.count(seq) != 0;
      if (policy_.kind == SchedulerKind::DP) {
        if (coEnabled) {
          addBacktracking(target, seq);
        } else {
          for (Seq s : dpor_intermediate_additions(view, *i)) addBacktracking(target, s);
        }
        continue;
      }
      // TD/IR/LV: a frozen or already-seeded node takes no more additions.
      if (target.book.freeze || !target.book.backtracking.empty()) continue;
      std::optional<Seq> candidate;
      if (coEnabled) {
        candidate = seq;
      } else {
        if (policy_.kind == SchedulerKind::TD) {
          if (*i + 1 < steps_.size()) {
            Seq s = steps_[*i + 1].receive.message.seq;
            if (target.enabledSeqs.count(s)) candidate = s;
          }
        } else {
          candidate = ired_root_enabler(view, *i, recv);
          if (candidate && !target.enabledSeqs.count(*candidate)) candidate = std::nullopt;
          // LV never shuffles excluded messages, so it may not seed them either.
          if (candidate && policy_.kind == SchedulerKind::LV &&
              config_.isExcluded(target.enabled.at(*candidate).message.name))
            candidate = std::nullopt;
        }
      }
      if (candidate && !target.book.explored.count(*candidate)) {
        target.book.backtracking.insert(*candidate);
        target.book.freeze = true;
        noteBacktracking(target);
      }
    }
  }

  void addBacktracking(EngineNode& target, Seq seq) {
    if (target.book.explored.count(seq)) return;
    target.book.backtracking.insert(seq);
    noteBacktracking(target);
  }

  void noteBacktracking(const EngineNode& target) {
    report_.maxBacktrackingSize =
        std::max(report_.maxBacktrackingSize, target.book.backtracking.size());
  }

  bool backtrack() {
    while (!stack_.empty()) {
      if (choose(stack_.back()).first) {
        stack_.back().book.freeze = false;  // unfreeze on resume
        return true;
      }
      entries_.resize(stack_.back().entryBase);
      stack_.pop_back();
      enabledView_.pop_back();
      if (!steps_.empty()) steps_.pop_back();
      std::erase_if(emitter_, [&](const auto& kv) { return kv.second >= steps_.size(); });
    }
    return false;
  }

  // Responses bound for synthetic clients are not scheduling choices: they
  // are consumed as soon as they appear and appended to the schedule, so the
  // enabled sets only ever hold receives within the system under test.
  SystemState drainClientResponses(SystemState state, std::vector<ScheduleEntry>& entries) {
    for (;;) {
      const Message* next = nullptr;
      for (const auto& [seq, msg] : state.pending)
        if (config_.isClient(msg.receiver)) {
          next = &msg;
          break;
        }
      if (!next) return state;
      Receive r{*next, next->receiver};
      entries.push_back(ScheduleEntry{static_cast<int>(entries.size()) + 1, r});
      state = timedExecuteRaw(state, r);
    }
  }

  SystemState timedExecuteRaw(const SystemState& state, const Receive& r) {
    auto t0 = Clock::now();
    TransitionResult tr = execute_receive(state, r, behavior_);
    execSeconds_ += seconds_since(t0);
    ++report_.receiveExecutions;
    return std::move(tr.newState);
  }

  SystemState timedExecute(const SystemState& state, const Receive& r, Schedule& prefix) {
    try {
      return timedExecuteRaw(state, r);
    } catch (const ModelError& e) {
      throw ExplorationAbort(e.what(), prefix);
    }
  }

  void recordSchedule(const Schedule& schedule, const SystemState& terminal, int delayUsed) {
    History history = schedule_to_history(schedule, config_);
    if (options_.onTerminal) options_.onTerminal(schedule, terminal, history);
    report_.histories.push_back(std::move(history));
    report_.stats.push_back(
        ScheduleStat{schedule.entries.size(), seconds_since(start_), delayUsed});
    if (options_.keepSchedules) report_.schedules.push_back(schedule);
    ++report_.scheduleCount;
  }

  const SystemState& initial_;
  const BehaviorTable& behavior_;
  const HarnessConfig& config_;
  const SchedulerPolicy& policy_;
  std::size_t cutoff_;
  const ExploreOptions& options_;
  std::mt19937_64 rng_;

  std::vector<EngineNode> stack_;
  std::vector<ScheduleEntry> entries_;  // full schedule, drained responses included
  std::vector<ScheduleEntry> steps_;    // one choice per stack level
  std::map<Seq, std::size_t> emitter_;
  std::vector<std::set<Seq>> enabledView_;

  ExplorationReport report_;
  Clock::time_point start_;
  double execSeconds_ = 0;
};

}  // namespace

ExplorationReport explore(const SystemState& initial, const BehaviorTable& behavior,
                          const HarnessConfig& config, const SchedulerPolicy& policy,
                          std::size_t cutoff, const ExploreOptions& options) {
  if (cutoff < 1) throw InternalError("cutoff must be >= 1");
  Engine engine(initial, behavior, config, policy, cutoff, options);
  return engine.run();
}

SystemState replay_schedule(const SystemState& initial, const BehaviorTable& behavior,
                            const Schedule& schedule) {
  SystemState state = initial;
  for (const ScheduleEntry& entry : schedule.entries) {
    TransitionResult tr = execute_receive(state, entry.receive, behavior);
    state = std::move(tr.newState);
  }
  return state;
}

}  // namespace linmc
