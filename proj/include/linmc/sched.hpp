#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "linmc/actor.hpp"
#include "linmc/harness.hpp"
#include "linmc/history.hpp"

// The seven scheduling policies. EX/SR/DB differ only in how the next receive
// is chosen; the DPOR family (DP/TD/IR/LV) shares the dependent-state scan
// below and differs in the backtracking-set update rule.

namespace linmc {

enum class SchedulerKind { EX, SR, DB, DP, TD, IR, LV };

struct SchedulerPolicy {
  SchedulerKind kind = SchedulerKind::EX;
  int delayBudget = 2;                // DB: total skips per schedule
  std::uint64_t seed = 0;
  std::optional<std::size_t> srBudget;  // SR: schedule budget; default 2x cutoff

  bool isDporFamily() const {
    return kind == SchedulerKind::DP || kind == SchedulerKind::TD ||
           kind == SchedulerKind::IR || kind == SchedulerKind::LV;
  }
  bool usesFreeze() const {
    return kind == SchedulerKind::TD || kind == SchedulerKind::IR ||
           kind == SchedulerKind::LV;
  }
};

std::optional<SchedulerKind> parse_scheduler_kind(const std::string& s);
const char* scheduler_name(SchedulerKind kind);

// Causal-chain link: the later receive's sender is the earlier's receiver.
bool did_enable(const Receive& earlier, const Receive& later);

// DP/TD/IR: same destination agent. LV additionally requires a key conflict
// (equal keys, or either wildcard), at least one write-class receive, and
// neither name excluded by the harness.
bool are_dependent(const Receive& a, const Receive& b, const SchedulerPolicy& policy,
                   const HarnessConfig& config);

// Read-only view of the exploration stack the update rules scan over.
// Node i is the state entries[i] executed from; node entries.size() is the
// current state holding the pending message under consideration.
struct UpdateView {
  const std::vector<ScheduleEntry>& entries;
  const std::vector<std::set<Seq>>& enabledAt;  // per node: enabled message seqs
  const std::map<Seq, std::size_t>& emitter;    // message seq -> emitting entry
};

// True when entries[i] happens-before the future receive of m: some emit
// ancestor of m executed after i at i's destination. The latest dependent
// state must not be causally ordered before m, or reversing them is moot.
// `strict` additionally rules out chains passing through i itself, which
// LV uses to drop enablement-ordered pairs entirely.
bool caused_after(const UpdateView& v, std::size_t i, const Message& m,
                  bool strict = false);

// i = max{ j : areDependent(entries[j], m) and not caused_after(j, m) }.
std::optional<std::size_t> latest_dependent_index(const UpdateView& v, const Receive& m,
                                                  const SchedulerPolicy& policy,
                                                  const HarnessConfig& config);

// Reverse traversal from m toward node i: descending over entries after i,
// follow sender links (did_enable) keeping the earliest chain member reached.
// Returns the root enabler's seq, or none when the chain dead-ends at i.
std::optional<Seq> ired_root_enabler(const UpdateView& v, std::size_t i, const Receive& m);

// DPOR fallback when m was not co-enabled at node i: every intermediate
// receive (indices i+1..end) that was enabled at node i.
std::vector<Seq> dpor_intermediate_additions(const UpdateView& v, std::size_t i);

}  // namespace linmc
