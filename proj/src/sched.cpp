#include "linmc/sched.hpp"

namespace linmc {

std::optional<SchedulerKind> parse_scheduler_kind(const std::string& s) {
  if (s == "EX") return SchedulerKind::EX;
  if (s == "SR") return SchedulerKind::SR;
  if (s == "DB") return SchedulerKind::DB;
  if (s == "DP") return SchedulerKind::DP;
  if (s == "TD") return SchedulerKind::TD;
  if (s == "IR") return SchedulerKind::IR;
  if (s == "LV") return SchedulerKind::LV;
  return std::nullopt;
}

const char* scheduler_name(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::EX: return "EX";
    case SchedulerKind::SR: return "SR";
    case SchedulerKind::DB: return "DB";
    case SchedulerKind::DP: return "DP";
    case SchedulerKind::TD: return "TD";
    case SchedulerKind::IR: return "IR";
    default: return "LV";
  }
}

bool did_enable(const Receive& earlier, const Receive& later) {
  return later.message.sender == earlier.destination;
}

namespace {

RwClass rw_class_of(const Message& m, const HarnessConfig& config) {
  auto it = config.keyInfo.find(m.name);
  return it == config.keyInfo.end() ? RwClass::Both : it->second.rw;
}

bool keys_conflict(const Message& a, const Message& b, const HarnessConfig& config) {
  std::optional<Scalar> ka = key_of(a, config), kb = key_of(b, config);
  if (!ka || !kb) return true;  // wildcard conflicts with everything
  return *ka == *kb;
}

}  // namespace

bool are_dependent(const Receive& a, const Receive& b, const SchedulerPolicy& policy,
                   const HarnessConfig& config) {
  if (a.destination != b.destination) return false;
  if (policy.kind != SchedulerKind::LV) return true;
  if (config.isExcluded(a.message.name) || config.isExcluded(b.message.name)) return false;
  if (!keys_conflict(a.message, b.message, config)) return false;
  // Two read-class receives commute even on the same key.
  if (rw_class_of(a.message, config) == RwClass::Read &&
      rw_class_of(b.message, config) == RwClass::Read)
    return false;
  return true;
}

bool caused_after(const UpdateView& v, std::size_t i, const Message& m, bool strict) {
  AgentId dest = v.entries[i].receive.destination;
  Seq cur = m.seq;
  for (;;) {
    auto it = v.emitter.find(cur);
    if (it == v.emitter.end()) return false;  // injected before exploration
    std::size_t c = it->second;
    if (c == i) return strict;
    if (c > i && v.entries[c].receive.destination == dest) return true;
    cur = v.entries[c].receive.message.seq;
  }
}

std::optional<std::size_t> latest_dependent_index(const UpdateView& v, const Receive& m,
                                                  const SchedulerPolicy& policy,
                                                  const HarnessConfig& config) {
  bool strict = policy.kind == SchedulerKind::LV;
  for (std::size_t j = v.entries.size(); j-- > 0;) {
    if (!are_dependent(v.entries[j].receive, m, policy, config)) continue;
    if (caused_after(v, j, m.message, strict)) continue;
    return j;
  }
  return std::nullopt;
}

std::optional<Seq> ired_root_enabler(const UpdateView& v, std::size_t i, const Receive& m) {
  const Receive* cursor = &m;
  std::size_t bound = v.entries.size();
  std::optional<Seq> root;
  for (;;) {
    std::optional<std::size_t> hit;
    for (std::size_t idx = i + 1; idx < bound; ++idx)
      if (did_enable(v.entries[idx].receive, *cursor)) {
        hit = idx;
        break;  // earliest chain link wins
      }
    if (!hit) return root;
    cursor = &v.entries[*hit].receive;
    root = cursor->message.seq;
    bound = *hit;
  }
}

std::vector<Seq> dpor_intermediate_additions(const UpdateView& v, std::size_t i) {
  std::vector<Seq> out;
  for (std::size_t j = i + 1; j < v.entries.size(); ++j) {
    Seq s = v.entries[j].receive.message.seq;
    if (v.enabledAt[i].count(s)) out.push_back(s);
  }
  return out;
}

}  // namespace linmc
