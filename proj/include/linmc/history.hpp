#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "linmc/actor.hpp"
#include "linmc/harness.hpp"

// Schedules (executed receive sequences) and the client-visible histories
// derived from them.

namespace linmc {

struct ScheduleEntry {
  int index = 0;  // 1-based position in the schedule
  Receive receive;

  AgentId sender() const { return receive.message.sender; }
  AgentId receiver() const { return receive.message.receiver; }
  const std::string& name() const { return receive.message.name; }
  const Payload& payload() const { return receive.message.payload; }

  bool operator==(const ScheduleEntry&) const = default;
};

struct Schedule {
  std::vector<ScheduleEntry> entries;

  bool operator==(const Schedule&) const = default;
};

struct HistoryEvent {
  enum class Kind { Invocation, Response };
  Kind kind = Kind::Invocation;
  int opIndex = 0;  // pairs a response with its invocation
  std::string op;   // "read" | "write"
  std::optional<Scalar> key;
  std::optional<Scalar> argValue;     // invocation argument (writes)
  std::optional<Scalar> returnValue;  // response value (reads)
  AgentId clientId = 0;

  bool operator==(const HistoryEvent&) const = default;
};

struct History {
  std::vector<HistoryEvent> events;
  bool complete = false;  // every invocation has a response

  // Chronological-uniqueness key: the exact ordered tuple list
  // (kind, op, key, arg, return, clientId).
  std::string dedupe_key() const;

  bool operator==(const History&) const = default;
};

// Classify every entry via the harness patterns: client requests executing at
// an ADT agent become invocation events, client-bound responses become
// response events, everything else is dropped.
History schedule_to_history(const Schedule& schedule, const HarnessConfig& config);

struct UniqueHistory {
  History history;
  size_t count = 0;            // how many schedules produced it
  size_t firstScheduleIndex = 0;  // 0-based production index of first occurrence
};

// Order-preserving dedupe by chronological uniqueness.
std::vector<UniqueHistory> dedupe_histories(const std::vector<History>& histories);

void to_json(nlohmann::json& j, const ScheduleEntry& e);
void to_json(nlohmann::json& j, const Schedule& s);
void to_json(nlohmann::json& j, const HistoryEvent& e);
void from_json(const nlohmann::json& j, HistoryEvent& e);
void to_json(nlohmann::json& j, const History& h);
void from_json(const nlohmann::json& j, History& h);

std::string format_history(const History& h);  // "inv1(Rd, k1); ..." style

}  // namespace linmc
