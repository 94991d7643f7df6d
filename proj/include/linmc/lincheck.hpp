#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "linmc/harness.hpp"
#include "linmc/history.hpp"

// WGL linearizability checking against sequential reference specs, plus a
// brute-force oracle for small histories.

namespace linmc {

class HistoryFormatError : public std::runtime_error {
 public:
  explicit HistoryFormatError(const std::string& what) : std::runtime_error(what) {}
};

// One paired invocation/response with its positions in the event sequence.
struct Operation {
  int opIndex = 0;
  std::string op;  // read | write | add | remove | contains
  std::optional<Scalar> key;
  std::optional<Scalar> argValue;
  std::optional<Scalar> returnValue;
  std::size_t invPos = 0;
  std::size_t resPos = 0;
};

// Pairs events into operations; throws HistoryFormatError on malformed input
// (unmatched response, double invocation, incomplete history).
std::vector<Operation> extract_operations(const History& history);

struct SequentialSpec {
  AdtKind adt = AdtKind::Map;
  Scalar defaultInit = 0;
  std::map<Scalar, Scalar> map;   // MAP state (sparse; defaultInit elsewhere)
  std::set<Scalar> set;           // SET state

  static SequentialSpec from_harness(const HarnessConfig& config);

  // Applies the invocation, mutating the state. Writes return nullopt (ack).
  std::optional<Scalar> apply(const Operation& op);

  bool operator==(const SequentialSpec&) const = default;
};

struct WglOutcome {
  bool linearizable = false;
  std::vector<int> witness;  // opIndexes in linearization order
  std::size_t iterations = 0;
};

WglOutcome wgl_check(const History& history, const SequentialSpec& spec);

// Enumerates every total order consistent with real-time precedence and
// replays each; histories of more than 8 operations are rejected.
bool brute_force_check(const History& history, const SequentialSpec& spec);

}  // namespace linmc
