#include "linmc/lincheck.hpp"

#include <algorithm>
#include <cstdint>

namespace linmc {

std::vector<Operation> extract_operations(const History& history) {
  std::vector<Operation> ops;
  std::map<int, std::size_t> open;  // opIndex -> position in ops
  for (std::size_t pos = 0; pos < history.events.size(); ++pos) {
    const HistoryEvent& e = history.events[pos];
    if (e.kind == HistoryEvent::Kind::Invocation) {
      if (open.count(e.opIndex))
        throw HistoryFormatError("duplicate invocation for op " + std::to_string(e.opIndex));
      Operation op;
      op.opIndex = e.opIndex;
      op.op = e.op;
      op.key = e.key;
      op.argValue = e.argValue;
      op.invPos = pos;
      open[e.opIndex] = ops.size();
      ops.push_back(std::move(op));
    } else {
      auto it = open.find(e.opIndex);
      if (it == open.end())
        throw HistoryFormatError("response without invocation for op " +
                                 std::to_string(e.opIndex));
      Operation& op = ops[it->second];
      op.returnValue = e.returnValue;
      op.resPos = pos;
      open.erase(it);
    }
  }
  if (!open.empty()) throw HistoryFormatError("history is incomplete");
  return ops;
}

SequentialSpec SequentialSpec::from_harness(const HarnessConfig& config) {
  SequentialSpec spec;
  spec.adt = config.adt;
  spec.defaultInit = config.defaultInit;
  spec.map = config.initState;
  if (config.adt == AdtKind::Set)
    for (const auto& [k, v] : config.initState)
      if (v) spec.set.insert(k);
  return spec;
}

std::optional<Scalar> SequentialSpec::apply(const Operation& op) {
  Scalar key = op.key.value_or(0);
  if (adt == AdtKind::Map) {
    if (op.op == "read") {
      auto it = map.find(key);
      return it == map.end() ? defaultInit : it->second;
    }
    if (op.op == "write") {
      map[key] = op.argValue.value_or(0);
      return std::nullopt;
    }
  } else {
    Scalar elem = op.argValue ? *op.argValue : key;
    if (op.op == "add" || op.op == "write") return set.insert(elem).second ? 1 : 0;
    if (op.op == "remove") return set.erase(elem) ? 1 : 0;
    if (op.op == "contains" || op.op == "read") return set.count(elem) ? 1 : 0;
  }
  throw HistoryFormatError("unknown operation '" + op.op + "'");
}

namespace {

// Reads must return what the spec returns; writes acknowledge with no value.
bool returns_match(const std::optional<Scalar>& specReturn,
                   const std::optional<Scalar>& recorded) {
  if (!specReturn) return true;  // ack-style response: nothing to compare
  return recorded && *recorded == *specReturn;
}

// Doubly-linked list over the operations, ordered by invocation position.
// Unlinked nodes keep their neighbor indices, so LIFO relinking is exact.
struct ListNode {
  std::size_t prev = 0, next = 0;
};

}  // namespace

WglOutcome wgl_check(const History& history, const SequentialSpec& initialSpec) {
  std::vector<Operation> ops = extract_operations(history);
  WglOutcome outcome;
  if (ops.size() > 1000) throw HistoryFormatError("history too large");

  // Nodes 1..n are ops ordered by invocation position; node 0 is the sentinel.
  std::vector<std::size_t> order(ops.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ops[a].invPos < ops[b].invPos; });
  std::vector<ListNode> nodes(ops.size() + 1);
  std::vector<std::size_t> opOf(ops.size() + 1);
  for (std::size_t i = 0; i <= ops.size(); ++i) {
    nodes[i].prev = (i + ops.size()) % (ops.size() + 1);
    nodes[i].next = (i + 1) % (ops.size() + 1);
    if (i > 0) opOf[i] = order[i - 1];
  }
  auto unlink = [&](std::size_t n) {
    nodes[nodes[n].prev].next = nodes[n].next;
    nodes[nodes[n].next].prev = nodes[n].prev;
  };
  auto relink = [&](std::size_t n) {
    nodes[nodes[n].prev].next = n;
    nodes[nodes[n].next].prev = n;
  };

  struct Frame {
    std::size_t node;
    SequentialSpec saved;
  };
  std::vector<Frame> stack;
  SequentialSpec spec = initialSpec;

  // The cursor op is liftable only if no op still in the list responded
  // before it was invoked (its lift would reorder a response after an
  // invocation). The head is always liftable; scanning forward, we stop once
  // we pass the earliest pending response.
  auto head_barrier = [&]() -> std::size_t {
    // Earliest response position among ops currently in the list.
    std::size_t best = SIZE_MAX;
    for (std::size_t n = nodes[0].next; n != 0; n = nodes[n].next)
      best = std::min(best, ops[opOf[n]].resPos);
    return best;
  };
  std::size_t cur = nodes[0].next;
  std::size_t barrier = head_barrier();

  for (;;) {
    if (nodes[0].next == 0) {
      outcome.linearizable = true;
      for (const Frame& f : stack) outcome.witness.push_back(ops[opOf[f.node]].opIndex);
      return outcome;
    }
    ++outcome.iterations;
    bool mustBacktrack = false;
    if (cur == 0 || ops[opOf[cur]].invPos > barrier) {
      mustBacktrack = true;  // every remaining candidate would violate real time
    } else {
      const Operation& op = ops[opOf[cur]];
      SequentialSpec saved = spec;
      std::optional<Scalar> ret = spec.apply(op);
      if (returns_match(ret, op.returnValue)) {
        stack.push_back(Frame{cur, std::move(saved)});
        unlink(cur);
        cur = nodes[0].next;
        barrier = head_barrier();
        continue;
      }
      spec = std::move(saved);
      cur = nodes[cur].next;
      continue;
    }
    if (mustBacktrack) {
      if (stack.empty()) return outcome;  // not linearizable
      Frame frame = std::move(stack.back());
      stack.pop_back();
      spec = std::move(frame.saved);
      relink(frame.node);
      cur = nodes[frame.node].next;
      barrier = head_barrier();
    }
  }
}

namespace {

bool brute_rec(const std::vector<Operation>& ops, std::vector<bool>& used,
               std::size_t placed, SequentialSpec& spec) {
  if (placed == ops.size()) return true;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (used[i]) continue;
    // Real-time precedence: an unplaced op that responded before this one was
    // invoked must come first.
    bool minimal = true;
    for (std::size_t j = 0; j < ops.size(); ++j)
      if (!used[j] && j != i && ops[j].resPos < ops[i].invPos) {
        minimal = false;
        break;
      }
    if (!minimal) continue;
    SequentialSpec saved = spec;
    std::optional<Scalar> ret = spec.apply(ops[i]);
    if (returns_match(ret, ops[i].returnValue)) {
      used[i] = true;
      if (brute_rec(ops, used, placed + 1, spec)) return true;
      used[i] = false;
    }
    spec = std::move(saved);
  }
  return false;
}

}  // namespace

bool brute_force_check(const History& history, const SequentialSpec& spec) {
  std::vector<Operation> ops = extract_operations(history);
  if (ops.size() > 8) throw HistoryFormatError("brute-force checker limited to 8 operations");
  std::vector<bool> used(ops.size(), false);
  SequentialSpec state = spec;
  return brute_rec(ops, used, 0, state);
}

}  // namespace linmc
