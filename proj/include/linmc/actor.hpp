#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Executable actor model: agents with local state, atomic message-driven
// actions, message sending, agent creation, and whole-system snapshot/restore.

namespace linmc {

using AgentId = int;
using Scalar = long long;
using Seq = std::uint64_t;

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

// Closed structured record carried by every message. Benchmarks use the
// subset of fields they need; unused fields stay empty.
struct Payload {
  std::optional<Scalar> key;
  std::optional<Scalar> value;
  std::optional<Scalar> client;
  std::optional<Scalar> proposal;
  std::optional<Scalar> slot;
  std::optional<Scalar> tag;
  std::optional<Scalar> aux;

  bool operator==(const Payload&) const = default;

  std::optional<Scalar> field(const std::string& name) const;
};

struct Message {
  Seq seq = 0;  // globally unique, monotone per exploration
  AgentId sender = 0;
  AgentId receiver = 0;
  std::string name;
  Payload payload;

  bool operator==(const Message&) const = default;
};

// A pending message paired with its destination agent; the unit of scheduling.
struct Receive {
  Message message;
  AgentId destination = 0;

  bool operator==(const Receive&) const = default;
};

// Named variables of one agent. Values are either scalars or scalar maps,
// which covers registers, logs, trackers and ring pointers alike.
class Value {
 public:
  using Map = std::map<Scalar, Scalar>;

  Value() : v_(Scalar{0}) {}
  Value(Scalar s) : v_(s) {}
  Value(int s) : v_(static_cast<Scalar>(s)) {}
  Value(Map m) : v_(std::move(m)) {}

  Scalar& asInt();
  Scalar asInt() const;
  Map& asMap();
  const Map& asMap() const;
  bool isMap() const { return std::holds_alternative<Map>(v_); }

  bool operator==(const Value&) const = default;

 private:
  std::variant<Scalar, Map> v_;
};

using LocalState = std::map<std::string, Value>;

struct AgentInfo {
  std::string kind;
  LocalState state;

  bool operator==(const AgentInfo&) const = default;
};

struct SystemState {
  std::map<AgentId, AgentInfo> agents;
  std::map<Seq, Message> pending;  // keyed by seq, so no duplicates
  Seq nextSeq = 1;

  bool operator==(const SystemState&) const = default;

  bool hasAgent(AgentId id) const { return agents.count(id) != 0; }
  Seq addPending(Message m);  // assigns a fresh seq, returns it
};

// What one action sees: its own id and state, the consumed message, and
// buffers for sends and spawns. Actions never touch other agents' state.
class ActionContext {
 public:
  ActionContext(AgentId self, const Message& msg, LocalState& state)
      : self(self), msg(msg), state(state) {}

  const AgentId self;
  const Message& msg;
  LocalState& state;

  void send(AgentId to, std::string name, Payload payload = {});
  void spawn(AgentId id, std::string kind, LocalState init = {});

  std::vector<Message> emitted;  // program order of send statements
  std::vector<std::pair<AgentId, AgentInfo>> created;
};

using Action = std::function<void(ActionContext&)>;

class BehaviorTable {
 public:
  void on(const std::string& kind, const std::string& name, Action action);
  // Kinds with no behavior at all (synthetic clients) silently consume.
  void ignoreAll(const std::string& kind);

  const Action* find(const std::string& kind, const std::string& name) const;
  bool ignores(const std::string& kind) const { return inert_.count(kind) != 0; }

 private:
  std::map<std::pair<std::string, std::string>, Action> actions_;
  std::set<std::string> inert_;
};

struct TransitionResult {
  SystemState newState;
  std::vector<Message> emitted;
  std::vector<std::pair<AgentId, AgentInfo>> created;
};

// Atomically consume r.message at its destination and run the bound action.
TransitionResult execute_receive(const SystemState& state, const Receive& r,
                                 const BehaviorTable& behavior);

// One receive per pending message, ordered by (destination, seq). Any pending
// message at any agent is selectable; there is no per-channel FIFO.
std::vector<Receive> enabled_receives(const SystemState& state);

// Per-node bookkeeping captured alongside the system state.
struct NodeBookkeeping {
  std::set<Seq> explored;
  std::set<Seq> backtracking;
  bool freeze = false;

  bool operator==(const NodeBookkeeping&) const = default;
};

struct Snapshot {
  SystemState state;
  NodeBookkeeping sets;
};

Snapshot snapshot(const SystemState& state, const NodeBookkeeping& sets = {});
std::pair<SystemState, NodeBookkeeping> restore(const Snapshot& snap);

// LocalState helpers.
Scalar lsGet(const LocalState& s, const std::string& name, Scalar def = 0);
void lsSet(LocalState& s, const std::string& name, Scalar v);
Value::Map& lsMap(LocalState& s, const std::string& name);

}  // namespace linmc
