#include "linmc/actor.hpp"

#include <algorithm>

namespace linmc {

std::optional<Scalar> Payload::field(const std::string& name) const {
  if (name == "key") return key;
  if (name == "value") return value;
  if (name == "client") return client;
  if (name == "proposal") return proposal;
  if (name == "slot") return slot;
  if (name == "tag") return tag;
  if (name == "aux") return aux;
  return std::nullopt;
}

Scalar& Value::asInt() {
  if (!std::holds_alternative<Scalar>(v_)) throw InternalError("value is not a scalar");
  return std::get<Scalar>(v_);
}

Scalar Value::asInt() const {
  if (!std::holds_alternative<Scalar>(v_)) throw InternalError("value is not a scalar");
  return std::get<Scalar>(v_);
}

Value::Map& Value::asMap() {
  if (!std::holds_alternative<Map>(v_)) v_ = Map{};
  return std::get<Map>(v_);
}

const Value::Map& Value::asMap() const {
  if (!std::holds_alternative<Map>(v_)) throw InternalError("value is not a map");
  return std::get<Map>(v_);
}

Seq SystemState::addPending(Message m) {
  m.seq = nextSeq++;
  Seq s = m.seq;
  pending.emplace(s, std::move(m));
  return s;
}

void ActionContext::send(AgentId to, std::string name, Payload payload) {
  Message m;
  m.sender = self;
  m.receiver = to;
  m.name = std::move(name);
  m.payload = std::move(payload);
  emitted.push_back(std::move(m));
}

void ActionContext::spawn(AgentId id, std::string kind, LocalState init) {
  created.emplace_back(id, AgentInfo{std::move(kind), std::move(init)});
}

void BehaviorTable::on(const std::string& kind, const std::string& name, Action action) {
  actions_[{kind, name}] = std::move(action);
}

void BehaviorTable::ignoreAll(const std::string& kind) { inert_.insert(kind); }

const Action* BehaviorTable::find(const std::string& kind, const std::string& name) const {
  auto it = actions_.find({kind, name});
  return it == actions_.end() ? nullptr : &it->second;
}

TransitionResult execute_receive(const SystemState& state, const Receive& r,
                                 const BehaviorTable& behavior) {
  auto pendingIt = state.pending.find(r.message.seq);
  if (pendingIt == state.pending.end() || !(pendingIt->second == r.message))
    throw InternalError("receive is not pending");
  auto agentIt = state.agents.find(r.destination);
  if (agentIt == state.agents.end() || r.destination != r.message.receiver)
    throw InternalError("receive destination is not a known agent");

  TransitionResult result;
  result.newState = state;
  result.newState.pending.erase(r.message.seq);

  const std::string& kind = agentIt->second.kind;
  const Action* action = behavior.find(kind, r.message.name);
  if (action == nullptr) {
    if (behavior.ignores(kind)) return result;  // inert agent: consume only
    throw ModelError("no action for kind '" + kind + "' message '" + r.message.name + "'");
  }

  ActionContext ctx(r.destination, r.message,
                    result.newState.agents.at(r.destination).state);
  (*action)(ctx);

  for (auto& [id, info] : ctx.created) {
    result.newState.agents[id] = info;
    result.created.emplace_back(id, std::move(info));
  }
  for (Message& m : ctx.emitted) {
    Seq s = result.newState.addPending(m);
    m.seq = s;
    result.emitted.push_back(std::move(m));
  }
  return result;
}

std::vector<Receive> enabled_receives(const SystemState& state) {
  std::vector<Receive> out;
  out.reserve(state.pending.size());
  for (const auto& [seq, msg] : state.pending) out.push_back(Receive{msg, msg.receiver});
  std::sort(out.begin(), out.end(), [](const Receive& a, const Receive& b) {
    if (a.destination != b.destination) return a.destination < b.destination;
    return a.message.seq < b.message.seq;
  });
  return out;
}

Snapshot snapshot(const SystemState& state, const NodeBookkeeping& sets) {
  return Snapshot{state, sets};
}

std::pair<SystemState, NodeBookkeeping> restore(const Snapshot& snap) {
  return {snap.state, snap.sets};
}

Scalar lsGet(const LocalState& s, const std::string& name, Scalar def) {
  auto it = s.find(name);
  return it == s.end() ? def : it->second.asInt();
}

void lsSet(LocalState& s, const std::string& name, Scalar v) { s[name] = Value(v); }

Value::Map& lsMap(LocalState& s, const std::string& name) { return s[name].asMap(); }

}  // namespace linmc
