#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "linmc/actor.hpp"
#include "linmc/bench.hpp"

using namespace linmc;

namespace {

// Pending message of the given name bound for the given agent.
Receive pending_receive(const SystemState& state, const std::string& name, AgentId dest) {
  for (const auto& [seq, m] : state.pending)
    if (m.name == name && m.receiver == dest) return Receive{m, dest};
  FAIL("no pending ", name, " for agent ", dest);
  return {};
}

Message make_msg(AgentId from, AgentId to, std::string name, Payload p = {}) {
  Message m;
  m.sender = from;
  m.receiver = to;
  m.name = std::move(name);
  m.payload = std::move(p);
  return m;
}

}  // namespace

TEST_CASE("leader write updates the register and replicates to every peer") {
  BenchmarkSystem sys = build_correct_register(2, 2);
  SystemState state = sys.initial;
  Payload p;
  p.key = 0;
  p.value = 1;
  p.client = 100;
  state.addPending(make_msg(100, 1, "Write", p));

  TransitionResult tr = execute_receive(state, pending_receive(state, "Write", 1), sys.behavior);
  CHECK(lsGet(tr.newState.agents.at(1).state, "reg") == 1);
  CHECK(lsMap(tr.newState.agents.at(1).state, "wacks")[100] == 1);  // counting self
  REQUIRE(tr.emitted.size() == 1);  // one peer in a 2-agent system
  CHECK(tr.emitted[0].name == "WriteReplica");
  CHECK(tr.emitted[0].receiver == 2);
  CHECK(*tr.emitted[0].payload.value == 1);
}

TEST_CASE("backup answers ReadReplica with its register value and no state change") {
  BenchmarkSystem sys = build_correct_register(2, 2);
  SystemState state = sys.initial;
  Payload p;
  p.key = 0;
  p.client = 100;
  state.addPending(make_msg(1, 2, "ReadReplica", p));

  LocalState before = state.agents.at(2).state;
  TransitionResult tr =
      execute_receive(state, pending_receive(state, "ReadReplica", 2), sys.behavior);
  CHECK(tr.newState.agents.at(2).state == before);
  REQUIRE(tr.emitted.size() == 1);
  CHECK(tr.emitted[0].name == "ReadReplicaAck");
  CHECK(tr.emitted[0].receiver == 1);
  CHECK(*tr.emitted[0].payload.value == 0);
}

TEST_CASE("backup forwards a Write to the leader untouched") {
  BenchmarkSystem sys = build_correct_register(2, 2);
  SystemState state = sys.initial;
  Payload p;
  p.key = 0;
  p.value = 7;
  p.client = 100;
  state.addPending(make_msg(100, 2, "Write", p));

  LocalState before = state.agents.at(2).state;
  TransitionResult tr = execute_receive(state, pending_receive(state, "Write", 2), sys.behavior);
  CHECK(tr.newState.agents.at(2).state == before);
  REQUIRE(tr.emitted.size() == 1);
  CHECK(tr.emitted[0].name == "Write");
  CHECK(tr.emitted[0].receiver == 1);
  CHECK(tr.emitted[0].payload == p);
  CHECK(tr.emitted[0].seq != pending_receive(state, "Write", 2).message.seq);
}

TEST_CASE("enabled_receives lists exactly one receive per pending message") {
  BenchmarkSystem sys = build_correct_register(2, 2);
  SystemState state = sys.initial;
  CHECK(enabled_receives(state).empty());

  state.addPending(make_msg(1, 2, "ReadReplica", Payload{.key = 0, .client = 100}));
  state.addPending(make_msg(2, 1, "ReadReplica", Payload{.key = 0, .client = 101}));
  std::vector<Receive> two = enabled_receives(state);
  REQUIRE(two.size() == 2);
  CHECK(two[0].destination == two[0].message.receiver);
  CHECK(two[1].destination == two[1].message.receiver);

  // Same sender, same destination: both enabled at once (no per-channel FIFO).
  state = sys.initial;
  state.addPending(make_msg(1, 2, "ReadReplica", Payload{.key = 0, .client = 100}));
  state.addPending(make_msg(1, 2, "ReadReplica", Payload{.key = 0, .client = 101}));
  CHECK(enabled_receives(state).size() == 2);
}

TEST_CASE("snapshot and restore round-trip exactly") {
  BenchmarkSystem sys = build_correct_register(2, 2);
  SystemState state = sys.initial;
  state.addPending(make_msg(100, 1, "Write", Payload{.key = 0, .value = 5, .client = 100}));

  Snapshot snap = snapshot(state);
  CHECK(restore(snap).first == state);

  // Execute, then restore: back to the pre-execution state.
  TransitionResult tr = execute_receive(state, pending_receive(state, "Write", 1), sys.behavior);
  CHECK(tr.newState != state);
  CHECK(restore(snap).first == state);

  // Snapshots are independent of later mutation of the restored copy.
  auto [copy, book] = restore(snap);
  copy.agents.at(1).state["reg"] = 42;
  CHECK(restore(snap).first == state);
}

TEST_CASE("1000 snapshot/execute/restore cycles recover the initial state bit-for-bit") {
  BenchmarkSystem sys = build_correct_register(2, 2);
  SystemState initial = sys.initial;
  initial.addPending(make_msg(100, 1, "Write", Payload{.key = 0, .value = 3, .client = 100}));
  SystemState state = initial;
  for (int i = 0; i < 1000; ++i) {
    Snapshot snap = snapshot(state);
    std::vector<Receive> enabled = enabled_receives(state);
    REQUIRE(!enabled.empty());
    TransitionResult tr = execute_receive(state, enabled[i % enabled.size()], sys.behavior);
    CHECK(tr.newState != state);
    state = restore(snap).first;
  }
  CHECK(state == initial);
}

TEST_CASE("executing the same receive from equal states is deterministic") {
  BenchmarkSystem sys = build_correct_register(2, 2);
  SystemState state = sys.initial;
  state.addPending(make_msg(100, 1, "Read", Payload{.key = 0, .client = 100}));
  Receive r = pending_receive(state, "Read", 1);
  SystemState copy = state;

  TransitionResult a = execute_receive(state, r, sys.behavior);
  TransitionResult b = execute_receive(copy, r, sys.behavior);
  CHECK(a.newState == b.newState);
  CHECK(a.emitted == b.emitted);
}

TEST_CASE("pending count identity: after = before - 1 + emitted") {
  BenchmarkSystem sys = build_correct_register(3, 2);
  SystemState state = sys.initial;
  state.addPending(make_msg(100, 1, "Read", Payload{.key = 0, .client = 100}));
  state.addPending(make_msg(101, 2, "Read", Payload{.key = 0, .client = 101}));

  for (int step = 0; step < 6; ++step) {
    std::vector<Receive> enabled = enabled_receives(state);
    if (enabled.empty()) break;
    std::size_t before = state.pending.size();
    TransitionResult tr = execute_receive(state, enabled.front(), sys.behavior);
    CHECK(tr.newState.pending.size() == before - 1 + tr.emitted.size());
    CHECK(tr.newState.pending.count(enabled.front().message.seq) == 0);
    for (const Message& m : tr.emitted) CHECK(tr.newState.pending.count(m.seq) == 1);
    state = tr.newState;
  }
}

TEST_CASE("executing a receive that is not pending is an internal error") {
  BenchmarkSystem sys = build_correct_register(2, 2);
  SystemState state = sys.initial;
  Message m = make_msg(100, 1, "Read", Payload{.key = 0, .client = 100});
  m.seq = 999;
  CHECK_THROWS_AS(execute_receive(state, Receive{m, 1}, sys.behavior), InternalError);
}

TEST_CASE("a message with no bound action is a model error") {
  BenchmarkSystem sys = build_correct_register(2, 2);
  SystemState state = sys.initial;
  state.addPending(make_msg(100, 1, "Bogus"));
  CHECK_THROWS_AS(execute_receive(state, pending_receive(state, "Bogus", 1), sys.behavior),
                  ModelError);
}
