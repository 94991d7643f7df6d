#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "linmc/bench.hpp"
#include "linmc/explore.hpp"
#include "linmc/sched.hpp"

using namespace linmc;

namespace {

Receive recv(Seq seq, AgentId sender, AgentId dest, std::string name = "M",
             std::optional<Scalar> key = std::nullopt) {
  Message m;
  m.seq = seq;
  m.sender = sender;
  m.receiver = dest;
  m.name = std::move(name);
  m.payload.key = key;
  return Receive{std::move(m), dest};
}

ScheduleEntry entry(int index, const Receive& r) { return ScheduleEntry{index, r}; }

// Keyed read/write message names plus one excluded wildcard name.
HarnessConfig lv_config() {
  HarnessConfig config;
  config.targets = {1, 2};
  config.keyInfo["W"] = KeyInfo{false, "key", RwClass::Write};
  config.keyInfo["R"] = KeyInfo{false, "key", RwClass::Read};
  config.keyInfo["X"] = KeyInfo{true, "", RwClass::Both};
  config.exclusions.insert("X");
  return config;
}

SchedulerPolicy policy_of(SchedulerKind kind) {
  SchedulerPolicy p;
  p.kind = kind;
  return p;
}

struct ViewData {
  std::vector<ScheduleEntry> entries;
  std::vector<std::set<Seq>> enabledAt;
  std::map<Seq, std::size_t> emitter;

  UpdateView view() const { return UpdateView{entries, enabledAt, emitter}; }
};

}  // namespace

TEST_CASE("did_enable links a receive to messages its destination later sent") {
  CHECK(did_enable(recv(1, 0, 2), recv(2, 2, 1)));   // received by B, sent by B
  CHECK(!did_enable(recv(1, 0, 1), recv(2, 2, 1)));  // received by A, sent by B
  CHECK(!did_enable(recv(1, 0, 2), recv(2, 1, 1)));  // self-send by A, not via B
}

TEST_CASE("dependence is same-destination for the DPOR family") {
  HarnessConfig config = lv_config();
  for (SchedulerKind kind : {SchedulerKind::DP, SchedulerKind::TD, SchedulerKind::IR}) {
    SchedulerPolicy policy = policy_of(kind);
    CHECK(are_dependent(recv(1, 0, 1, "W", 1), recv(2, 0, 1, "R", 1), policy, config));
    CHECK(are_dependent(recv(1, 0, 1, "W", 1), recv(2, 0, 1, "R", 2), policy, config));
    CHECK(!are_dependent(recv(1, 0, 1, "W", 1), recv(2, 0, 2, "W", 1), policy, config));
    CHECK(are_dependent(recv(1, 0, 1, "X"), recv(2, 0, 1, "W", 1), policy, config));
  }
}

TEST_CASE("LiViola refines dependence with keys, rw classes, and exclusions") {
  HarnessConfig config = lv_config();
  SchedulerPolicy lv = policy_of(SchedulerKind::LV);
  CHECK(are_dependent(recv(1, 0, 1, "W", 1), recv(2, 0, 1, "R", 1), lv, config));
  CHECK(!are_dependent(recv(1, 0, 1, "W", 1), recv(2, 0, 1, "R", 2), lv, config));  // keys differ
  CHECK(!are_dependent(recv(1, 0, 1, "R", 1), recv(2, 0, 1, "R", 1), lv, config));  // both reads
  CHECK(!are_dependent(recv(1, 0, 1, "X"), recv(2, 0, 1, "W", 1), lv, config));     // excluded
  CHECK(!are_dependent(recv(1, 0, 1, "W", 1), recv(2, 0, 2, "W", 1), lv, config));
  // An unbound name has a wildcard key: it conflicts with every key.
  CHECK(are_dependent(recv(1, 0, 1, "M"), recv(2, 0, 1, "W", 1), lv, config));
  CHECK(are_dependent(recv(1, 0, 1, "W"), recv(2, 0, 1, "R", 2), lv, config));  // absent field
}

TEST_CASE("dependence is symmetric under every policy") {
  HarnessConfig config = lv_config();
  std::mt19937_64 rng(21);
  const char* names[] = {"W", "R", "X", "M"};
  for (int i = 0; i < 500; ++i) {
    Receive a = recv(1, 0, static_cast<AgentId>(1 + rng() % 2), names[rng() % 4],
                     static_cast<Scalar>(rng() % 2));
    Receive b = recv(2, 0, static_cast<AgentId>(1 + rng() % 2), names[rng() % 4],
                     static_cast<Scalar>(rng() % 2));
    for (SchedulerKind kind : {SchedulerKind::DP, SchedulerKind::TD, SchedulerKind::IR,
                               SchedulerKind::LV}) {
      SchedulerPolicy policy = policy_of(kind);
      CHECK(are_dependent(a, b, policy, config) == are_dependent(b, a, policy, config));
    }
  }
}

TEST_CASE("caused_after walks the emit-ancestor chain") {
  ViewData d;
  d.entries = {entry(1, recv(1, 0, 1)), entry(2, recv(2, 0, 1))};
  d.enabledAt = {{1, 2}, {2}};

  Message injected;
  injected.seq = 9;  // no emitter: present before exploration began
  CHECK(!caused_after(d.view(), 0, injected));

  Message emittedLater;
  emittedLater.seq = 3;
  d.emitter[3] = 1;  // emitted by entry 1, same destination, after node 0
  CHECK(caused_after(d.view(), 0, emittedLater));

  Message selfCaused;
  selfCaused.seq = 4;
  d.emitter[4] = 0;  // chain ends at node 0 itself
  CHECK(!caused_after(d.view(), 0, selfCaused));             // loose: not guarded
  CHECK(caused_after(d.view(), 0, selfCaused, true));        // strict: guarded
  CHECK(caused_after(d.view(), 0, emittedLater, true));

  // Transitive: m emitted at another destination, whose receive entry 1 emitted.
  ViewData t;
  t.entries = {entry(1, recv(1, 0, 1)), entry(2, recv(2, 0, 1)), entry(3, recv(3, 0, 2))};
  t.enabledAt = {{1, 2}, {2, 3}, {3}};
  t.emitter[3] = 1;
  Message transitive;
  transitive.seq = 6;
  t.emitter[6] = 2;  // entry 2 is at destination 2; the chain continues to entry 1
  CHECK(caused_after(t.view(), 0, transitive));
}

TEST_CASE("latest dependent index scans backwards and honors the guard") {
  HarnessConfig config = lv_config();
  ViewData d;
  d.entries = {entry(1, recv(1, 0, 1, "W", 1)), entry(2, recv(2, 0, 2, "W", 1)),
               entry(3, recv(3, 0, 1, "W", 1))};
  d.enabledAt = {{1, 2, 3}, {2, 3}, {3}};

  Receive m = recv(7, 0, 1, "W", 1);
  CHECK(latest_dependent_index(d.view(), m, policy_of(SchedulerKind::DP), config) == 2);

  Receive other = recv(7, 0, 3, "W", 1);
  CHECK(!latest_dependent_index(d.view(), other, policy_of(SchedulerKind::DP), config));

  // m was emitted by entry 2's receive. The strict guard (LV) drops the whole
  // enablement-ordered chain; the loose guard (DP) still reverses against it.
  ViewData g = d;
  g.emitter[7] = 2;
  Receive caused = recv(7, 1, 1, "W", 1);
  CHECK(!latest_dependent_index(g.view(), caused, policy_of(SchedulerKind::LV), config));
  CHECK(latest_dependent_index(g.view(), caused, policy_of(SchedulerKind::DP), config) == 2);
}

TEST_CASE("root enabler: a self-sent message has no chain through the other agent") {
  ViewData d;
  d.entries = {entry(1, recv(1, 0, 1, "m1")), entry(2, recv(2, 0, 2, "m2"))};
  d.enabledAt = {{1, 2}, {2}};
  Receive m3 = recv(3, 1, 1, "m3");  // sent by agent 1, not by agent 2
  CHECK(!ired_root_enabler(d.view(), 0, m3));
}

TEST_CASE("root enabler picks the earliest of many same-sender retries") {
  ViewData d;
  d.entries = {entry(1, recv(1, 0, 1, "m1"))};
  d.enabledAt = {{1}};
  for (Seq s = 2; s <= 101; ++s) {  // 100 retries, all received and sent by agent 1
    d.entries.push_back(entry(static_cast<int>(s), recv(s, 1, 1, "retry")));
    d.enabledAt.push_back({});
  }
  Receive current = recv(200, 1, 1, "retry");
  CHECK(ired_root_enabler(d.view(), 0, current) == 2);  // the earliest retry
}

TEST_CASE("root enabler skips retries from another sender and continues behind them") {
  ViewData d;
  d.entries = {entry(1, recv(1, 0, 1, "m1"))};
  d.enabledAt = {{1}};
  for (Seq s = 2; s <= 100; ++s) {  // 99 retries heading to agent 1, sent by agent 2
    d.entries.push_back(entry(static_cast<int>(s), recv(s, 2, 1, "retry")));
    d.enabledAt.push_back({});
  }
  d.entries.push_back(entry(101, recv(101, 3, 2, "g")));  // the receive agent 2 processed
  d.enabledAt.push_back({});
  Receive current = recv(200, 2, 1, "retry");
  // None of the retries were received by agent 2, so they cannot have enabled
  // a message agent 2 sent: the scan passes all 99 and lands on g.
  CHECK(ired_root_enabler(d.view(), 0, current) == 101);
}

TEST_CASE("DPOR fallback takes exactly the intermediates enabled at the dependent state") {
  ViewData d;
  d.entries = {entry(1, recv(1, 0, 1)), entry(2, recv(2, 0, 2)), entry(3, recv(3, 1, 2))};
  d.enabledAt = {{1, 2}, {2, 3}, {3}};  // seq 3 was not yet enabled at node 0
  CHECK(dpor_intermediate_additions(d.view(), 0) == std::vector<Seq>{2});
  CHECK(dpor_intermediate_additions(d.view(), 1) == std::vector<Seq>{3});
  CHECK(dpor_intermediate_additions(d.view(), 2).empty());
}

TEST_CASE("freeze-flag schedulers keep backtracking sets at cardinality one") {
  HarnessConfig config = parse_harness(bundled_harness("register-2r1w"));
  BenchmarkSystem sys = build_correct_register();
  SystemState initial = inject_invocations(sys.initial, config);
  for (SchedulerKind kind : {SchedulerKind::TD, SchedulerKind::IR, SchedulerKind::LV}) {
    SchedulerPolicy policy = policy_of(kind);
    policy.seed = 9;
    ExplorationReport report = explore(initial, sys.behavior, config, policy, 50000);
    CHECK(report.maxBacktrackingSize <= 1);
  }
  SchedulerPolicy dp = policy_of(SchedulerKind::DP);
  dp.seed = 9;
  CHECK(explore(initial, sys.behavior, config, dp, 50000).maxBacktrackingSize >= 1);
}

TEST_CASE("scheduler kind names round-trip") {
  for (const char* name : {"EX", "SR", "DB", "DP", "TD", "IR", "LV"}) {
    auto kind = parse_scheduler_kind(name);
    REQUIRE(kind);
    CHECK(scheduler_name(*kind) == std::string(name));
  }
  CHECK(!parse_scheduler_kind("ZZ"));
}

TEST_CASE("LiViola explores at most as many schedules as IRed on the register") {
  HarnessConfig config = parse_harness(bundled_harness("register-2r1w"));
  BenchmarkSystem sys = build_correct_register();
  SystemState initial = inject_invocations(sys.initial, config);
  for (std::uint64_t seed : {1, 9}) {
    SchedulerPolicy ir = policy_of(SchedulerKind::IR);
    ir.seed = seed;
    SchedulerPolicy lv = policy_of(SchedulerKind::LV);
    lv.seed = seed;
    std::size_t irCount = explore(initial, sys.behavior, config, ir, 50000).scheduleCount;
    std::size_t lvCount = explore(initial, sys.behavior, config, lv, 50000).scheduleCount;
    CHECK(lvCount <= irCount);
  }
}
