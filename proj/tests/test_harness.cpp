#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "linmc/bench.hpp"
#include "linmc/explore.hpp"
#include "linmc/harness.hpp"

using namespace linmc;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("2r+1w harness parses to two read clients and one write client") {
  HarnessConfig config = parse_harness(bundled_harness("register-2r1w"));
  CHECK(config.adt == AdtKind::Map);
  CHECK(config.defaultInit == 0);
  CHECK(config.targets == std::vector<AgentId>{1, 2});
  REQUIRE(config.clients.size() == 3);
  CHECK(config.clients[0].op == ClientSpec::Op::Read);
  CHECK(config.clients[1].op == ClientSpec::Op::Read);
  CHECK(config.clients[2].op == ClientSpec::Op::Write);
  CHECK(config.clients[2].value == 1);
  CHECK(config.initDirectives.at("leader") == "1");
  CHECK(config.exclusions.empty());
}

TEST_CASE("2r+2w harness has four clients, two of them writes, and write-ack exclusions") {
  HarnessConfig config = parse_harness(bundled_harness("register-2r2w"));
  REQUIRE(config.clients.size() == 4);
  int writes = 0;
  for (const ClientSpec& c : config.clients)
    if (c.op == ClientSpec::Op::Write) ++writes;
  CHECK(writes == 2);
  CHECK(config.isExcluded("WriteReplicaAck"));
  CHECK(config.isExcluded("WriteReplicaNack"));
  CHECK(!config.isExcluded("ReadReplicaAck"));
}

TEST_CASE("render/parse round-trips to a fixed point") {
  for (const std::string& name : bundled_harness_names()) {
    CAPTURE(name);
    std::string once = render_harness(parse_harness(bundled_harness(name)));
    CHECK(render_harness(parse_harness(once)) == once);
  }
}

TEST_CASE("bundled harness text matches the files shipped on disk") {
  for (const std::string& name : bundled_harness_names()) {
    CAPTURE(name);
    std::string onDisk = read_file(std::string(LINMC_SOURCE_DIR) + "/harnesses/" + name + ".harness");
    CHECK(onDisk == bundled_harness(name));
  }
}

TEST_CASE("injection adds one client agent and one pending request per spec") {
  HarnessConfig config = parse_harness(bundled_harness("register-2r1w"));
  BenchmarkSystem sys = build_correct_register();
  SystemState injected = inject_invocations(sys.initial, config);

  CHECK(injected.agents.size() == sys.initial.agents.size() + 3);
  CHECK(injected.pending.size() == 3);
  // Round-robin over the target agents: 1, 2, 1.
  std::vector<AgentId> targets;
  for (const auto& [seq, m] : injected.pending) {
    targets.push_back(m.receiver);
    CHECK(config.isClient(m.sender));
    CHECK(injected.agents.at(m.sender).kind == "client");
  }
  CHECK(targets == std::vector<AgentId>{1, 2, 1});
}

TEST_CASE("injection with zero clients is a no-op") {
  HarnessConfig config = parse_harness(bundled_harness("register-2r1w"));
  config.clients.clear();
  BenchmarkSystem sys = build_correct_register();
  CHECK(inject_invocations(sys.initial, config) == sys.initial);
}

TEST_CASE("explicit @targets override round-robin") {
  HarnessConfig config = parse_harness(bundled_harness("chord-join"));
  REQUIRE(config.clients.size() == 3);
  CHECK(config.clients[0].target == 1);
  CHECK(config.clients[1].target == 1);
  CHECK(config.clients[2].target == 2);
}

TEST_CASE("chord join directive injects a FindSucc message alongside the requests") {
  HarnessConfig config = parse_harness(bundled_harness("chord-join"));
  BenchmarkSystem sys = build_chord();
  SystemState injected = inject_invocations(sys.initial, config);
  CHECK(injected.pending.size() == 4);  // 3 client requests + the join
  bool found = false;
  for (const auto& [seq, m] : injected.pending)
    if (m.name == "FindSucc") {
      found = true;
      CHECK(m.sender == 2);
      CHECK(m.receiver == 1);
      CHECK(m.payload.aux == 2);
    }
  CHECK(found);
}

TEST_CASE("classification covers every message each benchmark can emit") {
  for (const std::string& bench : benchmark_names()) {
    CAPTURE(bench);
    HarnessConfig config = parse_harness(bundled_harness(default_harness_for(bench)));
    // The ADR register retries on write conflicts; its extra traffic only
    // shows up under the two-write harness.
    if (bench == "register-adr") config = parse_harness(bundled_harness("register-2r2w"));
    BenchmarkSystem sys = build_by_name(bench);
    SystemState initial = inject_invocations(sys.initial, config);
    SchedulerPolicy policy;
    policy.kind = SchedulerKind::SR;
    policy.seed = 3;
    policy.srBudget = 50;
    ExploreOptions options;
    options.keepSchedules = true;
    ExplorationReport report = explore(initial, sys.behavior, config, policy, 50, options);
    for (const Schedule& s : report.schedules)
      for (const ScheduleEntry& e : s.entries)
        CHECK_NOTHROW(classify_name(e.name(), config));
  }
}

TEST_CASE("classification basics") {
  HarnessConfig config = parse_harness(bundled_harness("register-2r1w"));
  CHECK(classify_name("Write", config) == Category::WriteInvocation);
  CHECK(classify_name("WriteReplicaAck", config) == Category::Ack);
  CHECK(classify_name("ReadAck", config) == Category::ReadResponse);
  CHECK_THROWS_AS(classify_name("Nonsense", config), HarnessError);
}

TEST_CASE("key extraction follows the interleave bindings") {
  HarnessConfig config = parse_harness(bundled_harness("paxos-2r1w"));
  Message m;
  m.name = "Write";
  m.payload.key = 1;
  m.payload.value = 10;
  CHECK(key_of(m, config) == 1);
  m.name = "Prepare";  // bound with key:-1
  CHECK(key_of(m, config) == std::nullopt);
  m.name = "Unbound";
  CHECK(key_of(m, config) == std::nullopt);

  // Register messages carry the one implicit key.
  HarnessConfig reg = parse_harness(bundled_harness("register-2r1w"));
  Message r;
  r.name = "Read";
  r.payload.key = 0;
  CHECK(key_of(r, reg) == 0);
}

TEST_CASE("parse errors are reported") {
  CHECK_THROWS_AS(parse_harness("x = y\n"), HarnessError);  // content before a section
  CHECK_THROWS_AS(parse_harness("[spec]\nadt = map\n[targets]\nagents = 1\n"
                                "[invocations]\nRead = nonsense\n"),
                  HarnessError);
  CHECK_THROWS_AS(parse_harness("[spec]\nadt = map\n[targets]\nagents = 1\n"
                                "[invocations]\nRead = read-invocation\nRead = write-invocation\n"),
                  HarnessError);
  CHECK_THROWS_AS(parse_harness("[spec]\nadt = map\n[targets]\nagents = 1\n"
                                "[interleave]\nRead = key:7 rw:read\n"),
                  HarnessError);  // numeric key paths other than -1 are malformed
  CHECK_THROWS_AS(parse_harness("[targets]\nagents = 1\n"), HarnessError);  // no [spec]
  CHECK_THROWS_AS(parse_harness("[spec]\nadt = map\n"), HarnessError);      // no [targets]
}

TEST_CASE("per-key initial values parse into the spec state") {
  HarnessConfig config = parse_harness(
      "[spec]\nadt = map\ninit = 0\ninit.3 = 7\n[targets]\nagents = 1\n");
  CHECK(config.initState.at(3) == 7);
}

TEST_CASE("missing interleave section means wildcard keys and no exclusions") {
  HarnessConfig config = parse_harness("[spec]\nadt = map\n[targets]\nagents = 1\n");
  CHECK(config.keyInfo.empty());
  CHECK(config.exclusions.empty());
  Message m;
  m.name = "Anything";
  CHECK(key_of(m, config) == std::nullopt);
}
