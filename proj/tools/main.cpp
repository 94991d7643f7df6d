#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "linmc/bench.hpp"
#include "linmc/explore.hpp"
#include "linmc/lincheck.hpp"
#include "linmc/report.hpp"

namespace {

std::string load_harness(const std::string& arg, std::string& nameOut) {
  if (const char* bundled = linmc::bundled_harness(arg)) {
    nameOut = arg;
    return bundled;
  }
  std::ifstream in(arg);
  if (!in) throw std::runtime_error("cannot open harness file '" + arg + "'");
  nameOut = arg;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_check(const std::string& benchmark, const std::string& harnessArg,
              const std::string& schedulerArg, std::size_t cutoff, std::uint64_t seed,
              int delayBudget, std::optional<std::size_t> srBudget, int reps,
              const std::string& emit, const std::string& outPath, bool dumpSchedules) {
  linmc::RunConfig rc;
  rc.benchmark = benchmark;
  std::string harness = harnessArg.empty() ? linmc::default_harness_for(benchmark) : harnessArg;
  rc.harnessText = load_harness(harness, rc.harnessName);
  auto kind = linmc::parse_scheduler_kind(schedulerArg);
  if (!kind) {
    std::cerr << "unknown scheduler '" << schedulerArg << "'\n";
    return 2;
  }
  rc.policy.kind = *kind;
  rc.policy.seed = seed;
  rc.policy.delayBudget = delayBudget;
  rc.policy.srBudget = srBudget;
  rc.cutoff = cutoff;
  rc.reps = reps;

  linmc::RunResult result = linmc::run_config(rc);

  std::ostringstream body;
  if (emit == "json") {
    nlohmann::json j = linmc::emit_json({result.metrics});
    j["benchmark"] = benchmark;
    j["harness"] = rc.harnessName;
    j["violations"] = result.violations;
    if (dumpSchedules) {
      linmc::BenchmarkSystem sys = linmc::build_by_name(benchmark);
      linmc::HarnessConfig config = linmc::parse_harness(rc.harnessText);
      linmc::SystemState initial = linmc::inject_invocations(sys.initial, config);
      linmc::ExploreOptions options;
      options.keepSchedules = true;
      linmc::ExplorationReport rep =
          linmc::explore(initial, sys.behavior, config, rc.policy, cutoff, options);
      j["schedules"] = rep.schedules;
    }
    body << j.dump(2) << "\n";
  } else {
    body << linmc::emit_csv({result.metrics});
    for (const linmc::History& h : result.violations)
      body << "# violation: " << linmc::format_history(h) << "\n";
  }
  if (outPath.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(outPath);
    if (!out) throw std::runtime_error("cannot write '" + outPath + "'");
    out << body.str();
  }
  return result.metrics.NL > 0 ? 3 : 0;
}

int run_lincheck(const std::string& historyPath, const std::string& adt, long long init) {
  nlohmann::json j;
  try {
    std::ifstream in(historyPath);
    if (!in) {
      std::cerr << "cannot open history file '" << historyPath << "'\n";
      return 2;
    }
    in >> j;
  } catch (const std::exception& e) {
    std::cerr << "malformed JSON: " << e.what() << "\n";
    return 2;
  }
  try {
    linmc::History history = j.get<linmc::History>();
    linmc::SequentialSpec spec;
    spec.adt = adt == "set" ? linmc::AdtKind::Set : linmc::AdtKind::Map;
    spec.defaultInit = init;
    linmc::WglOutcome outcome = linmc::wgl_check(history, spec);
    if (outcome.linearizable) {
      std::cout << "linearizable; witness:";
      for (int op : outcome.witness) std::cout << " " << op;
      std::cout << "\n";
      return 0;
    }
    std::cout << "not linearizable\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stateful model checker for actor systems with linearizability checking"};
  app.require_subcommand(1);

  // check
  std::string benchmark, harnessArg, scheduler = "EX", emit = "csv", outPath;
  std::size_t cutoff = 50000;
  std::uint64_t seed = 1;
  int delayBudget = 2, reps = 3;
  std::optional<std::size_t> srBudget;
  bool dumpSchedules = false;

  CLI::App* check = app.add_subcommand("check", "Explore a benchmark and check histories");
  check->add_option("--benchmark", benchmark, "register-correct | register-buggy | register-adr | openchord | paxos-map")
      ->required();
  check->add_option("--harness", harnessArg, "bundled harness name or file path");
  check->add_option("--scheduler", scheduler, "EX | SR | DB | DP | TD | IR | LV");
  check->add_option("--cutoff", cutoff, "schedule cutoff (default 50000)");
  check->add_option("--seed", seed, "base RNG seed");
  check->add_option("--delay-budget", delayBudget, "DB: total delay budget D");
  check->add_option("--sr-budget", srBudget, "SR: schedule budget (default 2x cutoff)");
  check->add_option("--reps", reps, "repetitions with derived seeds");
  check->add_option("--emit", emit, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  check->add_option("--out", outPath, "write the report to a file");
  check->add_flag("--dump-schedules", dumpSchedules, "include schedules in JSON output");

  // lincheck
  std::string historyPath, adt = "map";
  long long init = 0;
  CLI::App* lincheck = app.add_subcommand("lincheck", "Check one JSON history for linearizability");
  lincheck->add_option("history", historyPath, "history JSON file")->required();
  lincheck->add_option("--adt", adt, "map | set")->check(CLI::IsMember({"map", "set"}));
  lincheck->add_option("--init", init, "initial value of every key");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return run_check(benchmark, harnessArg, scheduler, cutoff, seed, delayBudget,
                       srBudget, reps, emit, outPath, dumpSchedules);
    return run_lincheck(historyPath, adt, init);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
