#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linmc/actor.hpp"

// The five bundled actor systems under test.

namespace linmc {

struct BenchmarkSystem {
  SystemState initial;  // before invocation injection
  BehaviorTable behavior;
};

BenchmarkSystem build_correct_register(int agents = 2, int quorum = 2);
BenchmarkSystem build_buggy_register(int agents = 3, int quorum = 2,
                                     std::uint64_t bugSeed = 30);
BenchmarkSystem build_adr(int agents = 2, int retryLimit = 3);
BenchmarkSystem build_chord();  // node 1 joined, node 2 joining
BenchmarkSystem build_paxos_map(int agents = 3, int retryLimit = 6);

// register-correct | register-buggy | register-adr | openchord | paxos-map.
std::vector<std::string> benchmark_names();
BenchmarkSystem build_by_name(const std::string& name);

// Bundled harness text by name (register-2r1w, register-2r2w, chord-join,
// paxos-2r1w), or nullptr.
const char* bundled_harness(const std::string& name);
std::vector<std::string> bundled_harness_names();
// The bundled default harness for a benchmark name.
const char* default_harness_for(const std::string& benchmark);

}  // namespace linmc
