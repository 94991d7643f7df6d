#include "linmc/bench.hpp"

#include <stdexcept>

namespace linmc {

namespace {

// Shared by the correct, buggy, and all-leader registers; the buggy variant
// drops exclusions by construction (there are none to drop).
const char* kRegister2r1w = R"(# Two reads and one write against the replicated register.
[spec]
adt = map
init = 0

[targets]
agents = 1 2

[init]
leader = 1
client read
client read
client write 1

[invocations]
Read = read-invocation
Write = write-invocation

[internal]
ReadAck = read-response
WriteAck = write-response
ReadReplica = replication
WriteReplica = replication
ReadReplicaAck = ack
WriteReplicaAck = ack
WriteReplicaNack = ack

[interleave]
Read = key:key rw:read
ReadAck = key:key rw:read
ReadReplica = key:key rw:read
ReadReplicaAck = key:key rw:read
Write = key:key rw:write
WriteAck = key:key rw:write
WriteReplica = key:key rw:write
WriteReplicaAck = key:key rw:write
WriteReplicaNack = key:key rw:write
)";

const char* kRegister2r2w = R"(# Two reads and two competing writes.
[spec]
adt = map
init = 0

[targets]
agents = 1 2

[init]
leader = 1
client read
client read
client write 1
client write 2

[invocations]
Read = read-invocation
Write = write-invocation

[internal]
ReadAck = read-response
WriteAck = write-response
ReadReplica = replication
WriteReplica = replication
ReadReplicaAck = ack
WriteReplicaAck = ack
WriteReplicaNack = ack

[interleave]
Read = key:key rw:read
ReadAck = key:key rw:read
ReadReplica = key:key rw:read
ReadReplicaAck = key:key rw:read
Write = key:key rw:write
WriteAck = key:key rw:write
WriteReplica = key:key rw:write
WriteReplicaAck = key:key rw:write
WriteReplicaNack = key:key rw:write
# Quorum-count acks only bump a counter at the leader: they never touch the
# register cell, send nothing back into the cluster, and carry no value a
# client observes, so LiViola runs them in arrival order.
exclude WriteReplicaAck
exclude WriteReplicaNack
)";

const char* kChordJoin = R"(# Node 2 joins node 1's ring while clients read and write key 2.
[spec]
adt = map
init = 0

[targets]
agents = 1 2

[init]
join = 2 1
client read 2 @1
client write 2 10 @1
client read 2 @2

[invocations]
Read = read-invocation
Write = write-invocation

[internal]
ReadResp = read-response
WriteResp = write-response
FindSucc = replication
SuccFound = replication
UpdatePred = replication
IntReadResp = ack
IntWriteResp = ack

[interleave]
Read = key:key rw:read
ReadResp = key:key rw:read
IntReadResp = key:key rw:read
Write = key:key rw:write
WriteResp = key:key rw:write
IntWriteResp = key:key rw:write
FindSucc = key:-1 rw:both
SuccFound = key:-1 rw:both
UpdatePred = key:-1 rw:both
)";

const char* kPaxos2r1w = R"(# Two leader reads and one remote write on the Paxos-replicated map.
[spec]
adt = map
init = 0

[targets]
agents = 1 2 3

[init]
leader = 1
client read 1 @1
client read 1 @1
client write 1 10 @2

[invocations]
Read = read-invocation
Write = write-invocation

[internal]
ReadAck = read-response
WriteAck = write-response
Prepare = replication
Accept = replication
Commit = replication
PrepareAck = ack
PrepareNack = ack
AcceptAck = ack
AcceptNack = ack

[interleave]
Read = key:key rw:read
ReadAck = key:key rw:read
Write = key:key rw:write
WriteAck = key:key rw:write
Prepare = key:-1 rw:write
PrepareAck = key:-1 rw:write
PrepareNack = key:-1 rw:write
Accept = key:key rw:write
AcceptAck = key:-1 rw:write
AcceptNack = key:-1 rw:write
Commit = key:key rw:write
)";

}  // namespace

std::vector<std::string> benchmark_names() {
  return {"register-correct", "register-buggy", "register-adr", "openchord", "paxos-map"};
}

BenchmarkSystem build_by_name(const std::string& name) {
  if (name == "register-correct") return build_correct_register();
  if (name == "register-buggy") return build_buggy_register();
  if (name == "register-adr") return build_adr();
  if (name == "openchord") return build_chord();
  if (name == "paxos-map") return build_paxos_map();
  throw std::runtime_error("unknown benchmark '" + name + "'");
}

const char* bundled_harness(const std::string& name) {
  if (name == "register-2r1w") return kRegister2r1w;
  if (name == "register-2r2w") return kRegister2r2w;
  if (name == "chord-join") return kChordJoin;
  if (name == "paxos-2r1w") return kPaxos2r1w;
  return nullptr;
}

std::vector<std::string> bundled_harness_names() {
  return {"register-2r1w", "register-2r2w", "chord-join", "paxos-2r1w"};
}

const char* default_harness_for(const std::string& benchmark) {
  if (benchmark == "openchord") return "chord-join";
  if (benchmark == "paxos-map") return "paxos-2r1w";
  return "register-2r1w";
}

}  // namespace linmc
