#include "linmc/bench.hpp"

namespace linmc {

namespace {

std::vector<AgentId> peers_of(AgentId self, Scalar n) {
  std::vector<AgentId> out;
  for (AgentId a = 1; a <= n; ++a)
    if (a != self) out.push_back(a);
  return out;
}

LocalState register_agent_state(int agents) {
  LocalState s;
  lsSet(s, "reg", 0);
  lsSet(s, "leader", 1);
  lsSet(s, "n", agents);
  return s;
}

Payload keyed(Scalar client) {
  Payload p;
  p.key = 0;
  p.client = client;
  return p;
}

}  // namespace

// Quorum-replicated register with a static leader (agent 1): backups forward
// requests, the leader tracks acks per client counting itself, and answers
// the client once a majority acknowledges.
BenchmarkSystem build_correct_register(int agents, int quorum) {
  BenchmarkSystem sys;
  for (AgentId a = 1; a <= agents; ++a)
    sys.initial.agents[a] = AgentInfo{"reg", register_agent_state(agents)};

  BehaviorTable& b = sys.behavior;
  b.ignoreAll("client");

  b.on("reg", "Write", [quorum](ActionContext& ctx) {
    AgentId leader = static_cast<AgentId>(lsGet(ctx.state, "leader"));
    if (ctx.self != leader) {
      ctx.send(leader, "Write", ctx.msg.payload);  // forward, no state change
      return;
    }
    Scalar client = *ctx.msg.payload.client;
    lsMap(ctx.state, "wacks")[client] = 1;  // counting self
    ctx.state["reg"] = *ctx.msg.payload.value;
    if (quorum <= 1) ctx.send(static_cast<AgentId>(client), "WriteAck", keyed(client));
    for (AgentId peer : peers_of(ctx.self, lsGet(ctx.state, "n"))) {
      Payload p = keyed(client);
      p.value = *ctx.msg.payload.value;
      ctx.send(peer, "WriteReplica", p);
    }
  });

  b.on("reg", "Read", [quorum](ActionContext& ctx) {
    AgentId leader = static_cast<AgentId>(lsGet(ctx.state, "leader"));
    if (ctx.self != leader) {
      ctx.send(leader, "Read", ctx.msg.payload);
      return;
    }
    Scalar client = *ctx.msg.payload.client;
    lsMap(ctx.state, "racks")[client] = 1;
    if (quorum <= 1) {
      Payload p = keyed(client);
      p.value = lsGet(ctx.state, "reg");
      ctx.send(static_cast<AgentId>(client), "ReadAck", p);
    }
    for (AgentId peer : peers_of(ctx.self, lsGet(ctx.state, "n")))
      ctx.send(peer, "ReadReplica", keyed(client));
  });

  b.on("reg", "WriteReplica", [](ActionContext& ctx) {
    ctx.state["reg"] = *ctx.msg.payload.value;
    ctx.send(ctx.msg.sender, "WriteReplicaAck", keyed(*ctx.msg.payload.client));
  });

  b.on("reg", "ReadReplica", [](ActionContext& ctx) {
    Payload p = keyed(*ctx.msg.payload.client);
    p.value = lsGet(ctx.state, "reg");
    ctx.send(ctx.msg.sender, "ReadReplicaAck", p);
  });

  b.on("reg", "WriteReplicaAck", [quorum](ActionContext& ctx) {
    Scalar client = *ctx.msg.payload.client;
    Scalar acks = ++lsMap(ctx.state, "wacks")[client];
    if (acks == quorum) ctx.send(static_cast<AgentId>(client), "WriteAck", keyed(client));
  });

  b.on("reg", "ReadReplicaAck", [quorum](ActionContext& ctx) {
    Scalar client = *ctx.msg.payload.client;
    Scalar acks = ++lsMap(ctx.state, "racks")[client];
    if (acks == quorum) {
      Payload p = keyed(client);
      p.value = lsGet(ctx.state, "reg");
      ctx.send(static_cast<AgentId>(client), "ReadAck", p);
    }
  });

  return sys;
}

// Same protocol, two planted bugs: the leader acknowledges writes before any
// replication, and reads answer with the last replica ack's register value
// (plus a rare fabricated value derived deterministically from the message
// seq, so violating schedules replay exactly).
BenchmarkSystem build_buggy_register(int agents, int quorum, std::uint64_t bugSeed) {
  BenchmarkSystem sys;
  for (AgentId a = 1; a <= agents; ++a)
    sys.initial.agents[a] = AgentInfo{"breg", register_agent_state(agents)};

  BehaviorTable& b = sys.behavior;
  b.ignoreAll("client");

  b.on("breg", "Write", [](ActionContext& ctx) {
    AgentId leader = static_cast<AgentId>(lsGet(ctx.state, "leader"));
    if (ctx.self != leader) {
      ctx.send(leader, "Write", ctx.msg.payload);
      return;
    }
    Scalar client = *ctx.msg.payload.client;
    ctx.state["reg"] = *ctx.msg.payload.value;
    ctx.send(static_cast<AgentId>(client), "WriteAck", keyed(client));  // early ack
    for (AgentId peer : peers_of(ctx.self, lsGet(ctx.state, "n"))) {
      Payload p = keyed(client);
      p.value = *ctx.msg.payload.value;
      ctx.send(peer, "WriteReplica", p);
    }
  });

  b.on("breg", "Read", [](ActionContext& ctx) {
    AgentId leader = static_cast<AgentId>(lsGet(ctx.state, "leader"));
    if (ctx.self != leader) {
      ctx.send(leader, "Read", ctx.msg.payload);
      return;
    }
    Scalar client = *ctx.msg.payload.client;
    lsMap(ctx.state, "racks")[client] = 1;
    lsMap(ctx.state, "rval")[client] = lsGet(ctx.state, "reg");
    for (AgentId peer : peers_of(ctx.self, lsGet(ctx.state, "n")))
      ctx.send(peer, "ReadReplica", keyed(client));
  });

  b.on("breg", "WriteReplica", [](ActionContext& ctx) {
    ctx.state["reg"] = *ctx.msg.payload.value;
    ctx.send(ctx.msg.sender, "WriteReplicaAck", keyed(*ctx.msg.payload.client));
  });

  b.on("breg", "ReadReplica", [](ActionContext& ctx) {
    Payload p = keyed(*ctx.msg.payload.client);
    p.value = lsGet(ctx.state, "reg");
    ctx.send(ctx.msg.sender, "ReadReplicaAck", p);
  });

  b.on("breg", "WriteReplicaAck", [](ActionContext&) {});  // acks ignored

  b.on("breg", "ReadReplicaAck", [quorum, bugSeed](ActionContext& ctx) {
    Scalar client = *ctx.msg.payload.client;
    Scalar observed = *ctx.msg.payload.value;
    std::uint64_t mix = bugSeed * 0x9E3779B97F4A7C15ull + ctx.msg.seq * 0xBF58476D1CE4E5B9ull;
    if ((mix >> 58) == 0) observed = 900 + static_cast<Scalar>(mix % 100);  // thin air
    lsMap(ctx.state, "rval")[client] = observed;  // last ack wins, however stale
    Scalar acks = ++lsMap(ctx.state, "racks")[client];
    if (acks == quorum) {
      Payload p = keyed(client);
      p.value = lsMap(ctx.state, "rval")[client];
      ctx.send(static_cast<AgentId>(client), "ReadAck", p);
    }
  });

  return sys;
}

// All-leader register: every agent serves requests directly, replicating with
// per-agent monotone tags; a replica holding a newer tag NACKs, and the
// originator retries the round with a fresher tag up to the retry limit.
BenchmarkSystem build_adr(int agents, int retryLimit) {
  BenchmarkSystem sys;
  for (AgentId a = 1; a <= agents; ++a) {
    LocalState s;
    lsSet(s, "reg", 0);
    lsSet(s, "regtag", 0);
    lsSet(s, "ctr", 0);
    lsSet(s, "n", agents);
    sys.initial.agents[a] = AgentInfo{"adr", s};
  }
  int quorum = agents / 2 + 1;

  BehaviorTable& b = sys.behavior;
  b.ignoreAll("client");

  auto start_round = [](ActionContext& ctx, Scalar client) {
    Scalar ctr = lsGet(ctx.state, "ctr") + 1;
    lsSet(ctx.state, "ctr", ctr);
    Scalar tag = ctr * 16 + ctx.self;
    lsMap(ctx.state, "wtag")[client] = tag;
    lsMap(ctx.state, "wacks")[client] = 1;  // counting self
    Scalar value = lsMap(ctx.state, "wval")[client];
    if (tag > lsGet(ctx.state, "regtag")) {
      ctx.state["reg"] = value;
      lsSet(ctx.state, "regtag", tag);
    }
    for (AgentId peer : peers_of(ctx.self, lsGet(ctx.state, "n"))) {
      Payload p = keyed(client);
      p.value = value;
      p.tag = tag;
      ctx.send(peer, "WriteReplica", p);
    }
  };

  b.on("adr", "Write", [start_round](ActionContext& ctx) {
    Scalar client = *ctx.msg.payload.client;
    lsMap(ctx.state, "wval")[client] = *ctx.msg.payload.value;
    lsMap(ctx.state, "wretries")[client] = 0;
    start_round(ctx, client);
  });

  b.on("adr", "WriteReplica", [](ActionContext& ctx) {
    Scalar tag = *ctx.msg.payload.tag;
    Payload p = keyed(*ctx.msg.payload.client);
    p.tag = tag;
    if (tag > lsGet(ctx.state, "regtag")) {
      ctx.state["reg"] = *ctx.msg.payload.value;
      lsSet(ctx.state, "regtag", tag);
      ctx.send(ctx.msg.sender, "WriteReplicaAck", p);
    } else {
      ctx.send(ctx.msg.sender, "WriteReplicaNack", p);
    }
  });

  b.on("adr", "WriteReplicaAck", [quorum](ActionContext& ctx) {
    Scalar client = *ctx.msg.payload.client;
    if (*ctx.msg.payload.tag != lsMap(ctx.state, "wtag")[client]) return;  // stale round
    Scalar acks = ++lsMap(ctx.state, "wacks")[client];
    if (acks == quorum) ctx.send(static_cast<AgentId>(client), "WriteAck", keyed(client));
  });

  b.on("adr", "WriteReplicaNack", [retryLimit, start_round](ActionContext& ctx) {
    Scalar client = *ctx.msg.payload.client;
    if (*ctx.msg.payload.tag != lsMap(ctx.state, "wtag")[client]) return;
    Scalar retries = lsMap(ctx.state, "wretries")[client];
    if (retries >= retryLimit) return;  // give up: client never answered
    lsMap(ctx.state, "wretries")[client] = retries + 1;
    start_round(ctx, client);
  });

  b.on("adr", "Read", [quorum](ActionContext& ctx) {
    Scalar client = *ctx.msg.payload.client;
    lsMap(ctx.state, "racks")[client] = 1;
    if (quorum <= 1) {
      Payload p = keyed(client);
      p.value = lsGet(ctx.state, "reg");
      ctx.send(static_cast<AgentId>(client), "ReadAck", p);
    }
    for (AgentId peer : peers_of(ctx.self, lsGet(ctx.state, "n")))
      ctx.send(peer, "ReadReplica", keyed(client));
  });

  b.on("adr", "ReadReplica", [](ActionContext& ctx) {
    Payload p = keyed(*ctx.msg.payload.client);
    p.value = lsGet(ctx.state, "reg");
    ctx.send(ctx.msg.sender, "ReadReplicaAck", p);
  });

  b.on("adr", "ReadReplicaAck", [quorum](ActionContext& ctx) {
    Scalar client = *ctx.msg.payload.client;
    Scalar acks = ++lsMap(ctx.state, "racks")[client];
    if (acks == quorum) {
      Payload p = keyed(client);
      p.value = lsGet(ctx.state, "reg");
      ctx.send(static_cast<AgentId>(client), "ReadAck", p);
    }
  });

  return sys;
}

}  // namespace linmc
