#include "linmc/bench.hpp"

namespace linmc {

namespace {

std::vector<AgentId> peers_of(AgentId self, Scalar n) {
  std::vector<AgentId> out;
  for (AgentId a = 1; a <= n; ++a)
    if (a != self) out.push_back(a);
  return out;
}

// Per-agent acceptor and log state live in scalar maps keyed by slot; the
// per-operation proposer state is keyed by the requesting client id (one
// operation per client).

Scalar next_free_slot(LocalState& s) {
  Scalar slot = 1;
  while (lsMap(s, "logkey").count(slot)) ++slot;
  return slot;
}

struct Chosen {
  Scalar key = 0, value = 0, isRead = 0;
};

void commit_slot(LocalState& s, Scalar slot, const Chosen& c, Scalar proposal) {
  lsMap(s, "logkey")[slot] = c.key;
  lsMap(s, "logval")[slot] = c.value;
  lsMap(s, "logread")[slot] = c.isRead;
  // Keep the acceptor view at least as new, so later prepares adopt it.
  if (proposal > lsMap(s, "accpid")[slot]) {
    lsMap(s, "accpid")[slot] = proposal;
    lsMap(s, "acckey")[slot] = c.key;
    lsMap(s, "accval")[slot] = c.value;
    lsMap(s, "accread")[slot] = c.isRead;
  }
}

}  // namespace

// Multi-Paxos replicated map. Writes are proposed by whichever agent the
// client contacted; the leader (agent 1) serializes reads through the log as
// committed read markers and answers from the committed prefix, which keeps
// leader reads linearizable. Phase-1/2 rejections retry with a later proposal
// id; losing a slot to an adopted value re-proposes at the next slot, all
// bounded by the retry limit (an exhausted operation leaves its client
// unanswered).
BenchmarkSystem build_paxos_map(int agents, int retryLimit) {
  BenchmarkSystem sys;
  for (AgentId a = 1; a <= agents; ++a) {
    LocalState s;
    lsSet(s, "n", agents);
    lsSet(s, "leader", 1);
    sys.initial.agents[a] = AgentInfo{"paxos", s};
  }
  int majority = agents / 2 + 1;

  BehaviorTable& b = sys.behavior;
  b.ignoreAll("client");

  // Start (or restart) phase 1 for the operation owned by `client`,
  // counting the proposer's own promise when it can still give one.
  auto start_phase1 = [](ActionContext& ctx, Scalar client) {
    LocalState& s = ctx.state;
    Scalar slot = lsMap(s, "pslot")[client];
    Scalar pid = lsMap(s, "pround")[client] * 16 + ctx.self;
    lsMap(s, "phase")[client] = 1;
    lsMap(s, "bestpid")[client] = 0;
    if (pid > lsMap(s, "promised")[slot]) {
      lsMap(s, "promised")[slot] = pid;
      lsMap(s, "prepacks")[client] = 1;
      Scalar accpid = lsMap(s, "accpid")[slot];
      if (accpid > 0) {
        lsMap(s, "bestpid")[client] = accpid;
        lsMap(s, "bestkey")[client] = lsMap(s, "acckey")[slot];
        lsMap(s, "bestval")[client] = lsMap(s, "accval")[slot];
        lsMap(s, "bestread")[client] = lsMap(s, "accread")[slot];
      }
    } else {
      lsMap(s, "prepacks")[client] = 0;
    }
    for (AgentId peer : peers_of(ctx.self, lsGet(s, "n"))) {
      Payload p;
      p.slot = slot;
      p.proposal = pid;
      p.client = client;
      ctx.send(peer, "Prepare", p);
    }
  };

  auto retry = [start_phase1, retryLimit](ActionContext& ctx, Scalar client) {
    LocalState& s = ctx.state;
    Scalar attempts = ++lsMap(s, "attempts")[client];
    if (attempts > retryLimit) {
      lsMap(s, "phase")[client] = 0;  // give up; the client stays unanswered
      return;
    }
    ++lsMap(s, "pround")[client];
    start_phase1(ctx, client);
  };

  auto start_op = [start_phase1](ActionContext& ctx, Scalar client, Scalar key,
                                 Scalar value, Scalar isRead) {
    LocalState& s = ctx.state;
    lsMap(s, "pkey")[client] = key;
    lsMap(s, "pval")[client] = value;
    lsMap(s, "pread")[client] = isRead;
    lsMap(s, "pslot")[client] = next_free_slot(s);
    lsMap(s, "pround")[client] = 1;
    lsMap(s, "attempts")[client] = 0;
    start_phase1(ctx, client);
  };

  auto begin_phase2 = [majority](ActionContext& ctx, Scalar client) {
    LocalState& s = ctx.state;
    Scalar slot = lsMap(s, "pslot")[client];
    Scalar pid = lsMap(s, "pround")[client] * 16 + ctx.self;
    lsMap(s, "phase")[client] = 2;
    bool adopted = lsMap(s, "bestpid")[client] > 0;
    Chosen c;
    c.key = adopted ? lsMap(s, "bestkey")[client] : lsMap(s, "pkey")[client];
    c.value = adopted ? lsMap(s, "bestval")[client] : lsMap(s, "pval")[client];
    c.isRead = adopted ? lsMap(s, "bestread")[client] : lsMap(s, "pread")[client];
    lsMap(s, "p2key")[client] = c.key;
    lsMap(s, "p2val")[client] = c.value;
    lsMap(s, "p2read")[client] = c.isRead;
    lsMap(s, "p2adopted")[client] = adopted ? 1 : 0;
    if (pid >= lsMap(s, "promised")[slot]) {  // accept our own proposal
      lsMap(s, "promised")[slot] = pid;
      lsMap(s, "accpid")[slot] = pid;
      lsMap(s, "acckey")[slot] = c.key;
      lsMap(s, "accval")[slot] = c.value;
      lsMap(s, "accread")[slot] = c.isRead;
      lsMap(s, "accacks")[client] = 1;
    } else {
      lsMap(s, "accacks")[client] = 0;
    }
    for (AgentId peer : peers_of(ctx.self, lsGet(s, "n"))) {
      Payload p;
      p.slot = slot;
      p.proposal = pid;
      p.key = c.key;
      p.value = c.value;
      p.aux = c.isRead;
      p.client = client;
      ctx.send(peer, "Accept", p);
    }
    // A 1-agent "cluster" would commit immediately; not used by the harnesses.
  };

  auto finish_commit = [retry](ActionContext& ctx, Scalar client) {
    LocalState& s = ctx.state;
    Scalar slot = lsMap(s, "pslot")[client];
    Scalar pid = lsMap(s, "pround")[client] * 16 + ctx.self;
    Chosen c{lsMap(s, "p2key")[client], lsMap(s, "p2val")[client], lsMap(s, "p2read")[client]};
    commit_slot(s, slot, c, pid);
    lsMap(s, "phase")[client] = 0;
    for (AgentId peer : peers_of(ctx.self, lsGet(s, "n"))) {
      Payload p;
      p.slot = slot;
      p.proposal = pid;
      p.key = c.key;
      p.value = c.value;
      p.aux = c.isRead;
      ctx.send(peer, "Commit", p);
    }
    if (lsMap(s, "p2adopted")[client]) {
      // Someone else's value took our slot; move our operation one slot up.
      lsMap(s, "pslot")[client] = slot + 1;
      lsMap(s, "pround")[client] = 0;  // retry() advances it to a fresh round
      retry(ctx, client);
      return;
    }
    if (c.isRead) {
      // Answer from the committed prefix below the read marker.
      Scalar best = 0, bestSlot = 0;
      for (const auto& [sl, k] : lsMap(s, "logkey")) {
        if (sl >= slot || k != c.key || lsMap(s, "logread")[sl]) continue;
        if (sl > bestSlot) {
          bestSlot = sl;
          best = lsMap(s, "logval")[sl];
        }
      }
      Payload p;
      p.key = c.key;
      p.value = best;
      p.client = client;
      ctx.send(static_cast<AgentId>(client), "ReadAck", p);
    } else {
      Payload p;
      p.key = c.key;
      p.client = client;
      ctx.send(static_cast<AgentId>(client), "WriteAck", p);
    }
  };

  b.on("paxos", "Write", [start_op](ActionContext& ctx) {
    start_op(ctx, *ctx.msg.payload.client, *ctx.msg.payload.key, *ctx.msg.payload.value, 0);
  });

  b.on("paxos", "Read", [start_op](ActionContext& ctx) {
    AgentId leader = static_cast<AgentId>(lsGet(ctx.state, "leader"));
    if (ctx.self != leader) {
      ctx.send(leader, "Read", ctx.msg.payload);  // reads are the leader's job
      return;
    }
    start_op(ctx, *ctx.msg.payload.client, *ctx.msg.payload.key, 0, 1);
  });

  b.on("paxos", "Prepare", [](ActionContext& ctx) {
    LocalState& s = ctx.state;
    Scalar slot = *ctx.msg.payload.slot;
    Scalar pid = *ctx.msg.payload.proposal;
    Payload p;
    p.slot = slot;
    p.proposal = pid;
    p.client = *ctx.msg.payload.client;
    if (pid > lsMap(s, "promised")[slot]) {
      lsMap(s, "promised")[slot] = pid;
      p.aux = lsMap(s, "accpid")[slot];  // 0 when nothing accepted yet
      if (*p.aux > 0) {
        p.key = lsMap(s, "acckey")[slot];
        p.value = lsMap(s, "accval")[slot];
        p.tag = lsMap(s, "accread")[slot];
      }
      ctx.send(ctx.msg.sender, "PrepareAck", p);
    } else {
      ctx.send(ctx.msg.sender, "PrepareNack", p);
    }
  });

  b.on("paxos", "PrepareAck", [majority, begin_phase2](ActionContext& ctx) {
    LocalState& s = ctx.state;
    Scalar client = *ctx.msg.payload.client;
    Scalar pid = lsMap(s, "pround")[client] * 16 + ctx.self;
    if (lsMap(s, "phase")[client] != 1 || *ctx.msg.payload.proposal != pid ||
        *ctx.msg.payload.slot != lsMap(s, "pslot")[client])
      return;  // stale
    Scalar ackPid = ctx.msg.payload.aux.value_or(0);
    if (ackPid > lsMap(s, "bestpid")[client]) {
      lsMap(s, "bestpid")[client] = ackPid;
      lsMap(s, "bestkey")[client] = *ctx.msg.payload.key;
      lsMap(s, "bestval")[client] = *ctx.msg.payload.value;
      lsMap(s, "bestread")[client] = ctx.msg.payload.tag.value_or(0);
    }
    if (++lsMap(s, "prepacks")[client] == majority) begin_phase2(ctx, client);
  });

  b.on("paxos", "PrepareNack", [retry](ActionContext& ctx) {
    LocalState& s = ctx.state;
    Scalar client = *ctx.msg.payload.client;
    Scalar pid = lsMap(s, "pround")[client] * 16 + ctx.self;
    if (lsMap(s, "phase")[client] != 1 || *ctx.msg.payload.proposal != pid ||
        *ctx.msg.payload.slot != lsMap(s, "pslot")[client])
      return;
    retry(ctx, client);
  });

  b.on("paxos", "Accept", [](ActionContext& ctx) {
    LocalState& s = ctx.state;
    Scalar slot = *ctx.msg.payload.slot;
    Scalar pid = *ctx.msg.payload.proposal;
    Payload p;
    p.slot = slot;
    p.proposal = pid;
    p.client = *ctx.msg.payload.client;
    if (pid >= lsMap(s, "promised")[slot]) {
      lsMap(s, "promised")[slot] = pid;
      lsMap(s, "accpid")[slot] = pid;
      lsMap(s, "acckey")[slot] = *ctx.msg.payload.key;
      lsMap(s, "accval")[slot] = *ctx.msg.payload.value;
      lsMap(s, "accread")[slot] = ctx.msg.payload.aux.value_or(0);
      ctx.send(ctx.msg.sender, "AcceptAck", p);
    } else {
      ctx.send(ctx.msg.sender, "AcceptNack", p);
    }
  });

  b.on("paxos", "AcceptAck", [majority, finish_commit](ActionContext& ctx) {
    LocalState& s = ctx.state;
    Scalar client = *ctx.msg.payload.client;
    Scalar pid = lsMap(s, "pround")[client] * 16 + ctx.self;
    if (lsMap(s, "phase")[client] != 2 || *ctx.msg.payload.proposal != pid ||
        *ctx.msg.payload.slot != lsMap(s, "pslot")[client])
      return;
    if (++lsMap(s, "accacks")[client] == majority) finish_commit(ctx, client);
  });

  b.on("paxos", "AcceptNack", [retry](ActionContext& ctx) {
    LocalState& s = ctx.state;
    Scalar client = *ctx.msg.payload.client;
    Scalar pid = lsMap(s, "pround")[client] * 16 + ctx.self;
    if (lsMap(s, "phase")[client] != 2 || *ctx.msg.payload.proposal != pid ||
        *ctx.msg.payload.slot != lsMap(s, "pslot")[client])
      return;
    retry(ctx, client);
  });

  b.on("paxos", "Commit", [](ActionContext& ctx) {
    Chosen c{*ctx.msg.payload.key, *ctx.msg.payload.value,
             ctx.msg.payload.aux.value_or(0)};
    commit_slot(ctx.state, *ctx.msg.payload.slot, c, *ctx.msg.payload.proposal);
  });

  return sys;
}

}  // namespace linmc
