#include "linmc/bench.hpp"

namespace linmc {

namespace {

constexpr Scalar kRingSize = 16;  // identity hash over ids 1..16

// k in the ring interval (lo, hi], mod the ring size.
bool in_interval(Scalar k, Scalar lo, Scalar hi) {
  if (lo == hi) return true;  // single-node ring owns everything
  if (lo < hi) return lo < k && k <= hi;
  return k > lo || k <= hi;
}

bool owns(const LocalState& s, AgentId self, Scalar key) {
  return in_interval(key % kRingSize, lsGet(s, "pred") % kRingSize, self % kRingSize);
}

}  // namespace

// Two-node Chord join: node 1 forms the ring, node 2 joins via FindSucc.
// A node that has not finished joining still believes it is its own successor
// and predecessor, so it answers for keys it does not actually own — the bug
// under study.
BenchmarkSystem build_chord() {
  BenchmarkSystem sys;
  for (AgentId a : {1, 2}) {
    LocalState s;
    lsSet(s, "pred", a);  // own successor/predecessor by default
    lsSet(s, "succ", a);
    sys.initial.agents[a] = AgentInfo{"chord", s};
  }

  BehaviorTable& b = sys.behavior;
  b.ignoreAll("client");

  b.on("chord", "Read", [](ActionContext& ctx) {
    Scalar key = *ctx.msg.payload.key;
    if (!owns(ctx.state, ctx.self, key)) {
      ctx.send(static_cast<AgentId>(lsGet(ctx.state, "succ")), "Read", ctx.msg.payload);
      return;
    }
    Payload p = ctx.msg.payload;
    p.value = lsMap(ctx.state, "kv").count(key) ? lsMap(ctx.state, "kv")[key] : 0;
    ctx.send(ctx.self, "IntReadResp", p);  // value captured now, delivered later
  });

  b.on("chord", "Write", [](ActionContext& ctx) {
    Scalar key = *ctx.msg.payload.key;
    if (!owns(ctx.state, ctx.self, key)) {
      ctx.send(static_cast<AgentId>(lsGet(ctx.state, "succ")), "Write", ctx.msg.payload);
      return;
    }
    lsMap(ctx.state, "kv")[key] = *ctx.msg.payload.value;
    ctx.send(ctx.self, "IntWriteResp", ctx.msg.payload);
  });

  b.on("chord", "IntReadResp", [](ActionContext& ctx) {
    ctx.send(static_cast<AgentId>(*ctx.msg.payload.client), "ReadResp", ctx.msg.payload);
  });

  b.on("chord", "IntWriteResp", [](ActionContext& ctx) {
    Payload p;
    p.key = ctx.msg.payload.key;
    p.client = ctx.msg.payload.client;
    ctx.send(static_cast<AgentId>(*ctx.msg.payload.client), "WriteResp", p);
  });

  b.on("chord", "FindSucc", [](ActionContext& ctx) {
    AgentId joiner = static_cast<AgentId>(*ctx.msg.payload.aux);
    // Two-node ring: the contact adopts the joiner on both sides and tells
    // the joiner its successor and predecessor.
    lsSet(ctx.state, "succ", joiner);
    lsSet(ctx.state, "pred", joiner);
    Payload p;
    p.aux = ctx.self;
    ctx.send(joiner, "SuccFound", p);
    ctx.send(joiner, "UpdatePred", p);
  });

  b.on("chord", "SuccFound", [](ActionContext& ctx) {
    lsSet(ctx.state, "succ", *ctx.msg.payload.aux);
  });

  b.on("chord", "UpdatePred", [](ActionContext& ctx) {
    lsSet(ctx.state, "pred", *ctx.msg.payload.aux);
  });

  return sys;
}

}  // namespace linmc
