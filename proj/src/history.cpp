#include "linmc/history.hpp"

#include <map>
#include <sstream>

namespace linmc {

std::string History::dedupe_key() const {
  std::ostringstream out;
  auto opt = [&](const std::optional<Scalar>& v) {
    if (v) out << *v;
    else out << "_";
  };
  for (const HistoryEvent& e : events) {
    out << (e.kind == HistoryEvent::Kind::Invocation ? "i" : "r");
    out << ":" << e.op << ":";
    opt(e.key);
    out << ":";
    opt(e.argValue);
    out << ":";
    opt(e.returnValue);
    out << ":" << e.clientId << ";";
  }
  return out.str();
}

History schedule_to_history(const Schedule& schedule, const HarnessConfig& config) {
  History h;
  std::map<AgentId, int> openOp;  // client -> opIndex of its pending invocation
  int nextOp = 1;
  for (const ScheduleEntry& entry : schedule.entries) {
    const Message& m = entry.receive.message;
    bool toClient = config.isClient(m.receiver);
    bool fromClient = config.isClient(m.sender);

    if (fromClient && !toClient) {
      // A client's request executing at an ADT agent: the invocation event.
      Category c = classify_name(m.name, config);
      if (c != Category::ReadInvocation && c != Category::WriteInvocation)
        throw HarnessError("client-sent message '" + m.name + "' is not an invocation");
      HistoryEvent e;
      e.kind = HistoryEvent::Kind::Invocation;
      e.opIndex = nextOp++;
      e.op = c == Category::ReadInvocation ? "read" : "write";
      e.key = m.payload.key;
      if (c == Category::WriteInvocation) e.argValue = m.payload.value;
      e.clientId = m.sender;
      openOp[e.clientId] = e.opIndex;
      h.events.push_back(std::move(e));
    } else if (toClient) {
      Category c = classify_name(m.name, config);
      if (c != Category::ReadResponse && c != Category::WriteResponse)
        throw HarnessError("client-bound message '" + m.name + "' is not a response");
      auto it = openOp.find(m.receiver);
      if (it == openOp.end())
        throw HarnessError("response to client with no open invocation");
      HistoryEvent e;
      e.kind = HistoryEvent::Kind::Response;
      e.opIndex = it->second;
      e.op = c == Category::ReadResponse ? "read" : "write";
      e.key = m.payload.key;
      if (c == Category::ReadResponse) e.returnValue = m.payload.value;
      e.clientId = m.receiver;
      openOp.erase(it);
      h.events.push_back(std::move(e));
    }
    // ADT-internal traffic is dropped.
  }
  h.complete = openOp.empty();
  return h;
}

std::vector<UniqueHistory> dedupe_histories(const std::vector<History>& histories) {
  std::vector<UniqueHistory> out;
  std::map<std::string, size_t> seen;  // key -> index into out
  for (size_t i = 0; i < histories.size(); ++i) {
    std::string key = histories[i].dedupe_key();
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(std::move(key), out.size());
      out.push_back(UniqueHistory{histories[i], 1, i});
    } else {
      ++out[it->second].count;
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const ScheduleEntry& e) {
  j = nlohmann::json{
      {"index", e.index},
      {"seq", e.receive.message.seq},
      {"sender", e.sender()},
      {"receiver", e.receiver()},
      {"name", e.name()},
  };
  const Payload& p = e.payload();
  if (p.key) j["key"] = *p.key;
  if (p.value) j["value"] = *p.value;
  if (p.client) j["client"] = *p.client;
}

void to_json(nlohmann::json& j, const Schedule& s) {
  j = nlohmann::json{{"entries", s.entries}};
}

void to_json(nlohmann::json& j, const HistoryEvent& e) {
  j = nlohmann::json{
      {"kind", e.kind == HistoryEvent::Kind::Invocation ? "invocation" : "response"},
      {"opIndex", e.opIndex},
      {"op", e.op},
      {"clientId", e.clientId},
  };
  if (e.key) j["key"] = *e.key;
  if (e.argValue) j["arg"] = *e.argValue;
  if (e.returnValue) j["return"] = *e.returnValue;
}

void from_json(const nlohmann::json& j, HistoryEvent& e) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "invocation") e.kind = HistoryEvent::Kind::Invocation;
  else if (kind == "response") e.kind = HistoryEvent::Kind::Response;
  else throw HarnessError("event kind must be invocation or response");
  e.opIndex = j.at("opIndex").get<int>();
  e.op = j.at("op").get<std::string>();
  e.clientId = j.value("clientId", 0);
  if (j.contains("key")) e.key = j.at("key").get<Scalar>();
  if (j.contains("arg")) e.argValue = j.at("arg").get<Scalar>();
  if (j.contains("return")) e.returnValue = j.at("return").get<Scalar>();
}

void to_json(nlohmann::json& j, const History& h) {
  j = nlohmann::json{{"events", h.events}, {"complete", h.complete}};
}

void from_json(const nlohmann::json& j, History& h) {
  h.events = j.at("events").get<std::vector<HistoryEvent>>();
  std::set<int> open;
  for (const HistoryEvent& e : h.events) {
    if (e.kind == HistoryEvent::Kind::Invocation) open.insert(e.opIndex);
    else open.erase(e.opIndex);
  }
  h.complete = open.empty();
}

std::string format_history(const History& h) {
  std::ostringstream out;
  bool first = true;
  for (const HistoryEvent& e : h.events) {
    if (!first) out << "; ";
    first = false;
    bool inv = e.kind == HistoryEvent::Kind::Invocation;
    out << (inv ? "inv" : "res") << e.opIndex << "(";
    bool any = false;
    if (inv) {
      out << (e.op == "read" ? "Rd" : "Wr");
      any = true;
    }
    if (inv && e.key) out << ", k" << *e.key;
    if (e.argValue) out << ", " << *e.argValue;
    if (!inv && e.returnValue) out << (any ? ", " : "") << *e.returnValue;
    out << ")";
  }
  return out.str();
}

}  // namespace linmc
