#include "linmc/harness.hpp"

#include <sstream>

namespace linmc {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

Scalar to_int(const std::string& s, const std::string& where) {
  try {
    size_t used = 0;
    Scalar v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw HarnessError("expected an integer in " + where + ", got '" + s + "'");
  }
}

Category parse_category(const std::string& s) {
  if (s == "read-invocation") return Category::ReadInvocation;
  if (s == "write-invocation") return Category::WriteInvocation;
  if (s == "read-response") return Category::ReadResponse;
  if (s == "write-response") return Category::WriteResponse;
  if (s == "replication") return Category::Replication;
  if (s == "ack") return Category::Ack;
  throw HarnessError("unknown category '" + s + "'");
}

RwClass parse_rw(const std::string& s) {
  if (s == "read") return RwClass::Read;
  if (s == "write") return RwClass::Write;
  if (s == "both") return RwClass::Both;
  throw HarnessError("unknown rw class '" + s + "'");
}

const char* rw_name(RwClass rw) {
  switch (rw) {
    case RwClass::Read: return "read";
    case RwClass::Write: return "write";
    default: return "both";
  }
}

// "client read [key] [@target]" / "client write [key] value [@target]"
ClientSpec parse_client(const std::vector<std::string>& words, Scalar defaultKey) {
  ClientSpec spec;
  std::vector<std::string> args;
  for (size_t i = 2; i < words.size(); ++i) {
    if (words[i][0] == '@')
      spec.target = static_cast<AgentId>(to_int(words[i].substr(1), "client target"));
    else
      args.push_back(words[i]);
  }
  if (words[1] == "read") {
    spec.op = ClientSpec::Op::Read;
    if (args.size() > 1) throw HarnessError("client read takes at most one key");
    spec.key = args.empty() ? defaultKey : to_int(args[0], "client read key");
  } else if (words[1] == "write") {
    spec.op = ClientSpec::Op::Write;
    if (args.empty() || args.size() > 2) throw HarnessError("client write takes [key] value");
    if (args.size() == 1) {
      spec.key = defaultKey;
      spec.value = to_int(args[0], "client write value");
    } else {
      spec.key = to_int(args[0], "client write key");
      spec.value = to_int(args[1], "client write value");
    }
  } else {
    throw HarnessError("client op must be read or write, got '" + words[1] + "'");
  }
  return spec;
}

void parse_interleave_line(const std::string& line, HarnessConfig& config) {
  std::vector<std::string> words = split_ws(line);
  if (!words.empty() && words[0] == "exclude") {
    for (size_t i = 1; i < words.size(); ++i) config.exclusions.insert(words[i]);
    return;
  }
  size_t eq = line.find('=');
  if (eq == std::string::npos) throw HarnessError("malformed interleave line: " + line);
  std::string name = trim(line.substr(0, eq));
  if (config.keyInfo.count(name)) throw HarnessError("duplicate interleave binding for " + name);
  KeyInfo info;
  for (const std::string& w : split_ws(line.substr(eq + 1))) {
    size_t colon = w.find(':');
    if (colon == std::string::npos) throw HarnessError("malformed interleave attribute: " + w);
    std::string attr = w.substr(0, colon), val = w.substr(colon + 1);
    if (attr == "key") {
      if (val == "-1") {
        info.wildcard = true;
        info.path.clear();
      } else if (val.empty() || (val[0] >= '0' && val[0] <= '9') || val[0] == '-') {
        throw HarnessError("malformed key path '" + val + "' (field name or -1)");
      } else {
        info.wildcard = false;
        info.path = val;
      }
    } else if (attr == "rw") {
      info.rw = parse_rw(val);
    } else {
      throw HarnessError("unknown interleave attribute '" + attr + "'");
    }
  }
  config.keyInfo[name] = info;
}

}  // namespace

HarnessConfig parse_harness(const std::string& text) {
  HarnessConfig config;
  std::istringstream in(text);
  std::string line, section;
  bool sawSpec = false, sawTargets = false;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      if (section != "spec" && section != "targets" && section != "init" &&
          section != "invocations" && section != "internal" && section != "interleave")
        throw HarnessError("unknown section [" + section + "]");
      continue;
    }
    if (section.empty()) throw HarnessError("content before first section: " + line);

    if (section == "interleave") {
      parse_interleave_line(line, config);
      continue;
    }
    std::vector<std::string> words = split_ws(line);
    if (section == "init" && words.size() >= 2 && words[0] == "client") {
      config.clients.push_back(parse_client(words, config.defaultKey));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw HarnessError("expected 'name = value' in [" + section + "]: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw HarnessError("malformed binding in [" + section + "]: " + line);

    if (section == "spec") {
      sawSpec = true;
      if (key == "adt") {
        if (value == "map") config.adt = AdtKind::Map;
        else if (value == "set") config.adt = AdtKind::Set;
        else throw HarnessError("adt must be map or set, got '" + value + "'");
      } else if (key == "init") {
        config.defaultInit = to_int(value, "[spec] init");
      } else if (key.rfind("init.", 0) == 0) {
        config.initState[to_int(key.substr(5), "[spec] init key")] = to_int(value, "[spec] init value");
      } else {
        throw HarnessError("unknown [spec] binding '" + key + "'");
      }
    } else if (section == "targets") {
      if (key != "agents") throw HarnessError("unknown [targets] binding '" + key + "'");
      sawTargets = true;
      for (const std::string& w : split_ws(value))
        config.targets.push_back(static_cast<AgentId>(to_int(w, "[targets] agents")));
    } else if (section == "init") {
      config.initDirectives[key] = value;
    } else {  // invocations / internal: message name -> category
      if (config.patterns.count(key)) throw HarnessError("duplicate pattern binding for " + key);
      Category c = parse_category(value);
      bool isInvocation = c == Category::ReadInvocation || c == Category::WriteInvocation;
      if (isInvocation != (section == "invocations"))
        throw HarnessError("category '" + value + "' belongs in the other pattern section");
      config.patterns[key] = c;
    }
  }
  if (!sawSpec) throw HarnessError("missing [spec] section");
  if (!sawTargets || config.targets.empty()) throw HarnessError("missing or empty [targets] section");
  return config;
}

std::string render_harness(const HarnessConfig& config) {
  std::ostringstream out;
  out << "[spec]\n";
  out << "adt = " << (config.adt == AdtKind::Map ? "map" : "set") << "\n";
  out << "init = " << config.defaultInit << "\n";
  for (const auto& [k, v] : config.initState) out << "init." << k << " = " << v << "\n";
  out << "\n[targets]\nagents =";
  for (AgentId a : config.targets) out << " " << a;
  out << "\n\n[init]\n";
  for (const auto& [k, v] : config.initDirectives) out << k << " = " << v << "\n";
  for (const ClientSpec& c : config.clients) {
    out << "client " << (c.op == ClientSpec::Op::Read ? "read" : "write");
    out << " " << c.key;
    if (c.value) out << " " << *c.value;
    if (c.target) out << " @" << *c.target;
    out << "\n";
  }
  out << "\n[invocations]\n";
  for (const auto& [name, c] : config.patterns)
    if (c == Category::ReadInvocation || c == Category::WriteInvocation)
      out << name << " = " << category_name(c) << "\n";
  out << "\n[internal]\n";
  for (const auto& [name, c] : config.patterns)
    if (c != Category::ReadInvocation && c != Category::WriteInvocation)
      out << name << " = " << category_name(c) << "\n";
  out << "\n[interleave]\n";
  for (const auto& [name, info] : config.keyInfo) {
    out << name << " = key:" << (info.wildcard ? "-1" : info.path)
        << " rw:" << rw_name(info.rw) << "\n";
  }
  for (const std::string& name : config.exclusions) out << "exclude " << name << "\n";
  return out.str();
}

SystemState inject_invocations(const SystemState& state, const HarnessConfig& config) {
  if (config.targets.empty()) throw HarnessError("empty target set");
  SystemState out = state;

  auto invocation_name = [&](Category want) -> std::string {
    for (const auto& [name, c] : config.patterns)
      if (c == want) return name;
    throw HarnessError(std::string("no message name bound to ") + category_name(want));
  };

  size_t cursor = 0;
  AgentId nextClient = config.firstClientId;
  for (const ClientSpec& spec : config.clients) {
    AgentId client = nextClient++;
    out.agents[client] = AgentInfo{"client", {}};
    AgentId target;
    if (spec.target) {
      target = *spec.target;
    } else {
      target = config.targets[cursor % config.targets.size()];
      ++cursor;
    }
    if (!out.hasAgent(target)) throw HarnessError("client target agent does not exist");
    Message m;
    m.sender = client;
    m.receiver = target;
    m.payload.key = spec.key;
    m.payload.client = client;
    if (spec.op == ClientSpec::Op::Read) {
      m.name = invocation_name(Category::ReadInvocation);
    } else {
      m.name = invocation_name(Category::WriteInvocation);
      m.payload.value = spec.value;
    }
    out.addPending(std::move(m));
  }

  auto joinIt = config.initDirectives.find("join");
  if (joinIt != config.initDirectives.end()) {
    std::vector<std::string> words = split_ws(joinIt->second);
    if (words.size() != 2) throw HarnessError("join directive takes: join = <joiner> <contact>");
    AgentId joiner = static_cast<AgentId>(to_int(words[0], "join directive"));
    AgentId contact = static_cast<AgentId>(to_int(words[1], "join directive"));
    if (!out.hasAgent(joiner) || !out.hasAgent(contact))
      throw HarnessError("join directive names unknown agents");
    Message m;
    m.sender = joiner;
    m.receiver = contact;
    m.name = "FindSucc";
    m.payload.aux = joiner;
    out.addPending(std::move(m));
  }
  return out;
}

Category classify_name(const std::string& name, const HarnessConfig& config) {
  auto it = config.patterns.find(name);
  if (it == config.patterns.end())
    throw HarnessError("message name '" + name + "' has no pattern binding");
  return it->second;
}

std::optional<Scalar> key_of(const Message& m, const HarnessConfig& config) {
  auto it = config.keyInfo.find(m.name);
  if (it == config.keyInfo.end() || it->second.wildcard) return std::nullopt;
  return m.payload.field(it->second.path);  // absent field falls back to wildcard
}

const char* category_name(Category c) {
  switch (c) {
    case Category::ReadInvocation: return "read-invocation";
    case Category::WriteInvocation: return "write-invocation";
    case Category::ReadResponse: return "read-response";
    case Category::WriteResponse: return "write-response";
    case Category::Replication: return "replication";
    default: return "ack";
  }
}

}  // namespace linmc
