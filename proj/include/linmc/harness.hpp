#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "linmc/actor.hpp"

// Six-section harness files: ADT kind + initial spec state, target agents,
// initialization directives, message-category patterns, and per-message
// interleaving info (key location, read/write class, exclusions).

namespace linmc {

class HarnessError : public std::runtime_error {
 public:
  explicit HarnessError(const std::string& what) : std::runtime_error(what) {}
};

enum class AdtKind { Map, Set };

enum class Category {
  ReadInvocation,
  WriteInvocation,
  ReadResponse,
  WriteResponse,
  Replication,
  Ack,
};

enum class RwClass { Read, Write, Both };

struct KeyInfo {
  bool wildcard = true;       // key unknown until runtime (-1 in the file)
  std::string path;           // payload field holding the key
  RwClass rw = RwClass::Both;
};

struct ClientSpec {
  enum class Op { Read, Write };
  Op op = Op::Read;
  Scalar key = 0;
  std::optional<Scalar> value;          // writes only
  std::optional<AgentId> target;        // explicit target; else round-robin
};

struct HarnessConfig {
  // Section 1: the sequential specification.
  AdtKind adt = AdtKind::Map;
  Scalar defaultInit = 0;
  std::map<Scalar, Scalar> initState;   // per-key overrides

  // Section 2: target agents forming the ADT.
  std::vector<AgentId> targets;

  // Section 3: initialization directives + client invocation mix.
  std::map<std::string, std::string> initDirectives;  // e.g. leader=1, join=2 1
  std::vector<ClientSpec> clients;

  // Sections 4 and 5: message name -> category bindings.
  std::map<std::string, Category> patterns;

  // Section 6: interleaving info for LiViola.
  std::map<std::string, KeyInfo> keyInfo;
  std::set<std::string> exclusions;

  Scalar defaultKey = 0;         // implicit key of one-key ADTs (registers)
  AgentId firstClientId = 100;   // synthetic client ids start here

  bool isClient(AgentId id) const { return id >= firstClientId; }
  bool isExcluded(const std::string& name) const { return exclusions.count(name) != 0; }
};

HarnessConfig parse_harness(const std::string& text);
std::string render_harness(const HarnessConfig& config);

// Adds one inert client agent per ClientSpec and one pending request message
// per client; applies the join directive when present. Targets round-robin
// over section-2 agents unless a spec names one explicitly.
SystemState inject_invocations(const SystemState& state, const HarnessConfig& config);

Category classify_name(const std::string& name, const HarnessConfig& config);

// Key of the message under the section-6 binding; nullopt means wildcard.
std::optional<Scalar> key_of(const Message& m, const HarnessConfig& config);

const char* category_name(Category c);

}  // namespace linmc
