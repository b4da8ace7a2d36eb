#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "spread/graph.hpp"

namespace spread {

// Broadcast lifetime value meaning "never evacuates".
inline constexpr std::int64_t kTauInfinity = std::numeric_limits<std::int64_t>::max();

// One information source: payload value, seeding budget, and the trust
// nodes place in the source itself. Trust is either uniform or per-node.
struct SourceSpec {
  double info_value = 1.0;
  std::uint32_t budget = 0;
  double uniform_trust = 1.0;
  std::vector<double> node_trust;  // empty means uniform

  double trust(NodeId u) const {
    return node_trust.empty() ? uniform_trust : node_trust[u];
  }
};

struct NodeProfile {
  double t_low = 0.5;
  double t_high = 0.5;
};

// Full diffusion problem: who talks to whom, how gullible each node is,
// what the sources are pushing, and the dynamics knobs.
struct GeneralInstance {
  std::shared_ptr<const TrustGraph> graph;
  std::vector<NodeProfile> profiles;
  std::vector<SourceSpec> sources;
  double lambda_d = 0.0;   // blend between sum and max across sources
  double lambda_s = 0.0;   // blend between sum and max across senders
  std::int64_t tau = 5;    // rounds a believer keeps broadcasting
  double transmit_p = 1.0; // per-arc per-round transmission success

  NodeId node_count() const { return graph ? graph->node_count() : 0; }
  std::uint32_t source_count() const { return static_cast<std::uint32_t>(sources.size()); }
};

// Seed assignment: one node set per source. Sets are kept sorted and
// duplicate-free by normalize().
struct Seeding {
  std::vector<std::vector<NodeId>> sets;

  static Seeding empty(std::uint32_t source_count) {
    Seeding s;
    s.sets.resize(source_count);
    return s;
  }

  std::size_t total_size() const {
    std::size_t t = 0;
    for (const auto& s : sets) t += s.size();
    return t;
  }

  void normalize();
};

struct Violation {
  std::string rule;
  std::string message;
};

// Checks every structural invariant and returns one entry per violation,
// naming the offending node or arc. Never throws on malformed input.
std::vector<Violation> validate_instance(const GeneralInstance& inst);

}  // namespace spread
