#include "spread/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>

namespace spread {

namespace {

std::string fmt(const char* pattern, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, ap);
  va_end(ap);
  return buf;
}

bool bad_unit(double x) { return !(x >= 0.0 && x <= 1.0); }

}  // namespace

void Seeding::normalize() {
  for (auto& s : sets) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
}

std::vector<Violation> validate_instance(const GeneralInstance& inst) {
  std::vector<Violation> out;
  auto add = [&out](const char* rule, std::string msg) {
    out.push_back({rule, std::move(msg)});
  };

  if (!inst.graph) {
    add("graph-missing", "instance has no graph");
    return out;
  }
  const TrustGraph& g = *inst.graph;
  const NodeId n = g.node_count();

  std::map<std::pair<NodeId, NodeId>, std::uint32_t> seen;
  for (std::uint32_t id = 0; id < g.arc_count(); ++id) {
    const Arc& a = g.arc(id);
    if (a.src == a.dst)
      add("self-arc", fmt("arc %u: self-arc at node %u", id, a.src));
    if (bad_unit(a.trust))
      add("trust-range", fmt("arc %u (%u->%u): trust %g outside [0,1]", id, a.src, a.dst, a.trust));
    auto [it, fresh] = seen.try_emplace({a.src, a.dst}, id);
    if (!fresh)
      add("duplicate-arc", fmt("arc %u duplicates arc %u (%u->%u)", id, it->second, a.src, a.dst));
  }

  if (g.symmetric()) {
    for (std::uint32_t id = 0; id < g.arc_count(); ++id) {
      const Arc& a = g.arc(id);
      if (a.src > a.dst) continue;  // check each unordered pair once
      auto rev = seen.find({a.dst, a.src});
      if (rev == seen.end())
        add("symmetry", fmt("arc %u (%u->%u): reverse arc missing", id, a.src, a.dst));
      else if (g.arc(rev->second).trust != a.trust)
        add("symmetry", fmt("arc %u (%u->%u): reverse trust %g != %g", id, a.src, a.dst,
                            g.arc(rev->second).trust, a.trust));
    }
  }

  if (inst.profiles.size() != n) {
    add("profiles-size", fmt("profiles has %zu entries for %u nodes", inst.profiles.size(), n));
  } else {
    for (NodeId u = 0; u < n; ++u) {
      const NodeProfile& pr = inst.profiles[u];
      if (bad_unit(pr.t_low) || bad_unit(pr.t_high))
        add("threshold-range", fmt("node %u: thresholds (%g, %g) outside [0,1]", u, pr.t_low, pr.t_high));
      if (!(pr.t_low <= pr.t_high))
        add("threshold-order", fmt("node %u: t_low %g > t_high %g", u, pr.t_low, pr.t_high));
    }
  }

  if (inst.sources.empty()) add("sources-empty", "instance has no sources");
  for (std::size_t k = 0; k < inst.sources.size(); ++k) {
    const SourceSpec& s = inst.sources[k];
    if (bad_unit(s.info_value))
      add("info-value-range", fmt("source %zu: info value %g outside [0,1]", k, s.info_value));
    if (!s.node_trust.empty() && s.node_trust.size() != n) {
      add("source-trust-size",
          fmt("source %zu: node_trust has %zu entries for %u nodes", k, s.node_trust.size(), n));
    } else {
      if (s.node_trust.empty()) {
        if (bad_unit(s.uniform_trust))
          add("source-trust-range", fmt("source %zu: trust %g outside [0,1]", k, s.uniform_trust));
      } else {
        for (NodeId u = 0; u < n; ++u)
          if (bad_unit(s.node_trust[u]))
            add("source-trust-range",
                fmt("source %zu: trust %g at node %u outside [0,1]", k, s.node_trust[u], u));
      }
    }
  }

  if (bad_unit(inst.lambda_d)) add("lambda-range", fmt("lambda_d %g outside [0,1]", inst.lambda_d));
  if (bad_unit(inst.lambda_s)) add("lambda-range", fmt("lambda_s %g outside [0,1]", inst.lambda_s));
  if (inst.tau < 1) add("tau-range", fmt("tau %lld below 1", static_cast<long long>(inst.tau)));
  if (bad_unit(inst.transmit_p)) add("transmit-p-range", fmt("transmission probability %g outside [0,1]", inst.transmit_p));

  return out;
}

}  // namespace spread
