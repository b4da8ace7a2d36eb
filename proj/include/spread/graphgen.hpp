#pragma once

#include <cstdint>
#include <vector>

#include "spread/instance.hpp"
#include "spread/rng.hpp"

namespace spread {

// All generators emit symmetric graphs (both arcs per link, equal trust,
// placeholder trust 1.0) with nodes split into two groups by a random
// permutation. Trust and thresholds are assigned afterwards.

// Preferential attachment: each new node links to m distinct existing
// nodes picked proportionally to degree. The first node links to node 0
// alone, the second to both predecessors when m >= 2, and so on.
TrustGraph gen_scale_free(NodeId n, std::uint32_t m, const RngHandle& rng);

// Planted two-group model: every same-group pair is linked with probability
// p_same = ratio * p_diff, every cross-group pair with p_diff, where p_diff
// is solved so the expected mean degree comes out as requested. Sampling
// skips over non-links geometrically, so the cost is near-linear in the
// number of links.
TrustGraph gen_random_group(NodeId n, double avg_degree, double ratio, const RngHandle& rng);

struct GeometricOptions {
  double avg_degree = 4.0;
  double decay = 0.1;       // e-folding distance of the link probability
  double same_group_boost = 2.0;
  std::uint32_t pilot_pairs = 200000;  // pairs sampled to calibrate density
};

// Nodes at uniform positions in the unit square; pair (u,v) is linked with
// probability q * exp(-dist/decay), boosted for same-group pairs. The base
// rate q is calibrated by pilot sampling to hit the requested mean degree.
TrustGraph gen_geometric_group(NodeId n, const RngHandle& rng, const GeometricOptions& opts = {});

enum class TrustScenario {
  Homogeneous,    // every arc gets trust a
  GroupVariable,  // within-group a + eps, across-group solved so the mean is a
  GroupRange,     // within-group U[0.7, 0.8], across-group a band solved for mean a
};

struct TrustParams {
  TrustScenario scenario = TrustScenario::Homogeneous;
  double a = 0.7;
  double eps = 0.05;        // GroupVariable: within-group surplus
  double band = 0.05;       // GroupRange: half-width of the across-group band
  double within_low = 0.7;  // GroupRange: within-group range
  double within_high = 0.8;
};

// Returns a copy of the graph with trusts assigned per scenario; symmetric
// pairs always get equal trust. Throws when the requested overall mean is
// unreachable with trusts in [0,1].
TrustGraph assign_trust(const TrustGraph& g, const TrustParams& params, const RngHandle& rng);

struct ThresholdParams {
  bool range_mode = false;
  double t_low = 0.15;  // pair mode: every node gets (t_low, t_high)
  double t_high = 0.55;
  double low_min = 0.1;  // range mode: t_low ~ U[low_min, low_max], etc.
  double low_max = 0.2;
  double high_min = 0.5;
  double high_max = 0.6;
};

std::vector<NodeProfile> assign_thresholds(const TrustGraph& g, const ThresholdParams& params,
                                           const RngHandle& rng);

struct GraphStats {
  double mean_degree = 0.0;     // undirected degree (in-arcs == out-arcs)
  double degree_variance = 0.0;
  double tail_exponent = 0.0;   // max-likelihood power-law fit, negative
  std::uint64_t within_links = 0;
  std::uint64_t across_links = 0;
};

GraphStats compute_stats(const TrustGraph& g, std::uint32_t tail_xmin = 6);

}  // namespace spread
