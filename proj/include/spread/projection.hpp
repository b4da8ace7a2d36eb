#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spread/engine.hpp"
#include "spread/maxmax.hpp"
#include "spread/seeders.hpp"

namespace spread {

// Candidate uniform thresholds for the simplified model, ascending and
// deduplicated. The diagnostics record how the set was built.
struct ThresholdSet {
  std::vector<double> values;
  double t_min = 0.0;
  double t_max = 1.0;
  bool degenerate = false;  // trust summary gave no usable ladder
  double a_avg = 0.0;       // homogeneous summary
  double a_high = 0.0;      // two-level summaries
  double a_low = 0.0;
};

// Collapses the general instance onto one uniform threshold t: a single
// super-source with budget-weighted payload, per-node trust averaged across
// sources, budget equal to the total. Requires t > 0 and a positive total
// budget.
SimplifiedInstance build_simplified(const GeneralInstance& inst, double t);

// Ladder of values a_avg^i * I reachable by repeated average-trust hops,
// clipped to [min t_low, max t_high], plus the endpoints. a_avg in {0, 1}
// yields just the endpoints with the degenerate flag set.
ThresholdSet thresholds_homogeneous(const GeneralInstance& inst);

// Two-level variant: arc trusts are split by 1-D 2-means (centers seeded at
// the 25th and 75th percentiles), and the ladder is the multiplicative
// closure of {I} under the two cluster means, pruned below min t_low.
// Falls back to the homogeneous ladder when clustering degenerates.
ThresholdSet thresholds_two_level(const GeneralInstance& inst);

// Shuffles the merged seed list and deals it out source by source up to
// each budget. Throws if the list cannot fit.
Seeding partition_seeds(const std::vector<NodeId>& merged,
                        const std::vector<std::uint32_t>& budgets, const RngHandle& rng);

struct ThresholdCandidate {
  double threshold = 0.0;
  Seeding seeding;
  CoverageEstimate estimate;
};

struct ProjectionReport {
  std::vector<ThresholdCandidate> candidates;  // one per threshold, ascending
  std::size_t best_index = 0;
  double t_opt() const { return candidates[best_index].threshold; }
  const Seeding& best_seeding() const { return candidates[best_index].seeding; }
};

struct ProjectedGreedyOptions {
  std::uint32_t replications = 20;
  std::uint32_t max_steps = kDefaultMaxSteps;
  HybridOptions greedy;
};

// For every candidate threshold: solve the simplified instance greedily,
// split the chosen seeds across the real sources, and score that seeding on
// the general instance by Monte Carlo. All thresholds are scored under the
// same derived streams, so the argmax is a fair comparison; ties go to the
// smaller threshold.
ProjectionReport projected_greedy(const GeneralInstance& inst, const ThresholdSet& omega,
                                  const RngHandle& rng, const ProjectedGreedyOptions& opts = {});

// CSV rows "threshold, coverage_mean, coverage_stderr, seeds_file"; the
// caller supplies one seeds-file path per candidate (written separately).
void write_projection_csv(std::ostream& os, const ProjectionReport& report,
                          const std::vector<std::string>& seed_paths);

}  // namespace spread
