#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spread/engine.hpp"
#include "spread/maxmax.hpp"

namespace spread {

// Budget constraint for a seeder: either one cap per source (partition
// style) or a single cap on the total with free source assignment.
class Budgets {
 public:
  static Budgets per_source(std::vector<std::uint32_t> caps) {
    Budgets b;
    b.per_source_ = std::move(caps);
    return b;
  }
  static Budgets total(std::uint32_t cap) {
    Budgets b;
    b.total_ = cap;
    return b;
  }

  bool is_total() const { return total_.has_value(); }
  std::uint32_t total_cap() const { return *total_; }
  const std::vector<std::uint32_t>& per_source_caps() const { return per_source_; }

  std::uint64_t sum(std::uint32_t source_count) const {
    if (total_) return *total_;
    std::uint64_t s = 0;
    for (std::uint32_t c : per_source_) s += c;
    (void)source_count;
    return s;
  }

 private:
  std::optional<std::uint32_t> total_;
  std::vector<std::uint32_t> per_source_;
};

struct GreedyResult {
  Seeding seeding;
  UnionCoverage covered;
  std::uint64_t evaluations = 0;  // singleton searches + marginal recounts
};

// Plain greedy on the simplified model: repeatedly add the (node, source)
// pair with the largest marginal coverage, ties to the smaller node id then
// the smaller source id. Keeps picking through zero-gain pairs until the
// budget is spent or every node is covered, whichever comes first.
GreedyResult greedy_maxmax(const SimplifiedInstance& sinst, const Budgets& budgets);

struct HybridOptions {
  // Fraction of reachable nodes covered at which the lazy queue is dropped
  // for exact materialized marginal counts.
  double switch_fraction = 0.25;
};

// Lazy-queue greedy with a materialized second phase. Selects exactly the
// same seeding as greedy_maxmax (including tie handling) with far fewer
// coverage evaluations.
GreedyResult greedy_lazy_hybrid(const SimplifiedInstance& sinst, const Budgets& budgets,
                                const HybridOptions& opts = {});

struct ActualGreedyOptions {
  std::uint32_t replications = 20;
  std::uint32_t max_steps = kDefaultMaxSteps;
  // Refuse runs whose estimated work (candidate evaluations x replications
  // x graph size) exceeds this, unless forced.
  double max_cost = 5e9;
  bool force = false;
};

// Greedy directly on the general model, scoring each candidate by Monte
// Carlo coverage with common random numbers within a pick.
Seeding actual_greedy(const GeneralInstance& inst, const Budgets& budgets, const RngHandle& rng,
                      const ActualGreedyOptions& opts = {});

struct BruteForceResult {
  Seeding seeding;
  double value = 0.0;
};

inline constexpr std::uint64_t kBruteForceCap = 2'000'000;

// Exhaustive search over all seedings with |set_k| <= B_k (the general
// model is not monotone, so smaller sets may win). Throws with the exact
// candidate count if it exceeds the cap.
BruteForceResult brute_force(const SimplifiedInstance& sinst, const Budgets& budgets,
                             std::uint64_t cap = kBruteForceCap);
BruteForceResult brute_force(const GeneralInstance& inst, const Budgets& budgets,
                             const RngHandle& rng, std::uint32_t replications = 20,
                             std::uint64_t cap = kBruteForceCap,
                             std::uint32_t max_steps = kDefaultMaxSteps);

// Baselines. Budgets here are per source.
Seeding random_seeding(NodeId n, const std::vector<std::uint32_t>& budgets,
                       const RngHandle& rng);
// Ranks nodes by total outgoing trust weight, ties to the smaller id.
Seeding high_degree_seeding(const TrustGraph& g, const std::vector<std::uint32_t>& budgets);

}  // namespace spread
