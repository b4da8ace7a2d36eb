#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spread/instance.hpp"
#include "spread/rng.hpp"

namespace spread {

enum class NodeState : std::uint8_t { Disbelieved = 0, Undecided = 1, Believed = 2, Evacuated = 3 };

// Aggregation across sources: lambda * sum + (1 - lambda) * max.
double info_value(std::span<const double> per_source, double lambda_d);

// Aggregation across senders for one source. The direct slot is the value
// injected by seeding; neighbor_values holds one slot per in-arc.
double fuse_source(double direct, std::span<const double> neighbor_values, double lambda_s);

// Per-round transmission coins are addressed by (arc, phase) under a
// per-round stream, so replay does not depend on visit order or threads.
inline constexpr int kPushPhase = 0;
inline constexpr int kPullPhase = 1;
inline bool transmission_coin(const RngHandle& round_rng, std::uint32_t arc_id, int phase,
                              double p) {
  return round_rng.coin_at(static_cast<std::uint64_t>(arc_id) * 2 + phase, p);
}

// Mutable per-run state. Nodes remember the best value received per
// (in-arc, source) pair plus a direct per-source slot; stored values only
// ever increase. Kept as flat arrays indexed by the graph's CSR layout.
class DiffusionState {
 public:
  explicit DiffusionState(const GeneralInstance& inst);

  std::uint32_t round() const { return round_; }
  NodeState state(NodeId u) const { return state_[u]; }
  bool ever_believed(NodeId u) const { return ever_believed_[u] != 0; }
  std::uint32_t countdown(NodeId u) const { return countdown_[u]; }
  double info(NodeId u) const { return info_[u]; }
  double direct_value(NodeId u, std::uint32_t k) const { return direct_[u * K_ + k]; }
  double fused_value(NodeId u, std::uint32_t k) const { return fused_[u * K_ + k]; }
  // j indexes in_arcs(u) positionally.
  double slot_value(NodeId u, std::uint32_t j, std::uint32_t k) const {
    return slots_[(slot_base_[u] + j) * K_ + k];
  }

  std::uint32_t count_state(NodeState s) const;
  std::uint32_t count_believers() const;  // ever reached Believed

 private:
  friend struct EngineAccess;
  std::uint32_t n_ = 0;
  std::uint32_t K_ = 0;
  std::uint32_t round_ = 0;
  std::vector<double> direct_;          // n*K
  std::vector<double> slots_;           // (#in-arcs)*K
  std::vector<double> fused_;           // n*K
  std::vector<double> info_;            // n
  std::vector<NodeState> state_;        // n
  std::vector<std::uint32_t> countdown_;
  std::vector<std::uint8_t> ever_believed_;
  std::vector<std::uint32_t> slot_base_;  // copy of in-CSR offsets
};

struct StepDelta {
  bool value_changed = false;      // any stored slot increased this round
  bool pending_countdowns = false; // some believer still has a finite timer
};

// Injects seeds: direct slot of node u under source k becomes
// max(old, a(k,u) * I_k), then affected nodes re-fuse and classify.
// Throws if the seeding violates budgets or names unknown nodes.
void apply_seeding(DiffusionState& st, const GeneralInstance& inst, const Seeding& seeding);

// One synchronous round: believers with remaining broadcast rounds push to
// every out-neighbor, Undecided nodes query every non-evacuated neighbor;
// each delivery lands in the receiver's per-arc slot as a running max.
// Then every node re-fuses, reclassifies, and believer timers advance
// (newly converted nodes start their timer next round). Evacuation masks a
// node from the following round onward.
StepDelta step(DiffusionState& st, const GeneralInstance& inst, const RngHandle& run_rng);

inline constexpr std::uint32_t kDefaultMaxSteps = 50;

struct RunOutcome {
  std::uint32_t believers = 0;   // nodes that ever reached Believed
  std::uint32_t evacuated = 0;
  std::uint32_t steps_executed = 0;
  bool converged = false;        // stopped before the step cap
  std::vector<std::uint32_t> believer_trace;  // cumulative, entry 0 = after seeding
};

RunOutcome run(const GeneralInstance& inst, const Seeding& seeding, const RngHandle& rng,
               std::uint32_t max_steps = kDefaultMaxSteps);

struct CoverageEstimate {
  double believers_mean = 0.0;
  double believers_stderr = 0.0;
  double evacuated_mean = 0.0;
  double evacuated_stderr = 0.0;
  std::uint32_t replications = 0;
};

// Monte Carlo estimate over independent replications; replication i uses
// the stream rng.derive("rep").derive(i), so estimates are reproducible
// and independent of thread count.
CoverageEstimate estimate_coverage(const GeneralInstance& inst, const Seeding& seeding,
                                   std::uint32_t replications, const RngHandle& rng,
                                   std::uint32_t max_steps = kDefaultMaxSteps);

}  // namespace spread
