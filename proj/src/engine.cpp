#include "spread/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spread {

namespace {

constexpr std::uint32_t kInfiniteCountdown = 0xffffffffu;
// Below this size the parallel regions cost more than they save.
constexpr std::uint32_t kParallelCutoff = 4096;

bool inside_parallel() {
#ifdef _OPENMP
  return omp_in_parallel() != 0;
#else
  return false;
#endif
}

std::uint32_t countdown_from_tau(std::int64_t tau) {
  if (tau >= static_cast<std::int64_t>(kInfiniteCountdown)) return kInfiniteCountdown;
  return static_cast<std::uint32_t>(tau);
}

NodeState classify(double info, const NodeProfile& pr) {
  if (info >= pr.t_high) return NodeState::Believed;
  if (info >= pr.t_low) return NodeState::Undecided;
  return NodeState::Disbelieved;
}

}  // namespace

double info_value(std::span<const double> per_source, double lambda_d) {
  if (per_source.empty()) return 0.0;
  double sum = 0.0, mx = per_source[0];
  for (double v : per_source) {
    sum += v;
    if (v > mx) mx = v;
  }
  return lambda_d * sum + (1.0 - lambda_d) * mx;
}

double fuse_source(double direct, std::span<const double> neighbor_values, double lambda_s) {
  double sum = direct, mx = direct;
  for (double v : neighbor_values) {
    sum += v;
    if (v > mx) mx = v;
  }
  return lambda_s * sum + (1.0 - lambda_s) * mx;
}

DiffusionState::DiffusionState(const GeneralInstance& inst) {
  const TrustGraph& g = *inst.graph;
  if (!g.finalized()) throw std::logic_error("graph not finalized");
  n_ = g.node_count();
  K_ = inst.source_count();
  if (K_ == 0) throw std::invalid_argument("instance has no sources");
  if (inst.profiles.size() != n_) throw std::invalid_argument("profiles size mismatch");

  direct_.assign(static_cast<std::size_t>(n_) * K_, 0.0);
  slots_.assign(g.arc_count() * K_, 0.0);
  fused_.assign(static_cast<std::size_t>(n_) * K_, 0.0);
  info_.assign(n_, 0.0);
  state_.resize(n_);
  countdown_.assign(n_, 0);
  ever_believed_.assign(n_, 0);
  slot_base_.resize(n_);
  for (NodeId u = 0; u < n_; ++u) {
    slot_base_[u] = g.in_slot_base(u);
    state_[u] = classify(0.0, inst.profiles[u]);
    if (state_[u] == NodeState::Believed) {
      countdown_[u] = countdown_from_tau(inst.tau);
      ever_believed_[u] = 1;
    }
  }
}

std::uint32_t DiffusionState::count_state(NodeState s) const {
  std::uint32_t c = 0;
  for (NodeState x : state_)
    if (x == s) ++c;
  return c;
}

std::uint32_t DiffusionState::count_believers() const {
  std::uint32_t c = 0;
  for (std::uint8_t b : ever_believed_) c += b;
  return c;
}

// Engine-internal access to the state arrays.
struct EngineAccess {
  static void refuse_and_classify(DiffusionState& st, const GeneralInstance& inst, NodeId u) {
    const TrustGraph& g = *inst.graph;
    const std::uint32_t K = st.K_;
    const auto in = g.in_arcs(u);
    double* fu = &st.fused_[static_cast<std::size_t>(u) * K];
    const double* du = &st.direct_[static_cast<std::size_t>(u) * K];
    const double* sl = &st.slots_[static_cast<std::size_t>(st.slot_base_[u]) * K];
    for (std::uint32_t k = 0; k < K; ++k) {
      double sum = du[k], mx = du[k];
      for (std::size_t j = 0; j < in.size(); ++j) {
        const double v = sl[j * K + k];
        sum += v;
        if (v > mx) mx = v;
      }
      fu[k] = inst.lambda_s * sum + (1.0 - inst.lambda_s) * mx;
    }
    st.info_[u] = info_value({fu, K}, inst.lambda_d);

    const NodeState prev = st.state_[u];
    if (prev == NodeState::Evacuated) return;
    NodeState next = classify(st.info_[u], inst.profiles[u]);
    if (next == NodeState::Believed && prev != NodeState::Believed) {
      st.countdown_[u] = countdown_from_tau(inst.tau);
      st.ever_believed_[u] = 1;
    }
    st.state_[u] = next;
  }

  static StepDelta do_step(DiffusionState& st, const GeneralInstance& inst,
                           const RngHandle& run_rng);
  static void do_apply_seeding(DiffusionState& st, const GeneralInstance& inst,
                               const Seeding& seeding);
};

void apply_seeding(DiffusionState& st, const GeneralInstance& inst, const Seeding& seeding) {
  EngineAccess::do_apply_seeding(st, inst, seeding);
}

void EngineAccess::do_apply_seeding(DiffusionState& st, const GeneralInstance& inst,
                                    const Seeding& seeding) {
  const std::uint32_t K = st.K_;
  if (seeding.sets.size() != K)
    throw std::invalid_argument("seeding has wrong number of source sets");

  Seeding s = seeding;
  s.normalize();
  for (std::uint32_t k = 0; k < K; ++k) {
    if (s.sets[k].size() > inst.sources[k].budget)
      throw std::invalid_argument("seed set exceeds source budget");
    for (NodeId u : s.sets[k])
      if (u >= st.n_) throw std::invalid_argument("seed node out of range");
  }

  std::vector<std::uint8_t> touched(st.n_, 0);
  for (std::uint32_t k = 0; k < K; ++k) {
    const SourceSpec& src = inst.sources[k];
    for (NodeId u : s.sets[k]) {
      double& d = st.direct_[static_cast<std::size_t>(u) * K + k];
      d = std::max(d, src.trust(u) * src.info_value);
      touched[u] = 1;
    }
  }
  for (NodeId u = 0; u < st.n_; ++u)
    if (touched[u]) refuse_and_classify(st, inst, u);
}

StepDelta step(DiffusionState& st, const GeneralInstance& inst, const RngHandle& run_rng) {
  return EngineAccess::do_step(st, inst, run_rng);
}

StepDelta EngineAccess::do_step(DiffusionState& st, const GeneralInstance& inst,
                                const RngHandle& run_rng) {
  const TrustGraph& g = *inst.graph;
  const std::uint32_t n = st.n_;
  const std::uint32_t K = st.K_;
  const double p = inst.transmit_p;
  const RngHandle round_rng = run_rng.derive(static_cast<std::uint64_t>(++st.round_));

  bool value_changed = false;
  bool pending = false;

  // Receive phase. Each iteration writes only receiver-local slots and
  // reads sender state snapshotted from the start of the round (states and
  // fused values are not modified until the phase below), so the loop is
  // safe to run in parallel and its result is independent of order.
  const bool par = n >= kParallelCutoff && !inside_parallel();
#pragma omp parallel for schedule(static) reduction(|| : value_changed) if (par)
  for (std::int64_t wi = 0; wi < static_cast<std::int64_t>(n); ++wi) {
    const NodeId w = static_cast<NodeId>(wi);
    const NodeState ws = st.state_[w];
    if (ws == NodeState::Evacuated) continue;
    const bool pulls = ws == NodeState::Undecided;
    const auto in = g.in_arcs(w);
    double* slot_row = &st.slots_[static_cast<std::size_t>(st.slot_base_[w]) * K];
    for (std::size_t j = 0; j < in.size(); ++j) {
      const auto& nb = in[j];
      const NodeState us = st.state_[nb.node];
      if (us == NodeState::Evacuated) continue;
      bool delivered = us == NodeState::Believed && st.countdown_[nb.node] > 0 &&
                       transmission_coin(round_rng, nb.arc_id, kPushPhase, p);
      if (!delivered && pulls)
        delivered = transmission_coin(round_rng, nb.arc_id, kPullPhase, p);
      if (!delivered) continue;
      const double* fu = &st.fused_[static_cast<std::size_t>(nb.node) * K];
      for (std::uint32_t k = 0; k < K; ++k) {
        const double v = nb.trust * fu[k];
        if (v > slot_row[j * K + k]) {
          slot_row[j * K + k] = v;
          value_changed = true;
        }
      }
    }
  }

  // Fuse and reclassify. Writes are node-local; believer timers advance
  // here, with freshly converted nodes starting theirs next round.
#pragma omp parallel for schedule(static) reduction(|| : pending) if (par)
  for (std::int64_t ui = 0; ui < static_cast<std::int64_t>(n); ++ui) {
    const NodeId u = static_cast<NodeId>(ui);
    if (st.state_[u] == NodeState::Evacuated) continue;
    const NodeState prev = st.state_[u];
    refuse_and_classify(st, inst, u);
    if (st.state_[u] == NodeState::Believed) {
      if (prev == NodeState::Believed && st.countdown_[u] != kInfiniteCountdown) {
        if (--st.countdown_[u] == 0) {
          st.state_[u] = NodeState::Evacuated;
          continue;
        }
      }
      pending = pending || st.countdown_[u] != kInfiniteCountdown;
    }
  }

  return {value_changed, pending};
}

RunOutcome run(const GeneralInstance& inst, const Seeding& seeding, const RngHandle& rng,
               std::uint32_t max_steps) {
  DiffusionState st(inst);
  apply_seeding(st, inst, seeding);

  RunOutcome out;
  out.believer_trace.push_back(st.count_believers());
  for (std::uint32_t i = 1; i <= max_steps; ++i) {
    const StepDelta d = step(st, inst, rng);
    out.steps_executed = i;
    out.believer_trace.push_back(st.count_believers());
    const bool all_gone = st.count_state(NodeState::Evacuated) == inst.node_count();
    if (all_gone || (!d.value_changed && !d.pending_countdowns)) {
      out.converged = true;
      break;
    }
  }
  out.believers = st.count_believers();
  out.evacuated = st.count_state(NodeState::Evacuated);
  return out;
}

CoverageEstimate estimate_coverage(const GeneralInstance& inst, const Seeding& seeding,
                                   std::uint32_t replications, const RngHandle& rng,
                                   std::uint32_t max_steps) {
  if (replications == 0) throw std::invalid_argument("replications must be positive");
  const RngHandle rep_rng = rng.derive("rep");
  std::vector<std::uint32_t> believers(replications), evacuated(replications);
  const bool par = replications > 1 && !inside_parallel();

#pragma omp parallel for schedule(dynamic) if (par)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(replications); ++i) {
    const RunOutcome o = run(inst, seeding, rep_rng.derive(static_cast<std::uint64_t>(i)),
                             max_steps);
    believers[i] = o.believers;
    evacuated[i] = o.evacuated;
  }

  auto summarize = [&](const std::vector<std::uint32_t>& xs, double& mean, double& se) {
    double s = 0.0;
    for (std::uint32_t x : xs) s += x;
    mean = s / xs.size();
    if (xs.size() < 2) {
      se = 0.0;
      return;
    }
    double ss = 0.0;
    for (std::uint32_t x : xs) {
      const double d = x - mean;
      ss += d * d;
    }
    se = std::sqrt(ss / (static_cast<double>(xs.size()) * (xs.size() - 1.0)));
  };

  CoverageEstimate est;
  est.replications = replications;
  summarize(believers, est.believers_mean, est.believers_stderr);
  summarize(evacuated, est.evacuated_mean, est.evacuated_stderr);
  return est;
}

}  // namespace spread
