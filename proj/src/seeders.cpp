#include "spread/seeders.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace spread {

namespace {

// Tracks both budget styles behind one interface.
struct BudgetTracker {
  explicit BudgetTracker(const Budgets& b, std::uint32_t K) : budgets(b) {
    if (!b.is_total() && b.per_source_caps().size() != K)
      throw std::invalid_argument("per-source budgets do not match source count");
    used.assign(K, 0);
  }
  bool source_open(std::uint32_t k) const {
    if (budgets.is_total()) return total_used < budgets.total_cap();
    return used[k] < budgets.per_source_caps()[k];
  }
  bool any_open(std::uint32_t K) const {
    for (std::uint32_t k = 0; k < K; ++k)
      if (source_open(k)) return true;
    return false;
  }
  void take(std::uint32_t k) {
    ++used[k];
    ++total_used;
  }
  const Budgets& budgets;
  std::vector<std::uint32_t> used;
  std::uint64_t total_used = 0;
};

std::uint32_t count_uncovered(const std::vector<NodeId>& ball,
                              const std::vector<std::uint8_t>& covered) {
  std::uint32_t c = 0;
  for (NodeId w : ball) c += covered[w] == 0 ? 1 : 0;
  return c;
}

GreedyResult finish_result(Seeding psi, const std::vector<std::uint8_t>& covered,
                           std::uint64_t evaluations) {
  GreedyResult r;
  r.seeding = std::move(psi);
  r.seeding.normalize();
  for (NodeId w = 0; w < covered.size(); ++w)
    if (covered[w]) r.covered.converted.push_back(w);
  r.covered.count = static_cast<std::uint32_t>(r.covered.converted.size());
  r.evaluations = evaluations;
  return r;
}

}  // namespace

GreedyResult greedy_maxmax(const SimplifiedInstance& sinst, const Budgets& budgets) {
  const NodeId n = sinst.node_count();
  const std::uint32_t K = sinst.source_count();
  BudgetTracker bt(budgets, K);

  std::vector<std::uint8_t> covered(n, 0);
  std::uint32_t covered_count = 0;
  std::vector<std::uint8_t> picked(static_cast<std::size_t>(n) * K, 0);
  Seeding psi = Seeding::empty(K);
  std::uint64_t evals = 0;

  CoverageScratch scratch;
  std::vector<NodeId> ball;

  while (bt.any_open(K) && covered_count < n) {
    std::int64_t best_gain = -1;
    NodeId best_u = 0;
    std::uint32_t best_k = 0;
    for (NodeId u = 0; u < n; ++u) {
      for (std::uint32_t k = 0; k < K; ++k) {
        if (picked[static_cast<std::size_t>(u) * K + k] || !bt.source_open(k)) continue;
        singleton_coverage_into(sinst, u, k, scratch, ball);
        ++evals;
        const std::int64_t gain = count_uncovered(ball, covered);
        if (gain > best_gain) {
          best_gain = gain;
          best_u = u;
          best_k = k;
        }
      }
    }
    if (best_gain < 0) break;  // every pair already picked

    picked[static_cast<std::size_t>(best_u) * K + best_k] = 1;
    psi.sets[best_k].push_back(best_u);
    bt.take(best_k);
    singleton_coverage_into(sinst, best_u, best_k, scratch, ball);
    ++evals;
    for (NodeId w : ball) {
      if (!covered[w]) {
        covered[w] = 1;
        ++covered_count;
      }
    }
  }
  return finish_result(std::move(psi), covered, evals);
}

namespace {

// Union of singleton coverages over all seeds of one source: one best-first
// sweep started from every node at once.
void source_reach_into(const SimplifiedInstance& sinst, std::uint32_t k,
                       CoverageScratch& scratch, std::vector<std::uint8_t>& reach) {
  const TrustGraph& g = *sinst.graph;
  const NodeId n = g.node_count();
  scratch.reset(n);
  auto& heap = scratch.heap;
  const SourceSpec& src = sinst.sources[k];
  for (NodeId u = 0; u < n; ++u) {
    const double v0 = src.trust(u) * src.info_value;
    scratch.best[u] = v0;
    heap.emplace_back(v0, u);
    scratch.touched.push_back(u);
  }
  std::make_heap(heap.begin(), heap.end());
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end());
    const auto [value, node] = heap.back();
    heap.pop_back();
    if (scratch.settled[node] || value < scratch.best[node]) continue;
    scratch.settled[node] = 1;
    if (value < sinst.threshold[node]) continue;
    reach[node] = 1;
    for (const auto& nb : g.out_arcs(node)) {
      if (scratch.settled[nb.node]) continue;
      const double v = value * nb.trust;
      if (v > scratch.best[nb.node]) {
        scratch.best[nb.node] = v;
        heap.emplace_back(v, nb.node);
        std::push_heap(heap.begin(), heap.end());
      }
    }
  }
}

struct LazyEntry {
  std::uint32_t gain;
  std::uint32_t pick_round;  // round this gain was computed in
  NodeId u;
  std::uint32_t k;
};

// Max on gain; ties pop the smaller (node, source) first.
struct LazyLess {
  bool operator()(const LazyEntry& a, const LazyEntry& b) const {
    if (a.gain != b.gain) return a.gain < b.gain;
    if (a.u != b.u) return a.u > b.u;
    return a.k > b.k;
  }
};

}  // namespace

GreedyResult greedy_lazy_hybrid(const SimplifiedInstance& sinst, const Budgets& budgets,
                                const HybridOptions& opts) {
  const NodeId n = sinst.node_count();
  const std::uint32_t K = sinst.source_count();
  BudgetTracker bt(budgets, K);

  std::vector<std::uint8_t> covered(n, 0);
  std::uint32_t covered_count = 0;
  std::vector<std::uint8_t> picked(static_cast<std::size_t>(n) * K, 0);
  Seeding psi = Seeding::empty(K);
  std::uint64_t evals = 0;

  CoverageScratch scratch;
  std::vector<NodeId> ball;

  // Nodes any candidate could ever cover; the phase switch is expressed as
  // a fraction of this.
  std::vector<std::uint8_t> reach(n, 0);
  for (std::uint32_t k = 0; k < K; ++k) {
    source_reach_into(sinst, k, scratch, reach);
    ++evals;
  }
  std::uint32_t reachable = 0;
  for (std::uint8_t r : reach) reachable += r;

  const auto switch_due = [&]() {
    return static_cast<double>(covered_count) >=
           opts.switch_fraction * static_cast<double>(reachable);
  };

  auto absorb = [&](NodeId u, std::uint32_t k) {
    // Registers the pick and returns the freshly covered nodes in `ball`.
    singleton_coverage_into(sinst, u, k, scratch, ball);
    ++evals;
    std::erase_if(ball, [&](NodeId w) { return covered[w] != 0; });
    for (NodeId w : ball) {
      covered[w] = 1;
      ++covered_count;
    }
    picked[static_cast<std::size_t>(u) * K + k] = 1;
    psi.sets[k].push_back(u);
    bt.take(k);
  };

  std::uint32_t round = 0;

  if (!switch_due()) {
    // Lazy phase: a popped entry whose gain is stale is an upper bound
    // (marginal gains only shrink as coverage grows), so refreshing just
    // the top restores correctness of the argmax.
    std::priority_queue<LazyEntry, std::vector<LazyEntry>, LazyLess> queue;
    {
      std::vector<LazyEntry> init;
      init.reserve(static_cast<std::size_t>(n) * K);
      for (NodeId u = 0; u < n; ++u)
        for (std::uint32_t k = 0; k < K; ++k) {
          singleton_coverage_into(sinst, u, k, scratch, ball);
          ++evals;
          init.push_back({static_cast<std::uint32_t>(ball.size()), 0, u, k});
        }
      queue = std::priority_queue<LazyEntry, std::vector<LazyEntry>, LazyLess>(
          LazyLess{}, std::move(init));
    }

    while (bt.any_open(K) && covered_count < n && !queue.empty()) {
      const LazyEntry top = queue.top();
      queue.pop();
      if (picked[static_cast<std::size_t>(top.u) * K + top.k] || !bt.source_open(top.k))
        continue;
      // A stale zero is still exact: the fresh gain can only be smaller
      // and gains are non-negative.
      if (top.pick_round != round && top.gain != 0) {
        singleton_coverage_into(sinst, top.u, top.k, scratch, ball);
        ++evals;
        queue.push({count_uncovered(ball, covered), round, top.u, top.k});
        continue;
      }
      absorb(top.u, top.k);
      ++round;
      if (switch_due()) break;
    }
  }

  if (bt.any_open(K) && covered_count < n) {
    // Materialized phase: exact marginal counts for every remaining
    // candidate, maintained by decrements through inverse lists.
    struct Cand {
      NodeId u;
      std::uint32_t k;
      std::uint32_t gain;
      bool alive;
    };
    std::vector<Cand> cands;
    std::vector<std::vector<std::uint32_t>> node_to_cands(n);
    for (NodeId u = 0; u < n; ++u)
      for (std::uint32_t k = 0; k < K; ++k) {
        if (picked[static_cast<std::size_t>(u) * K + k]) continue;
        if (!budgets.is_total() && !bt.source_open(k)) continue;
        singleton_coverage_into(sinst, u, k, scratch, ball);
        ++evals;
        const std::uint32_t ci = static_cast<std::uint32_t>(cands.size());
        std::uint32_t gain = 0;
        for (NodeId w : ball) {
          if (covered[w]) continue;
          ++gain;
          node_to_cands[w].push_back(ci);
        }
        cands.push_back({u, k, gain, true});
      }

    while (bt.any_open(K) && covered_count < n) {
      std::int64_t best_gain = -1;
      std::uint32_t best_ci = 0;
      for (std::uint32_t ci = 0; ci < cands.size(); ++ci) {
        const Cand& c = cands[ci];
        if (!c.alive || !bt.source_open(c.k)) continue;
        if (static_cast<std::int64_t>(c.gain) > best_gain) {
          best_gain = c.gain;
          best_ci = ci;
        }
      }
      if (best_gain < 0) break;
      Cand& c = cands[best_ci];
      c.alive = false;
      absorb(c.u, c.k);
      for (NodeId w : ball)  // absorb left the newly covered nodes here
        for (std::uint32_t ci : node_to_cands[w])
          if (cands[ci].alive && cands[ci].gain > 0) --cands[ci].gain;
    }
  }

  return finish_result(std::move(psi), covered, evals);
}

Seeding actual_greedy(const GeneralInstance& inst, const Budgets& budgets, const RngHandle& rng,
                      const ActualGreedyOptions& opts) {
  const NodeId n = inst.node_count();
  const std::uint32_t K = inst.source_count();
  BudgetTracker bt(budgets, K);

  const double total_budget = static_cast<double>(budgets.sum(K));
  const double est_cost = static_cast<double>(n) * K * total_budget * opts.replications *
                          static_cast<double>(n + inst.graph->arc_count());
  if (est_cost > opts.max_cost && !opts.force) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "actual_greedy refused: estimated work %.3g exceeds cap %.3g (use force)",
                  est_cost, opts.max_cost);
    throw std::runtime_error(buf);
  }

  Seeding psi = Seeding::empty(K);
  std::vector<std::uint8_t> picked(static_cast<std::size_t>(n) * K, 0);
  std::uint64_t round = 0;

  while (bt.any_open(K)) {
    // Common random numbers: every candidate in a round is scored under the
    // same streams, so ties are exact and comparisons are low-variance.
    const RngHandle round_rng = rng.derive("pick").derive(round);
    double best_value = -1.0;
    NodeId best_u = 0;
    std::uint32_t best_k = 0;
    bool found = false;
    for (NodeId u = 0; u < n; ++u) {
      for (std::uint32_t k = 0; k < K; ++k) {
        if (picked[static_cast<std::size_t>(u) * K + k] || !bt.source_open(k)) continue;
        Seeding trial = psi;
        trial.sets[k].push_back(u);
        const CoverageEstimate est =
            estimate_coverage(inst, trial, opts.replications, round_rng, opts.max_steps);
        if (est.believers_mean > best_value) {
          best_value = est.believers_mean;
          best_u = u;
          best_k = k;
          found = true;
        }
      }
    }
    if (!found) break;
    picked[static_cast<std::size_t>(best_u) * K + best_k] = 1;
    psi.sets[best_k].push_back(best_u);
    bt.take(best_k);
    ++round;
  }
  psi.normalize();
  return psi;
}

namespace {

double count_candidates(std::uint64_t universe, std::uint64_t max_size) {
  // sum_{b<=max_size} C(universe, b), saturating
  double total = 0.0, term = 1.0;
  for (std::uint64_t b = 0;; ++b) {
    total += term;
    if (b == max_size || total > 1e18) break;
    term *= static_cast<double>(universe - b) / static_cast<double>(b + 1);
  }
  return total;
}

// Enumerates subsets of {0..universe-1} of size 0..max_size in size-major,
// then lexicographic order, invoking visit(members) for each.
template <typename Visit>
void for_each_subset(std::uint32_t universe, std::uint32_t max_size, Visit&& visit) {
  std::vector<std::uint32_t> members;
  std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t start,
                                                              std::uint32_t want) {
    if (want == 0) {
      visit(members);
      return;
    }
    for (std::uint32_t i = start; i + want <= universe; ++i) {
      members.push_back(i);
      rec(i + 1, want - 1);
      members.pop_back();
    }
  };
  for (std::uint32_t size = 0; size <= std::min(max_size, universe); ++size) rec(0, size);
}

template <typename Evaluate>
BruteForceResult brute_force_impl(NodeId n, std::uint32_t K, const Budgets& budgets,
                                  std::uint64_t cap, Evaluate&& evaluate) {
  // Candidate count check first so we refuse instead of spinning.
  double cand_count = 1.0;
  if (budgets.is_total()) {
    cand_count = count_candidates(static_cast<std::uint64_t>(n) * K, budgets.total_cap());
  } else {
    for (std::uint32_t k = 0; k < K; ++k) {
      cand_count *= count_candidates(n, budgets.per_source_caps()[k]);
      if (cand_count > 1e18) break;
    }
  }
  if (cand_count > static_cast<double>(cap)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "brute_force refused: %.6g candidate seedings exceed cap %llu",
                  cand_count, static_cast<unsigned long long>(cap));
    throw std::runtime_error(buf);
  }

  BruteForceResult best;
  best.seeding = Seeding::empty(K);
  best.value = -1.0;
  Seeding current = Seeding::empty(K);

  auto consider = [&]() {
    const double v = evaluate(current);
    if (v > best.value) {
      best.value = v;
      best.seeding = current;
    }
  };

  if (budgets.is_total()) {
    // Universe of (node, source) pairs, node-major.
    for_each_subset(static_cast<std::uint32_t>(n) * K, budgets.total_cap(),
                    [&](const std::vector<std::uint32_t>& members) {
                      for (auto& s : current.sets) s.clear();
                      for (std::uint32_t m : members) current.sets[m % K].push_back(m / K);
                      consider();
                    });
  } else {
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t k) {
      if (k == K) {
        consider();
        return;
      }
      for_each_subset(n, budgets.per_source_caps()[k],
                      [&](const std::vector<std::uint32_t>& members) {
                        current.sets[k].assign(members.begin(), members.end());
                        rec(k + 1);
                      });
    };
    rec(0);
  }
  return best;
}

}  // namespace

BruteForceResult brute_force(const SimplifiedInstance& sinst, const Budgets& budgets,
                             std::uint64_t cap) {
  thread_local std::vector<std::uint8_t> hit;
  thread_local CoverageScratch scratch;
  thread_local std::vector<NodeId> ball;
  const NodeId n = sinst.node_count();
  return brute_force_impl(n, sinst.source_count(), budgets, cap, [&](const Seeding& s) {
    hit.assign(n, 0);
    std::uint32_t count = 0;
    for (std::uint32_t k = 0; k < s.sets.size(); ++k)
      for (NodeId u : s.sets[k]) {
        singleton_coverage_into(sinst, u, k, scratch, ball);
        for (NodeId w : ball)
          if (!hit[w]) {
            hit[w] = 1;
            ++count;
          }
      }
    return static_cast<double>(count);
  });
}

BruteForceResult brute_force(const GeneralInstance& inst, const Budgets& budgets,
                             const RngHandle& rng, std::uint32_t replications,
                             std::uint64_t cap, std::uint32_t max_steps) {
  return brute_force_impl(inst.node_count(), inst.source_count(), budgets, cap,
                          [&](const Seeding& s) {
                            return estimate_coverage(inst, s, replications, rng, max_steps)
                                .believers_mean;
                          });
}

Seeding random_seeding(NodeId n, const std::vector<std::uint32_t>& budgets,
                       const RngHandle& rng) {
  std::uint64_t total = 0;
  for (std::uint32_t b : budgets) total += b;
  if (total > n) throw std::invalid_argument("budgets exceed node count");

  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 eng = rng.engine();
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uniform_int_distribution<std::uint64_t> pick(i, n - 1);
    std::swap(ids[i], ids[pick(eng)]);
  }

  Seeding s = Seeding::empty(static_cast<std::uint32_t>(budgets.size()));
  std::uint64_t next = 0;
  for (std::size_t k = 0; k < budgets.size(); ++k)
    for (std::uint32_t i = 0; i < budgets[k]; ++i) s.sets[k].push_back(ids[next++]);
  s.normalize();
  return s;
}

Seeding high_degree_seeding(const TrustGraph& g, const std::vector<std::uint32_t>& budgets) {
  const NodeId n = g.node_count();
  std::uint64_t total = 0;
  for (std::uint32_t b : budgets) total += b;
  if (total > n) throw std::invalid_argument("budgets exceed node count");

  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<double> weight(n);
  for (NodeId u = 0; u < n; ++u) weight[u] = g.total_out_trust(u);
  std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
    if (weight[a] != weight[b]) return weight[a] > weight[b];
    return a < b;
  });

  Seeding s = Seeding::empty(static_cast<std::uint32_t>(budgets.size()));
  std::uint64_t next = 0;
  for (std::size_t k = 0; k < budgets.size(); ++k)
    for (std::uint32_t i = 0; i < budgets[k]; ++i) s.sets[k].push_back(ids[next++]);
  s.normalize();
  return s;
}

}  // namespace spread
