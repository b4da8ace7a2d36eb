#include "spread/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

namespace spread {

namespace {

constexpr double kDedupeEps = 1e-12;

void threshold_window(const GeneralInstance& inst, double& t_min, double& t_max) {
  if (inst.profiles.empty()) throw std::invalid_argument("instance has no node profiles");
  t_min = inst.profiles[0].t_low;
  t_max = inst.profiles[0].t_high;
  for (const NodeProfile& pr : inst.profiles) {
    t_min = std::min(t_min, pr.t_low);
    t_max = std::max(t_max, pr.t_high);
  }
}

double merged_info_value(const GeneralInstance& inst) {
  double num = 0.0, den = 0.0;
  for (const SourceSpec& s : inst.sources) {
    num += s.info_value * static_cast<double>(s.budget);
    den += static_cast<double>(s.budget);
  }
  if (den == 0.0) throw std::invalid_argument("total budget is zero");
  return num / den;
}

void sort_dedupe(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(),
                       [](double a, double b) { return std::abs(a - b) <= kDedupeEps; }),
          v.end());
}

}  // namespace

SimplifiedInstance build_simplified(const GeneralInstance& inst, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("simplified threshold must be positive");
  if (!inst.graph) throw std::invalid_argument("instance has no graph");
  const NodeId n = inst.node_count();
  const std::uint32_t K = inst.source_count();
  if (K == 0) throw std::invalid_argument("instance has no sources");

  SourceSpec merged;
  merged.info_value = merged_info_value(inst);
  std::uint64_t total_budget = 0;
  for (const SourceSpec& s : inst.sources) total_budget += s.budget;
  merged.budget = static_cast<std::uint32_t>(std::min<std::uint64_t>(total_budget, 0xffffffffu));

  bool all_uniform = true;
  for (const SourceSpec& s : inst.sources) all_uniform = all_uniform && s.node_trust.empty();
  if (all_uniform) {
    double sum = 0.0;
    for (const SourceSpec& s : inst.sources) sum += s.uniform_trust;
    merged.uniform_trust = sum / K;
  } else {
    merged.node_trust.resize(n);
    for (NodeId u = 0; u < n; ++u) {
      double sum = 0.0;
      for (const SourceSpec& s : inst.sources) sum += s.trust(u);
      merged.node_trust[u] = sum / K;
    }
  }

  SimplifiedInstance out;
  out.graph = inst.graph;
  out.threshold.assign(n, t);
  out.sources = {std::move(merged)};
  return out;
}

ThresholdSet thresholds_homogeneous(const GeneralInstance& inst) {
  ThresholdSet ts;
  threshold_window(inst, ts.t_min, ts.t_max);
  const double I = merged_info_value(inst);

  const TrustGraph& g = *inst.graph;
  ts.a_avg = g.mean_trust();

  // A zero lower endpoint would make the ladder endless (and a threshold
  // of exactly zero is meaningless in the simplified model), so clamp it.
  // The cutoff must stay positive or underflow to 0.0 never terminates.
  const double floor_t = std::max(ts.t_min, kDedupeEps);
  if (ts.a_avg <= 0.0 || ts.a_avg >= 1.0) {
    ts.degenerate = true;
  } else {
    const double cutoff = std::max(ts.t_min - kDedupeEps, kDedupeEps);
    for (double v = I; v >= cutoff; v *= ts.a_avg)
      if (v <= ts.t_max + kDedupeEps) ts.values.push_back(v);
  }
  ts.values.push_back(floor_t);
  ts.values.push_back(std::max(ts.t_max, floor_t));
  sort_dedupe(ts.values);
  return ts;
}

namespace {

// 1-D 2-means with deterministic seeding; returns false when the split
// degenerates (all trusts equal or one cluster collapses onto the other).
bool two_means(const std::vector<double>& xs, double& lo, double& hi) {
  if (xs.size() < 2) return false;
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  double c1 = sorted[sorted.size() / 4];
  double c2 = sorted[(sorted.size() * 3) / 4];
  if (c1 == c2) return false;

  for (int iter = 0; iter < 100; ++iter) {
    double s1 = 0.0, s2 = 0.0;
    std::size_t n1 = 0, n2 = 0;
    for (double x : sorted) {
      if (std::abs(x - c1) <= std::abs(x - c2)) {
        s1 += x;
        ++n1;
      } else {
        s2 += x;
        ++n2;
      }
    }
    if (n1 == 0 || n2 == 0) return false;
    const double m1 = s1 / n1, m2 = s2 / n2;
    if (m1 == c1 && m2 == c2) break;
    c1 = m1;
    c2 = m2;
  }
  lo = std::min(c1, c2);
  hi = std::max(c1, c2);
  return hi - lo > kDedupeEps;
}

}  // namespace

ThresholdSet thresholds_two_level(const GeneralInstance& inst) {
  const TrustGraph& g = *inst.graph;
  std::vector<double> trusts;
  trusts.reserve(g.arc_count());
  for (const Arc& a : g.arcs()) trusts.push_back(a.trust);

  double a_lo = 0.0, a_hi = 0.0;
  if (!two_means(trusts, a_lo, a_hi)) return thresholds_homogeneous(inst);

  ThresholdSet ts;
  threshold_window(inst, ts.t_min, ts.t_max);
  ts.a_low = a_lo;
  ts.a_high = a_hi;
  if (a_hi >= 1.0) ts.degenerate = true;  // closure would not shrink

  const double floor_t = std::max(ts.t_min, kDedupeEps);
  if (!ts.degenerate) {
    const double I = merged_info_value(inst);
    // Frontier search over products I * a_high^i * a_low^j; everything
    // below the window is pruned because further factors only shrink it.
    std::set<double> seen;
    std::vector<double> frontier{I};
    seen.insert(I);
    while (!frontier.empty()) {
      const double v = frontier.back();
      frontier.pop_back();
      if (v <= ts.t_max + kDedupeEps) ts.values.push_back(v);
      for (double f : {a_hi, a_lo}) {
        const double w = v * f;
        if (w < floor_t - kDedupeEps) continue;
        auto near = seen.lower_bound(w - kDedupeEps);
        if (near != seen.end() && std::abs(*near - w) <= kDedupeEps) continue;
        seen.insert(w);
        frontier.push_back(w);
      }
    }
    std::erase_if(ts.values, [&](double v) { return v < floor_t - kDedupeEps; });
  }

  ts.values.push_back(floor_t);
  ts.values.push_back(std::max(ts.t_max, floor_t));
  sort_dedupe(ts.values);
  return ts;
}

Seeding partition_seeds(const std::vector<NodeId>& merged,
                        const std::vector<std::uint32_t>& budgets, const RngHandle& rng) {
  std::uint64_t total = 0;
  for (std::uint32_t b : budgets) total += b;
  if (merged.size() > total)
    throw std::invalid_argument("merged seed list exceeds the combined budget");

  std::vector<NodeId> pool = merged;
  std::mt19937_64 eng = rng.engine();
  for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(eng)]);
  }

  Seeding s = Seeding::empty(static_cast<std::uint32_t>(budgets.size()));
  std::size_t next = 0;
  for (std::size_t k = 0; k < budgets.size() && next < pool.size(); ++k)
    for (std::uint32_t i = 0; i < budgets[k] && next < pool.size(); ++i)
      s.sets[k].push_back(pool[next++]);
  s.normalize();
  return s;
}

ProjectionReport projected_greedy(const GeneralInstance& inst, const ThresholdSet& omega,
                                  const RngHandle& rng, const ProjectedGreedyOptions& opts) {
  if (omega.values.empty()) throw std::invalid_argument("threshold set is empty");

  std::vector<std::uint32_t> budgets;
  for (const SourceSpec& s : inst.sources) budgets.push_back(s.budget);

  // One evaluation stream shared by every threshold: candidates face the
  // same replication noise, so the argmax compares like with like.
  const RngHandle eval_rng = rng.derive("eval");
  const RngHandle part_rng = rng.derive("partition");

  ProjectionReport report;
  for (std::size_t ti = 0; ti < omega.values.size(); ++ti) {
    const double t = omega.values[ti];
    ThresholdCandidate cand;
    cand.threshold = t;

    const SimplifiedInstance sinst = build_simplified(inst, t);
    const GreedyResult gr =
        greedy_lazy_hybrid(sinst, Budgets::total(sinst.sources[0].budget), opts.greedy);
    cand.seeding = partition_seeds(gr.seeding.sets[0], budgets,
                                   part_rng.derive(static_cast<std::uint64_t>(ti)));
    cand.estimate =
        estimate_coverage(inst, cand.seeding, opts.replications, eval_rng, opts.max_steps);

    report.candidates.push_back(std::move(cand));
  }

  report.best_index = 0;
  for (std::size_t i = 1; i < report.candidates.size(); ++i)
    if (report.candidates[i].estimate.believers_mean >
        report.candidates[report.best_index].estimate.believers_mean)
      report.best_index = i;
  return report;
}

void write_projection_csv(std::ostream& os, const ProjectionReport& report,
                          const std::vector<std::string>& seed_paths) {
  if (seed_paths.size() != report.candidates.size())
    throw std::invalid_argument("one seeds path per candidate required");
  os << "threshold,coverage_mean,coverage_stderr,seeds_file\n";
  char buf[128];
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    const ThresholdCandidate& c = report.candidates[i];
    std::snprintf(buf, sizeof buf, "%.9g,%.6f,%.6f,", c.threshold, c.estimate.believers_mean,
                  c.estimate.believers_stderr);
    os << buf << seed_paths[i] << "\n";
  }
}

}  // namespace spread
