#include "spread/graphgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spread {

namespace {

// Random permutation split: first half group 0, rest group 1.
void assign_two_groups(TrustGraph& g, NodeId n, const RngHandle& rng) {
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 eng = rng.derive("groups").engine();
  std::shuffle(perm.begin(), perm.end(), eng);
  for (NodeId i = 0; i < n; ++i) g.set_group(perm[i], i < n / 2 ? 0 : 1);
}

}  // namespace

TrustGraph gen_scale_free(NodeId n, std::uint32_t m, const RngHandle& rng) {
  if (n == 0) throw std::invalid_argument("empty graph");
  if (m == 0) throw std::invalid_argument("attachment count must be positive");
  TrustGraph g(n, true);
  std::mt19937_64 eng = rng.derive("topology").engine();

  // One endpoint entry per arc end; uniform picks from it are
  // degree-proportional.
  std::vector<NodeId> ends;
  ends.reserve(2 * static_cast<std::size_t>(m) * n);
  std::vector<NodeId> targets;

  for (NodeId v = 1; v < n; ++v) {
    targets.clear();
    if (v <= m) {
      for (NodeId t = 0; t < v; ++t) targets.push_back(t);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
      while (targets.size() < m) {
        const NodeId t = ends[pick(eng)];
        if (std::find(targets.begin(), targets.end(), t) == targets.end())
          targets.push_back(t);
      }
    }
    for (NodeId t : targets) {
      g.add_edge(v, t, 1.0);
      ends.push_back(v);
      ends.push_back(t);
    }
  }

  assign_two_groups(g, n, rng);
  g.finalize();
  return g;
}

namespace {

// Visits each pair index in 0..total-1 independently with probability p by
// skipping geometrically past the misses.
template <typename Emit>
void skip_sample(double total, double p, std::mt19937_64& eng, Emit&& emit) {
  if (p <= 0.0 || total <= 0.0) return;
  if (p >= 1.0) {
    for (double t = 0; t < total; ++t) emit(t);
    return;
  }
  const double log1mp = std::log1p(-p);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double idx = -1.0;
  for (;;) {
    const double u = std::max(unif(eng), 1e-300);
    idx += 1.0 + std::floor(std::log(u) / log1mp);
    if (idx >= total) return;
    emit(idx);
  }
}

}  // namespace

TrustGraph gen_random_group(NodeId n, double avg_degree, double ratio, const RngHandle& rng) {
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  if (ratio <= 0.0) throw std::invalid_argument("ratio must be positive");
  const double half = static_cast<double>(n) / 2.0;
  const double p_diff = avg_degree / (ratio * (half - 1.0) + half);
  const double p_same = ratio * p_diff;
  if (p_same > 1.0 || p_diff > 1.0)
    throw std::invalid_argument("requested density is infeasible");

  TrustGraph g(n, true);
  assign_two_groups(g, n, rng);

  std::vector<NodeId> a_members, b_members;
  for (NodeId u = 0; u < n; ++u) (g.group(u) == 0 ? a_members : b_members).push_back(u);

  std::mt19937_64 eng = rng.derive("links").engine();

  auto within = [&](const std::vector<NodeId>& mem) {
    const double gsz = static_cast<double>(mem.size());
    const double total = gsz * (gsz - 1.0) / 2.0;
    // Pair indices arrive ascending, so the row decode can just advance.
    std::size_t row = 0;
    double row_start = 0.0;
    double row_len = gsz - 1.0;
    skip_sample(total, p_same, eng, [&](double t) {
      while (t >= row_start + row_len) {
        row_start += row_len;
        row_len -= 1.0;
        ++row;
      }
      const std::size_t col = row + 1 + static_cast<std::size_t>(t - row_start);
      g.add_edge(mem[row], mem[col], 1.0);
    });
  };
  within(a_members);
  within(b_members);

  const double bsz = static_cast<double>(b_members.size());
  skip_sample(static_cast<double>(a_members.size()) * bsz, p_diff, eng, [&](double t) {
    const std::size_t i = static_cast<std::size_t>(t / bsz);
    const std::size_t j = static_cast<std::size_t>(t - static_cast<double>(i) * bsz);
    g.add_edge(a_members[i], b_members[j], 1.0);
  });

  g.finalize();
  return g;
}

TrustGraph gen_geometric_group(NodeId n, const RngHandle& rng, const GeometricOptions& opts) {
  if (n < 2) throw std::invalid_argument("need at least two nodes");
  TrustGraph g(n, true);
  assign_two_groups(g, n, rng);

  std::vector<double> x(n), y(n);
  {
    std::mt19937_64 eng = rng.derive("positions").engine();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (NodeId u = 0; u < n; ++u) {
      x[u] = unif(eng);
      y[u] = unif(eng);
    }
  }

  const double inv_decay = 1.0 / opts.decay;
  auto factor = [&](NodeId u, NodeId v) {
    const double dx = x[u] - x[v], dy = y[u] - y[v];
    const double f = std::exp(-std::sqrt(dx * dx + dy * dy) * inv_decay);
    return g.group(u) == g.group(v) ? f * opts.same_group_boost : f;
  };

  // Calibrate the base rate by pilot sampling so the expected mean degree
  // matches the request.
  double mean_factor;
  {
    std::mt19937_64 eng = rng.derive("pilot").engine();
    std::uniform_int_distribution<NodeId> pick(0, n - 1);
    double sum = 0.0;
    std::uint32_t got = 0;
    while (got < opts.pilot_pairs) {
      const NodeId u = pick(eng), v = pick(eng);
      if (u == v) continue;
      sum += factor(u, v);
      ++got;
    }
    mean_factor = sum / opts.pilot_pairs;
  }
  if (mean_factor <= 0.0) throw std::runtime_error("pilot calibration degenerated");
  const double q = opts.avg_degree / (static_cast<double>(n - 1) * mean_factor);

  // Stateless coins per pair index: skipping a pair consumes nothing.
  const RngHandle link_rng = rng.derive("links");
  std::uint64_t pair_idx = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v, ++pair_idx) {
      const double p = std::min(1.0, q * factor(u, v));
      if (link_rng.uniform_at(pair_idx) < p) g.add_edge(u, v, 1.0);
    }
  }

  g.finalize();
  return g;
}

namespace {

double within_fraction(const TrustGraph& g, std::uint64_t& within, std::uint64_t& across) {
  within = across = 0;
  for (const Arc& a : g.arcs()) {
    if (a.src >= a.dst) continue;
    if (g.group(a.src) == g.group(a.dst))
      ++within;
    else
      ++across;
  }
  const std::uint64_t total = within + across;
  return total == 0 ? 0.0 : static_cast<double>(within) / static_cast<double>(total);
}

}  // namespace

TrustGraph assign_trust(const TrustGraph& g, const TrustParams& params, const RngHandle& rng) {
  if (!g.finalized()) throw std::logic_error("graph not finalized");
  if (!g.symmetric()) throw std::invalid_argument("trust scenarios expect symmetric graphs");

  std::uint64_t within = 0, across = 0;
  const double f_within = within_fraction(g, within, across);

  double a_within_lo = params.a, a_within_hi = params.a;
  double a_across_lo = params.a, a_across_hi = params.a;
  switch (params.scenario) {
    case TrustScenario::Homogeneous:
      break;
    case TrustScenario::GroupVariable: {
      const double aw = params.a + params.eps;
      double ax = params.a;
      if (across > 0) ax = (params.a - f_within * aw) / (1.0 - f_within);
      else if (params.eps != 0.0)
        throw std::invalid_argument("no across-group links to balance the within surplus");
      char buf[160];
      if (aw < 0.0 || aw > 1.0 || ax < 0.0 || ax > 1.0) {
        std::snprintf(buf, sizeof buf,
                      "group-variable trust infeasible: within %.4f, across %.4f "
                      "(within-link fraction %.4f)",
                      aw, ax, f_within);
        throw std::invalid_argument(buf);
      }
      a_within_lo = a_within_hi = aw;
      a_across_lo = a_across_hi = ax;
      break;
    }
    case TrustScenario::GroupRange: {
      const double mean_w = 0.5 * (params.within_low + params.within_high);
      double center = params.a;
      if (across > 0) center = (params.a - f_within * mean_w) / (1.0 - f_within);
      a_within_lo = params.within_low;
      a_within_hi = params.within_high;
      a_across_lo = center - params.band;
      a_across_hi = center + params.band;
      char buf[160];
      if (a_across_lo < 0.0 || a_across_hi > 1.0) {
        std::snprintf(buf, sizeof buf,
                      "group-range trust infeasible: across band [%.4f, %.4f] "
                      "(within-link fraction %.4f)",
                      a_across_lo, a_across_hi, f_within);
        throw std::invalid_argument(buf);
      }
      break;
    }
  }

  TrustGraph out(g.node_count(), true);
  for (NodeId u = 0; u < g.node_count(); ++u) out.set_group(u, g.group(u));

  std::mt19937_64 eng = rng.engine();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  // Arcs are sorted by (src, dst), so unordered pairs come in a fixed order
  // and the draw sequence is reproducible.
  for (const Arc& a : g.arcs()) {
    if (a.src >= a.dst) continue;
    const bool same = g.group(a.src) == g.group(a.dst);
    const double lo = same ? a_within_lo : a_across_lo;
    const double hi = same ? a_within_hi : a_across_hi;
    const double trust = lo == hi ? lo : lo + (hi - lo) * unif(eng);
    out.add_edge(a.src, a.dst, trust);
  }
  out.finalize();
  return out;
}

std::vector<NodeProfile> assign_thresholds(const TrustGraph& g, const ThresholdParams& params,
                                           const RngHandle& rng) {
  const NodeId n = g.node_count();
  std::vector<NodeProfile> out(n);
  if (!params.range_mode) {
    if (params.t_low > params.t_high)
      throw std::invalid_argument("threshold pair out of order");
    for (NodeId u = 0; u < n; ++u) out[u] = {params.t_low, params.t_high};
    return out;
  }
  if (params.low_max > params.high_min)
    throw std::invalid_argument("threshold ranges overlap; t_low could exceed t_high");
  std::mt19937_64 eng = rng.engine();
  std::uniform_real_distribution<double> low(params.low_min, params.low_max);
  std::uniform_real_distribution<double> high(params.high_min, params.high_max);
  for (NodeId u = 0; u < n; ++u) {
    out[u].t_low = low(eng);
    out[u].t_high = high(eng);
  }
  return out;
}

GraphStats compute_stats(const TrustGraph& g, std::uint32_t tail_xmin) {
  GraphStats st;
  const NodeId n = g.node_count();
  if (n == 0) return st;

  double sum = 0.0, sumsq = 0.0;
  for (NodeId u = 0; u < n; ++u) {
    const double d = g.out_degree(u);
    sum += d;
    sumsq += d * d;
  }
  st.mean_degree = sum / n;
  st.degree_variance = sumsq / n - st.mean_degree * st.mean_degree;

  // Continuous max-likelihood estimate on the tail, reported negative.
  double log_sum = 0.0;
  std::uint64_t tail_n = 0;
  const double x0 = static_cast<double>(tail_xmin) - 0.5;
  for (NodeId u = 0; u < n; ++u) {
    const double d = g.out_degree(u);
    if (d >= tail_xmin) {
      log_sum += std::log(d / x0);
      ++tail_n;
    }
  }
  st.tail_exponent = tail_n == 0 ? 0.0 : -(1.0 + static_cast<double>(tail_n) / log_sum);

  within_fraction(g, st.within_links, st.across_links);
  return st;
}

}  // namespace spread
