#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "spread/graphgen.hpp"
#include "spread/instance.hpp"

using namespace spread;

namespace {

double observed_mean_degree(const TrustGraph& g) {
  return static_cast<double>(g.arc_count()) / g.node_count();
}

GeneralInstance wrap(TrustGraph g, std::vector<NodeProfile> profiles) {
  GeneralInstance inst;
  inst.profiles = std::move(profiles);
  inst.graph = std::make_shared<TrustGraph>(std::move(g));
  inst.sources.resize(2);
  for (auto& s : inst.sources) {
    s.info_value = 0.95;
    s.uniform_trust = 0.9;
  }
  return inst;
}

}  // namespace

TEST_CASE("preferential attachment has the exact edge count and stays connected") {
  const RngHandle rng(1);
  const TrustGraph tree = gen_scale_free(64, 1, rng);
  CHECK(tree.arc_count() == 2 * 63);  // a tree, both arc directions

  const TrustGraph g = gen_scale_free(5000, 2, rng.derive("big"));
  CHECK(g.arc_count() == 2 * (2 * 5000 - 3));
  CHECK(observed_mean_degree(g) == doctest::Approx(4.0).epsilon(0.01));
  CHECK(g.symmetric());

  // connectivity by construction: every node attached to a predecessor
  std::vector<char> seen(5000, 0);
  std::vector<NodeId> stack = {0};
  seen[0] = 1;
  std::size_t visited = 0;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    ++visited;
    for (const auto& nb : g.out_arcs(u))
      if (!seen[nb.node]) {
        seen[nb.node] = 1;
        stack.push_back(nb.node);
      }
  }
  CHECK(visited == 5000);

  // heavy tail: a hub well above the mean degree exists
  std::uint32_t max_deg = 0;
  for (NodeId u = 0; u < 5000; ++u) max_deg = std::max(max_deg, g.out_degree(u));
  CHECK(max_deg > 40);
}

TEST_CASE("preferential attachment degree tail fits a power law near -3") {
  const TrustGraph g = gen_scale_free(20000, 2, RngHandle(2));
  const GraphStats st = compute_stats(g);
  CHECK(st.mean_degree == doctest::Approx(4.0).epsilon(0.005));
  CHECK(st.tail_exponent < -2.4);
  CHECK(st.tail_exponent > -3.4);
}

TEST_CASE("two-group random graph hits the requested degree and mixing ratio") {
  const RngHandle rng(3);
  const TrustGraph g = gen_random_group(10000, 4.0, 2.0, rng);
  CHECK(g.symmetric());

  const GraphStats st = compute_stats(g);
  // mean degree: binomial with sigma about 0.03 at this size
  CHECK(std::abs(st.mean_degree - 4.0) < 0.15);

  // same-group links happen at twice the cross rate and pair counts are
  // nearly equal, so the link counts should sit near 2:1
  const double ratio =
      static_cast<double>(st.within_links) / static_cast<double>(st.across_links);
  CHECK(ratio > 1.75);
  CHECK(ratio < 2.25);

  // both groups have n/2 nodes
  std::size_t g0 = 0;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (g.group(u) == 0) ++g0;
  CHECK(g0 == 5000);

  // ratio 1 reduces to a flat random graph
  const TrustGraph er = gen_random_group(10000, 4.0, 1.0, rng.derive("er"));
  const GraphStats est = compute_stats(er);
  CHECK(std::abs(est.mean_degree - 4.0) < 0.15);
  const double er_ratio =
      static_cast<double>(est.within_links) / static_cast<double>(est.across_links);
  CHECK(std::abs(er_ratio - 1.0) < 0.1);
}

TEST_CASE("geometric graph calibrates its density and favors close same-group pairs") {
  const RngHandle rng(4);
  GeometricOptions opts;
  opts.avg_degree = 4.0;
  opts.decay = 0.1;
  opts.same_group_boost = 2.0;
  const TrustGraph g = gen_geometric_group(5000, rng, opts);
  CHECK(g.symmetric());
  const GraphStats st = compute_stats(g);
  CHECK(std::abs(st.mean_degree - 4.0) < 0.4);  // pilot calibration tolerance
  CHECK(st.within_links > st.across_links);
}

TEST_CASE("generators reproduce exactly from the same stream") {
  auto arcs_of = [](const TrustGraph& g) {
    std::vector<std::tuple<NodeId, NodeId, double>> v;
    for (const Arc& a : g.arcs()) v.emplace_back(a.src, a.dst, a.trust);
    return v;
  };
  const RngHandle rng(5);
  CHECK(arcs_of(gen_scale_free(500, 2, rng)) == arcs_of(gen_scale_free(500, 2, rng)));
  CHECK(arcs_of(gen_random_group(500, 4.0, 2.0, rng)) ==
        arcs_of(gen_random_group(500, 4.0, 2.0, rng)));
  CHECK(arcs_of(gen_geometric_group(500, rng)) == arcs_of(gen_geometric_group(500, rng)));
  CHECK(arcs_of(gen_scale_free(500, 2, rng)) !=
        arcs_of(gen_scale_free(500, 2, rng.derive("other"))));
}

TEST_CASE("homogeneous trust sets every arc to a") {
  const RngHandle rng(6);
  const TrustGraph g = gen_random_group(400, 4.0, 2.0, rng);
  TrustParams tp;
  tp.scenario = TrustScenario::Homogeneous;
  tp.a = 0.7;
  const TrustGraph w = assign_trust(g, tp, rng.derive("t"));
  REQUIRE(w.arc_count() == g.arc_count());
  for (const Arc& a : w.arcs()) CHECK(a.trust == 0.7);
}

TEST_CASE("group-variable trust pins within arcs and solves the across level") {
  const RngHandle rng(7);
  const TrustGraph g = gen_random_group(2000, 4.0, 2.0, rng);
  TrustParams tp;
  tp.scenario = TrustScenario::GroupVariable;
  tp.a = 0.7;
  tp.eps = 0.05;
  const TrustGraph w = assign_trust(g, tp, rng.derive("t"));

  double across = -1.0;
  for (const Arc& a : w.arcs()) {
    if (w.group(a.src) == w.group(a.dst)) {
      CHECK(a.trust == doctest::Approx(0.75));
    } else {
      if (across < 0.0) across = a.trust;
      CHECK(a.trust == doctest::Approx(across));  // one shared level
    }
  }
  CHECK(across < 0.7);  // pulled below a to compensate the within surplus
  CHECK(w.mean_trust() == doctest::Approx(0.7).epsilon(1e-12));

  // infeasible overall mean: the within arcs alone already exceed it
  TrustParams bad = tp;
  bad.a = 0.05;
  bad.eps = 0.5;
  CHECK_THROWS_AS(assign_trust(g, bad, rng.derive("t")), std::invalid_argument);
}

TEST_CASE("group-range trust draws bands and keeps pairs symmetric") {
  const RngHandle rng(8);
  const TrustGraph g = gen_random_group(2000, 4.0, 2.0, rng);
  TrustParams tp;
  tp.scenario = TrustScenario::GroupRange;
  tp.a = 0.7;
  tp.band = 0.05;
  tp.within_low = 0.7;
  tp.within_high = 0.8;
  const TrustGraph w = assign_trust(g, tp, rng.derive("t"));

  double across_min = 2.0, across_max = -1.0;
  for (const Arc& a : w.arcs()) {
    if (w.group(a.src) == w.group(a.dst)) {
      CHECK(a.trust >= 0.7);
      CHECK(a.trust <= 0.8);
    } else {
      across_min = std::min(across_min, a.trust);
      across_max = std::max(across_max, a.trust);
    }
  }
  CHECK(across_max - across_min <= 0.1 + 1e-12);  // one band of half-width 0.05
  CHECK(std::abs(w.mean_trust() - 0.7) < 0.01);

  // symmetric pairs share one draw
  for (NodeId u = 0; u < w.node_count(); ++u)
    for (const auto& nb : w.out_arcs(u)) {
      bool found = false;
      for (const auto& back : w.out_arcs(nb.node))
        if (back.node == u && back.trust == nb.trust) found = true;
      CHECK(found);
    }
}

TEST_CASE("thresholds come out as pairs or per-node ranges") {
  const RngHandle rng(9);
  const TrustGraph g = gen_random_group(500, 4.0, 2.0, rng);

  ThresholdParams pair;
  pair.t_low = 0.15;
  pair.t_high = 0.55;
  const auto fixed = assign_thresholds(g, pair, rng.derive("a"));
  REQUIRE(fixed.size() == 500);
  for (const NodeProfile& p : fixed) {
    CHECK(p.t_low == 0.15);
    CHECK(p.t_high == 0.55);
  }

  ThresholdParams ranged;
  ranged.range_mode = true;
  const auto drawn = assign_thresholds(g, ranged, rng.derive("b"));
  bool varied = false;
  for (const NodeProfile& p : drawn) {
    CHECK(p.t_low >= 0.1);
    CHECK(p.t_low <= 0.2);
    CHECK(p.t_high >= 0.5);
    CHECK(p.t_high <= 0.6);
    varied = varied || p.t_low != drawn[0].t_low;
  }
  CHECK(varied);

  ThresholdParams bad = ranged;
  bad.low_max = 0.55;  // overlaps the high range
  CHECK_THROWS_AS(assign_thresholds(g, bad, rng.derive("c")), std::invalid_argument);
}

TEST_CASE("generated instances pass full validation") {
  const RngHandle rng(10);
  for (const char* kind : {"scale-free", "random-group", "geometric"}) {
    TrustGraph topo = kind == std::string("scale-free")
                          ? gen_scale_free(600, 2, rng.derive(kind))
                          : kind == std::string("random-group")
                                ? gen_random_group(600, 4.0, 2.0, rng.derive(kind))
                                : gen_geometric_group(600, rng.derive(kind));
    TrustParams tp;
    tp.scenario = TrustScenario::GroupRange;
    TrustGraph w = assign_trust(topo, tp, rng.derive("trust"));
    ThresholdParams thp;
    thp.range_mode = true;
    auto profiles = assign_thresholds(w, thp, rng.derive("prof"));
    const GeneralInstance inst = wrap(std::move(w), std::move(profiles));
    CHECK(validate_instance(inst).empty());
  }
}

TEST_CASE("stats report exact counts on a hand graph") {
  TrustGraph g(4, true);
  g.set_group(0, 0);
  g.set_group(1, 0);
  g.set_group(2, 1);
  g.set_group(3, 1);
  g.add_edge(0, 1, 0.5);  // within
  g.add_edge(2, 3, 0.5);  // within
  g.add_edge(0, 2, 0.5);  // across
  g.finalize();
  const GraphStats st = compute_stats(g);
  CHECK(st.within_links == 2);
  CHECK(st.across_links == 1);
  CHECK(st.mean_degree == doctest::Approx(6.0 / 4.0));
}
