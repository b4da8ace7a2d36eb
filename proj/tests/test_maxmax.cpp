#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "spread/engine.hpp"
#include "spread/graphgen.hpp"
#include "spread/maxmax.hpp"

using namespace spread;

namespace {

SimplifiedInstance make_path(std::vector<double> trusts, double t, double trust_a = 1.0,
                             double payload = 1.0) {
  const NodeId n = static_cast<NodeId>(trusts.size() + 1);
  TrustGraph g(n, true);
  for (NodeId u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1, trusts[u]);
  g.finalize();
  SimplifiedInstance s;
  s.graph = std::make_shared<TrustGraph>(std::move(g));
  s.threshold.assign(n, t);
  s.sources.resize(1);
  s.sources[0].info_value = payload;
  s.sources[0].uniform_trust = trust_a;
  s.sources[0].budget = n;
  return s;
}

// The general instance whose deterministic dynamics the simplified model
// abbreviates: equal thresholds, no blending, no evacuation, certain
// transmission.
GeneralInstance to_general(const SimplifiedInstance& s) {
  GeneralInstance g;
  g.graph = s.graph;
  g.profiles.resize(s.node_count());
  for (NodeId u = 0; u < s.node_count(); ++u)
    g.profiles[u] = NodeProfile{s.threshold[u], s.threshold[u]};
  g.sources = s.sources;
  g.lambda_d = 0.0;
  g.lambda_s = 0.0;
  g.tau = kTauInfinity;
  g.transmit_p = 1.0;
  return g;
}

std::vector<NodeId> engine_converted(const SimplifiedInstance& s, const Seeding& seeds) {
  const GeneralInstance g = to_general(s);
  DiffusionState st(g);
  apply_seeding(st, g, seeds);
  const RngHandle rng(0);
  for (std::uint32_t i = 1; i <= 4 * s.node_count() + 4; ++i) {
    const StepDelta d = step(st, g, rng);
    if (!d.value_changed && !d.pending_countdowns) break;
  }
  std::vector<NodeId> out;
  for (NodeId u = 0; u < s.node_count(); ++u)
    if (st.ever_believed(u)) out.push_back(u);
  return out;
}

SimplifiedInstance random_simplified(const RngHandle& rng, NodeId n, std::uint32_t K) {
  auto eng = rng.engine();
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  TrustGraph g(n, true);
  // random spanning tree plus extra edges
  for (NodeId u = 1; u < n; ++u) g.add_edge(u, eng() % u, unif(eng));
  for (NodeId e = 0; e < n; ++e) {
    const NodeId u = eng() % n, v = eng() % n;
    if (u == v) continue;
    bool dup = false;
    for (const Arc& a : g.arcs())
      if ((a.src == u && a.dst == v) || (a.src == v && a.dst == u)) dup = true;
    if (!dup) g.add_edge(u, v, unif(eng));
  }
  g.finalize();
  SimplifiedInstance s;
  s.graph = std::make_shared<TrustGraph>(std::move(g));
  s.threshold.resize(n);
  for (NodeId u = 0; u < n; ++u) s.threshold[u] = 0.1 + 0.8 * unif(eng);
  s.sources.resize(K);
  for (std::uint32_t k = 0; k < K; ++k) {
    s.sources[k].info_value = 0.5 + 0.5 * unif(eng);
    s.sources[k].uniform_trust = unif(eng);
    s.sources[k].budget = n;
  }
  return s;
}

}  // namespace

TEST_CASE("coverage on a path is the prefix where the product clears t") {
  // products after the seed: 0.9, 0.9*0.8=0.72, then *0.5=0.36
  const SimplifiedInstance s = make_path({0.9, 0.8, 0.5}, 0.5);
  CHECK(singleton_coverage(s, 0, 0) == std::vector<NodeId>{0, 1, 2});

  // source trust scales the whole path: 0.6, 0.54, then 0.432 < t
  const SimplifiedInstance weak = make_path({0.9, 0.8, 0.5}, 0.5, 0.6);
  CHECK(weak.sources[0].trust(0) * 1.0 == doctest::Approx(0.6));
  CHECK(singleton_coverage(weak, 0, 0) == std::vector<NodeId>{0, 1});

  // seed below its own threshold converts nothing
  const SimplifiedInstance high = make_path({0.9}, 1.1);
  CHECK(singleton_coverage(high, 0, 0).empty());
}

TEST_CASE("absorbing nodes do not forward") {
  // star: center 0 below threshold only via weak arc, strong beyond
  TrustGraph g(4, true);
  g.add_edge(0, 1, 0.4);   // weak first hop
  g.add_edge(1, 2, 1.0);
  g.add_edge(2, 3, 1.0);
  g.finalize();
  SimplifiedInstance s;
  s.graph = std::make_shared<TrustGraph>(std::move(g));
  s.threshold = {0.5, 0.5, 0.3, 0.3};
  s.sources.resize(1);
  s.sources[0].budget = 4;

  // 1 absorbs 0.4 < 0.5 and stops; 2 and 3 stay unreached even though
  // 0.4 >= their own thresholds
  CHECK(singleton_coverage(s, 0, 0) == std::vector<NodeId>{0});
}

TEST_CASE("best path wins even with more hops") {
  // two routes 0->3: direct arc 0.5, detour 0.9*0.9 = 0.81
  TrustGraph g(4, true);
  g.add_edge(0, 3, 0.5);
  g.add_edge(0, 1, 0.9);
  g.add_edge(1, 3, 0.9);
  g.add_edge(0, 2, 0.9);  // unrelated branch
  g.finalize();
  SimplifiedInstance s;
  s.graph = std::make_shared<TrustGraph>(std::move(g));
  s.threshold = {0.1, 0.1, 0.1, 0.75};
  s.sources.resize(1);
  s.sources[0].budget = 4;
  CHECK(singleton_coverage(s, 0, 0) == std::vector<NodeId>{0, 1, 2, 3});
}

TEST_CASE("singleton coverage equals the deterministic engine run") {
  const RngHandle base(404);
  for (std::uint64_t trial = 0; trial < 40; ++trial) {
    const RngHandle rng = base.derive(trial);
    const NodeId n = 5 + static_cast<NodeId>(rng.derive("n").uniform_at(0) * 25);
    const SimplifiedInstance s = random_simplified(rng, n, 2);
    const NodeId u = static_cast<NodeId>(rng.derive("u").uniform_at(0) * n);
    const std::uint32_t k = rng.derive("k").uniform_at(0) < 0.5 ? 0 : 1;

    Seeding seeds = Seeding::empty(2);
    seeds.sets[k] = {u};
    CHECK(singleton_coverage(s, u, k) == engine_converted(s, seeds));
  }
}

TEST_CASE("union coverage is the union of singleton balls and matches the engine") {
  const RngHandle base(405);
  for (std::uint64_t trial = 0; trial < 25; ++trial) {
    const RngHandle rng = base.derive(trial);
    const SimplifiedInstance s = random_simplified(rng, 20, 3);
    Seeding seeds = Seeding::empty(3);
    auto eng = rng.derive("pick").engine();
    for (std::uint32_t k = 0; k < 3; ++k)
      for (int i = 0; i < 2; ++i) seeds.sets[k].push_back(eng() % 20);
    seeds.normalize();

    const UnionCoverage uc = union_coverage(s, seeds);
    std::vector<NodeId> manual;
    for (std::uint32_t k = 0; k < 3; ++k)
      for (NodeId u : seeds.sets[k]) {
        const auto ball = singleton_coverage(s, u, k);
        manual.insert(manual.end(), ball.begin(), ball.end());
      }
    std::sort(manual.begin(), manual.end());
    manual.erase(std::unique(manual.begin(), manual.end()), manual.end());

    CHECK(uc.converted == manual);
    CHECK(uc.count == manual.size());
    CHECK(uc.converted == engine_converted(s, seeds));
  }
}

TEST_CASE("union coverage is monotone and submodular") {
  const RngHandle base(406);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const RngHandle rng = base.derive(trial);
    const SimplifiedInstance s = random_simplified(rng, 18, 2);
    auto eng = rng.derive("sets").engine();

    // S subset of T, extra pair x not in T
    Seeding small = Seeding::empty(2), big = Seeding::empty(2);
    for (int i = 0; i < 2; ++i) small.sets[eng() % 2].push_back(eng() % 18);
    big = small;
    for (int i = 0; i < 3; ++i) big.sets[eng() % 2].push_back(eng() % 18);
    small.normalize();
    big.normalize();
    const NodeId x = eng() % 18;
    const std::uint32_t kx = eng() % 2;

    auto value = [&](const Seeding& sd) { return union_coverage(s, sd).count; };
    CHECK(value(big) >= value(small));

    Seeding small_x = small, big_x = big;
    small_x.sets[kx].push_back(x);
    big_x.sets[kx].push_back(x);
    small_x.normalize();
    big_x.normalize();
    const auto gain_small =
        static_cast<int>(value(small_x)) - static_cast<int>(value(small));
    const auto gain_big = static_cast<int>(value(big_x)) - static_cast<int>(value(big));
    CHECK(gain_small >= gain_big);
  }
}

TEST_CASE("identical sources collapse, different ones refuse") {
  SimplifiedInstance s = make_path({0.9, 0.8}, 0.5);
  s.sources.resize(3, s.sources[0]);
  s.sources[0].budget = 2;
  s.sources[1].budget = 1;
  s.sources[2].budget = 4;

  const SimplifiedInstance c = collapse_identical_sources(s);
  REQUIRE(c.sources.size() == 1);
  CHECK(c.sources[0].budget == 7);
  CHECK(c.sources[0].info_value == s.sources[0].info_value);
  CHECK(c.graph.get() == s.graph.get());

  SimplifiedInstance bad = s;
  bad.sources[1].info_value = 0.5;
  CHECK_THROWS_AS(collapse_identical_sources(bad), std::invalid_argument);

  SimplifiedInstance bad2 = s;
  bad2.sources[2].uniform_trust = 0.123;
  CHECK_THROWS_AS(collapse_identical_sources(bad2), std::invalid_argument);
}
