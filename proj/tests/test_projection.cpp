#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gadgets.hpp"
#include "spread/projection.hpp"

using namespace spread;

namespace {

// Ring with uniform trust; handy because its mean trust is exact.
GeneralInstance ring_instance(NodeId n, double trust, double t_low, double t_high,
                              std::uint32_t K = 2) {
  TrustGraph g(n, true);
  for (NodeId u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n, trust);
  g.finalize();
  GeneralInstance inst;
  inst.graph = std::make_shared<TrustGraph>(std::move(g));
  inst.profiles.assign(n, NodeProfile{t_low, t_high});
  inst.sources.resize(K);
  for (std::uint32_t k = 0; k < K; ++k) {
    inst.sources[k].info_value = 1.0;
    inst.sources[k].uniform_trust = 1.0;
    inst.sources[k].budget = 2;
  }
  inst.tau = kTauInfinity;
  inst.transmit_p = 1.0;
  return inst;
}

}  // namespace

TEST_CASE("the merged super-source blends payloads by budget and averages trust") {
  GeneralInstance inst = ring_instance(6, 0.9, 0.25, 0.75);
  inst.sources[0].info_value = 1.0;
  inst.sources[0].budget = 3;
  inst.sources[1].info_value = 0.5;
  inst.sources[1].budget = 1;
  inst.sources[0].uniform_trust = 0.8;
  inst.sources[1].uniform_trust = 0.6;

  const SimplifiedInstance s = build_simplified(inst, 0.4);
  REQUIRE(s.sources.size() == 1);
  CHECK(s.sources[0].info_value == doctest::Approx((1.0 * 3 + 0.5 * 1) / 4.0));
  CHECK(s.sources[0].budget == 4);
  CHECK(s.sources[0].trust(0) == doctest::Approx(0.7));
  CHECK(s.threshold == std::vector<double>(6, 0.4));
  CHECK(s.graph.get() == inst.graph.get());

  // per-node trust on one source forces the per-node path
  GeneralInstance pn = inst;
  pn.sources[1].node_trust.assign(6, 0.4);
  const SimplifiedInstance s2 = build_simplified(pn, 0.4);
  CHECK(s2.sources[0].trust(2) == doctest::Approx((0.8 + 0.4) / 2.0));

  CHECK_THROWS_AS(build_simplified(inst, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_simplified(inst, -0.2), std::invalid_argument);
  GeneralInstance no_budget = inst;
  no_budget.sources[0].budget = 0;
  no_budget.sources[1].budget = 0;
  CHECK_THROWS_AS(build_simplified(no_budget, 0.4), std::invalid_argument);
}

TEST_CASE("homogeneous ladder walks a_avg powers through the window") {
  const GeneralInstance inst = ring_instance(8, 0.9, 0.25, 0.75);
  const ThresholdSet ts = thresholds_homogeneous(inst);

  CHECK(ts.a_avg == doctest::Approx(0.9));
  CHECK(ts.t_min == doctest::Approx(0.25));
  CHECK(ts.t_max == doctest::Approx(0.75));
  CHECK_FALSE(ts.degenerate);

  // 0.9^3 = 0.729 down to 0.9^13 ~ 0.2542 lie inside [0.25, 0.75]:
  // 11 ladder values plus the two endpoints
  REQUIRE(ts.values.size() == 13);
  CHECK(ts.values.front() == doctest::Approx(0.25));
  CHECK(ts.values.back() == doctest::Approx(0.75));
  CHECK(std::is_sorted(ts.values.begin(), ts.values.end()));
  bool has_729 = false;
  for (double v : ts.values) has_729 = has_729 || std::abs(v - 0.729) < 1e-12;
  CHECK(has_729);
}

TEST_CASE("ladder is endpoints only when trust is degenerate") {
  const GeneralInstance all_one = ring_instance(6, 1.0, 0.2, 0.6);
  const ThresholdSet ts = thresholds_homogeneous(all_one);
  CHECK(ts.degenerate);
  REQUIRE(ts.values.size() == 2);
  CHECK(ts.values[0] == doctest::Approx(0.2));
  CHECK(ts.values[1] == doctest::Approx(0.6));

  // zero t_low is clamped away from an endless ladder
  const GeneralInstance zero_low = ring_instance(6, 0.9, 0.0, 0.6);
  const ThresholdSet ts2 = thresholds_homogeneous(zero_low);
  CHECK(ts2.values.front() > 0.0);
  for (std::size_t i = 1; i < ts2.values.size(); ++i) CHECK(ts2.values[i] > 0.0);
}

TEST_CASE("two-level ladder is the pruned closure under both trust levels") {
  // mixed ring: alternating strong and weak links
  const NodeId n = 12;
  TrustGraph g(n, true);
  for (NodeId u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n, u % 2 == 0 ? 0.9 : 0.5);
  g.finalize();
  GeneralInstance inst;
  inst.graph = std::make_shared<TrustGraph>(std::move(g));
  inst.profiles.assign(n, NodeProfile{0.25, 0.95});
  inst.sources.resize(1);
  inst.sources[0].info_value = 1.0;
  inst.sources[0].budget = 2;

  const ThresholdSet ts = thresholds_two_level(inst);
  CHECK(ts.a_low == doctest::Approx(0.5));
  CHECK(ts.a_high == doctest::Approx(0.9));

  // independent oracle: all 0.9^i * 0.5^j inside the window, plus endpoints
  std::vector<double> expect;
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j < 40; ++j) {
      const double v = std::pow(0.9, i) * std::pow(0.5, j);
      if (v >= 0.25 - 1e-12 && v <= 0.95 + 1e-12) expect.push_back(v);
    }
  expect.push_back(0.25);
  expect.push_back(0.95);
  std::sort(expect.begin(), expect.end());
  expect.erase(std::unique(expect.begin(), expect.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-9; }),
               expect.end());

  REQUIRE(ts.values.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(ts.values[i] == doctest::Approx(expect[i]).epsilon(1e-9));

  // the product of both levels shows up (0.9 * 0.9 * 0.5)
  bool has_405 = false;
  for (double v : ts.values) has_405 = has_405 || std::abs(v - 0.405) < 1e-9;
  CHECK(has_405);
}

TEST_CASE("two-level falls back to homogeneous when trusts do not split") {
  const GeneralInstance inst = ring_instance(8, 0.7, 0.2, 0.6);
  const ThresholdSet two = thresholds_two_level(inst);
  const ThresholdSet homo = thresholds_homogeneous(inst);
  CHECK(two.values == homo.values);
}

TEST_CASE("partitioning deals every seed within budgets, reproducibly") {
  const std::vector<NodeId> merged = {5, 1, 9, 3, 7, 2};
  const std::vector<std::uint32_t> budgets = {2, 3, 2};

  const Seeding a = partition_seeds(merged, budgets, RngHandle(11));
  const Seeding b = partition_seeds(merged, budgets, RngHandle(11));
  CHECK(a.sets == b.sets);

  REQUIRE(a.sets.size() == 3);
  CHECK(a.sets[0].size() <= 2);
  CHECK(a.sets[1].size() <= 3);
  CHECK(a.sets[2].size() <= 2);
  CHECK(a.total_size() == merged.size());
  std::vector<NodeId> flat;
  for (const auto& s : a.sets) flat.insert(flat.end(), s.begin(), s.end());
  std::sort(flat.begin(), flat.end());
  CHECK(flat == std::vector<NodeId>{1, 2, 3, 5, 7, 9});

  const Seeding c = partition_seeds(merged, budgets, RngHandle(12));
  CHECK((c.sets != a.sets));  // a different stream deals differently

  CHECK_THROWS_AS(partition_seeds(merged, {2, 2}, RngHandle(1)), std::invalid_argument);
}

TEST_CASE("projected greedy scores every rung and ties go to the smaller threshold") {
  // Uniform ring at trust 0.9, true threshold 0.4 everywhere. Any candidate
  // threshold in (0.36, 0.4] projects to the same greedy seeds, so their
  // scores tie exactly and the smaller rung must win.
  GeneralInstance inst = ring_instance(10, 0.9, 0.4, 0.4, 1);
  inst.sources[0].budget = 2;

  ThresholdSet omega;
  omega.values = {0.37, 0.39, 0.4};
  const ProjectionReport rep = projected_greedy(inst, omega, RngHandle(3));

  REQUIRE(rep.candidates.size() == 3);
  for (const auto& c : rep.candidates) {
    // one seed blankets the ring at every rung, so greedy stops there
    CHECK(c.seeding.total_size() == 1);
    CHECK(c.estimate.replications == 20);
  }
  CHECK(rep.candidates[0].estimate.believers_mean ==
        rep.candidates[1].estimate.believers_mean);
  CHECK(rep.best_index == 0);
  CHECK(rep.t_opt() == doctest::Approx(0.37));

  CHECK_THROWS_AS(projected_greedy(inst, ThresholdSet{}, RngHandle(3)),
                  std::invalid_argument);
}

TEST_CASE("projection csv has the documented shape") {
  GeneralInstance inst = ring_instance(6, 0.9, 0.4, 0.4, 1);
  inst.sources[0].budget = 1;
  ThresholdSet omega;
  omega.values = {0.3, 0.4};
  const ProjectionReport rep = projected_greedy(inst, omega, RngHandle(8));

  std::ostringstream os;
  write_projection_csv(os, rep, {"seeds/a.txt", "seeds/b.txt"});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "threshold,coverage_mean,coverage_stderr,seeds_file");
  std::getline(is, line);
  CHECK(line.substr(0, 4) == "0.3,");
  CHECK(line.find("seeds/a.txt") != std::string::npos);
  std::getline(is, line);
  CHECK(line.find("seeds/b.txt") != std::string::npos);

  CHECK_THROWS_AS(write_projection_csv(os, rep, {"only-one.txt"}), std::invalid_argument);
}
