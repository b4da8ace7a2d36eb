#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "spread/rng.hpp"

using spread::RngHandle;

TEST_CASE("same seed and path reproduce, different paths diverge") {
  const RngHandle a(42), b(42), c(43);
  CHECK(a == b);
  CHECK_FALSE(a == c);

  CHECK(a.derive("x") == b.derive("x"));
  CHECK_FALSE(a.derive("x") == a.derive("y"));
  CHECK_FALSE(a.derive("x") == a);

  CHECK(a.derive(std::uint64_t{7}) == b.derive(std::uint64_t{7}));
  CHECK_FALSE(a.derive(std::uint64_t{7}) == a.derive(std::uint64_t{8}));
}

TEST_CASE("string and integer labels do not collide trivially") {
  const RngHandle root(1);
  // A handful of plausible collision pairs.
  CHECK_FALSE(root.derive("1") == root.derive(std::uint64_t{1}));
  CHECK_FALSE(root.derive("") == root.derive(std::uint64_t{0}));
  CHECK_FALSE(root.derive("rep").derive("0") == root.derive("rep0"));
}

TEST_CASE("derivation order matters") {
  const RngHandle root(9);
  CHECK_FALSE(root.derive("a").derive("b") == root.derive("b").derive("a"));
}

TEST_CASE("counter values look uniform and are order independent") {
  const RngHandle h = RngHandle(1234).derive("stream");
  double sum = 0.0;
  const int N = 100000;
  for (int i = 0; i < N; ++i) {
    const double u = h.uniform_at(static_cast<std::uint64_t>(i));
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  // mean of N uniforms: stderr ~ 1/sqrt(12 N) ~ 0.0009; allow 5 sigma
  CHECK(sum / N == doctest::Approx(0.5).epsilon(0.01));

  // reading a counter twice, or out of order, gives the same value
  CHECK(h.uniform_at(5) == h.uniform_at(5));
  const double v9 = h.uniform_at(9);
  (void)h.uniform_at(2);
  CHECK(h.uniform_at(9) == v9);
}

TEST_CASE("coins respect degenerate probabilities and hit the rate") {
  const RngHandle h = RngHandle(7).derive("coins");
  int heads = 0;
  const int N = 100000;
  for (int i = 0; i < N; ++i) {
    CHECK(h.coin_at(i, 1.0));
    CHECK_FALSE(h.coin_at(i, 0.0));
    if (h.coin_at(i, 0.75)) ++heads;
  }
  // sigma = sqrt(N * .75 * .25) ~ 137; allow 5 sigma
  CHECK(std::abs(heads - 75000) < 700);
}

TEST_CASE("engine stream is deterministic per handle") {
  const RngHandle h = RngHandle(5).derive("shuffle");
  auto e1 = h.engine();
  auto e2 = h.engine();
  for (int i = 0; i < 16; ++i) CHECK(e1() == e2());

  auto e3 = RngHandle(5).derive("other").engine();
  std::vector<std::uint64_t> a, b;
  auto e4 = h.engine();
  for (int i = 0; i < 16; ++i) {
    a.push_back(e4());
    b.push_back(e3());
  }
  CHECK(a != b);
}

TEST_CASE("sibling streams do not repeat states") {
  const RngHandle root(11);
  std::set<std::uint64_t> states;
  for (std::uint64_t i = 0; i < 1000; ++i) states.insert(root.derive(i).state());
  for (int i = 0; i < 1000; ++i) states.insert(root.derive("s" + std::to_string(i)).state());
  CHECK(states.size() == 2000);
}
