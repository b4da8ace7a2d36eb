#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "reference_sim.hpp"
#include "spread/engine.hpp"
#include "spread/graphgen.hpp"
#include "spread/seeders.hpp"

using namespace spread;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

GeneralInstance make_instance(NodeId n, std::uint64_t seed) {
  const RngHandle rng(seed);
  TrustGraph topo = gen_random_group(n, 4.0, 2.0, rng.derive("topology"));
  TrustParams tp;
  tp.scenario = TrustScenario::GroupVariable;
  TrustGraph weighted = assign_trust(topo, tp, rng.derive("trust"));

  GeneralInstance inst;
  ThresholdParams thp;
  inst.profiles = assign_thresholds(weighted, thp, rng.derive("thresholds"));
  inst.graph = std::make_shared<TrustGraph>(std::move(weighted));
  inst.sources.resize(5);
  for (SourceSpec& s : inst.sources) {
    s.info_value = 0.95;
    s.uniform_trust = 0.9;
    s.budget = n;
  }
  inst.lambda_d = 0.05;
  inst.lambda_s = 0.0;
  inst.tau = 5;
  inst.transmit_p = 0.75;
  return inst;
}

}  // namespace

int main(int argc, char** argv) {
  NodeId n = 20000;
  std::uint32_t reps = 20;
  std::uint64_t seed = 7;
  if (argc > 1) n = static_cast<NodeId>(std::strtoul(argv[1], nullptr, 10));
  if (argc > 2) reps = static_cast<std::uint32_t>(std::strtoul(argv[2], nullptr, 10));
  if (argc > 3) seed = std::strtoull(argv[3], nullptr, 10);

  std::printf("building random-group instance: n=%u, 5 sources, p=0.75\n", n);
  const GeneralInstance inst = make_instance(n, seed);
  const RngHandle rng = RngHandle(seed).derive("bench");
  const std::vector<std::uint32_t> budgets(5, n / 100);
  const Seeding seeds = random_seeding(n, budgets, rng.derive("seeds"));

  const RngHandle run_rng = rng.derive("run");

  auto t0 = Clock::now();
  const refsim::Outcome ref = refsim::simulate(inst, seeds, run_rng);
  const double t_ref = seconds_since(t0);
  std::printf("reference   %8.3fs  believers=%u evacuated=%u steps=%u\n", t_ref,
              ref.believers, ref.evacuated, ref.steps_executed);

  t0 = Clock::now();
  const RunOutcome eng = run(inst, seeds, run_rng);
  const double t_eng = seconds_since(t0);
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("engine x%-3d %8.3fs  believers=%u evacuated=%u steps=%u\n", threads, t_eng,
              eng.believers, eng.evacuated, eng.steps_executed);

  if (eng.believers != ref.believers || eng.evacuated != ref.evacuated ||
      eng.steps_executed != ref.steps_executed || eng.believer_trace != ref.believer_trace) {
    std::printf("MISMATCH: engine and reference disagree\n");
    return 1;
  }
  std::printf("outputs identical, engine speedup %.1fx\n", t_ref / t_eng);

  t0 = Clock::now();
  const CoverageEstimate est = estimate_coverage(inst, seeds, reps, rng.derive("mc"));
  const double t_mc = seconds_since(t0);
  std::printf("monte carlo %8.3fs  %u reps, believers %.1f +- %.1f\n", t_mc, reps,
              est.believers_mean, est.believers_stderr);
  return 0;
}
