#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spread/graphgen.hpp"
#include "spread/instance.hpp"
#include "spread/projection.hpp"

namespace spread {

struct NetworkConfig {
  std::string kind = "random-group";  // scale-free | random-group | geometric
  NodeId n = 10000;
  std::uint32_t m = 2;           // scale-free attachment count
  double avg_degree = 4.0;       // random-group, geometric
  double ratio = 2.0;            // random-group: p_same / p_diff
  double decay = 0.1;            // geometric
  double same_group_boost = 2.0; // geometric
};

// One experiment configuration. Defaults give the desk-scale setup; the
// paper-scale preset bumps size and replication counts.
struct Scenario {
  std::string id = "default";
  NetworkConfig network;
  TrustParams trust;
  ThresholdParams thresholds;
  double lambda_d = 0.0;
  double lambda_s = 0.0;
  std::int64_t tau = 5;
  double transmit_p = 0.75;
  std::uint32_t sources = 5;
  double info_value = 0.95;
  double source_trust = 0.9;
  std::vector<double> budget_fracs = {0.05};
  std::vector<std::string> seeders = {"random", "high-degree", "projected-greedy"};
  std::uint32_t replications = 10;
  std::uint32_t graph_instances = 3;
  std::uint32_t max_steps = 50;
  std::uint32_t pg_replications = 10;
  std::uint64_t seed = 1;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
void apply_paper_scale(Scenario& sc);

// The instance one graph stream of a scenario produces (topology, trust,
// thresholds, model parameters). Source budgets start at zero; the harness
// fills them per budget fraction. Graph instance i of a scenario uses
// RngHandle(seed).derive("scenario").derive(id).derive("graph").derive(i).
GeneralInstance build_scenario_instance(const Scenario& sc, const RngHandle& graph_rng);

struct ResultRow {
  std::string scenario_id;
  std::string network;
  std::string trust_scenario;
  double t_low = 0.0;
  double t_high = 0.0;
  double lambda_d = 0.0;
  double budget_frac = 0.0;
  std::string seeder;
  double evac_frac_mean = 0.0;
  double evac_frac_stderr = 0.0;
  double regret_pct = 0.0;
  double wallclock_s = 0.0;
};

// Runs every (budget fraction, seeder) cell: seeds are computed once per
// graph instance, then scored by replications whose streams are shared
// across seeders (common random numbers). Seed sets are re-dealt across
// sources each replication. Regret is relative to the best seeder within
// the same budget fraction. Wallclock stays zero unless timing is on, so
// default output is byte-reproducible.
std::vector<ResultRow> run_scenario(const Scenario& sc, bool timing = false);

// Same grid with the budget fractions replaced.
std::vector<ResultRow> sweep_budget(const Scenario& sc, const std::vector<double>& fracs,
                                    bool timing = false);

struct ThresholdSweepRow {
  double lambda_d = 0.0;
  double threshold = 0.0;
  double coverage_mean = 0.0;  // believers, absolute
  double coverage_stderr = 0.0;
  double evac_frac_mean = 0.0;
  double evac_frac_stderr = 0.0;
};

struct ThresholdSweepResult {
  std::vector<double> lambdas;
  std::vector<ProjectionReport> reports;  // one per lambda
  std::vector<ThresholdSweepRow> rows;
  std::vector<double> t_opt;  // argmax threshold per lambda, ties to smaller
};

// Projected-greedy curve over a threshold grid for each lambda_d value, on
// one generated graph instance. An empty grid means the homogeneous ladder
// of the instance. Evaluation streams are shared across lambdas and
// thresholds.
ThresholdSweepResult sweep_threshold(const Scenario& sc, const std::vector<double>& lambdas,
                                     const std::vector<double>& grid = {});

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_threshold_sweep_csv(std::ostream& os, const ThresholdSweepResult& res);

// Config echo plus fixed metadata notes (JSON), deterministic for a given
// scenario.
std::string run_metadata_json(const Scenario& sc);

}  // namespace spread
