#include "spread/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "spread/seeders.hpp"

namespace spread {

namespace {

using nlohmann::json;

TrustScenario trust_scenario_from_string(const std::string& s) {
  if (s == "homogeneous") return TrustScenario::Homogeneous;
  if (s == "group-variable") return TrustScenario::GroupVariable;
  if (s == "group-range") return TrustScenario::GroupRange;
  throw std::invalid_argument("unknown trust scenario: " + s);
}

std::string trust_scenario_name(TrustScenario s) {
  switch (s) {
    case TrustScenario::Homogeneous: return "homogeneous";
    case TrustScenario::GroupVariable: return "group-variable";
    case TrustScenario::GroupRange: return "group-range";
  }
  return "?";
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  const json j = json::parse(json_text);
  Scenario sc;
  sc.id = j.value("id", sc.id);

  if (j.contains("network")) {
    const json& n = j["network"];
    sc.network.kind = n.value("kind", sc.network.kind);
    sc.network.n = n.value("n", sc.network.n);
    sc.network.m = n.value("m", sc.network.m);
    sc.network.avg_degree = n.value("avg_degree", sc.network.avg_degree);
    sc.network.ratio = n.value("ratio", sc.network.ratio);
    sc.network.decay = n.value("decay", sc.network.decay);
    sc.network.same_group_boost = n.value("same_group_boost", sc.network.same_group_boost);
  }
  if (j.contains("trust")) {
    const json& t = j["trust"];
    sc.trust.scenario = trust_scenario_from_string(t.value("scenario", std::string("homogeneous")));
    sc.trust.a = t.value("a", sc.trust.a);
    sc.trust.eps = t.value("eps", sc.trust.eps);
    sc.trust.band = t.value("band", sc.trust.band);
    sc.trust.within_low = t.value("within_low", sc.trust.within_low);
    sc.trust.within_high = t.value("within_high", sc.trust.within_high);
  }
  if (j.contains("thresholds")) {
    const json& t = j["thresholds"];
    sc.thresholds.range_mode = t.value("range_mode", sc.thresholds.range_mode);
    sc.thresholds.t_low = t.value("t_low", sc.thresholds.t_low);
    sc.thresholds.t_high = t.value("t_high", sc.thresholds.t_high);
    sc.thresholds.low_min = t.value("low_min", sc.thresholds.low_min);
    sc.thresholds.low_max = t.value("low_max", sc.thresholds.low_max);
    sc.thresholds.high_min = t.value("high_min", sc.thresholds.high_min);
    sc.thresholds.high_max = t.value("high_max", sc.thresholds.high_max);
  }
  sc.lambda_d = j.value("lambda_d", sc.lambda_d);
  sc.lambda_s = j.value("lambda_s", sc.lambda_s);
  sc.tau = j.value("tau", sc.tau);
  sc.transmit_p = j.value("transmit_p", sc.transmit_p);
  sc.sources = j.value("sources", sc.sources);
  sc.info_value = j.value("info_value", sc.info_value);
  sc.source_trust = j.value("source_trust", sc.source_trust);
  sc.budget_fracs = j.value("budget_fracs", sc.budget_fracs);
  sc.seeders = j.value("seeders", sc.seeders);
  sc.replications = j.value("replications", sc.replications);
  sc.graph_instances = j.value("graph_instances", sc.graph_instances);
  sc.max_steps = j.value("max_steps", sc.max_steps);
  sc.pg_replications = j.value("pg_replications", sc.pg_replications);
  sc.seed = j.value("seed", sc.seed);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open scenario config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str());
}

void apply_paper_scale(Scenario& sc) {
  sc.network.n = 100000;
  sc.replications = 100;
  sc.graph_instances = 10;
}

namespace {

TrustGraph build_topology(const NetworkConfig& net, const RngHandle& rng) {
  if (net.kind == "scale-free") return gen_scale_free(net.n, net.m, rng);
  if (net.kind == "random-group") return gen_random_group(net.n, net.avg_degree, net.ratio, rng);
  if (net.kind == "geometric") {
    GeometricOptions o;
    o.avg_degree = net.avg_degree;
    o.decay = net.decay;
    o.same_group_boost = net.same_group_boost;
    return gen_geometric_group(net.n, rng, o);
  }
  throw std::invalid_argument("unknown network kind: " + net.kind);
}

}  // namespace

GeneralInstance build_scenario_instance(const Scenario& sc, const RngHandle& graph_rng) {
  TrustGraph topo = build_topology(sc.network, graph_rng.derive("topology"));
  TrustGraph weighted = assign_trust(topo, sc.trust, graph_rng.derive("trust"));

  GeneralInstance inst;
  inst.profiles = assign_thresholds(weighted, sc.thresholds, graph_rng.derive("thresholds"));
  inst.graph = std::make_shared<TrustGraph>(std::move(weighted));
  inst.lambda_d = sc.lambda_d;
  inst.lambda_s = sc.lambda_s;
  inst.tau = sc.tau;
  inst.transmit_p = sc.transmit_p;
  inst.sources.resize(sc.sources);
  for (SourceSpec& s : inst.sources) {
    s.info_value = sc.info_value;
    s.uniform_trust = sc.source_trust;
    s.budget = 0;  // set per budget fraction
  }
  return inst;
}

namespace {

std::vector<std::uint32_t> budgets_for(const Scenario& sc, double frac) {
  const double per_source =
      frac * static_cast<double>(sc.network.n) / static_cast<double>(sc.sources);
  const auto b = static_cast<std::uint32_t>(std::llround(per_source));
  return std::vector<std::uint32_t>(sc.sources, b);
}

Seeding compute_seeding(const std::string& seeder, const GeneralInstance& inst,
                        const std::vector<std::uint32_t>& budgets, const Scenario& sc,
                        const RngHandle& rng) {
  if (seeder == "random") return random_seeding(inst.node_count(), budgets, rng);
  if (seeder == "high-degree") return high_degree_seeding(*inst.graph, budgets);
  if (seeder == "projected-greedy") {
    ProjectedGreedyOptions opts;
    opts.replications = sc.pg_replications;
    opts.max_steps = sc.max_steps;
    const ThresholdSet omega = thresholds_homogeneous(inst);
    return projected_greedy(inst, omega, rng, opts).best_seeding();
  }
  if (seeder == "actual-greedy") {
    ActualGreedyOptions opts;
    opts.replications = sc.pg_replications;
    opts.max_steps = sc.max_steps;
    return actual_greedy(inst, Budgets::per_source(budgets), rng, opts);
  }
  throw std::invalid_argument("unknown seeder: " + seeder);
}

std::vector<NodeId> flatten(const Seeding& s) {
  std::vector<NodeId> merged;
  for (const auto& set : s.sets) merged.insert(merged.end(), set.begin(), set.end());
  return merged;
}

struct CellStats {
  std::vector<double> evac_fracs;  // pooled across instances and replications
  double seconds = 0.0;

  double mean() const {
    double s = 0.0;
    for (double x : evac_fracs) s += x;
    return evac_fracs.empty() ? 0.0 : s / static_cast<double>(evac_fracs.size());
  }
  double stderr_() const {
    const std::size_t n = evac_fracs.size();
    if (n < 2) return 0.0;
    const double m = mean();
    double ss = 0.0;
    for (double x : evac_fracs) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)));
  }
};

}  // namespace

std::vector<ResultRow> run_scenario(const Scenario& sc, bool timing) {
  if (sc.sources == 0) throw std::invalid_argument("scenario needs at least one source");
  const RngHandle master = RngHandle(sc.seed).derive("scenario").derive(sc.id);

  // cells[frac][seeder]
  std::vector<std::vector<CellStats>> cells(
      sc.budget_fracs.size(), std::vector<CellStats>(sc.seeders.size()));

  for (std::uint32_t gi = 0; gi < sc.graph_instances; ++gi) {
    const RngHandle g_rng = master.derive("graph").derive(gi);
    GeneralInstance inst = build_scenario_instance(sc, g_rng);
    const NodeId n = inst.node_count();

    for (std::size_t fi = 0; fi < sc.budget_fracs.size(); ++fi) {
      const std::vector<std::uint32_t> budgets = budgets_for(sc, sc.budget_fracs[fi]);
      for (std::uint32_t k = 0; k < sc.sources; ++k) inst.sources[k].budget = budgets[k];
      // Shared by every seeder in this cell group: comparisons ride on
      // common random numbers.
      const RngHandle eval_rng = g_rng.derive("eval").derive(fi);

      for (std::size_t si = 0; si < sc.seeders.size(); ++si) {
        const auto t0 = std::chrono::steady_clock::now();
        const RngHandle seed_rng =
            g_rng.derive("seeder").derive(sc.seeders[si]).derive(fi);
        const Seeding chosen = compute_seeding(sc.seeders[si], inst, budgets, sc, seed_rng);
        const std::vector<NodeId> merged = flatten(chosen);

        CellStats& cell = cells[fi][si];
        for (std::uint32_t rep = 0; rep < sc.replications; ++rep) {
          // Re-deal the chosen nodes across sources each replication.
          const Seeding dealt =
              partition_seeds(merged, budgets, eval_rng.derive("deal").derive(rep));
          const RunOutcome o =
              run(inst, dealt, eval_rng.derive("run").derive(rep), sc.max_steps);
          cell.evac_fracs.push_back(static_cast<double>(o.evacuated) /
                                    static_cast<double>(n));
        }
        cell.seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      }
    }
  }

  const double tl_show = sc.thresholds.range_mode
                             ? 0.5 * (sc.thresholds.low_min + sc.thresholds.low_max)
                             : sc.thresholds.t_low;
  const double th_show = sc.thresholds.range_mode
                             ? 0.5 * (sc.thresholds.high_min + sc.thresholds.high_max)
                             : sc.thresholds.t_high;

  std::vector<ResultRow> rows;
  for (std::size_t fi = 0; fi < sc.budget_fracs.size(); ++fi) {
    double best = 0.0;
    for (std::size_t si = 0; si < sc.seeders.size(); ++si)
      best = std::max(best, cells[fi][si].mean());
    for (std::size_t si = 0; si < sc.seeders.size(); ++si) {
      const CellStats& cell = cells[fi][si];
      ResultRow r;
      r.scenario_id = sc.id;
      r.network = sc.network.kind;
      r.trust_scenario = trust_scenario_name(sc.trust.scenario);
      r.t_low = tl_show;
      r.t_high = th_show;
      r.lambda_d = sc.lambda_d;
      r.budget_frac = sc.budget_fracs[fi];
      r.seeder = sc.seeders[si];
      r.evac_frac_mean = cell.mean();
      r.evac_frac_stderr = cell.stderr_();
      r.regret_pct = best > 0.0 ? (best - cell.mean()) / best * 100.0 : 0.0;
      r.wallclock_s = timing ? cell.seconds : 0.0;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::vector<ResultRow> sweep_budget(const Scenario& sc, const std::vector<double>& fracs,
                                    bool timing) {
  Scenario copy = sc;
  copy.budget_fracs = fracs;
  std::sort(copy.budget_fracs.begin(), copy.budget_fracs.end());
  copy.budget_fracs.erase(std::unique(copy.budget_fracs.begin(), copy.budget_fracs.end()),
                          copy.budget_fracs.end());
  return run_scenario(copy, timing);
}

ThresholdSweepResult sweep_threshold(const Scenario& sc, const std::vector<double>& lambdas,
                                     const std::vector<double>& grid) {
  if (lambdas.empty()) throw std::invalid_argument("lambda grid is empty");
  const RngHandle master = RngHandle(sc.seed).derive("scenario").derive(sc.id);
  const RngHandle g_rng = master.derive("graph").derive(std::uint64_t{0});

  GeneralInstance inst = build_scenario_instance(sc, g_rng);
  if (sc.budget_fracs.empty()) throw std::invalid_argument("scenario has no budget fraction");
  const std::vector<std::uint32_t> budgets = budgets_for(sc, sc.budget_fracs[0]);
  for (std::uint32_t k = 0; k < sc.sources; ++k) inst.sources[k].budget = budgets[k];

  ThresholdSet omega;
  if (grid.empty()) {
    omega = thresholds_homogeneous(inst);
  } else {
    omega.values = grid;
    std::sort(omega.values.begin(), omega.values.end());
    omega.values.erase(std::unique(omega.values.begin(), omega.values.end()),
                       omega.values.end());
  }

  ProjectedGreedyOptions opts;
  opts.replications = sc.replications;
  opts.max_steps = sc.max_steps;

  ThresholdSweepResult res;
  const NodeId n = inst.node_count();
  // One stream for every lambda: the curves differ only through the model,
  // not through replication noise.
  const RngHandle sweep_rng = master.derive("sweep");
  for (double lam : lambdas) {
    inst.lambda_d = lam;
    ProjectionReport rep = projected_greedy(inst, omega, sweep_rng, opts);
    for (const ThresholdCandidate& c : rep.candidates) {
      ThresholdSweepRow row;
      row.lambda_d = lam;
      row.threshold = c.threshold;
      row.coverage_mean = c.estimate.believers_mean;
      row.coverage_stderr = c.estimate.believers_stderr;
      row.evac_frac_mean = c.estimate.evacuated_mean / static_cast<double>(n);
      row.evac_frac_stderr = c.estimate.evacuated_stderr / static_cast<double>(n);
      res.rows.push_back(row);
    }
    res.lambdas.push_back(lam);
    res.t_opt.push_back(rep.t_opt());
    res.reports.push_back(std::move(rep));
  }
  return res;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "scenario_id,network,trust_scenario,tl,th,lambda_d,budget_frac,seeder,"
        "evac_frac_mean,evac_frac_stderr,regret_pct,wallclock_s\n";
  char buf[256];
  for (const ResultRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f,%.4f,", r.t_low, r.t_high, r.lambda_d,
                  r.budget_frac);
    os << r.scenario_id << "," << r.network << "," << r.trust_scenario << "," << buf
       << r.seeder << ",";
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.3f\n", r.evac_frac_mean,
                  r.evac_frac_stderr, r.regret_pct, r.wallclock_s);
    os << buf;
  }
}

void write_threshold_sweep_csv(std::ostream& os, const ThresholdSweepResult& res) {
  os << "lambda_d,threshold,coverage_mean,coverage_stderr,evac_frac_mean,evac_frac_stderr\n";
  char buf[192];
  for (const ThresholdSweepRow& r : res.rows) {
    std::snprintf(buf, sizeof buf, "%.4f,%.9g,%.6f,%.6f,%.6f,%.6f\n", r.lambda_d, r.threshold,
                  r.coverage_mean, r.coverage_stderr, r.evac_frac_mean, r.evac_frac_stderr);
    os << buf;
  }
}

std::string run_metadata_json(const Scenario& sc) {
  json j;
  j["id"] = sc.id;
  j["network"] = {{"kind", sc.network.kind},
                  {"n", sc.network.n},
                  {"m", sc.network.m},
                  {"avg_degree", sc.network.avg_degree},
                  {"ratio", sc.network.ratio},
                  {"decay", sc.network.decay},
                  {"same_group_boost", sc.network.same_group_boost}};
  j["trust"] = {{"scenario", trust_scenario_name(sc.trust.scenario)},
                {"a", sc.trust.a},
                {"eps", sc.trust.eps},
                {"band", sc.trust.band},
                {"within_low", sc.trust.within_low},
                {"within_high", sc.trust.within_high}};
  j["thresholds"] = {{"range_mode", sc.thresholds.range_mode},
                     {"t_low", sc.thresholds.t_low},
                     {"t_high", sc.thresholds.t_high},
                     {"low_min", sc.thresholds.low_min},
                     {"low_max", sc.thresholds.low_max},
                     {"high_min", sc.thresholds.high_min},
                     {"high_max", sc.thresholds.high_max}};
  j["lambda_d"] = sc.lambda_d;
  j["lambda_s"] = sc.lambda_s;
  j["tau"] = sc.tau;
  j["transmit_p"] = sc.transmit_p;
  j["sources"] = sc.sources;
  j["info_value"] = sc.info_value;
  j["source_trust"] = sc.source_trust;
  j["budget_fracs"] = sc.budget_fracs;
  j["seeders"] = sc.seeders;
  j["replications"] = sc.replications;
  j["graph_instances"] = sc.graph_instances;
  j["max_steps"] = sc.max_steps;
  j["pg_replications"] = sc.pg_replications;
  j["seed"] = sc.seed;
  j["notes"] = json::array({"seed sets are re-dealt across sources each replication",
                            "wallclock_s is zero unless timing is enabled"});
  return j.dump(2) + "\n";
}

}  // namespace spread
