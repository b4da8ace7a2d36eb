#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spread/harness.hpp"
#include "spread/io.hpp"
#include "spread/seeders.hpp"

namespace fs = std::filesystem;
using namespace spread;

namespace {

struct CommonArgs {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out = ".";
  bool paper_scale = false;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonArgs& c) {
  cmd->add_option("--config", c.config, "scenario config (JSON)");
  cmd->add_option("--seed", c.seed, "master seed override")->each([&c](const std::string&) {
    c.seed_given = true;
  });
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_flag("--paper-scale", c.paper_scale, "use publication-scale sizes");
  cmd->add_option("--workers", c.workers, "worker thread count (0 = runtime default)");
}

Scenario scenario_from(const CommonArgs& c) {
  Scenario sc;
  if (!c.config.empty()) sc = load_scenario(c.config);
  if (c.seed_given) sc.seed = c.seed;
  if (c.paper_scale) apply_paper_scale(sc);
  return sc;
}

void setup_workers(const CommonArgs& c) {
#ifdef _OPENMP
  if (c.workers > 0) omp_set_num_threads(c.workers);
#else
  (void)c;
#endif
}

fs::path ensure_out(const CommonArgs& c) {
  fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trust-weighted diffusion simulator and seed-set optimizer"};
  app.require_subcommand(1);

  CommonArgs gen_args;
  std::uint32_t gen_instance = 0;
  auto* gen = app.add_subcommand("generate", "generate a graph with trust and thresholds");
  add_common(gen, gen_args);
  gen->add_option("--instance", gen_instance, "graph instance index within the scenario");

  CommonArgs seed_args;
  std::string seed_graph, seed_seeder = "projected-greedy";
  double seed_frac = 0.05;
  auto* seedc = app.add_subcommand("seed", "compute a seed set for a graph file");
  add_common(seedc, seed_args);
  seedc->add_option("--graph", seed_graph, "graph file")->required();
  seedc->add_option("--seeder", seed_seeder,
                    "random | high-degree | projected-greedy | actual-greedy");
  seedc->add_option("--budget-frac", seed_frac, "budget as a fraction of n");

  CommonArgs sim_args;
  std::string sim_graph, sim_seeds, sim_trace;
  std::uint32_t sim_reps = 10;
  auto* sim = app.add_subcommand("simulate", "run the diffusion on a graph and seed set");
  add_common(sim, sim_args);
  sim->add_option("--graph", sim_graph, "graph file")->required();
  sim->add_option("--seeds", sim_seeds, "seeding file")->required();
  sim->add_option("--reps", sim_reps, "replications");
  sim->add_option("--trace", sim_trace, "write a per-step state trace here (first replication)");

  CommonArgs exp_args;
  bool exp_timing = false;
  auto* exp = app.add_subcommand("experiment", "run a scenario and write results.csv");
  add_common(exp, exp_args);
  exp->add_flag("--timing", exp_timing, "fill the wallclock column (breaks reproducibility)");

  CommonArgs sweep_args;
  std::vector<double> sweep_lambdas;
  double grid_min = 0.0, grid_max = 0.0, grid_step = 0.0;
  auto* sweep = app.add_subcommand("sweep-threshold",
                                   "projected-greedy curve over thresholds per lambda_d");
  add_common(sweep, sweep_args);
  sweep->add_option("--lambda", sweep_lambdas, "lambda_d values (repeatable)");
  sweep->add_option("--grid-min", grid_min, "uniform grid start");
  sweep->add_option("--grid-max", grid_max, "uniform grid end");
  sweep->add_option("--grid-step", grid_step, "uniform grid step (0 = instance ladder)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      setup_workers(gen_args);
      const Scenario sc = scenario_from(gen_args);
      const fs::path dir = ensure_out(gen_args);
      const RngHandle master = RngHandle(sc.seed).derive("scenario").derive(sc.id);
      const RngHandle g_rng =
          master.derive("graph").derive(static_cast<std::uint64_t>(gen_instance));
      const GeneralInstance inst = build_scenario_instance(sc, g_rng);
      const auto viols = validate_instance(inst);
      for (const Violation& v : viols)
        std::cerr << "violation [" << v.rule << "] " << v.message << "\n";
      if (!viols.empty()) return 1;
      save_graph((dir / "graph.txt").string(), *inst.graph, inst.profiles);
      std::cout << "wrote " << (dir / "graph.txt").string() << " (n=" << inst.node_count()
                << ", arcs=" << inst.graph->arc_count() << ")\n";
      return 0;
    }

    if (seedc->parsed()) {
      setup_workers(seed_args);
      const Scenario sc = scenario_from(seed_args);
      const fs::path dir = ensure_out(seed_args);
      const GraphFile gf = load_graph(seed_graph);

      GeneralInstance inst;
      inst.graph = std::make_shared<TrustGraph>(gf.graph);
      inst.profiles = gf.profiles;
      inst.lambda_d = sc.lambda_d;
      inst.lambda_s = sc.lambda_s;
      inst.tau = sc.tau;
      inst.transmit_p = sc.transmit_p;
      inst.sources.resize(sc.sources);
      const std::uint32_t per_source = static_cast<std::uint32_t>(
          std::llround(seed_frac * static_cast<double>(inst.node_count()) / sc.sources));
      std::vector<std::uint32_t> budgets(sc.sources, per_source);
      for (std::uint32_t k = 0; k < sc.sources; ++k) {
        inst.sources[k].info_value = sc.info_value;
        inst.sources[k].uniform_trust = sc.source_trust;
        inst.sources[k].budget = per_source;
      }

      const RngHandle rng = RngHandle(sc.seed).derive("cli-seed").derive(seed_seeder);
      Seeding chosen;
      if (seed_seeder == "random") {
        chosen = random_seeding(inst.node_count(), budgets, rng);
      } else if (seed_seeder == "high-degree") {
        chosen = high_degree_seeding(*inst.graph, budgets);
      } else if (seed_seeder == "projected-greedy") {
        ProjectedGreedyOptions opts;
        opts.replications = sc.pg_replications;
        opts.max_steps = sc.max_steps;
        chosen = projected_greedy(inst, thresholds_homogeneous(inst), rng, opts).best_seeding();
      } else if (seed_seeder == "actual-greedy") {
        ActualGreedyOptions opts;
        opts.replications = sc.pg_replications;
        opts.max_steps = sc.max_steps;
        chosen = actual_greedy(inst, Budgets::per_source(budgets), rng, opts);
      } else {
        throw std::invalid_argument("unknown seeder: " + seed_seeder);
      }
      save_seeding((dir / "seeds.txt").string(), chosen);
      std::cout << "wrote " << (dir / "seeds.txt").string() << " (" << chosen.total_size()
                << " seeds)\n";
      return 0;
    }

    if (sim->parsed()) {
      setup_workers(sim_args);
      const Scenario sc = scenario_from(sim_args);
      const GraphFile gf = load_graph(sim_graph);
      const Seeding seeds = load_seeding(sim_seeds);

      GeneralInstance inst;
      inst.graph = std::make_shared<TrustGraph>(gf.graph);
      inst.profiles = gf.profiles;
      inst.lambda_d = sc.lambda_d;
      inst.lambda_s = sc.lambda_s;
      inst.tau = sc.tau;
      inst.transmit_p = sc.transmit_p;
      inst.sources.resize(seeds.sets.size());
      for (auto& s : inst.sources) {
        s.info_value = sc.info_value;
        s.uniform_trust = sc.source_trust;
        s.budget = inst.node_count();
      }

      const RngHandle rng = RngHandle(sc.seed).derive("cli-simulate");
      if (!sim_trace.empty()) {
        std::ofstream ts(sim_trace);
        if (!ts) throw std::runtime_error("cannot open trace file: " + sim_trace);
        DiffusionState st(inst);
        apply_seeding(st, inst, seeds);
        const RngHandle run_rng = rng.derive("rep").derive(std::uint64_t{0});
        auto emit = [&](std::uint32_t step) {
          ts << "step=" << step << " believed=" << st.count_state(NodeState::Believed)
             << " undecided=" << st.count_state(NodeState::Undecided)
             << " evacuated=" << st.count_state(NodeState::Evacuated) << "\n";
        };
        emit(0);
        for (std::uint32_t i = 1; i <= sc.max_steps; ++i) {
          const StepDelta d = step(st, inst, run_rng);
          emit(i);
          if (st.count_state(NodeState::Evacuated) == inst.node_count() ||
              (!d.value_changed && !d.pending_countdowns))
            break;
        }
      }
      const CoverageEstimate est = estimate_coverage(inst, seeds, sim_reps, rng, sc.max_steps);
      std::printf("believers  %.3f +- %.3f\n", est.believers_mean, est.believers_stderr);
      std::printf("evacuated  %.3f +- %.3f\n", est.evacuated_mean, est.evacuated_stderr);
      return 0;
    }

    if (exp->parsed()) {
      setup_workers(exp_args);
      const Scenario sc = scenario_from(exp_args);
      const fs::path dir = ensure_out(exp_args);
      const std::vector<ResultRow> rows = run_scenario(sc, exp_timing);
      {
        std::ofstream os(dir / "results.csv");
        write_results_csv(os, rows);
      }
      {
        std::ofstream os(dir / "run_meta.json");
        os << run_metadata_json(sc);
      }
      std::cout << "wrote " << (dir / "results.csv").string() << " (" << rows.size()
                << " rows)\n";
      return 0;
    }

    if (sweep->parsed()) {
      setup_workers(sweep_args);
      const Scenario sc = scenario_from(sweep_args);
      const fs::path dir = ensure_out(sweep_args);
      if (sweep_lambdas.empty()) sweep_lambdas = {sc.lambda_d};
      std::vector<double> grid;
      if (grid_step > 0.0) {
        for (double t = grid_min; t <= grid_max + 1e-12; t += grid_step) grid.push_back(t);
      }
      const ThresholdSweepResult res = sweep_threshold(sc, sweep_lambdas, grid);
      {
        std::ofstream os(dir / "threshold_sweep.csv");
        write_threshold_sweep_csv(os, res);
      }
      {
        std::ofstream os(dir / "topt.csv");
        os << "lambda_d,t_opt\n";
        char buf[64];
        for (std::size_t i = 0; i < res.lambdas.size(); ++i) {
          std::snprintf(buf, sizeof buf, "%.4f,%.9g\n", res.lambdas[i], res.t_opt[i]);
          os << buf;
        }
      }
      const fs::path seeds_dir = dir / "seeds";
      fs::create_directories(seeds_dir);
      for (std::size_t li = 0; li < res.reports.size(); ++li) {
        const ProjectionReport& rep = res.reports[li];
        std::vector<std::string> paths;
        for (std::size_t ci = 0; ci < rep.candidates.size(); ++ci) {
          char name[96];
          std::snprintf(name, sizeof name, "lam%.4f_t%.9g.txt", res.lambdas[li],
                        rep.candidates[ci].threshold);
          const fs::path p = seeds_dir / name;
          save_seeding(p.string(), rep.candidates[ci].seeding);
          paths.push_back((fs::path("seeds") / name).string());
        }
        char csv_name[64];
        std::snprintf(csv_name, sizeof csv_name, "projection_lam%.4f.csv", res.lambdas[li]);
        std::ofstream os(dir / csv_name);
        write_projection_csv(os, rep, paths);
      }
      std::cout << "wrote " << (dir / "threshold_sweep.csv").string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
