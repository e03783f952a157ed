#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fim/cascade.hpp"
#include "fim/dataset.hpp"
#include "fim/errors.hpp"
#include "fim/experiment.hpp"
#include "fim/graph.hpp"
#include "fim/greedy.hpp"
#include "fim/oracle.hpp"
#include "fim/pool.hpp"
#include "fim/rng.hpp"

namespace {

using fim::ExperimentConfig;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out.good()) {
    throw fim::DataError("cannot write " + out_path);
  }
}

std::optional<std::filesystem::path> cache_override(const ExperimentConfig& cfg) {
  if (cfg.cache_dir) return std::filesystem::path(*cfg.cache_dir);
  return std::nullopt;
}

fim::Graph load_weighted(const ExperimentConfig& cfg, double edge_prob) {
  if (cfg.dataset.empty()) {
    throw fim::ConfigError("a dataset name is required (--dataset)");
  }
  fim::Graph g = fim::load_dataset_graph(cfg.dataset, cache_override(cfg));
  if (edge_prob >= 0.0) {
    g.apply_uniform_probability(edge_prob);
  } else {
    g.apply_weighted_cascade();
  }
  return g;
}

// Options shared by run/sweep/evaluate; values not set on the command line
// fall back to --config, then defaults.
struct CommonOpts {
  std::string config_path;
  std::string dataset;
  std::vector<double> budgets;
  std::vector<double> a_choices;
  std::vector<double> b_choices;
  std::uint64_t seed = 0;
  std::uint32_t pool_size = 0;
  std::uint32_t eval_sims = 0;
  std::string semantics;
  std::string format = "csv";
  std::string out;
  bool resample_per_budget = false;
  bool naive = false;
  std::uint32_t workers = 0;
  std::string cache;
  double edge_prob = -1.0;

  CLI::Option* dataset_opt = nullptr;
  CLI::Option* budgets_opt = nullptr;
  CLI::Option* a_opt = nullptr;
  CLI::Option* b_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* pool_opt = nullptr;
  CLI::Option* sims_opt = nullptr;
  CLI::Option* semantics_opt = nullptr;
  CLI::Option* resample_opt = nullptr;
  CLI::Option* naive_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* cache_opt = nullptr;

  void attach(CLI::App* app, bool with_budgets) {
    app->add_option("--config", config_path,
                    "JSON config file; command-line flags override it");
    dataset_opt = app->add_option("--dataset", dataset,
                                  "dataset name (facebook, wiki-vote, deezer)");
    if (with_budgets) {
      budgets_opt = app->add_option("--budgets", budgets,
                                    "budget values, comma separated")
                        ->delimiter(',');
    }
    a_opt = app->add_option("--a-choices", a_choices,
                            "slope choice set, comma separated")
                ->delimiter(',');
    b_opt = app->add_option("--b-choices", b_choices,
                            "intercept choice set, comma separated")
                ->delimiter(',');
    seed_opt = app->add_option("--seed", seed, "master random seed");
    pool_opt = app->add_option("--pool-size", pool_size,
                               "live-edge realizations for the greedy");
    sims_opt = app->add_option("--eval-sims", eval_sims,
                               "fresh simulations per reported estimate");
    semantics_opt =
        app->add_option("--semantics", semantics,
                        "selected-only or global-baseline seeding");
    app->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--out", out, "output file (default stdout)");
    resample_opt = app->add_flag("--resample-per-budget", resample_per_budget,
                                 "fresh profile and pool per budget");
    naive_opt = app->add_flag("--naive", naive,
                              "disable lazy gain re-use in the greedy");
    workers_opt = app->add_option("--workers", workers,
                                  "worker threads (0 = hardware)");
    cache_opt = app->add_option("--cache", cache, "dataset cache directory");
    app->add_option("--edge-prob", edge_prob,
                    "uniform edge probability instead of weighted cascade");
  }

  ExperimentConfig merge() const {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(fim::read_file(config_path));
      } catch (const nlohmann::json::exception& e) {
        throw fim::ConfigError(std::string("bad config json: ") + e.what());
      }
      cfg = fim::config_from_json(j);
    }
    if (dataset_opt && dataset_opt->count()) cfg.dataset = dataset;
    if (budgets_opt && budgets_opt->count()) cfg.budgets = budgets;
    if (a_opt && a_opt->count()) cfg.scheme.a_choices = a_choices;
    if (b_opt && b_opt->count()) cfg.scheme.b_choices = b_choices;
    if (seed_opt && seed_opt->count()) cfg.seed = seed;
    if (pool_opt && pool_opt->count()) cfg.pool_size = pool_size;
    if (sims_opt && sims_opt->count()) cfg.eval_sims = eval_sims;
    if (semantics_opt && semantics_opt->count()) {
      cfg.semantics = fim::semantics_from_string(semantics);
    }
    if (resample_opt && resample_opt->count()) cfg.resample_per_budget = true;
    if (naive_opt && naive_opt->count()) cfg.lazy = false;
    if (workers_opt && workers_opt->count()) cfg.workers = workers;
    if (cache_opt && cache_opt->count()) cfg.cache_dir = cache;
    return cfg;
  }
};

void emit_sweep(const fim::SweepOutput& result, const std::string& format,
                const std::string& out) {
  if (format == "json") {
    write_output(fim::sweep_to_json(result).dump(2) + "\n", out);
  } else {
    write_output(fim::rows_to_csv(result.rows), out);
  }
}

int cmd_fetch(const std::string& name, const std::string& cache) {
  std::optional<std::filesystem::path> dir;
  if (!cache.empty()) dir = cache;
  fim::FetchResult res = fim::fetch_dataset(name, dir);
  if (res.from_cache) std::cerr << name << ": cache hit\n";
  std::cout << res.path.string() << "\n";
  return fim::kExitOk;
}

int cmd_sweep(const CommonOpts& opts, bool single_budget,
              const std::string& trace_path, const std::string& alloc_path) {
  ExperimentConfig cfg = opts.merge();
  if (cfg.budgets.empty() && !single_budget) {
    for (int i = 1; i <= 14; ++i) cfg.budgets.push_back(0.5 * i);
  }
  if (single_budget && cfg.budgets.size() != 1) {
    throw fim::ConfigError("run expects exactly one --budgets value");
  }
  fim::Graph g = load_weighted(cfg, opts.edge_prob);
  fim::SweepOutput result = fim::run_sweep(g, cfg);
  if (!trace_path.empty()) {
    std::string jsonl;
    for (const auto& detail : result.details) {
      jsonl += fim::trace_to_jsonl(detail, g);
    }
    write_output(jsonl, trace_path);
  }
  if (!alloc_path.empty()) {
    nlohmann::json alloc_json = nlohmann::json::array();
    for (const auto& detail : result.details) {
      alloc_json.push_back(fim::allocation_to_json(detail.alloc, g));
    }
    write_output(
        (single_budget ? alloc_json[0] : alloc_json).dump(2) + "\n",
        alloc_path);
  }
  emit_sweep(result, opts.format, opts.out);
  return fim::kExitOk;
}

int cmd_evaluate(const CommonOpts& opts, const std::string& alloc_path) {
  ExperimentConfig cfg = opts.merge();
  if (cfg.eval_sims == 0) cfg.eval_sims = 1000;
  fim::Graph g = load_weighted(cfg, opts.edge_prob);
  nlohmann::json aj;
  try {
    aj = nlohmann::json::parse(fim::read_file(alloc_path));
  } catch (const nlohmann::json::exception& e) {
    throw fim::ConfigError(std::string("bad allocation json: ") + e.what());
  }
  fim::Allocation alloc = fim::allocation_from_json(aj, g);
  fim::Profile profile =
      fim::sample_profile(cfg.scheme, g.node_count(), cfg.seed);
  fim::SpreadEstimate est =
      fim::estimate_F(g, profile, alloc, cfg.semantics, cfg.eval_sims,
                      fim::derive_seed(cfg.seed, fim::kTagEval), cfg.workers);
  nlohmann::json out{{"influence_mean", est.mean},
                     {"influence_stderr", est.std_error},
                     {"simulations", est.simulations}};
  write_output(out.dump(2) + "\n", opts.out);
  return fim::kExitOk;
}

int cmd_oracle(const std::string& edges_path, bool directed,
               const CommonOpts& opts, double budget, double delta) {
  ExperimentConfig cfg = opts.merge();
  fim::Semantics semantics = fim::Semantics::GlobalBaseline;
  if (opts.semantics_opt && opts.semantics_opt->count()) {
    semantics = fim::semantics_from_string(opts.semantics);
  }
  fim::Graph g =
      fim::Graph::parse_edge_list(fim::read_file(edges_path), directed);
  if (opts.edge_prob >= 0.0) {
    g.apply_uniform_probability(opts.edge_prob);
  } else {
    g.apply_weighted_cascade();
  }
  fim::Profile profile =
      fim::sample_profile(cfg.scheme, g.node_count(), cfg.seed);

  fim::ExactSpreadModel model(fim::build_sigma_table(g));
  fim::GreedyResult greedy = fim::greedy_allocate(
      profile, model, fim::GreedyOptions{budget, cfg.lazy, cfg.workers});
  double greedy_value = fim::exact_F(g, profile, greedy.alloc, semantics);
  fim::GridOptimum grid =
      fim::grid_optimum(g, profile, budget, delta, semantics);

  nlohmann::json report{
      {"nodes", g.node_count()},
      {"edges", g.edge_count()},
      {"budget", budget},
      {"delta", delta},
      {"semantics", fim::to_string(semantics)},
      {"greedy_value", greedy_value},
      {"grid_value", grid.value},
      {"grid_points", grid.points},
      {"guarantee", 1.0 - std::exp(-1.0)},
      {"guarantee_satisfied",
       greedy_value >= (1.0 - std::exp(-1.0)) * grid.value - 1e-9},
      {"greedy_allocation", fim::allocation_to_json(greedy.alloc, g)},
  };
  if (g.node_count() <= fim::kMaxSubmodularityNodes) {
    report["submodularity_violation"] = fim::max_submodularity_violation(g);
  }
  write_output(report.dump(2) + "\n", opts.out);
  return fim::kExitOk;
}

int cmd_check(std::uint64_t seed) {
  // Quick self-checks on randomly generated instances.
  bool ok = true;
  auto report = [&](const std::string& what, bool pass) {
    std::cout << what << ": " << (pass ? "OK" : "FAILED") << "\n";
    ok = ok && pass;
  };

  {
    double worst = 0.0;
    for (int t = 0; t < 25; ++t) {
      fim::Stream rng(seed, t);
      std::vector<std::pair<long long, long long>> pairs;
      std::uint32_t m = 4 + static_cast<std::uint32_t>(rng.next_below(8));
      for (std::uint32_t e = 0; e < m; ++e) {
        auto u = static_cast<long long>(rng.next_below(6));
        auto v = static_cast<long long>(rng.next_below(6));
        pairs.emplace_back(u, v);
      }
      fim::Graph g = fim::Graph::from_raw_edges(pairs, false);
      if (g.node_count() == 0) continue;
      g.apply_weighted_cascade();
      worst = std::max(worst, fim::max_submodularity_violation(g));
    }
    report("submodularity on random graphs (violation " +
               fim::format_number(worst) + ")",
           worst <= 1e-9);
  }

  {
    bool equal = true;
    for (int t = 0; t < 10 && equal; ++t) {
      fim::Stream rng(seed, 1000 + t);
      std::vector<std::pair<long long, long long>> pairs;
      std::uint32_t n = 10 + static_cast<std::uint32_t>(rng.next_below(15));
      std::uint32_t m = n + static_cast<std::uint32_t>(rng.next_below(2 * n));
      for (std::uint32_t e = 0; e < m; ++e) {
        pairs.emplace_back(static_cast<long long>(rng.next_below(n)),
                           static_cast<long long>(rng.next_below(n)));
      }
      fim::Graph g = fim::Graph::from_raw_edges(pairs, true);
      if (g.node_count() == 0) continue;
      g.apply_weighted_cascade();
      fim::CoefficientScheme scheme{{0.5, 1.0}, {0.0, 0.2}};
      fim::Profile profile =
          fim::sample_profile(scheme, g.node_count(), seed + t);
      fim::LiveEdgePool pool(g, 64, seed + t);
      fim::PoolSpreadModel lazy_model(pool), naive_model(pool);
      auto lazy = fim::greedy_allocate(profile, lazy_model,
                                       fim::GreedyOptions{2.5, true, 1});
      auto naive = fim::greedy_allocate(profile, naive_model,
                                        fim::GreedyOptions{2.5, false, 1});
      equal = lazy.trace == naive.trace && lazy.alloc.y == naive.alloc.y;
    }
    report("lazy greedy matches naive greedy", equal);
  }

  {
    fim::Stream rng(seed, 424242);
    std::vector<std::pair<long long, long long>> pairs;
    for (std::uint32_t e = 0; e < 60; ++e) {
      pairs.emplace_back(static_cast<long long>(rng.next_below(30)),
                         static_cast<long long>(rng.next_below(30)));
    }
    fim::Graph g = fim::Graph::from_raw_edges(pairs, false);
    g.apply_weighted_cascade();
    fim::CoefficientScheme scheme{{1.0}, {0.0}};
    fim::Profile profile = fim::sample_profile(scheme, g.node_count(), seed);
    fim::Allocation alloc;
    alloc.y.assign(g.node_count(), 0.0);
    alloc.budget = 2.0;
    alloc.y[0] = 1.0;
    if (g.node_count() > 1) alloc.y[1] = 1.0;
    auto serial = fim::estimate_F(g, profile, alloc,
                                  fim::Semantics::SelectedOnly, 4000, seed, 1);
    auto threaded = fim::estimate_F(g, profile, alloc,
                                    fim::Semantics::SelectedOnly, 4000, seed, 4);
    report("estimates independent of worker count",
           serial.mean == threaded.mean &&
               serial.std_error == threaded.std_error);
  }

  return ok ? fim::kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional influence maximization toolkit"};
  app.require_subcommand(1);

  // fetch
  auto* fetch = app.add_subcommand("fetch", "download a dataset into the cache");
  std::string fetch_dataset_name, fetch_cache;
  fetch->add_option("--dataset", fetch_dataset_name, "dataset name")
      ->required();
  fetch->add_option("--cache", fetch_cache, "cache directory override");

  // run
  auto* run = app.add_subcommand("run", "greedy allocation for one budget");
  CommonOpts run_opts;
  run_opts.attach(run, true);
  std::string run_trace, run_alloc;
  run->add_option("--trace", run_trace, "write selection trace (json lines)");
  run->add_option("--save-alloc", run_alloc, "write allocation json");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "budget sweep over a dataset");
  CommonOpts sweep_opts;
  sweep_opts.attach(sweep, true);

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "re-score a saved allocation");
  CommonOpts eval_opts;
  eval_opts.attach(evaluate, false);
  std::string eval_alloc;
  evaluate->add_option("--alloc", eval_alloc, "allocation json file")
      ->required();

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "exhaustive analysis of a small edge-list file");
  CommonOpts oracle_opts;
  oracle_opts.attach(oracle, false);
  std::string oracle_edges;
  bool oracle_directed = false;
  double oracle_budget = 1.0;
  double oracle_delta = 0.25;
  oracle->add_option("--edges", oracle_edges, "edge list file")->required();
  oracle->add_flag("--directed", oracle_directed, "treat edges as directed");
  oracle->add_option("--budget", oracle_budget, "budget");
  oracle->add_option("--delta", oracle_delta, "grid step");

  // check
  auto* check = app.add_subcommand("check", "run internal consistency checks");
  std::uint64_t check_seed = 7;
  check->add_option("--seed", check_seed, "seed for generated instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fim::kExitConfig;
  }

  try {
    if (fetch->parsed()) return cmd_fetch(fetch_dataset_name, fetch_cache);
    if (run->parsed()) return cmd_sweep(run_opts, true, run_trace, run_alloc);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, false, "", "");
    if (evaluate->parsed()) return cmd_evaluate(eval_opts, eval_alloc);
    if (oracle->parsed()) {
      return cmd_oracle(oracle_edges, oracle_directed, oracle_opts,
                        oracle_budget, oracle_delta);
    }
    if (check->parsed()) return cmd_check(check_seed);
  } catch (const fim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fim::kExitConfig;
  } catch (const fim::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fim::kExitData;
  } catch (const fim::SizeGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fim::kExitSizeGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return fim::kExitOk;
}
