#include "fim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fim/cascade.hpp"
#include "fim/errors.hpp"
#include "fim/pool.hpp"
#include "fim/rng.hpp"

namespace fim {

void ExperimentConfig::normalize() {
  scheme.validate();
  if (budgets.empty()) {
    throw ConfigError("at least one budget is required");
  }
  for (double b : budgets) {
    if (!std::isfinite(b) || b < 0.0) {
      throw ConfigError("budgets must be finite and non-negative");
    }
  }
  std::sort(budgets.begin(), budgets.end());
  if (pool_size == 0) throw ConfigError("pool size must be positive");
  if (eval_sims == 0) throw ConfigError("evaluation simulations must be positive");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "dataset") {
        cfg.dataset = value.get<std::string>();
      } else if (key == "budgets") {
        cfg.budgets = value.get<std::vector<double>>();
      } else if (key == "a_choices") {
        cfg.scheme.a_choices = value.get<std::vector<double>>();
      } else if (key == "b_choices") {
        cfg.scheme.b_choices = value.get<std::vector<double>>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "pool_size") {
        cfg.pool_size = value.get<std::uint32_t>();
      } else if (key == "eval_sims") {
        cfg.eval_sims = value.get<std::uint32_t>();
      } else if (key == "semantics") {
        cfg.semantics = semantics_from_string(value.get<std::string>());
      } else if (key == "resample_per_budget") {
        cfg.resample_per_budget = value.get<bool>();
      } else if (key == "lazy") {
        cfg.lazy = value.get<bool>();
      } else if (key == "workers") {
        cfg.workers = value.get<std::uint32_t>();
      } else if (key == "cache_dir") {
        cfg.cache_dir = value.get<std::string>();
      } else {
        throw ConfigError("unknown config field '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j{
      {"dataset", cfg.dataset},
      {"budgets", cfg.budgets},
      {"a_choices", cfg.scheme.a_choices},
      {"b_choices", cfg.scheme.b_choices},
      {"seed", cfg.seed},
      {"pool_size", cfg.pool_size},
      {"eval_sims", cfg.eval_sims},
      {"semantics", to_string(cfg.semantics)},
      {"resample_per_budget", cfg.resample_per_budget},
      {"lazy", cfg.lazy},
      {"workers", cfg.workers},
  };
  if (cfg.cache_dir) j["cache_dir"] = *cfg.cache_dir;
  return j;
}

SweepOutput run_sweep(const Graph& g, const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.normalize();
  std::uint32_t n = g.node_count();

  SweepOutput out;
  out.metadata = config_to_json(cfg);
  out.metadata["coefficient_sampling"] = "uniform";
  out.metadata["nodes"] = n;
  out.metadata["edges"] = g.edge_count();

  std::string scheme_label = cfg.scheme.label();

  Profile profile;
  std::optional<LiveEdgePool> pool;
  for (std::size_t idx = 0; idx < cfg.budgets.size(); ++idx) {
    double budget = cfg.budgets[idx];
    std::uint64_t instance_seed =
        cfg.resample_per_budget ? hash_combine(cfg.seed, idx) : cfg.seed;
    if (idx == 0 || cfg.resample_per_budget) {
      profile = sample_profile(cfg.scheme, n, instance_seed);
      pool.emplace(g, cfg.pool_size, instance_seed);
    }

    PoolSpreadModel model(*pool);
    GreedyResult result = greedy_allocate(
        profile, model, GreedyOptions{budget, cfg.lazy, cfg.workers});

    SpreadEstimate eval = estimate_F(
        g, profile, result.alloc, cfg.semantics, cfg.eval_sims,
        derive_seed(cfg.seed, kTagEval, idx), cfg.workers);

    SweepRow row;
    row.network = cfg.dataset;
    row.budget = budget;
    row.scheme = scheme_label;
    row.influence_mean = eval.mean;
    row.influence_stderr = eval.std_error;
    row.runtime_seconds = result.runtime_seconds;
    for (std::uint32_t v : result.selected) row.selected.push_back(g.raw_id(v));
    if (result.fractional_node >= 0) {
      row.fractional = g.raw_id(static_cast<std::uint32_t>(result.fractional_node));
    }
    out.rows.push_back(std::move(row));
    out.details.push_back(std::move(result));
  }
  return out;
}

namespace {

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

std::string join_selected(const std::vector<Graph::RawId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "network,budget,scheme,influence_mean,influence_stderr,"
      "runtime_seconds,selected_nodes,fractional_node\n";
  for (const SweepRow& r : rows) {
    out += r.network;
    out += ',';
    out += format_number(r.budget);
    out += ',';
    out += r.scheme;
    out += ',';
    out += fixed6(r.influence_mean);
    out += ',';
    out += fixed6(r.influence_stderr);
    out += ',';
    out += fixed6(r.runtime_seconds);
    out += ',';
    out += join_selected(r.selected);
    out += ',';
    if (r.fractional) out += std::to_string(*r.fractional);
    out += '\n';
  }
  return out;
}

nlohmann::json sweep_to_json(const SweepOutput& out) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& r : out.rows) {
    nlohmann::json row{
        {"network", r.network},
        {"budget", r.budget},
        {"scheme", r.scheme},
        {"influence_mean", r.influence_mean},
        {"influence_stderr", r.influence_stderr},
        {"runtime_seconds", r.runtime_seconds},
        {"selected_nodes", r.selected},
    };
    if (r.fractional) {
      row["fractional_node"] = *r.fractional;
    } else {
      row["fractional_node"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"metadata", out.metadata}, {"results", rows}};
}

std::string trace_to_jsonl(const GreedyResult& result, const Graph& g) {
  std::string out;
  for (const TraceRow& row : result.trace) {
    nlohmann::json j{
        {"round", row.round},
        {"node", g.raw_id(row.node)},
        {"sigma_gain", row.sigma_gain},
        {"weighted_gain", row.weighted_gain},
        {"y", row.y},
        {"budget_used", row.budget_used},
    };
    out += j.dump();
    out += '\n';
  }
  return out;
}

nlohmann::json allocation_to_json(const Allocation& alloc, const Graph& g) {
  nlohmann::json y = nlohmann::json::object();
  for (std::uint32_t v = 0; v < alloc.y.size(); ++v) {
    if (alloc.y[v] > 0.0) {
      y[std::to_string(g.raw_id(v))] = alloc.y[v];
    }
  }
  return nlohmann::json{{"budget", alloc.budget}, {"y", y}};
}

Allocation allocation_from_json(const nlohmann::json& j, const Graph& g) {
  Allocation alloc;
  alloc.y.assign(g.node_count(), 0.0);
  try {
    alloc.budget = j.at("budget").get<double>();
    for (const auto& [key, value] : j.at("y").items()) {
      Graph::RawId raw = std::stoll(key);
      auto dense = g.dense_id(raw);
      if (!dense) {
        throw ConfigError("allocation references unknown node " + key);
      }
      alloc.y[*dense] = value.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad allocation: ") + e.what());
  }
  return alloc;
}

}  // namespace fim
