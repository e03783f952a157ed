#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fim/activation.hpp"
#include "fim/graph.hpp"
#include "fim/greedy.hpp"

namespace fim {

// One sweep: a greedy allocation per budget, each scored by fresh Monte
// Carlo simulation. Mirrors the CLI flags; JSON configs use the same field
// names with dashes replaced by underscores.
struct ExperimentConfig {
  std::string dataset;
  std::vector<double> budgets;
  CoefficientScheme scheme;
  std::uint64_t seed = 42;
  std::uint32_t pool_size = 1024;
  std::uint32_t eval_sims = 1000;
  Semantics semantics = Semantics::SelectedOnly;
  bool resample_per_budget = false;
  bool lazy = true;
  std::uint32_t workers = 0;
  std::optional<std::string> cache_dir;

  // Sorts budgets ascending and validates ranges.
  void normalize();
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct SweepRow {
  std::string network;
  double budget = 0.0;
  std::string scheme;
  double influence_mean = 0.0;
  double influence_stderr = 0.0;
  double runtime_seconds = 0.0;
  std::vector<Graph::RawId> selected;     // selection order, raw ids
  std::optional<Graph::RawId> fractional;
};

struct SweepOutput {
  std::vector<SweepRow> rows;
  std::vector<GreedyResult> details;  // parallel to rows
  nlohmann::json metadata;
};

// The graph must already carry edge probabilities.
SweepOutput run_sweep(const Graph& g, const ExperimentConfig& cfg);

std::string rows_to_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_to_json(const SweepOutput& out);

std::string trace_to_jsonl(const GreedyResult& result, const Graph& g);

nlohmann::json allocation_to_json(const Allocation& alloc, const Graph& g);
Allocation allocation_from_json(const nlohmann::json& j, const Graph& g);

}  // namespace fim
