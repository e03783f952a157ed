#pragma once

#include <cstdint>
#include <vector>

#include "fim/activation.hpp"
#include "fim/oracle.hpp"
#include "fim/pool.hpp"

namespace fim {

// Deterministic marginal-spread provider over a growing selected set.
// Implementations must be monotone and submodular in the selected set for
// the lazy mode's stale upper bounds to be valid.
class SpreadModel {
 public:
  virtual ~SpreadModel() = default;

  // sigma(S + v) - sigma(S) in model units for the current selected set S.
  virtual double marginal(std::uint32_t v) const = 0;
  virtual void commit(std::uint32_t v) = 0;

  // Model units per spread unit (a pool reports summed coverage counts).
  virtual double unit_scale() const { return 1.0; }
};

// Coverage totals over a fixed live-edge pool; gains are exact integers,
// so comparisons carry no floating-point ambiguity.
class PoolSpreadModel final : public SpreadModel {
 public:
  explicit PoolSpreadModel(const LiveEdgePool& pool)
      : coverage_(pool), realizations_(pool.realizations()) {}

  double marginal(std::uint32_t v) const override {
    return static_cast<double>(coverage_.marginal(v));
  }
  void commit(std::uint32_t v) override { coverage_.commit(v); }
  double unit_scale() const override { return realizations_; }

 private:
  PoolCoverage coverage_;
  double realizations_;
};

// Exhaustively computed spread for tiny instances.
class ExactSpreadModel final : public SpreadModel {
 public:
  explicit ExactSpreadModel(SigmaTable table) : table_(std::move(table)) {}

  double marginal(std::uint32_t v) const override {
    return table_.sigma[mask_ | (1u << v)] - table_.sigma[mask_];
  }
  void commit(std::uint32_t v) override { mask_ |= 1u << v; }

 private:
  SigmaTable table_;
  std::uint32_t mask_ = 0;
};

struct GreedyOptions {
  double budget = 0.0;
  bool lazy = true;
  std::uint32_t workers = 0;  // initial-gain evaluation only
};

struct TraceRow {
  std::uint32_t round = 0;
  std::uint32_t node = 0;
  double sigma_gain = 0.0;     // spread units
  double weighted_gain = 0.0;  // sigma_gain * slope
  double y = 0.0;
  double budget_used = 0.0;    // cumulative after this round

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct GreedyResult {
  Allocation alloc;
  std::vector<std::uint32_t> selected;  // in selection order
  long fractional_node = -1;            // dense id, -1 if none
  std::vector<TraceRow> trace;
  std::uint64_t sigma_evaluations = 0;
  double runtime_seconds = 0.0;
};

// Budgeted greedy allocation. Each round picks the unselected node with the
// largest marginal-spread-times-slope product (ties to the lowest id),
// funds it to saturation or to the remaining budget, whichever is smaller,
// and repeats while budget and unselected responsive nodes remain. Nodes
// with zero slope can never saturate and are not considered. Lazy mode
// reuses stale gains as upper bounds and yields the identical trace.
GreedyResult greedy_allocate(const Profile& profile, SpreadModel& model,
                             const GreedyOptions& options);

// Baseline: fund nodes to saturation in descending out-degree order (ties
// to the lowest id) until the budget runs out.
GreedyResult degree_baseline(const Graph& g, const Profile& profile,
                             double budget);

}  // namespace fim
