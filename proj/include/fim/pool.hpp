#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fim/graph.hpp"

namespace fim {

// A fixed collection of live-edge realizations of the graph: realization i
// keeps edge e independently with probability prob(e), decided by a draw
// that depends only on (seed, i, e). Spread estimated on the pool is an
// exact coverage average, hence deterministic, monotone and submodular in
// the seed set; the greedy search exploits all three.
class LiveEdgePool {
 public:
  LiveEdgePool(const Graph& g, std::uint32_t realizations, std::uint64_t seed);

  std::uint32_t realizations() const { return r_; }
  std::uint32_t node_count() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  std::span<const std::uint32_t> kept_out(std::uint32_t i,
                                          std::uint32_t v) const {
    std::size_t idx = std::size_t{i} * n_ + v;
    return {targets_.data() + node_off_[idx],
            targets_.data() + node_off_[idx + 1]};
  }

  // Average (resp. summed) number of nodes reachable from the seed set
  // across realizations.
  double sigma_hat(std::span<const std::uint32_t> seeds) const;
  std::uint64_t total_reach(std::span<const std::uint32_t> seeds) const;

 private:
  std::uint32_t n_ = 0;
  std::uint32_t r_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint64_t> node_off_;  // (i, v) -> targets_ range
  std::vector<std::uint32_t> targets_;
};

// Incremental coverage of a growing seed set over a pool. marginal(v) is
// exactly total_reach(S + v) - total_reach(S) for the current S, computed
// without revisiting already covered nodes. Query and commit walk the
// realizations identically, so committing the argmax reproduces its
// reported gain.
class PoolCoverage {
 public:
  explicit PoolCoverage(const LiveEdgePool& pool);

  std::uint64_t marginal(std::uint32_t v) const;  // thread-safe
  void commit(std::uint32_t v);
  std::uint64_t covered_total() const { return covered_total_; }

 private:
  template <bool Commit>
  std::uint64_t walk(std::uint32_t v) const;

  const LiveEdgePool* pool_;
  std::uint32_t words_per_realization_ = 0;
  mutable std::vector<std::uint64_t> covered_;
  std::uint64_t covered_total_ = 0;
};

}  // namespace fim
