#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fim/activation.hpp"
#include "fim/graph.hpp"
#include "fim/rng.hpp"

namespace fim {

struct SpreadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint32_t simulations = 0;
};

// One independent-cascade run. New activations spread breadth-first; each
// edge out of a newly active node is attempted once, drawing from `rng` in
// traversal order. Returns all activated nodes (seeds included).
std::vector<std::uint32_t> simulate_cascade(const Graph& g,
                                            std::span<const std::uint32_t> initial,
                                            Stream& rng);

// Monte Carlo estimate of expected cascade size from a fixed seed set.
// Simulation i draws only from (seed, i), so the result is bit-identical
// for any worker count.
SpreadEstimate estimate_spread(const Graph& g,
                               std::span<const std::uint32_t> seeds,
                               std::uint32_t simulations, std::uint64_t seed,
                               std::uint32_t workers = 0);

// Monte Carlo estimate of the allocation objective: each simulation first
// samples the seed set (node v joins with its seeding probability under the
// given semantics), then cascades. Rejects infeasible allocations.
SpreadEstimate estimate_F(const Graph& g, const Profile& profile,
                          const Allocation& alloc, Semantics semantics,
                          std::uint32_t simulations, std::uint64_t seed,
                          std::uint32_t workers = 0);

}  // namespace fim
