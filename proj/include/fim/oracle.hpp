#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fim/activation.hpp"
#include "fim/graph.hpp"

// Exhaustive reference computations for small instances. Everything here
// enumerates all 2^|E| live-edge outcomes (and, where needed, all 2^|V|
// seed sets), so hard size guards apply; oversized inputs raise
// SizeGuardError rather than silently taking forever.

namespace fim {

inline constexpr std::uint32_t kMaxExactEdges = 20;
inline constexpr std::uint32_t kMaxExactNodes = 12;
inline constexpr std::uint32_t kMaxSubmodularityNodes = 8;
inline constexpr std::uint64_t kMaxGridPoints = 10'000'000;

// Expected cascade size for every seed set, indexed by node bitmask.
struct SigmaTable {
  std::uint32_t n = 0;
  std::vector<double> sigma;  // size 1 << n

  double operator[](std::uint32_t mask) const { return sigma[mask]; }
};

SigmaTable build_sigma_table(const Graph& g);

// Expected cascade size of one seed set, by direct enumeration. Independent
// of build_sigma_table so the two can cross-check each other.
double exact_sigma(const Graph& g, std::span<const std::uint32_t> seeds);

// Expected spread of a budget allocation: the objective averages the
// cascade size over random seed sets where node v joins independently with
// its seeding probability.
double exact_F(const Graph& g, const Profile& profile, const Allocation& alloc,
               Semantics semantics);

// Same objective evaluated from a precomputed table; used where many
// allocations are scored against one graph.
double exact_F_from_table(const SigmaTable& table,
                          std::span<const double> seed_probs);

struct GridOptimum {
  double value = 0.0;
  Allocation best;
  std::uint64_t points = 0;  // grid points evaluated
};

// Exhaustive search over allocations whose entries are multiples of delta,
// subject to the budget and f(y) <= 1. A lower bound on the true optimum.
GridOptimum grid_optimum(const Graph& g, const Profile& profile, double budget,
                         double delta = 0.25,
                         Semantics semantics = Semantics::GlobalBaseline,
                         std::uint64_t max_points = kMaxGridPoints);

// Largest sigma(R u S) + sigma(R n S) - sigma(R) - sigma(S) over all subset
// pairs, clamped at zero. Submodularity means this is <= 0 up to rounding.
double max_submodularity_violation(const Graph& g);

}  // namespace fim
