#include "fim/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fim/errors.hpp"

namespace fim {

namespace {

void guard_edges(const Graph& g, std::uint32_t limit) {
  if (g.edge_count() > limit) {
    throw SizeGuardError("exact computation limited to " +
                         std::to_string(limit) + " edges, graph has " +
                         std::to_string(g.edge_count()));
  }
}

void guard_nodes(const Graph& g, std::uint32_t limit) {
  if (g.node_count() > limit) {
    throw SizeGuardError("exact computation limited to " +
                         std::to_string(limit) + " nodes, graph has " +
                         std::to_string(g.node_count()));
  }
}

// Probability of one live-edge outcome: edges in `mask` succeed, the rest
// fail.
double outcome_probability(const std::vector<Edge>& edges,
                           std::uint32_t mask) {
  double p = 1.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    p *= (mask >> e) & 1u ? edges[e].prob : 1.0 - edges[e].prob;
    if (p == 0.0) return 0.0;
  }
  return p;
}

// Per-node reachability closures (as node bitmasks) in the subgraph of live
// edges, via bit-parallel transitive closure.
void live_closures(const Graph& g, std::uint32_t edge_mask,
                   std::vector<std::uint64_t>& closure) {
  std::uint32_t n = g.node_count();
  closure.assign(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) closure[v] = 1ULL << v;
  const auto& edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if ((edge_mask >> e) & 1u) closure[edges[e].src] |= 1ULL << edges[e].dst;
  }
  for (std::uint32_t k = 0; k < n; ++k) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if ((closure[v] >> k) & 1u) closure[v] |= closure[k];
    }
  }
}

}  // namespace

SigmaTable build_sigma_table(const Graph& g) {
  guard_nodes(g, kMaxExactNodes);
  guard_edges(g, kMaxExactEdges);
  std::uint32_t n = g.node_count();
  std::size_t m = g.edge_count();

  SigmaTable table;
  table.n = n;
  table.sigma.assign(std::size_t{1} << n, 0.0);

  std::vector<std::uint64_t> closure;
  std::vector<std::uint64_t> reach(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double p = outcome_probability(g.edges(), mask);
    if (p == 0.0) continue;
    live_closures(g, mask, closure);
    reach[0] = 0;
    for (std::uint32_t s = 1; s < (1u << n); ++s) {
      std::uint32_t low = std::countr_zero(s);
      reach[s] = reach[s & (s - 1)] | closure[low];
      table.sigma[s] += p * std::popcount(reach[s]);
    }
  }
  return table;
}

double exact_sigma(const Graph& g, std::span<const std::uint32_t> seeds) {
  guard_edges(g, kMaxExactEdges);
  guard_nodes(g, 64);
  std::size_t m = g.edge_count();
  const auto& edges = g.edges();

  std::uint64_t seed_mask = 0;
  for (std::uint32_t v : seeds) seed_mask |= 1ULL << v;

  double sigma = 0.0;
  std::vector<std::uint32_t> frontier;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double p = outcome_probability(edges, mask);
    if (p == 0.0) continue;
    // Frontier expansion from the seed set over live edges.
    std::uint64_t reached = seed_mask;
    frontier.clear();
    for (std::uint32_t v : seeds) frontier.push_back(v);
    while (!frontier.empty()) {
      std::uint32_t v = frontier.back();
      frontier.pop_back();
      for (const Edge& e : g.out_edges(v)) {
        std::size_t idx = static_cast<std::size_t>(&e - edges.data());
        if (!((mask >> idx) & 1u)) continue;
        if (!((reached >> e.dst) & 1u)) {
          reached |= 1ULL << e.dst;
          frontier.push_back(e.dst);
        }
      }
    }
    sigma += p * std::popcount(reached);
  }
  return sigma;
}

double exact_F_from_table(const SigmaTable& table,
                          std::span<const double> seed_probs) {
  std::uint32_t n = table.n;
  std::size_t size = std::size_t{1} << n;
  // in_prod[S] = prod_{v in S} q_v, out_prod[S] = prod_{v in S} (1 - q_v).
  std::vector<double> in_prod(size), out_prod(size);
  in_prod[0] = out_prod[0] = 1.0;
  for (std::uint32_t s = 1; s < size; ++s) {
    std::uint32_t low = std::countr_zero(s);
    in_prod[s] = in_prod[s & (s - 1)] * seed_probs[low];
    out_prod[s] = out_prod[s & (s - 1)] * (1.0 - seed_probs[low]);
  }
  std::uint32_t full = static_cast<std::uint32_t>(size - 1);
  double F = 0.0;
  for (std::uint32_t s = 0; s < size; ++s) {
    F += table.sigma[s] * in_prod[s] * out_prod[full ^ s];
  }
  return F;
}

double exact_F(const Graph& g, const Profile& profile, const Allocation& alloc,
               Semantics semantics) {
  guard_edges(g, kMaxExactEdges);
  guard_nodes(g, kMaxExactNodes);
  alloc.validate_feasible(profile);
  std::uint32_t n = g.node_count();
  std::size_t m = g.edge_count();

  std::vector<double> q(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    q[v] = seed_probability(profile, alloc, semantics, v);
  }

  // E[|reach(S)|] with S ~ q factorizes per node: v is reached unless every
  // node that can reach v (in the live subgraph) stays out of S.
  std::vector<std::uint64_t> closure, ancestors(n);
  double F = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double p = outcome_probability(g.edges(), mask);
    if (p == 0.0) continue;
    live_closures(g, mask, closure);
    for (std::uint32_t v = 0; v < n; ++v) ancestors[v] = 0;
    for (std::uint32_t u = 0; u < n; ++u) {
      std::uint64_t c = closure[u];
      while (c) {
        std::uint32_t v = std::countr_zero(c);
        c &= c - 1;
        ancestors[v] |= 1ULL << u;
      }
    }
    double expected_reach = 0.0;
    for (std::uint32_t v = 0; v < n; ++v) {
      double miss = 1.0;
      std::uint64_t a = ancestors[v];
      while (a) {
        miss *= 1.0 - q[std::countr_zero(a)];
        a &= a - 1;
      }
      expected_reach += 1.0 - miss;
    }
    F += p * expected_reach;
  }
  return F;
}

namespace {

struct GridSearch {
  const SigmaTable& table;
  const Profile& profile;
  Semantics semantics;
  double delta;
  std::uint64_t max_points;
  std::uint32_t n;

  std::vector<std::uint32_t> cap;  // per-node unit cap
  std::vector<double> q;
  std::vector<double> y;
  GridOptimum result;

  void run(double budget) {
    std::uint32_t budget_units =
        static_cast<std::uint32_t>(std::floor(budget / delta + 1e-9));
    q.assign(n, 0.0);
    y.assign(n, 0.0);
    descend(0, budget_units);
  }

  void descend(std::uint32_t v, std::uint32_t units_left) {
    if (v == n) {
      if (++result.points > max_points) {
        throw SizeGuardError("allocation grid exceeds " +
                             std::to_string(max_points) + " points");
      }
      double value = exact_F_from_table(table, q);
      if (value > result.value + 1e-15) {
        result.value = value;
        result.best.y = y;
      }
      return;
    }
    std::uint32_t limit = std::min(cap[v], units_left);
    const AffineActivation& f = profile.f[v];
    for (std::uint32_t u = 0; u <= limit; ++u) {
      y[v] = u * delta;
      if (semantics == Semantics::SelectedOnly && u == 0) {
        q[v] = 0.0;
      } else {
        q[v] = std::clamp(f.value(y[v]), 0.0, 1.0);
      }
      descend(v + 1, units_left - u);
    }
  }
};

}  // namespace

GridOptimum grid_optimum(const Graph& g, const Profile& profile, double budget,
                         double delta, Semantics semantics,
                         std::uint64_t max_points) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ConfigError("grid step must be positive");
  }
  if (budget < 0.0 || !std::isfinite(budget)) {
    throw ConfigError("budget must be non-negative");
  }
  if (profile.size() != g.node_count()) {
    throw ConfigError("profile and graph node counts differ");
  }
  SigmaTable table = build_sigma_table(g);
  std::uint32_t n = g.node_count();

  GridSearch search{table, profile, semantics, delta, max_points, n,
                    {},    {},      {},        {}};
  search.cap.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    const AffineActivation& f = profile.f[v];
    if (f.saturable()) {
      search.cap[v] = static_cast<std::uint32_t>(
          std::floor(f.inverse_at_one() / delta + 1e-9));
    } else {
      // Flat response: budget only matters through the y > 0 switch under
      // SelectedOnly, so one grid step is enough.
      search.cap[v] = semantics == Semantics::SelectedOnly ? 1 : 0;
    }
  }
  search.result.best.y.assign(n, 0.0);
  search.result.best.budget = budget;
  search.run(budget);
  return search.result;
}

double max_submodularity_violation(const Graph& g) {
  guard_nodes(g, kMaxSubmodularityNodes);
  SigmaTable table = build_sigma_table(g);
  std::uint32_t size = 1u << table.n;
  double worst = 0.0;
  for (std::uint32_t r = 0; r < size; ++r) {
    for (std::uint32_t s = r; s < size; ++s) {
      double lhs = table.sigma[r | s] + table.sigma[r & s];
      double rhs = table.sigma[r] + table.sigma[s];
      if (lhs - rhs > worst) worst = lhs - rhs;
    }
  }
  return worst;
}

}  // namespace fim
