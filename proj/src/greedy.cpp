#include "fim/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <thread>

#include "fim/errors.hpp"

namespace fim {

namespace {

struct HeapEntry {
  double weighted_gain;
  double sigma_gain;  // model units
  std::uint32_t node;
  std::uint32_t stamp;  // selection count when the gain was computed
};

struct HeapOrder {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.weighted_gain != b.weighted_gain) {
      return a.weighted_gain < b.weighted_gain;
    }
    return a.node > b.node;
  }
};

std::vector<double> initial_gains(const std::vector<std::uint32_t>& nodes,
                                  const SpreadModel& model,
                                  std::uint32_t workers) {
  std::vector<double> gains(nodes.size());
  if (workers == 0) workers = std::thread::hardware_concurrency();
  workers = std::max<std::uint32_t>(
      1, std::min<std::size_t>(workers, nodes.size()));
  if (workers == 1 || nodes.size() < 64) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      gains[i] = model.marginal(nodes[i]);
    }
    return gains;
  }
  std::vector<std::thread> threads;
  for (std::uint32_t w = 0; w < workers; ++w) {
    std::size_t lo = nodes.size() * w / workers;
    std::size_t hi = nodes.size() * (w + 1) / workers;
    threads.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) {
        gains[i] = model.marginal(nodes[i]);
      }
    });
  }
  for (auto& t : threads) t.join();
  return gains;
}

}  // namespace

GreedyResult greedy_allocate(const Profile& profile, SpreadModel& model,
                             const GreedyOptions& options) {
  if (!std::isfinite(options.budget) || options.budget < 0.0) {
    throw ConfigError("budget must be finite and non-negative");
  }
  auto started = std::chrono::steady_clock::now();

  std::uint32_t n = profile.size();
  GreedyResult result;
  result.alloc.y.assign(n, 0.0);
  result.alloc.budget = options.budget;

  std::vector<std::uint32_t> candidates;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (profile.f[v].saturable()) candidates.push_back(v);
  }

  std::vector<char> selected(n, 0);
  double remaining = options.budget;
  double used = 0.0;
  std::uint32_t round = 0;

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap;
  if (options.lazy && remaining > 0.0 && !candidates.empty()) {
    std::vector<double> gains = initial_gains(candidates, model,
                                              options.workers);
    result.sigma_evaluations += candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      std::uint32_t v = candidates[i];
      heap.push(HeapEntry{gains[i] * profile.f[v].a, gains[i], v, 0});
    }
  }

  while (remaining > 0.0 && result.selected.size() < candidates.size()) {
    std::uint32_t best = 0;
    double best_sigma_gain = 0.0;
    double best_weighted = 0.0;
    if (options.lazy) {
      while (true) {
        HeapEntry top = heap.top();
        heap.pop();
        if (top.stamp == round) {
          best = top.node;
          best_sigma_gain = top.sigma_gain;
          best_weighted = top.weighted_gain;
          break;
        }
        double gain = model.marginal(top.node);
        ++result.sigma_evaluations;
        heap.push(HeapEntry{gain * profile.f[top.node].a, gain, top.node,
                            round});
      }
    } else {
      bool have = false;
      for (std::uint32_t v : candidates) {
        if (selected[v]) continue;
        double gain = model.marginal(v);
        ++result.sigma_evaluations;
        double weighted = gain * profile.f[v].a;
        if (!have || weighted > best_weighted) {
          have = true;
          best = v;
          best_sigma_gain = gain;
          best_weighted = weighted;
        }
      }
    }

    double y = std::min(profile.f[best].inverse_at_one(), remaining);
    result.alloc.y[best] = y;
    selected[best] = 1;
    result.selected.push_back(best);
    model.commit(best);
    used += y;
    remaining = (y == remaining) ? 0.0 : remaining - y;

    double scale = model.unit_scale();
    result.trace.push_back(TraceRow{round, best, best_sigma_gain / scale,
                                    best_weighted / scale, y, used});
    ++round;
  }

  auto fractional = result.alloc.fractional_nodes(profile);
  if (!fractional.empty()) result.fractional_node = fractional.front();

  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

GreedyResult degree_baseline(const Graph& g, const Profile& profile,
                             double budget) {
  if (!std::isfinite(budget) || budget < 0.0) {
    throw ConfigError("budget must be finite and non-negative");
  }
  if (profile.size() != g.node_count()) {
    throw ConfigError("profile and graph node counts differ");
  }
  auto started = std::chrono::steady_clock::now();

  std::uint32_t n = g.node_count();
  std::vector<std::uint32_t> order;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (profile.f[v].saturable()) order.push_back(v);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     auto da = g.out_edges(a).size(), db = g.out_edges(b).size();
                     if (da != db) return da > db;
                     return a < b;
                   });

  GreedyResult result;
  result.alloc.y.assign(n, 0.0);
  result.alloc.budget = budget;
  double remaining = budget;
  double used = 0.0;
  std::uint32_t round = 0;
  for (std::uint32_t v : order) {
    if (remaining <= 0.0) break;
    double y = std::min(profile.f[v].inverse_at_one(), remaining);
    result.alloc.y[v] = y;
    result.selected.push_back(v);
    used += y;
    remaining = (y == remaining) ? 0.0 : remaining - y;
    result.trace.push_back(TraceRow{round, v, 0.0, 0.0, y, used});
    ++round;
  }
  auto fractional = result.alloc.fractional_nodes(profile);
  if (!fractional.empty()) result.fractional_node = fractional.front();
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

}  // namespace fim
