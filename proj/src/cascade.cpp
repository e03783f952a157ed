#include "fim/cascade.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace fim {

namespace {

// Reusable BFS workspace; the epoch trick avoids clearing between runs.
struct Scratch {
  std::vector<std::uint32_t> stamp;
  std::vector<std::uint32_t> queue;
  std::uint32_t epoch = 0;

  void reset(std::uint32_t n) {
    if (stamp.size() != n) {
      stamp.assign(n, 0);
      epoch = 0;
    }
    ++epoch;
    queue.clear();
  }

  bool mark(std::uint32_t v) {
    if (stamp[v] == epoch) return false;
    stamp[v] = epoch;
    return true;
  }
};

std::uint32_t cascade_count(const Graph& g,
                            std::span<const std::uint32_t> initial,
                            Stream& rng, Scratch& scratch) {
  scratch.reset(g.node_count());
  auto& queue = scratch.queue;
  for (std::uint32_t v : initial) {
    if (scratch.mark(v)) queue.push_back(v);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t v = queue[head];
    for (const Edge& e : g.out_edges(v)) {
      if (scratch.stamp[e.dst] == scratch.epoch) continue;
      if (rng.bernoulli(e.prob)) {
        scratch.mark(e.dst);
        queue.push_back(e.dst);
      }
    }
  }
  return static_cast<std::uint32_t>(queue.size());
}

std::uint32_t resolve_workers(std::uint32_t workers, std::uint32_t tasks) {
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  return std::max(1u, std::min(workers, tasks));
}

// Fills results[i] = run(i, scratch) for i in [0, count), partitioned over
// workers. Per-index outputs keep the reduction order fixed.
void parallel_for(std::uint32_t count, std::uint32_t workers,
                  std::vector<std::uint32_t>& results,
                  const std::function<std::uint32_t(std::uint32_t, Scratch&)>& run) {
  results.assign(count, 0);
  workers = resolve_workers(workers, count);
  if (workers <= 1) {
    Scratch scratch;
    for (std::uint32_t i = 0; i < count; ++i) results[i] = run(i, scratch);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::uint32_t w = 0; w < workers; ++w) {
    std::uint32_t lo = static_cast<std::uint32_t>(
        std::uint64_t{count} * w / workers);
    std::uint32_t hi = static_cast<std::uint32_t>(
        std::uint64_t{count} * (w + 1) / workers);
    threads.emplace_back([&, lo, hi] {
      Scratch scratch;
      try {
        for (std::uint32_t i = lo; i < hi; ++i) results[i] = run(i, scratch);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

SpreadEstimate summarize(const std::vector<std::uint32_t>& counts) {
  SpreadEstimate est;
  est.simulations = static_cast<std::uint32_t>(counts.size());
  if (counts.empty()) return est;
  double sum = 0.0;
  for (std::uint32_t c : counts) sum += c;
  est.mean = sum / est.simulations;
  if (counts.size() > 1) {
    double ss = 0.0;
    for (std::uint32_t c : counts) {
      double d = c - est.mean;
      ss += d * d;
    }
    est.std_error = std::sqrt(ss / (est.simulations - 1.0)) /
                    std::sqrt(static_cast<double>(est.simulations));
  }
  return est;
}

}  // namespace

std::vector<std::uint32_t> simulate_cascade(const Graph& g,
                                            std::span<const std::uint32_t> initial,
                                            Stream& rng) {
  Scratch scratch;
  cascade_count(g, initial, rng, scratch);
  return scratch.queue;
}

SpreadEstimate estimate_spread(const Graph& g,
                               std::span<const std::uint32_t> seeds,
                               std::uint32_t simulations, std::uint64_t seed,
                               std::uint32_t workers) {
  std::uint64_t stream_seed = derive_seed(seed, kTagCascade);
  std::vector<std::uint32_t> counts;
  parallel_for(simulations, workers, counts,
               [&](std::uint32_t i, Scratch& scratch) {
                 Stream rng(stream_seed, i);
                 return cascade_count(g, seeds, rng, scratch);
               });
  return summarize(counts);
}

SpreadEstimate estimate_F(const Graph& g, const Profile& profile,
                          const Allocation& alloc, Semantics semantics,
                          std::uint32_t simulations, std::uint64_t seed,
                          std::uint32_t workers) {
  alloc.validate_feasible(profile);
  std::uint32_t n = g.node_count();
  std::vector<double> q(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    q[v] = seed_probability(profile, alloc, semantics, v);
  }
  std::uint64_t stream_seed = derive_seed(seed, kTagSeedSet);
  std::vector<std::uint32_t> counts;
  std::vector<std::uint32_t> sparse;  // nodes with q > 0, scanned per sim
  for (std::uint32_t v = 0; v < n; ++v) {
    if (q[v] > 0.0) sparse.push_back(v);
  }
  parallel_for(simulations, workers, counts,
               [&](std::uint32_t i, Scratch& scratch) {
                 Stream rng(stream_seed, i);
                 std::vector<std::uint32_t> initial;
                 for (std::uint32_t v : sparse) {
                   if (rng.next_unit() < q[v]) initial.push_back(v);
                 }
                 return cascade_count(g, initial, rng, scratch);
               });
  return summarize(counts);
}

}  // namespace fim
