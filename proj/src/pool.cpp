#include "fim/pool.hpp"

#include "fim/rng.hpp"

namespace fim {

namespace {

struct BfsScratch {
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
};

thread_local BfsScratch tls_scratch;

}  // namespace

LiveEdgePool::LiveEdgePool(const Graph& g, std::uint32_t realizations,
                           std::uint64_t seed)
    : n_(g.node_count()), r_(realizations), seed_(seed) {
  std::uint64_t pool_seed = derive_seed(seed, kTagPool);
  node_off_.assign(std::size_t{r_} * n_ + 1, 0);
  const auto& edges = g.edges();
  std::size_t off = 0;
  for (std::uint32_t i = 0; i < r_; ++i) {
    std::size_t edge_idx = 0;
    for (std::uint32_t v = 0; v < n_; ++v) {
      node_off_[std::size_t{i} * n_ + v] = off;
      for (const Edge& e : g.out_edges(v)) {
        if (unit_draw(pool_seed, i, edge_idx) < e.prob) {
          targets_.push_back(e.dst);
          ++off;
        }
        ++edge_idx;
      }
    }
  }
  node_off_.back() = off;
}

std::uint64_t LiveEdgePool::total_reach(
    std::span<const std::uint32_t> seeds) const {
  std::uint64_t total = 0;
  BfsScratch& scratch = tls_scratch;
  for (std::uint32_t i = 0; i < r_; ++i) {
    scratch.reset(n_);
    auto& queue = scratch.queue;
    for (std::uint32_t v : seeds) {
      if (scratch.stamp[v] != scratch.epoch) {
        scratch.stamp[v] = scratch.epoch;
        queue.push_back(v);
      }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (std::uint32_t u : kept_out(i, queue[head])) {
        if (scratch.stamp[u] != scratch.epoch) {
          scratch.stamp[u] = scratch.epoch;
          queue.push_back(u);
        }
      }
    }
    total += queue.size();
  }
  return total;
}

double LiveEdgePool::sigma_hat(std::span<const std::uint32_t> seeds) const {
  return static_cast<double>(total_reach(seeds)) / r_;
}

PoolCoverage::PoolCoverage(const LiveEdgePool& pool)
    : pool_(&pool), words_per_realization_((pool.node_count() + 63) / 64) {
  covered_.assign(std::size_t{pool.realizations()} * words_per_realization_,
                  0);
}

template <bool Commit>
std::uint64_t PoolCoverage::walk(std::uint32_t v) const {
  const LiveEdgePool& pool = *pool_;
  std::uint32_t n = pool.node_count();
  std::uint64_t gained = 0;
  BfsScratch& scratch = tls_scratch;
  for (std::uint32_t i = 0; i < pool.realizations(); ++i) {
    const std::uint64_t* bits =
        covered_.data() + std::size_t{i} * words_per_realization_;
    auto is_covered = [&](std::uint32_t u) {
      return (bits[u >> 6] >> (u & 63)) & 1u;
    };
    if (is_covered(v)) continue;
    scratch.reset(n);
    auto& queue = scratch.queue;
    scratch.stamp[v] = scratch.epoch;
    queue.push_back(v);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (std::uint32_t u : pool.kept_out(i, queue[head])) {
        if (scratch.stamp[u] != scratch.epoch && !is_covered(u)) {
          scratch.stamp[u] = scratch.epoch;
          queue.push_back(u);
        }
      }
    }
    gained += queue.size();
    if constexpr (Commit) {
      std::uint64_t* mut =
          covered_.data() + std::size_t{i} * words_per_realization_;
      for (std::uint32_t u : queue) mut[u >> 6] |= 1ULL << (u & 63);
    }
  }
  return gained;
}

std::uint64_t PoolCoverage::marginal(std::uint32_t v) const {
  return walk<false>(v);
}

void PoolCoverage::commit(std::uint32_t v) {
  covered_total_ += walk<true>(v);
}

}  // namespace fim
