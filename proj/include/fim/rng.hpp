#pragma once

#include <cstdint>

// Counter-based randomness. Every draw is a pure function of the master seed
// and a handful of integer coordinates (simulation index, edge index, ...),
// so results never depend on thread scheduling or evaluation order.

namespace fim {

// Finalizer from splitmix64; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double u64_to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Stateless coin for (seed, realization, edge) triples.
constexpr double unit_draw(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
  return u64_to_unit(hash_combine(hash_combine(seed, i), j));
}

// Derive an independent sub-seed for a named purpose (profile sampling,
// pool construction, evaluation, ...).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                    std::uint64_t index = 0) {
  return hash_combine(hash_combine(seed, tag), index);
}

// Seed tags. Arbitrary distinct constants.
inline constexpr std::uint64_t kTagProfile = 0x70726f66;
inline constexpr std::uint64_t kTagPool = 0x706f6f6c;
inline constexpr std::uint64_t kTagEval = 0x6576616c;
inline constexpr std::uint64_t kTagCascade = 0x63617363;
inline constexpr std::uint64_t kTagSeedSet = 0x73656564;

// Sequential stream whose state is fully determined by (seed, stream_id).
// Used inside a single simulation where draws are consumed in order.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id)
      : state_(hash_combine(seed, stream_id)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double next_unit() { return u64_to_unit(next_u64()); }

  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform integer in [0, n) by multiply-shift; n is tiny in practice.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace fim
