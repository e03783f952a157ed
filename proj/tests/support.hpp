#pragma once

#include <zlib.h>

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fim/activation.hpp"
#include "fim/dataset.hpp"
#include "fim/graph.hpp"
#include "fim/rng.hpp"

namespace fim::test {

inline std::uint32_t zlib_crc32(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size())));
}

// Random directed graph with <= max_nodes nodes and exactly num_edges
// distinct non-loop edges, probabilities uniform in [0.1, 0.9].
inline Graph random_graph(Stream& rng, std::uint32_t max_nodes,
                          std::uint32_t num_edges) {
  std::vector<std::pair<long long, long long>> pairs;
  while (pairs.size() < num_edges) {
    long long u = static_cast<long long>(rng.next_below(max_nodes));
    long long v = static_cast<long long>(rng.next_below(max_nodes));
    if (u == v) continue;
    bool dup = false;
    for (auto& p : pairs) {
      if (p.first == u && p.second == v) {
        dup = true;
        break;
      }
    }
    if (!dup) pairs.emplace_back(u, v);
  }
  Graph g = Graph::from_raw_edges(pairs, true);
  std::vector<double> probs(g.edge_count());
  for (double& p : probs) p = 0.1 + 0.8 * rng.next_unit();
  g.set_probabilities(probs);
  return g;
}

inline Profile mixed_profile(std::uint32_t n, std::uint64_t seed) {
  return sample_profile(CoefficientScheme{{0.5, 1.0}, {0.0, 0.2}}, n, seed);
}

inline std::vector<double> seed_probs(const Profile& profile,
                                      const Allocation& alloc,
                                      Semantics semantics) {
  std::vector<double> q(profile.size());
  for (std::uint32_t v = 0; v < profile.size(); ++v)
    q[v] = seed_probability(profile, alloc, semantics, v);
  return q;
}

// Random feasible allocation spending at most `budget`, touching a random
// subset of saturable nodes with strictly interior levels.
inline Allocation random_allocation(Stream& rng, const Profile& profile,
                                    double budget) {
  Allocation alloc;
  alloc.y.assign(profile.size(), 0.0);
  alloc.budget = budget;
  double remaining = budget;
  for (std::uint32_t v = 0; v < profile.size() && remaining > 0.0; ++v) {
    if (!profile.f[v].saturable()) continue;
    if (rng.next_unit() < 0.5) continue;
    double cap = std::min(profile.f[v].inverse_at_one(), remaining);
    double y = cap * (0.2 + 0.6 * rng.next_unit());
    alloc.y[v] = y;
    remaining -= y;
  }
  return alloc;
}

// Drops the runtime_seconds column (field 6) from a results csv so two
// runs can be compared byte for byte.
inline std::string strip_runtime_column(const std::string& csv) {
  std::string out;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string::npos) end = csv.size();
    std::string line = csv.substr(start, end - start);
    std::string kept;
    std::size_t field = 0, pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      if (field != 5) {
        if (!kept.empty()) kept += ',';
        kept += line.substr(pos, comma - pos);
      }
      pos = comma + 1;
      ++field;
    }
    out += kept;
    out += '\n';
    start = end + 1;
  }
  return out;
}

// Unpacks the repository's gzipped fixtures into a cache directory so that
// fetch_dataset() gets a cache hit and never needs the network.
inline std::filesystem::path staged_cache() {
  static const std::filesystem::path dir = [] {
    std::filesystem::path d =
        std::filesystem::temp_directory_path() / "fracinf-test-cache";
    std::filesystem::create_directories(d);
    for (const char* name : {"facebook", "deezer"}) {
      std::filesystem::path gz =
          std::filesystem::path(FIM_REPO_DATA_DIR) / (std::string(name) + ".edges.gz");
      std::filesystem::path out = d / (std::string(name) + ".edges");
      if (std::filesystem::exists(gz) && !std::filesystem::exists(out)) {
        write_file_atomic(out, gunzip(read_file(gz)));
      }
    }
    return d;
  }();
  return dir;
}

}  // namespace fim::test
