#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fim {

struct Edge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  double prob = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed influence graph over a dense node id space [0, n). Raw input ids
// are remapped to dense ids in ascending raw order; the mapping is kept so
// results can be reported in the input's id space.
//
// Undirected inputs are expanded to two directed edges up front; everything
// downstream sees only the directed form.
class Graph {
 public:
  using RawId = long long;

  // Parses whitespace-separated "src dst" pairs, one per line. Lines whose
  // first non-space character is '#' are comments. Self loops are dropped,
  // duplicate edges are collapsed. Throws DataError with a line number on
  // malformed input.
  static Graph parse_edge_list(std::string_view text, bool directed);

  static Graph from_raw_edges(std::span<const std::pair<RawId, RawId>> pairs,
                              bool directed);

  std::uint32_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Edge> out_edges(std::uint32_t v) const {
    return {edges_.data() + out_offset_[v],
            edges_.data() + out_offset_[v + 1]};
  }

  std::uint32_t in_degree(std::uint32_t v) const { return in_degree_[v]; }

  RawId raw_id(std::uint32_t v) const { return raw_ids_[v]; }
  const std::vector<RawId>& raw_ids() const { return raw_ids_; }
  std::optional<std::uint32_t> dense_id(RawId raw) const;

  bool directed_input() const { return directed_input_; }

  // Independent-cascade weighting where every edge into v succeeds with
  // probability 1 / in_degree(v). Degrees are taken on the expanded,
  // deduplicated graph.
  void apply_weighted_cascade();
  void apply_uniform_probability(double p);
  void set_probabilities(std::span<const double> probs);  // in edge order

  // Same edge-list format, with a header comment. Probabilities are a
  // weighting applied in memory and are not part of the format.
  std::string serialize() const;

  // Hash over node count, edges and probabilities; used as a cache key.
  std::uint64_t structure_hash() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void finalize(std::vector<std::pair<RawId, RawId>>&& pairs, bool directed);

  std::uint32_t n_ = 0;
  std::vector<Edge> edges_;            // sorted by (src, dst)
  std::vector<std::uint32_t> out_offset_;
  std::vector<std::uint32_t> in_degree_;
  std::vector<RawId> raw_ids_;
  bool directed_input_ = true;
};

}  // namespace fim
