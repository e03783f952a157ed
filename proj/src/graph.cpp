#include "fim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "fim/errors.hpp"
#include "fim/rng.hpp"

namespace fim {

namespace {

const char* skip_ws(const char* p, const char* end) {
  while (p != end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  return p;
}

}  // namespace

Graph Graph::parse_edge_list(std::string_view text, bool directed) {
  std::vector<std::pair<RawId, RawId>> pairs;
  const char* p = text.data();
  const char* end = p + text.size();
  std::size_t line_no = 0;
  while (p < end) {
    ++line_no;
    const char* eol = std::find(p, end, '\n');
    const char* q = skip_ws(p, eol);
    if (q == eol || *q == '#') {
      p = eol + 1;
      continue;
    }
    RawId ids[2];
    for (int k = 0; k < 2; ++k) {
      auto [next, ec] = std::from_chars(q, eol, ids[k]);
      if (ec != std::errc() || (next != eol && *next != ' ' && *next != '\t' &&
                                *next != '\r')) {
        throw DataError("edge list line " + std::to_string(line_no) +
                        ": expected two integer node ids");
      }
      q = skip_ws(next, eol);
      if (k == 0 && q == eol) {
        throw DataError("edge list line " + std::to_string(line_no) +
                        ": expected two integer node ids");
      }
    }
    if (q != eol) {
      throw DataError("edge list line " + std::to_string(line_no) +
                      ": trailing characters after edge");
    }
    if (ids[0] < 0 || ids[1] < 0) {
      throw DataError("edge list line " + std::to_string(line_no) +
                      ": negative node id");
    }
    pairs.emplace_back(ids[0], ids[1]);
    p = eol + 1;
  }
  Graph g;
  g.finalize(std::move(pairs), directed);
  return g;
}

Graph Graph::from_raw_edges(std::span<const std::pair<RawId, RawId>> pairs,
                            bool directed) {
  for (const auto& [u, v] : pairs) {
    if (u < 0 || v < 0) throw DataError("negative node id");
  }
  Graph g;
  g.finalize({pairs.begin(), pairs.end()}, directed);
  return g;
}

void Graph::finalize(std::vector<std::pair<RawId, RawId>>&& pairs,
                     bool directed) {
  directed_input_ = directed;

  std::erase_if(pairs, [](const auto& e) { return e.first == e.second; });

  raw_ids_.clear();
  raw_ids_.reserve(pairs.size() * 2);
  for (const auto& [u, v] : pairs) {
    raw_ids_.push_back(u);
    raw_ids_.push_back(v);
  }
  std::sort(raw_ids_.begin(), raw_ids_.end());
  raw_ids_.erase(std::unique(raw_ids_.begin(), raw_ids_.end()),
                 raw_ids_.end());
  if (raw_ids_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("graph too large: node count exceeds 2^32");
  }
  n_ = static_cast<std::uint32_t>(raw_ids_.size());

  auto dense = [&](RawId raw) {
    return static_cast<std::uint32_t>(
        std::lower_bound(raw_ids_.begin(), raw_ids_.end(), raw) -
        raw_ids_.begin());
  };

  std::vector<std::pair<std::uint32_t, std::uint32_t>> dense_edges;
  dense_edges.reserve(pairs.size() * (directed ? 1 : 2));
  for (const auto& [u, v] : pairs) {
    std::uint32_t du = dense(u), dv = dense(v);
    dense_edges.emplace_back(du, dv);
    if (!directed) dense_edges.emplace_back(dv, du);
  }
  std::sort(dense_edges.begin(), dense_edges.end());
  dense_edges.erase(std::unique(dense_edges.begin(), dense_edges.end()),
                    dense_edges.end());

  edges_.clear();
  edges_.reserve(dense_edges.size());
  in_degree_.assign(n_, 0);
  out_offset_.assign(n_ + 1, 0);
  for (const auto& [u, v] : dense_edges) {
    edges_.push_back(Edge{u, v, 0.0});
    ++in_degree_[v];
    ++out_offset_[u + 1];
  }
  for (std::uint32_t v = 0; v < n_; ++v) out_offset_[v + 1] += out_offset_[v];
}

std::optional<std::uint32_t> Graph::dense_id(RawId raw) const {
  auto it = std::lower_bound(raw_ids_.begin(), raw_ids_.end(), raw);
  if (it == raw_ids_.end() || *it != raw) return std::nullopt;
  return static_cast<std::uint32_t>(it - raw_ids_.begin());
}

void Graph::apply_weighted_cascade() {
  for (Edge& e : edges_) e.prob = 1.0 / in_degree_[e.dst];
}

void Graph::apply_uniform_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("edge probability must be in [0, 1]");
  }
  for (Edge& e : edges_) e.prob = p;
}

void Graph::set_probabilities(std::span<const double> probs) {
  if (probs.size() != edges_.size()) {
    throw ConfigError("probability count does not match edge count");
  }
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) {
      throw ConfigError("edge probability must be in [0, 1]");
    }
    edges_[i].prob = probs[i];
  }
}

std::string Graph::serialize() const {
  std::string out = "# nodes=" + std::to_string(n_) + " directed=1\n";
  for (const Edge& e : edges_) {
    out += std::to_string(raw_ids_[e.src]);
    out += ' ';
    out += std::to_string(raw_ids_[e.dst]);
    out += '\n';
  }
  return out;
}

std::uint64_t Graph::structure_hash() const {
  std::uint64_t h = mix64(n_);
  for (const Edge& e : edges_) {
    h = hash_combine(h, e.src);
    h = hash_combine(h, e.dst);
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(e.prob));
    __builtin_memcpy(&bits, &e.prob, sizeof(bits));
    h = hash_combine(h, bits);
  }
  return h;
}

}  // namespace fim
