#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fim/graph.hpp"

namespace fim {

// A known public network. The archive checksum pins the exact upstream
// bytes; fetched archives are normalized into a plain "<name>.edges" file
// that later runs reuse without touching the network.
struct DatasetInfo {
  std::string name;
  std::string url;
  std::string archive_file;
  std::string archive_sha256;  // empty: no pin available, structure-checked only
  enum class Archive { Gzip, Zip } archive_kind = Archive::Gzip;
  std::string zip_entry;    // entry to extract from zip archives
  bool csv_pairs = false;   // payload is "u,v" csv with a header line
  bool directed = false;
  std::uint32_t expected_nodes = 0;
  std::uint64_t expected_edge_lines = 0;  // non-comment lines in the payload
};

const std::vector<DatasetInfo>& dataset_registry();
const DatasetInfo& dataset_info(const std::string& name);

// FRAC_INFLUENCE_CACHE, else XDG_CACHE_HOME/fracinf, else ~/.cache/fracinf.
std::filesystem::path default_cache_dir();

struct FetchResult {
  std::filesystem::path path;
  bool from_cache = false;
};

// Returns the normalized edge-list path for the dataset, downloading and
// verifying the archive only when the normalized file is absent. Writes are
// staged to a temporary file and renamed, so concurrent fetches are safe.
FetchResult fetch_dataset(const std::string& name,
                          std::optional<std::filesystem::path> cache_dir = {});

// fetch + parse with the dataset's directedness. Probabilities are not
// assigned; callers pick a weighting.
Graph load_dataset_graph(const std::string& name,
                         std::optional<std::filesystem::path> cache_dir = {});

// Helpers, exposed for tests.
std::string sha256_hex(std::string_view bytes);
std::string gunzip(std::string_view bytes);
std::string zip_extract(std::string_view bytes, const std::string& entry);
std::string csv_pairs_to_edge_list(std::string_view csv,
                                   const std::string& comment);
std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view bytes);

}  // namespace fim
