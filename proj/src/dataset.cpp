#include "fim/dataset.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>

#include "fim/errors.hpp"

namespace fim {

const std::vector<DatasetInfo>& dataset_registry() {
  static const std::vector<DatasetInfo> registry = {
      {
          .name = "facebook",
          .url = "https://snap.stanford.edu/data/facebook_combined.txt.gz",
          .archive_file = "facebook_combined.txt.gz",
          .archive_sha256 = "125e84db872eeba443d270c70315c256b0af43a502"
                            "fcfe51f50621166ad035d7",
          .archive_kind = DatasetInfo::Archive::Gzip,
          .directed = false,
          .expected_nodes = 4039,
          .expected_edge_lines = 88234,
      },
      {
          .name = "wiki-vote",
          .url = "https://snap.stanford.edu/data/wiki-Vote.txt.gz",
          .archive_file = "wiki-Vote.txt.gz",
          .archive_sha256 = "7d3e53626e14b8b09fb3b396bece9d481ad606bd64"
                            "ceab066349ff57d4ada7fc",
          .archive_kind = DatasetInfo::Archive::Gzip,
          .directed = true,
          .expected_nodes = 7115,
          .expected_edge_lines = 103689,
      },
      {
          .name = "deezer",
          .url = "https://snap.stanford.edu/data/deezer_europe.zip",
          .archive_file = "deezer_europe.zip",
          .archive_sha256 = "",  // upstream publishes no digest for this one
          .archive_kind = DatasetInfo::Archive::Zip,
          .zip_entry = "deezer_europe/deezer_europe_edges.csv",
          .csv_pairs = true,
          .directed = false,
          .expected_nodes = 28281,
          .expected_edge_lines = 92752,
      },
  };
  return registry;
}

const DatasetInfo& dataset_info(const std::string& name) {
  for (const DatasetInfo& d : dataset_registry()) {
    if (d.name == name) return d;
  }
  std::string known;
  for (const DatasetInfo& d : dataset_registry()) {
    if (!known.empty()) known += ", ";
    known += d.name;
  }
  throw ConfigError("unknown dataset '" + name + "' (known: " + known + ")");
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("FRAC_INFLUENCE_CACHE")) {
    return env;
  }
  if (const char* xdg = std::getenv("XDG_CACHE_HOME")) {
    return std::filesystem::path(xdg) / "fracinf";
  }
  if (const char* home = std::getenv("HOME")) {
    return std::filesystem::path(home) / ".cache" / "fracinf";
  }
  return std::filesystem::temp_directory_path() / "fracinf";
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                  nullptr)) {
    throw DataError("sha256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string gunzip(std::string_view bytes) {
  z_stream strm{};
  if (inflateInit2(&strm, 15 + 32) != Z_OK) {
    throw DataError("zlib initialization failed");
  }
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  strm.avail_in = static_cast<uInt>(bytes.size());
  std::string out;
  char buf[1 << 16];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    strm.next_out = reinterpret_cast<Bytef*>(buf);
    strm.avail_out = sizeof(buf);
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw DataError("corrupt gzip stream");
    }
    out.append(buf, sizeof(buf) - strm.avail_out);
  }
  inflateEnd(&strm);
  return out;
}

namespace {

std::uint32_t le32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (std::uint32_t{p[3]} << 24);
}

std::uint16_t le16(const unsigned char* p) { return p[0] | (p[1] << 8); }

std::string inflate_raw(const unsigned char* data, std::size_t compressed,
                        std::size_t expected) {
  z_stream strm{};
  if (inflateInit2(&strm, -15) != Z_OK) {
    throw DataError("zlib initialization failed");
  }
  std::string out(expected, '\0');
  strm.next_in = const_cast<Bytef*>(data);
  strm.avail_in = static_cast<uInt>(compressed);
  strm.next_out = reinterpret_cast<Bytef*>(out.data());
  strm.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&strm, Z_FINISH);
  inflateEnd(&strm);
  if (rc != Z_STREAM_END || strm.avail_out != 0) {
    throw DataError("corrupt zip entry");
  }
  return out;
}

}  // namespace

std::string zip_extract(std::string_view bytes, const std::string& entry) {
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  std::size_t size = bytes.size();
  if (size < 22) throw DataError("zip archive too small");

  // End-of-central-directory record: signature PK\x05\x06, within the last
  // 64KiB (variable-length comment).
  std::size_t eocd = size;
  std::size_t scan_limit = size > (1 << 16) + 22 ? size - (1 << 16) - 22 : 0;
  for (std::size_t i = size - 22 + 1; i-- > scan_limit;) {
    if (le32(data + i) == 0x06054b50) {
      eocd = i;
      break;
    }
  }
  if (eocd == size) throw DataError("zip central directory not found");
  std::uint16_t entries = le16(data + eocd + 10);
  std::size_t cd_off = le32(data + eocd + 16);

  std::size_t p = cd_off;
  for (std::uint16_t k = 0; k < entries; ++k) {
    if (p + 46 > size || le32(data + p) != 0x02014b50) {
      throw DataError("corrupt zip central directory");
    }
    std::uint16_t method = le16(data + p + 10);
    std::uint32_t crc = le32(data + p + 16);
    std::uint32_t csize = le32(data + p + 20);
    std::uint32_t usize = le32(data + p + 24);
    std::uint16_t name_len = le16(data + p + 28);
    std::uint16_t extra_len = le16(data + p + 30);
    std::uint16_t comment_len = le16(data + p + 32);
    std::uint32_t local_off = le32(data + p + 42);
    std::string name(reinterpret_cast<const char*>(data + p + 46), name_len);
    p += 46 + name_len + extra_len + comment_len;
    if (name != entry) continue;

    if (local_off + 30 > size || le32(data + local_off) != 0x04034b50) {
      throw DataError("corrupt zip local header");
    }
    std::uint16_t lname = le16(data + local_off + 26);
    std::uint16_t lextra = le16(data + local_off + 28);
    std::size_t data_off = local_off + 30 + lname + lextra;
    if (data_off + csize > size) throw DataError("truncated zip entry");

    std::string out;
    if (method == 0) {
      out.assign(reinterpret_cast<const char*>(data + data_off), csize);
    } else if (method == 8) {
      out = inflate_raw(data + data_off, csize, usize);
    } else {
      throw DataError("unsupported zip compression method");
    }
    auto actual =
        crc32(0, reinterpret_cast<const Bytef*>(out.data()), out.size());
    if (actual != crc) throw DataError("zip entry crc mismatch");
    return out;
  }
  throw DataError("zip entry '" + entry + "' not found");
}

std::string csv_pairs_to_edge_list(std::string_view csv,
                                   const std::string& comment) {
  std::string out = "# " + comment + "\n";
  std::size_t pos = 0;
  bool first = true;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    std::string_view line = csv.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find_first_not_of("0123456789, \t") != std::string_view::npos) {
        continue;  // header line
      }
    }
    std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw DataError("csv line without separator: " + std::string(line));
    }
    out.append(line.substr(0, comma));
    out += ' ';
    out.append(line.substr(comma + 1));
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (!in.good() && !in.eof()) throw DataError("error reading " + path.string());
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(
                       std::chrono::steady_clock::now().time_since_epoch().count());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.good()) {
      throw DataError("cannot write " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

namespace {

std::string download(const std::string& url) {
  std::string rest;
  bool tls = false;
  if (url.starts_with("https://")) {
    rest = url.substr(8);
    tls = true;
  } else if (url.starts_with("http://")) {
    rest = url.substr(7);
  } else {
    throw DataError("unsupported url scheme: " + url);
  }
  std::size_t slash = rest.find('/');
  std::string host = rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);

  std::string last_error;
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::seconds(1 << attempt));
    }
    httplib::Result res{nullptr, httplib::Error::Unknown};
    if (tls) {
      httplib::SSLClient client(host);
      client.set_follow_location(true);
      client.set_connection_timeout(20);
      client.set_read_timeout(120);
      res = client.Get(path);
    } else {
      httplib::Client client(host);
      client.set_follow_location(true);
      client.set_connection_timeout(20);
      client.set_read_timeout(120);
      res = client.Get(path);
    }
    if (res && res->status == 200) return res->body;
    last_error = res ? "http status " + std::to_string(res->status)
                     : std::string(httplib::to_string(res.error()));
  }
  throw DataError("download failed for " + url + ": " + last_error);
}

void validate_payload(const DatasetInfo& info, const std::string& text) {
  Graph g = Graph::parse_edge_list(text, info.directed);
  std::uint64_t lines = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::size_t q = text.find_first_not_of(" \t\r", pos);
    if (q != std::string::npos && q < eol && text[q] != '#') ++lines;
    pos = eol + 1;
  }
  if (g.node_count() != info.expected_nodes ||
      lines != info.expected_edge_lines) {
    throw DataError(info.name + ": unexpected structure (" +
                    std::to_string(g.node_count()) + " nodes, " +
                    std::to_string(lines) + " edge lines; expected " +
                    std::to_string(info.expected_nodes) + ", " +
                    std::to_string(info.expected_edge_lines) + ")");
  }
}

}  // namespace

FetchResult fetch_dataset(const std::string& name,
                          std::optional<std::filesystem::path> cache_dir) {
  const DatasetInfo& info = dataset_info(name);
  std::filesystem::path dir = cache_dir.value_or(default_cache_dir());
  std::filesystem::create_directories(dir);

  std::filesystem::path edges = dir / (info.name + ".edges");
  if (std::filesystem::exists(edges)) {
    return {edges, true};
  }

  std::filesystem::path archive = dir / info.archive_file;
  std::string archive_bytes;
  if (std::filesystem::exists(archive)) {
    archive_bytes = read_file(archive);
    if (!info.archive_sha256.empty() &&
        sha256_hex(archive_bytes) != info.archive_sha256) {
      archive_bytes.clear();  // corrupt or stale; refetch below
    }
  }
  if (archive_bytes.empty()) {
    archive_bytes = download(info.url);
    if (!info.archive_sha256.empty()) {
      std::string actual = sha256_hex(archive_bytes);
      if (actual != info.archive_sha256) {
        throw DataError(info.name + ": archive checksum mismatch (expected " +
                        info.archive_sha256 + ", got " + actual + ")");
      }
    }
    write_file_atomic(archive, archive_bytes);
  }

  std::string text;
  switch (info.archive_kind) {
    case DatasetInfo::Archive::Gzip:
      text = gunzip(archive_bytes);
      break;
    case DatasetInfo::Archive::Zip:
      text = zip_extract(archive_bytes, info.zip_entry);
      break;
  }
  if (info.csv_pairs) {
    text = csv_pairs_to_edge_list(
        text, info.name + "_europe edges (converted from csv)");
  }
  validate_payload(info, text);
  write_file_atomic(edges, text);
  return {edges, false};
}

Graph load_dataset_graph(const std::string& name,
                         std::optional<std::filesystem::path> cache_dir) {
  const DatasetInfo& info = dataset_info(name);
  FetchResult fetched = fetch_dataset(name, std::move(cache_dir));
  return Graph::parse_edge_list(read_file(fetched.path), info.directed);
}

}  // namespace fim
