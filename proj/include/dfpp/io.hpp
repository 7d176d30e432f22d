#pragma once

// Deterministic CSV/JSON output. Every file carries the schema version and a
// hash of the configuration that produced it.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dfpp/passage.hpp"

namespace dfpp::io {

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip representation; identical on every run.
inline std::string format_double(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Hash of a configuration object. Keys that do not affect results
/// (worker count, output location) are dropped first.
inline std::string config_hash(nlohmann::json config) {
  if (config.is_object()) {
    config.erase("workers");
    config.erase("out");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  template <class... Ts>
  void add(const Ts&... cells) {
    std::vector<std::string> row;
    (row.push_back(cell(cells)), ...);
    if (row.size() != header_.size()) throw std::logic_error("CsvTable: row width does not match header");
    rows_.push_back(std::move(row));
  }

  std::size_t size() const { return rows_.size(); }

  /// "# schema_version=N config_hash=H", the header line, then the rows.
  std::string render(const std::string& hash) const {
    std::ostringstream os;
    os << "# schema_version=" << kSchemaVersion << " config_hash=" << hash << "\n";
    write_row(os, header_);
    for (const auto& r : rows_) write_row(os, r);
    return os.str();
  }

 private:
  static std::string cell(double d) { return format_double(d); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(bool b) { return b ? "true" : "false"; }
  template <class T>
    requires std::is_integral_v<T>
  static std::string cell(T v) {
    return std::to_string(v);
  }

  static void write_row(std::ostream& os, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      const bool quote = row[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        os << row[i];
        continue;
      }
      os << '"';
      for (char c : row[i]) os << (c == '"' ? "\"\"" : std::string(1, c));
      os << '"';
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// JSON document with schema_version and config_hash stamped in.
inline std::string render_json(nlohmann::json body, const std::string& hash) {
  body["schema_version"] = kSchemaVersion;
  body["config_hash"] = hash;
  return body.dump(2) + "\n";
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << content;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

class SchemaMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Schema version stamped in a CSV comment line or a JSON document.
inline int schema_version_of(const std::string& content) {
  const std::string tag = "schema_version=";
  if (content.rfind("# ", 0) == 0) {
    const auto pos = content.find(tag);
    const auto eol = content.find('\n');
    if (pos != std::string::npos && pos < eol) return std::stoi(content.substr(pos + tag.size()));
  }
  const auto j = nlohmann::json::parse(content, nullptr, false);
  if (j.is_object() && j.contains("schema_version") && j["schema_version"].is_number_integer())
    return j["schema_version"].get<int>();
  throw SchemaMismatch("no schema_version found");
}

/// True iff the two outputs are byte-identical; throws SchemaMismatch when
/// their schema versions differ.
inline bool compare_outputs(const std::string& a, const std::string& b) {
  const int va = schema_version_of(a);
  const int vb = schema_version_of(b);
  if (va != vb)
    throw SchemaMismatch("schema versions differ: " + std::to_string(va) + " vs " + std::to_string(vb));
  return a == b;
}

/// Ball export: JSON header fields plus one run list per row y, each run
/// [x_start, length] covering consecutive members.
inline nlohmann::json ball_rle(const DirectedSet& s) {
  nlohmann::json rows = nlohmann::json::array();
  const auto& g = s.grid();
  for (std::int64_t y = 0; y <= g.height; ++y) {
    nlohmann::json runs = nlohmann::json::array();
    for (std::int64_t x = 0; x <= g.width;) {
      if (!s.contains({x, y})) {
        ++x;
        continue;
      }
      const std::int64_t start = x;
      while (x <= g.width && s.contains({x, y})) ++x;
      runs.push_back({start, x - start});
    }
    if (runs.empty()) break;
    rows.push_back(runs);
  }
  return {{"width", g.width}, {"height", g.height}, {"t", s.threshold()}, {"size", s.size()}, {"rows", rows}};
}

}  // namespace dfpp::io
