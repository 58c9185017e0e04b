#pragma once

// Deterministic text output: shortest round-trip decimal formatting, CSV/JSON
// emission with a provenance header, FNV-1a config hashing, and atomic
// whole-file writes (write-temp-rename).

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bykov {

inline constexpr const char* kToolVersion = "bykov-atlas 1.0.0";

// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// FNV-1a 64-bit hash, used to fingerprint the configuration in headers.
inline std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Whole-file atomic write: temp file in the same directory, then rename.
inline void atomic_write(const std::filesystem::path& path,
                         std::string_view content) {
  const auto dir = path.parent_path().empty() ? std::filesystem::path(".")
                                              : path.parent_path();
  std::filesystem::create_directories(dir);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

// '#'-prefixed provenance header shared by every output file.
inline std::string provenance_header(std::uint64_t config_hash,
                                     std::uint64_t seed) {
  std::string h;
  h += "# ";
  h += kToolVersion;
  h += "\n# config-hash ";
  h += hex64(config_hash);
  h += "\n# seed ";
  h += std::to_string(seed);
  h += "\n";
  return h;
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline std::string render_csv(const CsvTable& table, std::uint64_t config_hash,
                              std::uint64_t seed) {
  std::string out = provenance_header(config_hash, seed);
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace bykov
