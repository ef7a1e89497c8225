#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppt/config.hpp"
#include "ppt/numeric.hpp"

#include "json.hpp"

namespace ppt {

// Deterministic CSV writing: fixed "%.17g" float formatting, comma
// separation, one header row, "\n" line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  const std::string& content() const { return buffer_; }
  void write_file(const std::string& path) const;

  static std::string format(double v);
  static std::string format(int v);

 private:
  std::size_t columns_;
  std::string buffer_;
};

// FNV-1a 64-bit over a string, hex-encoded; used for config fingerprints.
std::string fnv1a_hex(const std::string& data);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

// Rejects unknown keys: every key of `j` must appear in `allowed`.
void require_known_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                        const std::string& context);

// Configurations serialize as {"counts": [...]} (finite ground spaces) or
// {"points": [[...], ...]} (euclidean ones).
nlohmann::json config_to_json(const Configuration& xi);
Configuration config_from_json(const nlohmann::json& j);

}  // namespace ppt
