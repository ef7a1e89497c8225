#include "ppt/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace ppt {

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw InputError("csv row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open csv output file: " + path);
  out << buffer_;
}

std::string CsvWriter::format(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvWriter::format(int v) { return std::to_string(v); }

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open json file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("json parse error: ") + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open json output file: " + path);
  out << j.dump(2) << "\n";
}

void require_known_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                        const std::string& context) {
  if (!j.is_object()) throw InputError(context + ": expected a json object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw InputError(context + ": unknown field '" + it.key() + "'");
  }
}

nlohmann::json config_to_json(const Configuration& xi) {
  nlohmann::json j;
  if (xi.finite_mode()) {
    j["counts"] = xi.counts();
  } else {
    auto pts = xi.expand_points();
    j["points"] = pts;
    if (pts.empty()) j["dimension"] = xi.dimension();
  }
  return j;
}

Configuration config_from_json(const nlohmann::json& j) {
  if (j.contains("counts")) return Configuration::from_counts(j.at("counts").get<std::vector<int>>());
  if (j.contains("points")) {
    auto pts = j.at("points").get<std::vector<Point>>();
    if (pts.empty()) {
      int dim = j.value("dimension", 1);
      return Configuration::empty_euclidean(dim);
    }
    return Configuration::from_points(std::move(pts));
  }
  throw InputError("configuration json needs counts or points");
}

}  // namespace ppt
