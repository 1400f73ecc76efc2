#include "spectraforge/report.hpp"

#include "spectraforge/errors.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spectraforge {

namespace {

Json round_doubles(const Json& j) {
  if (j.is_number_float()) {
    return Json(std::stod(format_g12(j.get<double>())));
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [key, value] : j.items()) out[key] = round_doubles(value);
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& value : j) out.push_back(round_doubles(value));
    return out;
  }
  return j;
}

std::string tsv_cell(const Json& cell) {
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_number_float()) return format_g12(cell.get<double>());
  if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
  return cell.dump();
}

}  // namespace

Json RunManifest::to_json() const {
  Json j;
  j["command"] = command;
  j["config"] = config;
  j["input_hashes"] = input_hashes;
  j["seed"] = seed;
  j["toolkit_version"] = toolkit_version;
  return j;
}

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string canonical_json(const Json& payload) {
  return round_doubles(payload).dump();
}

std::string file_digest_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file for hashing: " + path);
  std::uint64_t hash = 14695981039346656037ULL;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

void write_report(const Json& payload, const std::string& path,
                  ReportFormat format, const RunManifest& manifest) {
  switch (format) {
    case ReportFormat::json: {
      if (!payload.is_object()) {
        throw ValidationError("json reports need an object payload");
      }
      Json doc = payload;
      doc["manifest"] = manifest.to_json();
      write_text_file(path, canonical_json(doc) + "\n");
      return;
    }
    case ReportFormat::jsonl: {
      if (!payload.is_array()) {
        throw ValidationError("jsonl reports need an array payload");
      }
      std::ostringstream out;
      for (const auto& row : payload) out << canonical_json(row) << "\n";
      write_text_file(path, out.str());
      write_text_file(path + ".manifest.json",
                      canonical_json(manifest.to_json()) + "\n");
      return;
    }
    case ReportFormat::tsv: {
      if (!payload.is_object() || !payload.contains("columns") ||
          !payload.contains("rows")) {
        throw ValidationError(
            "tsv reports need {\"columns\": [...], \"rows\": [...]}");
      }
      std::ostringstream out;
      const Json& cols = payload["columns"];
      for (std::size_t c = 0; c < cols.size(); ++c) {
        out << (c ? "\t" : "") << cols[c].get<std::string>();
      }
      out << "\n";
      for (const auto& row : payload["rows"]) {
        if (row.size() != cols.size()) {
          throw ValidationError("tsv row width differs from column count");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
          out << (c ? "\t" : "") << tsv_cell(row[c]);
        }
        out << "\n";
      }
      write_text_file(path, out.str());
      write_text_file(path + ".manifest.json",
                      canonical_json(manifest.to_json()) + "\n");
      return;
    }
  }
  throw ValidationError("unknown report format");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << content;
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace spectraforge
