#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"

namespace spectraforge {

using Json = nlohmann::json;

enum class ReportFormat { json, tsv, jsonl };

// Provenance block embedded in (json) or written beside (tsv, jsonl) every
// output file. Identical manifests must yield byte-identical outputs.
struct RunManifest {
  std::string command;
  Json config;
  std::map<std::string, std::string> input_hashes;
  std::uint64_t seed = 0;
  std::string toolkit_version;

  Json to_json() const;
};

// Shortest round-trip-safe decimal at 12 significant digits.
std::string format_g12(double v);

// Serializes with sorted keys and every double rounded through format_g12,
// so equal payloads are byte-identical.
std::string canonical_json(const Json& payload);

// FNV-1a 64 over the file bytes, 16 hex digits. Errors when unreadable.
std::string file_digest_hex(const std::string& path);

// json: payload object written canonically with the manifest under
//       "manifest".
// jsonl: payload must be an array; one canonical line per element, manifest
//        in a sibling <path>.manifest.json.
// tsv: payload must be {"columns": [...], "rows": [[...], ...]}; manifest in
//      a sibling <path>.manifest.json.
void write_report(const Json& payload, const std::string& path,
                  ReportFormat format, const RunManifest& manifest);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace spectraforge
