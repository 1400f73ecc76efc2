#include "doctest.h"

#include "spectraforge/errors.hpp"
#include "spectraforge/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace spectraforge;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "spectraforge_report_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

RunManifest sample_manifest() {
  RunManifest m;
  m.command = "spectrum";
  m.config = Json{{"bins", 20}, {"tol", 0.125}};
  m.input_hashes = {{"graph", "00000000deadbeef"}};
  m.seed = 42;
  m.toolkit_version = "0.1.0";
  return m;
}

}  // namespace

TEST_CASE("twelve-digit formatting is stable and idempotent") {
  CHECK(format_g12(0.1 + 0.2) == "0.3");
  CHECK(format_g12(2.0) == "2");
  CHECK(format_g12(-1.0 / 3.0) == "-0.333333333333");
  CHECK(format_g12(1e-09) == "1e-09");
  for (double v : {0.1, 1.0 / 7.0, 123456.789, 2.5e-300, -9.99999999999e9}) {
    std::string once = format_g12(v);
    CHECK(format_g12(std::stod(once)) == once);
  }
}

TEST_CASE("canonical serialization sorts keys and rounds doubles") {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = 0.1 + 0.2;
  j["mid"] = Json::array({true, "s", 0.1 + 0.2});
  CHECK(canonical_json(j) == "{\"alpha\":0.3,\"mid\":[true,\"s\",0.3],\"zeta\":1}");
  Json a = {{"x", 0.30000000000000004}};
  Json b = {{"x", 0.3}};
  CHECK(canonical_json(a) == canonical_json(b));
}

TEST_CASE("file digests match known vectors") {
  auto empty = temp_file("digest_empty.bin");
  write_text_file(empty.string(), "");
  CHECK(file_digest_hex(empty.string()) == "cbf29ce484222325");
  auto one = temp_file("digest_a.bin");
  write_text_file(one.string(), "a");
  CHECK(file_digest_hex(one.string()) == "af63dc4c8601ec8c");
  CHECK_THROWS_AS(file_digest_hex((temp_file("nope") / "missing").string()),
                  ValidationError);
}

TEST_CASE("manifest serialization carries every field") {
  Json j = sample_manifest().to_json();
  CHECK(j["command"] == "spectrum");
  CHECK(j["config"]["bins"] == 20);
  CHECK(j["input_hashes"]["graph"] == "00000000deadbeef");
  CHECK(j["seed"] == 42);
  CHECK(j["toolkit_version"] == "0.1.0");
}

TEST_CASE("json reports embed the manifest and are reproducible") {
  auto path = temp_file("report.json");
  Json payload = {{"margin", 0.1 + 0.2}, {"strict", true}};
  write_report(payload, path.string(), ReportFormat::json, sample_manifest());
  std::string first = slurp(path);
  CHECK(first.back() == '\n');
  Json parsed = Json::parse(first);
  CHECK(parsed["margin"] == 0.3);
  CHECK(parsed["strict"] == true);
  CHECK(parsed["manifest"]["command"] == "spectrum");
  CHECK(parsed["manifest"]["seed"] == 42);

  write_report(payload, path.string(), ReportFormat::json, sample_manifest());
  CHECK(slurp(path) == first);

  CHECK_THROWS_AS(write_report(Json::array(), path.string(),
                               ReportFormat::json, sample_manifest()),
                  ValidationError);
}

TEST_CASE("jsonl reports write one line per element plus a sidecar manifest") {
  auto path = temp_file("trace.jsonl");
  Json payload = Json::array();
  for (int t = 1; t <= 10; ++t) {
    payload.push_back(Json{{"epoch", t}, {"value", 0.1 * t}});
  }
  write_report(payload, path.string(), ReportFormat::jsonl, sample_manifest());
  std::string text = slurp(path);
  std::istringstream lines(text);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    Json row = Json::parse(line);
    CHECK(row["epoch"] == count + 1);
    ++count;
  }
  CHECK(count == 10);
  Json side = Json::parse(slurp(path.string() + ".manifest.json"));
  CHECK(side["command"] == "spectrum");
  CHECK(side["toolkit_version"] == "0.1.0");

  CHECK_THROWS_AS(write_report(Json{{"k", 1}}, path.string(),
                               ReportFormat::jsonl, sample_manifest()),
                  ValidationError);
}

TEST_CASE("tsv reports render typed cells and validate row width") {
  auto path = temp_file("table.tsv");
  Json payload;
  payload["columns"] = Json::array({"name", "count", "value", "flag"});
  payload["rows"] = Json::array();
  payload["rows"].push_back(Json::array({"lo", 3, 0.1 + 0.2, true}));
  payload["rows"].push_back(Json::array({"hi", 0, 1.5, false}));
  write_report(payload, path.string(), ReportFormat::tsv, sample_manifest());
  CHECK(slurp(path) ==
        "name\tcount\tvalue\tflag\nlo\t3\t0.3\ttrue\nhi\t0\t1.5\tfalse\n");
  Json side = Json::parse(slurp(path.string() + ".manifest.json"));
  CHECK(side["seed"] == 42);

  payload["rows"].push_back(Json::array({"bad", 1}));
  CHECK_THROWS_AS(write_report(payload, path.string(), ReportFormat::tsv,
                               sample_manifest()),
                  ValidationError);
  CHECK_THROWS_AS(write_report(Json{{"rows", Json::array()}}, path.string(),
                               ReportFormat::tsv, sample_manifest()),
                  ValidationError);
}
