// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
//
// Exercises the exported C surface the way a foreign-language binding
// would: opaque handles, status codes, malloc'd strings, JSON documents.
// Links against the shared library only.
#include "depscan/depscan.h"

#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

std::string fixture(const std::string& name) {
  return std::string(DEPSCAN_FIXTURE_DIR) + "/" + name;
}

// Takes ownership of a library-allocated string.
std::string consume(char* s) {
  REQUIRE(s != nullptr);
  std::string out = s;
  ds_string_free(s);
  return out;
}

nlohmann::json consume_json(char* s) { return nlohmann::json::parse(consume(s)); }

}  // namespace

TEST_CASE("library reports a semantic version") {
  const char* v = ds_library_version();
  REQUIRE(v != nullptr);
  CHECK(std::strcmp(v, "0.1.0") == 0);
}

TEST_CASE("version comparison crosses the C boundary") {
  int cmp = 0;
  CHECK(ds_compare_versions("2.37.6", "2.39.1", &cmp, nullptr) == DS_OK);
  CHECK(cmp < 0);
  CHECK(ds_compare_versions("1:1.0", "9.9", &cmp, nullptr) == DS_OK);
  CHECK(cmp > 0);  // epoch wins
  CHECK(ds_compare_versions("1.0-1", "1.0-1", &cmp, nullptr) == DS_OK);
  CHECK(cmp == 0);

  char* err = nullptr;
  CHECK(ds_compare_versions("", "1.0", &cmp, &err) != DS_OK);
  std::string message = consume(err);
  CHECK(!message.empty());
  CHECK(ds_compare_versions(nullptr, "1.0", &cmp, nullptr) == DS_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("range membership crosses the C boundary") {
  int in = 0;
  CHECK(ds_range_contains(">= 2.37.6", "2.39.1", &in, nullptr) == DS_OK);
  CHECK(in == 1);
  CHECK(ds_range_contains(">= 2.37.6, << 2.38", "2.39.1", &in, nullptr) == DS_OK);
  CHECK(in == 0);
  CHECK(ds_range_contains("", "0.1", &in, nullptr) == DS_OK);
  CHECK(in == 1);  // empty range accepts everything

  char* err = nullptr;
  CHECK(ds_range_contains("~= 1.0", "1.0", &in, &err) == DS_ERROR_INVALID_ARGUMENT);
  CHECK(!consume(err).empty());
}

TEST_CASE("history handles load and enumerate changes") {
  char* err = nullptr;
  ds_history* h = ds_history_open(fixture("histories/glib-hash/history.json").c_str(), &err);
  REQUIRE(h != nullptr);

  nlohmann::json changes = consume_json(ds_history_changes_json(h, &err));
  REQUIRE(changes.is_array());
  CHECK(changes.size() == 2);  // one return-value addition per hash function
  for (const auto& c : changes) {
    CHECK(c["v_old"] == "2.39.1");
    CHECK(c["v_new"] == "2.39.2");
    CHECK(c["kind"] == 16);
  }
  ds_history_free(h);

  ds_history* missing = ds_history_open(fixture("histories/nope.json").c_str(), &err);
  CHECK(missing == nullptr);
  CHECK(!consume(err).empty());
}

TEST_CASE("snapshot diffs honor the direction switch") {
  char* err = nullptr;
  std::string a = fixture("histories/glib-hash/2.39.1.json");
  std::string b = fixture("histories/glib-hash/2.39.2.json");

  nlohmann::json backward = consume_json(ds_diff_snapshots_json(a.c_str(), b.c_str(), "backward", &err));
  CHECK(backward.empty());  // gaining a return value only breaks newer binaries
  nlohmann::json forward = consume_json(ds_diff_snapshots_json(a.c_str(), b.c_str(), "forward", &err));
  CHECK(forward.size() == 2);
  nlohmann::json both = consume_json(ds_diff_snapshots_json(a.c_str(), b.c_str(), "both", &err));
  CHECK(both.size() == 2);

  char* doc = ds_diff_snapshots_json(a.c_str(), b.c_str(), "sideways", &err);
  CHECK(doc == nullptr);
  CHECK(consume(err).find("sideways") != std::string::npos);
}

TEST_CASE("ELF imports are exposed as JSON") {
  char* err = nullptr;
  nlohmann::json imports =
      consume_json(ds_elf_imports_json(fixture("elf/versioned_imports.so").c_str(), &err));
  REQUIRE(imports.is_array());
  CHECK(imports.size() == 3);
  bool saw_tagged = false;
  for (const auto& entry : imports)
    if (entry["name"] == "snd_tplg_new") {
      CHECK(entry["version_tag"] == "ALSA_0.9");
      saw_tagged = true;
    }
  CHECK(saw_tagged);
}

TEST_CASE("detect emits a single-finding report with bug flag") {
  char* err = nullptr;
  ds_history* h = ds_history_open(fixture("histories/glib-hash/history.json").c_str(), &err);
  ds_usage* u = ds_usage_open(fixture("usage/cockpit.json").c_str(), &err);
  REQUIRE(h != nullptr);
  REQUIRE(u != nullptr);

  int has_bugs = -1;
  nlohmann::json doc = consume_json(ds_detect_json(h, u, ">= 2.37.6", &has_bugs, &err));
  CHECK(has_bugs == 1);
  CHECK(doc["schema"] == "depscan-report/1");
  CHECK(doc["bugs_found"] == true);
  REQUIRE(doc["findings"].size() == 1);
  const auto& finding = doc["findings"][0];
  CHECK(finding["app"] == "cockpit");
  CHECK(finding["library"] == "glib");
  CHECK(finding["incompatible_rendered"] == "[2.37.6, 2.39.1]");

  // Pinning the fixed release clears the verdict.
  nlohmann::json clean = consume_json(ds_detect_json(h, u, "= 2.39.2", &has_bugs, &err));
  CHECK(has_bugs == 0);
  CHECK(clean["bugs_found"] == false);

  ds_usage_free(u);
  ds_history_free(h);
}

TEST_CASE("oracle lists ground-truth incompatible versions") {
  char* err = nullptr;
  ds_history* h = ds_history_open(fixture("histories/glib-hash/history.json").c_str(), &err);
  ds_usage* u = ds_usage_open(fixture("usage/cockpit.json").c_str(), &err);
  REQUIRE(h != nullptr);
  REQUIRE(u != nullptr);

  nlohmann::json doc = consume_json(ds_oracle_json(h, u, ">= 2.37.6", &err));
  CHECK(doc["incompatible"] == nlohmann::json::array({"2.37.6", "2.39.1"}));

  ds_usage_free(u);
  ds_history_free(h);
}

TEST_CASE("repository scans run end to end over the C surface") {
  char* err = nullptr;
  ds_report* r = ds_scan_run(fixture("repo/glib-hash.json").c_str(), 2, &err);
  REQUIRE(r != nullptr);
  CHECK(ds_report_has_bugs(r) == 1);

  std::string text = consume(ds_report_render_text(r));
  CHECK(text.find("cockpit (220-1)") != std::string::npos);
  CHECK(text.find("[2.37.3, 2.39.1]") != std::string::npos);

  nlohmann::json doc = nlohmann::json::parse(consume(ds_report_render_json(r, -1)));
  CHECK(doc["findings"].size() == 2);
  ds_report_free(r);

  ds_report* clean = ds_scan_run(fixture("repo/clean.json").c_str(), 1, &err);
  REQUIRE(clean != nullptr);
  CHECK(ds_report_has_bugs(clean) == 0);
  CHECK(consume(ds_report_render_text(clean)) == "no dependency bugs found\n");
  ds_report_free(clean);

  ds_report* bad = ds_scan_run(fixture("repo/nope.json").c_str(), 1, &err);
  CHECK(bad == nullptr);
  CHECK(!consume(err).empty());
}

TEST_CASE("frees and NULL handles are safe no-ops") {
  ds_string_free(nullptr);
  ds_history_free(nullptr);
  ds_usage_free(nullptr);
  ds_report_free(nullptr);
  CHECK(ds_report_has_bugs(nullptr) == 0);
  CHECK(ds_report_render_text(nullptr) == nullptr);
  CHECK(ds_history_changes_json(nullptr, nullptr) == nullptr);
  char* err = nullptr;
  CHECK(ds_detect_json(nullptr, nullptr, "", nullptr, &err) == nullptr);
  CHECK(!consume(err).empty());
}
