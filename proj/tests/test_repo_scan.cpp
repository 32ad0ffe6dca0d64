// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
#include "repo_scan.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "version.hpp"

using namespace depscan;

namespace {

std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(DEPSCAN_FIXTURE_DIR) / name;
}

ScanReport scan_fixture(const std::string& name, unsigned jobs = 1) {
  return scan_repository(load_repo_manifest(fixture("repo/" + name)), jobs);
}

// Writes a manifest body to a scratch file so loader rejections can be
// exercised without polluting the fixture tree.
std::filesystem::path scratch_manifest(const std::string& name, const std::string& body) {
  auto dir = std::filesystem::temp_directory_path() / "depscan-repo-scan";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream out(path);
  out << body;
  return path;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string::size_type pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

bool line_has(const std::string& line, const std::string& piece) {
  return line.find(piece) != std::string::npos;
}

}  // namespace

TEST_CASE("repo manifest loader rejects malformed inputs") {
  auto expect_error = [](const std::string& name, const std::string& body,
                         const std::string& piece) {
    auto path = scratch_manifest(name, body);
    try {
      load_repo_manifest(path);
      FAIL_CHECK("expected LoadError for ", name);
    } catch (const LoadError& e) {
      CHECK_MESSAGE(line_has(e.what(), piece), name, ": ", e.what());
    }
  };

  expect_error("not-object.json", "[]", "document must be a JSON object");
  expect_error("no-packages.json", R"({"libraries": []})", "field 'packages'");
  expect_error("dup-package.json",
               R"({"packages": [
                     {"name": "a", "version": "1.0", "depends": "libx", "usage": {"sources": ["a.c"]}},
                     {"name": "a", "version": "1.1", "depends": "libx", "usage": {"sources": ["a.c"]}}],
                   "libraries": []})",
               "duplicate package name 'a'");
  expect_error("alt-depends.json",
               R"({"packages": [{"name": "a", "version": "1.0",
                                 "depends": "libx | liby", "usage": {"sources": ["a.c"]}}],
                   "libraries": []})",
               "alternative");
  expect_error("no-usage-source.json",
               R"({"packages": [{"name": "a", "version": "1.0", "depends": "libx",
                                 "usage": {}}],
                   "libraries": []})",
               "usage must name a facts file, binaries, or sources");
  const std::string hist = fixture("histories/glib-hash/history.json").string();
  expect_error("dup-binding.json",
               R"({"packages": [],
                   "libraries": [
                     {"package": "libx", "library": "x", "history": ")" +
                   hist + R"("},
                     {"package": "libx", "library": "x", "history": ")" +
                   hist + R"("}]})",
               "duplicate library binding for package 'libx'");
  expect_error("gone-history.json",
               R"({"packages": [],
                   "libraries": [{"package": "libx", "library": "x",
                                  "history": "does-not-exist.json"}]})",
               "missing history manifest");
}

TEST_CASE("glib hash-table repository reports both findings") {
  ScanReport report = scan_fixture("glib-hash.json");
  REQUIRE(report.findings.size() == 2);
  CHECK(report.has_bugs());

  const ScanFinding& cockpit = report.findings[0];
  CHECK(cockpit.app == "cockpit");
  CHECK(render_version(cockpit.app_version) == "220-1");
  CHECK(cockpit.library_package == "libglib2.0-0");
  CHECK(cockpit.library == "glib");
  CHECK(render_range(cockpit.required) == ">= 2.37.6");
  REQUIRE(cockpit.bugs.size() == 1);
  CHECK(cockpit.bugs[0].change.kind == ChangeKind::FunctionAddsReturnValue);
  CHECK(describe_change(cockpit.bugs[0].change) ==
        "g_hash_table_replace() adds return value gboolean");
  CHECK(render_version(cockpit.bugs[0].bug_version) == "2.39.1");
  CHECK(render_interval_set(cockpit.incompatible) == "[2.37.6, 2.39.1]");
  CHECK(cockpit.warnings.empty());
  CHECK(!cockpit.error);

  const ScanFinding& homebank = report.findings[1];
  CHECK(homebank.app == "homebank");
  REQUIRE(homebank.bugs.size() == 1);
  CHECK(describe_change(homebank.bugs[0].change) ==
        "g_hash_table_insert() adds return value gboolean");
  CHECK(render_interval_set(homebank.incompatible) == "[2.37.3, 2.39.1]");

  auto lines = lines_of(render_report_text(report));
  REQUIRE(lines.size() == 3);
  CHECK(line_has(lines[0], "App"));
  CHECK(line_has(lines[0], "Library (Required)"));
  CHECK(line_has(lines[0], "Change Symbol/Data-type"));
  CHECK(line_has(lines[0], "Incompatible Versions"));
  CHECK(line_has(lines[1], "cockpit (220-1)"));
  CHECK(line_has(lines[1], "libglib2.0-0 (>= 2.37.6)"));
  CHECK(line_has(lines[1], "[2.37.6, 2.39.1]"));
  CHECK(line_has(lines[2], "homebank (5.2.8-1)"));
  CHECK(line_has(lines[2], "[2.37.3, 2.39.1]"));
}

TEST_CASE("known dependency bugs reproduce across change kinds") {
  ScanReport report = scan_fixture("realworld.json");
  REQUIRE(report.findings.size() == 7);
  CHECK(report.has_bugs());

  struct Expected {
    std::string app;
    std::string package;
    std::string required;
    std::string change;
    std::string bug_version;
    std::string incompatible;
  };
  // Sorted by app name, matching the report order.
  const std::vector<Expected> expected = {
      {"alsa-utils", "libasound2", ">= 1.1.1", "Remove snd_tplg_new()@ALSA_0.9", "1.2.1",
       "[1.2.1, V_last]"},
      {"elisa", "libkf5i18n5", ">= 5.16.0", "Add KLocalizedContext()", "5.16.0", "[5.16.0]"},
      {"gammaray", "libqt5core5a", ">= 5.12.2",
       "qt_register_signal_spy_callbacks() changes parameter type from QSignalSpyCallbackSet to "
       "const QSignalSpyCallbackSet*",
       "5.14.0", "[5.14.0, V_last]"},
      {"geeqie", "libglib2.0-0", "*", "g_utf8_make_valid() adds parameter gssize", "2.51.0",
       "[V_init, 2.51.0]"},
      {"qgis-providers", "libsqlite3-0", ">= 3.5.9", "struct sqlite3_module adds xSavepoint",
       "3.7.6.3", "[3.5.9, 3.7.6.3]"},
      {"rkward", "libkf5coreaddons5", ">= 5.19.0", "Add KCoreAddons::versionString()", "5.19.0",
       "[5.19.0]"},
      {"unalz", "zlib1g", ">= 1.1.4",
       "get_crc_table() changes return value from const unsigned long* to const unsigned int*",
       "1.2.7", "[1.2.7, V_last]"},
  };

  for (std::size_t i = 0; i < expected.size(); ++i) {
    const Expected& want = expected[i];
    const ScanFinding& f = report.findings[i];
    CAPTURE(want.app);
    CHECK(f.app == want.app);
    CHECK(f.library_package == want.package);
    CHECK(render_range(f.required) == want.required);
    REQUIRE(f.bugs.size() == 1);
    CHECK(describe_change(f.bugs[0].change) == want.change);
    CHECK(render_version(f.bugs[0].bug_version) == want.bug_version);
    CHECK(render_interval_set(f.incompatible) == want.incompatible);
    CHECK(f.warnings.empty());
    CHECK(!f.error);
  }
}

TEST_CASE("type-change verdicts are reported once, from the backward diff") {
  ScanReport report = scan_fixture("realworld.json");
  for (const ScanFinding& f : report.findings) {
    if (f.app != "gammaray" && f.app != "unalz") continue;
    REQUIRE(f.bugs.size() == 1);
    CHECK(f.bugs[0].change.direction == Direction::Backward);
  }
}

TEST_CASE("source-scanned packages feed the same pipeline as fact files") {
  // unalz has no prebuilt facts file; its usage comes from scanning C source.
  ScanReport report = scan_fixture("realworld.json");
  auto it = std::find_if(report.findings.begin(), report.findings.end(),
                         [](const ScanFinding& f) { return f.app == "unalz"; });
  REQUIRE(it != report.findings.end());
  REQUIRE(it->bugs.size() == 1);
  CHECK(it->bugs[0].change.kind == ChangeKind::FunctionChangesReturnType);
}

TEST_CASE("clean repository renders the no-bug banner") {
  ScanReport report = scan_fixture("clean.json");
  CHECK(report.findings.empty());
  CHECK(!report.has_bugs());
  CHECK(render_report_text(report) == "no dependency bugs found\n");
}

TEST_CASE("undecidable enum value changes surface as warnings") {
  ScanReport report = scan_fixture("warned.json");
  REQUIRE(report.findings.size() == 1);
  CHECK(!report.has_bugs());

  const ScanFinding& f = report.findings[0];
  CHECK(f.app == "widgetapp");
  CHECK(f.bugs.empty());
  REQUIRE(f.warnings.size() == 1);  // both diff directions collapse to one warning
  CHECK(describe_change(f.warnings[0].change) ==
        "enum WidgetMode changes value of FAST from 1 to 2");
  CHECK(!f.warnings[0].reason.empty());
  CHECK(render_interval_set(f.incompatible) == "[]");

  std::string text = render_report_text(report);
  auto lines = lines_of(text);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0] == "no dependency bugs found");
  CHECK(lines[1].empty());
  CHECK(line_has(lines[2], "warning: widgetapp / libwidget: enum WidgetMode changes value"));
}

TEST_CASE("per-pair failures leave the rest of the scan intact") {
  ScanReport report = scan_fixture("broken.json");
  REQUIRE(report.findings.size() == 3);
  CHECK(report.has_bugs());

  const ScanFinding& broken = report.findings[0];
  CHECK(broken.app == "dualapp");
  CHECK(broken.library_package == "libbroken");
  REQUIRE(broken.error.has_value());
  CHECK(line_has(*broken.error, "releases"));
  CHECK(broken.bugs.empty());

  const ScanFinding& healthy = report.findings[1];
  CHECK(healthy.app == "dualapp");
  CHECK(healthy.library_package == "libglib2.0-0");
  CHECK(!healthy.error);
  REQUIRE(healthy.bugs.size() == 1);
  CHECK(render_interval_set(healthy.incompatible) == "[2.37.6, 2.39.1]");

  const ScanFinding& sadapp = report.findings[2];
  CHECK(sadapp.app == "sadapp");
  REQUIRE(sadapp.error.has_value());
  CHECK(line_has(*sadapp.error, "reads_tea_leaves"));

  std::string text = render_report_text(report);
  CHECK(line_has(text, "error: dualapp / libbroken:"));
  CHECK(line_has(text, "error: sadapp / libglib2.0-0:"));
}

TEST_CASE("a history bound to the wrong library is a per-pair error") {
  nlohmann::ordered_json doc;
  doc["packages"] = nlohmann::ordered_json::array(
      {{{"name", "app"},
        {"version", "1.0"},
        {"depends", "libx (>= 2.37.6)"},
        {"usage", {{"facts", fixture("usage/cockpit.json").string()}}}}});
  doc["libraries"] = nlohmann::ordered_json::array(
      {{{"package", "libx"},
        {"library", "wrong"},
        {"history", fixture("histories/glib-hash/history.json").string()}}});
  auto path = scratch_manifest("mismatch.json", doc.dump(2));

  ScanReport report = scan_repository(load_repo_manifest(path));
  REQUIRE(report.findings.size() == 1);
  REQUIRE(report.findings[0].error.has_value());
  CHECK(line_has(*report.findings[0].error,
                 "history manifest describes library 'glib' but the binding says 'wrong'"));
}

TEST_CASE("parallel scans match the single-threaded report byte for byte") {
  for (const char* name : {"glib-hash.json", "realworld.json", "broken.json"}) {
    CAPTURE(name);
    ScanReport serial = scan_fixture(name, 1);
    ScanReport parallel = scan_fixture(name, 4);
    CHECK(render_report_text(serial) == render_report_text(parallel));
    CHECK(report_to_json(serial).dump(2) == report_to_json(parallel).dump(2));
  }
}

TEST_CASE("scan reports survive a JSON round trip") {
  for (const char* name : {"glib-hash.json", "realworld.json", "warned.json", "broken.json"}) {
    CAPTURE(name);
    ScanReport report = scan_fixture(name, 2);
    nlohmann::ordered_json doc = report_to_json(report);
    ScanReport restored = report_from_json(doc);
    CHECK(report_to_json(restored).dump(2) == doc.dump(2));
    CHECK(render_report_text(restored) == render_report_text(report));
  }
}

TEST_CASE("report JSON carries the documented schema tag") {
  ScanReport report = scan_fixture("clean.json");
  nlohmann::ordered_json doc = report_to_json(report);
  CHECK(doc["schema"] == "depscan-report/1");
  CHECK(doc["bugs_found"] == false);
  CHECK(doc["findings"].is_array());
  nlohmann::json bad = doc;
  bad["schema"] = "depscan-report/2";
  CHECK_THROWS_AS(report_from_json(bad), LoadError);
}
