// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors

#ifndef DEPSCAN_REPO_SCAN_HPP
#define DEPSCAN_REPO_SCAN_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "abi_diff.hpp"
#include "detect.hpp"
#include "usage.hpp"
#include "version.hpp"

namespace depscan {

// Where an application's usage information comes from. At least one source
// must be given; facts from every source merge into one AppUsage. Symbols
// referenced by source-derived facts are recorded as unversioned imports —
// a source reference is exactly what the link editor turns into one.
struct UsageSpec {
  std::optional<std::filesystem::path> facts;
  std::vector<std::filesystem::path> binaries;
  std::vector<std::filesystem::path> sources;
};

struct AppPackage {
  std::string name;
  Version version;
  std::vector<Dependency> depends;
  UsageSpec usage;
};

// Maps a dependency package name onto the library history describing it.
struct LibraryBinding {
  std::string package;  // name dependency lines refer to, e.g. libglib2.0-0
  std::string library;  // library the history describes, e.g. glib
  std::filesystem::path history;
};

struct RepoManifest {
  std::vector<AppPackage> packages;
  std::vector<LibraryBinding> libraries;
};

// Loads and validates the repository manifest; relative paths resolve
// against the manifest's directory. Structural violations, duplicate
// names, unparseable dependency lines, and missing history manifests abort
// the scan; problems inside referenced files surface later, per pair.
RepoManifest load_repo_manifest(const std::filesystem::path& path);

struct BugEntry {
  IncompatibleChange change;
  Version bug_version;
};

struct WarningEntry {
  IncompatibleChange change;
  std::string reason;
};

// Outcome for one (application, library package) pair. Pairs that scanned
// clean produce no finding; `incompatible` is non-empty exactly when
// `bugs` is.
struct ScanFinding {
  std::string app;
  Version app_version;
  std::string library_package;
  std::string library;
  VersionRange required;
  std::vector<BugEntry> bugs;
  IntervalSet incompatible;
  std::vector<WarningEntry> warnings;
  std::optional<std::string> error;

  bool has_bugs() const { return !bugs.empty(); }
};

struct ScanReport {
  std::vector<ScanFinding> findings;

  bool has_bugs() const;
};

// Runs collect -> detect -> suggest for every dependency of every
// application that is bound to a library history. Apps without a declared
// dependency on a bound package are skipped; a declared dependency with no
// constraint accepts every version. Pairs are independent work units;
// `jobs` caps the worker count. Output order is (app, library package) —
// independent of manifest order and thread schedule.
ScanReport scan_repository(const RepoManifest& manifest, unsigned jobs = 1);

// Same detect/suggest pass for one (library, app) pair outside a repository
// manifest. The history's library name doubles as the package name; loading
// failures are the caller's problem, but per-change processing errors still
// land in the finding.
ScanFinding scan_pair(const LibraryHistory& history, const AppUsage& usage,
                      const VersionRange& required);

// "no dependency bugs found" when nothing was detected; otherwise a table
// with one row per bug, followed by warning and error lines.
std::string render_report_text(const ScanReport& report);

// Structured report; report_from_json inverts it losslessly (derived
// fields are regenerated on re-emission).
nlohmann::ordered_json report_to_json(const ScanReport& report);
ScanReport report_from_json(const nlohmann::json& doc);

}  // namespace depscan

#endif
