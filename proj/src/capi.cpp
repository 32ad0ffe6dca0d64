// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
#include "depscan/depscan.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "abi_diff.hpp"
#include "abi_model.hpp"
#include "elf_reader.hpp"
#include "oracle.hpp"
#include "repo_scan.hpp"
#include "usage.hpp"
#include "version.hpp"

using namespace depscan;

// Handle tags wrap the C++ values; the header only forward-declares them.
struct ds_history {
  LibraryHistory value;
};
struct ds_usage {
  AppUsage value;
};
struct ds_report {
  ScanReport value;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** err, const std::string& message) {
  if (err) *err = dup_string(message);
}

// Runs fn inside the C boundary: no exception escapes, failures land in
// *err with a matching status.
template <typename Fn>
ds_status guarded(char** err, Fn&& fn) {
  try {
    fn();
    return DS_OK;
  } catch (const LoadError& e) {
    set_error(err, e.what());
    return DS_ERROR_LOAD;
  } catch (const ParseError& e) {
    set_error(err, e.what());
    return DS_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(err, e.what());
    return DS_ERROR_INTERNAL;
  } catch (...) {
    set_error(err, "unknown error");
    return DS_ERROR_INTERNAL;
  }
}

ds_status require(bool ok, const char* what, char** err) {
  if (ok) return DS_OK;
  set_error(err, std::string(what) + " must not be NULL");
  return DS_ERROR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* ds_library_version(void) { return "0.1.0"; }

void ds_string_free(char* s) { std::free(s); }

ds_status ds_compare_versions(const char* a, const char* b, int* out_cmp, char** err) {
  if (ds_status st = require(a && b && out_cmp, "a, b and out_cmp", err); st != DS_OK) return st;
  return guarded(err, [&] { *out_cmp = compare_versions(parse_version(a), parse_version(b)); });
}

ds_status ds_range_contains(const char* range, const char* version, int* out_contains,
                            char** err) {
  if (ds_status st = require(range && version && out_contains, "range, version and out_contains",
                             err);
      st != DS_OK)
    return st;
  return guarded(err, [&] {
    *out_contains = range_contains(parse_range(range), parse_version(version)) ? 1 : 0;
  });
}

ds_history* ds_history_open(const char* manifest_path, char** err) {
  if (require(manifest_path != nullptr, "manifest_path", err) != DS_OK) return nullptr;
  ds_history* h = nullptr;
  guarded(err, [&] { h = new ds_history{load_history(manifest_path)}; });
  return h;
}

void ds_history_free(ds_history* h) { delete h; }

char* ds_history_changes_json(const ds_history* h, char** err) {
  if (require(h != nullptr, "history handle", err) != DS_OK) return nullptr;
  char* out = nullptr;
  guarded(err, [&] {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const IncompatibleChange& c : collect_incompatible_changes(h->value))
      doc.push_back(change_to_json(c));
    out = dup_string(doc.dump(2));
  });
  return out;
}

char* ds_diff_snapshots_json(const char* snapshot_a, const char* snapshot_b,
                             const char* direction, char** err) {
  if (require(snapshot_a && snapshot_b && direction, "snapshot paths and direction", err) != DS_OK)
    return nullptr;
  char* out = nullptr;
  guarded(err, [&] {
    const std::string dir = direction;
    if (dir != "backward" && dir != "forward" && dir != "both")
      throw ParseError("direction must be \"backward\", \"forward\" or \"both\", got \"" + dir +
                       "\"");
    AbiSnapshot a = load_snapshot(snapshot_a);
    AbiSnapshot b = load_snapshot(snapshot_b);
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    if (dir == "backward" || dir == "both")
      for (const IncompatibleChange& c : diff_backward(a, b)) doc.push_back(change_to_json(c));
    if (dir == "forward" || dir == "both")
      for (const IncompatibleChange& c : diff_forward(a, b)) doc.push_back(change_to_json(c));
    out = dup_string(doc.dump(2));
  });
  return out;
}

ds_usage* ds_usage_open(const char* facts_path, char** err) {
  if (require(facts_path != nullptr, "facts_path", err) != DS_OK) return nullptr;
  ds_usage* u = nullptr;
  guarded(err, [&] { u = new ds_usage{load_usage_facts(facts_path)}; });
  return u;
}

void ds_usage_free(ds_usage* u) { delete u; }

char* ds_elf_imports_json(const char* binary_path, char** err) {
  if (require(binary_path != nullptr, "binary_path", err) != DS_OK) return nullptr;
  char* out = nullptr;
  guarded(err, [&] {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const ImportRef& ref : read_elf_imports_file(binary_path)) {
      nlohmann::ordered_json entry;
      entry["name"] = ref.name;
      if (ref.version_tag)
        entry["version_tag"] = *ref.version_tag;
      else
        entry["version_tag"] = nullptr;
      doc.push_back(std::move(entry));
    }
    out = dup_string(doc.dump(2));
  });
  return out;
}

char* ds_detect_json(const ds_history* h, const ds_usage* u, const char* depends_range,
                     int* out_has_bugs, char** err) {
  if (require(h && u && depends_range, "history, usage and depends_range", err) != DS_OK)
    return nullptr;
  char* out = nullptr;
  guarded(err, [&] {
    ScanReport report;
    report.findings.push_back(scan_pair(h->value, u->value, parse_range(depends_range)));
    if (out_has_bugs) *out_has_bugs = report.has_bugs() ? 1 : 0;
    out = dup_string(report_to_json(report).dump(2));
  });
  return out;
}

char* ds_oracle_json(const ds_history* h, const ds_usage* u, const char* depends_range,
                     char** err) {
  if (require(h && u && depends_range, "history, usage and depends_range", err) != DS_OK)
    return nullptr;
  char* out = nullptr;
  guarded(err, [&] {
    RequiredDep required{h->value.library, parse_range(depends_range)};
    nlohmann::ordered_json doc;
    auto& list = doc["incompatible"] = nlohmann::ordered_json::array();
    for (const Version& v : oracle_incompatible_versions(u->value, required, h->value))
      list.push_back(render_version(v));
    out = dup_string(doc.dump(2));
  });
  return out;
}

ds_report* ds_scan_run(const char* repo_manifest_path, unsigned jobs, char** err) {
  if (require(repo_manifest_path != nullptr, "repo_manifest_path", err) != DS_OK) return nullptr;
  ds_report* r = nullptr;
  guarded(err, [&] {
    RepoManifest manifest = load_repo_manifest(repo_manifest_path);
    r = new ds_report{scan_repository(manifest, jobs == 0 ? 1u : jobs)};
  });
  return r;
}

void ds_report_free(ds_report* r) { delete r; }

int ds_report_has_bugs(const ds_report* r) { return r && r->value.has_bugs() ? 1 : 0; }

char* ds_report_render_text(const ds_report* r) {
  if (!r) return nullptr;
  return dup_string(render_report_text(r->value));
}

char* ds_report_render_json(const ds_report* r, int indent) {
  if (!r) return nullptr;
  return dup_string(report_to_json(r->value).dump(indent));
}

}  // extern "C"
