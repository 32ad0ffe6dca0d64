// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "depscan/depscan.h"

// Exit codes: 0 = scanned, nothing found; 1 = dependency bugs found;
// 2 = operational error (bad arguments, unreadable or malformed inputs).

namespace {

// Owns a string handed out by the library.
struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { ds_string_free(ptr); }
  explicit operator bool() const { return ptr != nullptr; }
  const char* get() const { return ptr ? ptr : ""; }
};

struct HistoryHandle {
  ds_history* ptr = nullptr;
  ~HistoryHandle() { ds_history_free(ptr); }
};

struct UsageHandle {
  ds_usage* ptr = nullptr;
  ~UsageHandle() { ds_usage_free(ptr); }
};

struct ReportHandle {
  ds_report* ptr = nullptr;
  ~ReportHandle() { ds_report_free(ptr); }
};

int fail(const OwnedString& err) {
  std::fprintf(stderr, "depscan: error: %s\n", *err.get() ? err.get() : "unknown error");
  return 2;
}

int print_document(const OwnedString& doc, const OwnedString& err) {
  if (!doc) return fail(err);
  std::fputs(doc.get(), stdout);
  std::fputc('\n', stdout);
  return 0;
}

int run_scan(const std::string& manifest, const std::string& format, unsigned jobs) {
  OwnedString err;
  ReportHandle report{ds_scan_run(manifest.c_str(), jobs, &err.ptr)};
  if (!report.ptr) return fail(err);
  OwnedString rendered;
  if (format == "json")
    rendered.ptr = ds_report_render_json(report.ptr, 2);
  else
    rendered.ptr = ds_report_render_text(report.ptr);
  std::fputs(rendered.get(), stdout);
  if (format == "json") std::fputc('\n', stdout);
  return ds_report_has_bugs(report.ptr) ? 1 : 0;
}

int run_changes(const std::string& history_path) {
  OwnedString err;
  HistoryHandle history{ds_history_open(history_path.c_str(), &err.ptr)};
  if (!history.ptr) return fail(err);
  OwnedString doc{ds_history_changes_json(history.ptr, &err.ptr)};
  return print_document(doc, err);
}

int run_diff(const std::string& a, const std::string& b, const std::string& direction) {
  OwnedString err;
  OwnedString doc{ds_diff_snapshots_json(a.c_str(), b.c_str(), direction.c_str(), &err.ptr)};
  return print_document(doc, err);
}

int run_elf_imports(const std::string& binary) {
  OwnedString err;
  OwnedString doc{ds_elf_imports_json(binary.c_str(), &err.ptr)};
  return print_document(doc, err);
}

int open_pair(const std::string& history_path, const std::string& facts_path,
              HistoryHandle& history, UsageHandle& usage, OwnedString& err) {
  history.ptr = ds_history_open(history_path.c_str(), &err.ptr);
  if (!history.ptr) return 2;
  usage.ptr = ds_usage_open(facts_path.c_str(), &err.ptr);
  if (!usage.ptr) return 2;
  return 0;
}

int run_detect(const std::string& history_path, const std::string& facts_path,
               const std::string& depends) {
  OwnedString err;
  HistoryHandle history;
  UsageHandle usage;
  if (open_pair(history_path, facts_path, history, usage, err) != 0) return fail(err);
  int has_bugs = 0;
  OwnedString doc{ds_detect_json(history.ptr, usage.ptr, depends.c_str(), &has_bugs, &err.ptr)};
  if (!doc) return fail(err);
  std::fputs(doc.get(), stdout);
  std::fputc('\n', stdout);
  return has_bugs ? 1 : 0;
}

int run_oracle(const std::string& history_path, const std::string& facts_path,
               const std::string& depends) {
  OwnedString err;
  HistoryHandle history;
  UsageHandle usage;
  if (open_pair(history_path, facts_path, history, usage, err) != 0) return fail(err);
  OwnedString doc{ds_oracle_json(history.ptr, usage.ptr, depends.c_str(), &err.ptr)};
  return print_document(doc, err);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dependency-bug scanner for shared-library ABI histories"};
  app.set_version_flag("--version", std::string(ds_library_version()));
  app.require_subcommand(1);
  int rc = 0;

  auto* scan = app.add_subcommand("scan", "scan a repository manifest for dependency bugs");
  auto scan_manifest = std::make_shared<std::string>();
  auto scan_format = std::make_shared<std::string>("text");
  auto scan_jobs = std::make_shared<unsigned>(1);
  scan->add_option("manifest", *scan_manifest, "repository manifest (JSON)")->required();
  scan->add_option("--format", *scan_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  scan->add_option("--jobs", *scan_jobs, "worker thread cap");
  scan->callback([=, &rc] { rc = run_scan(*scan_manifest, *scan_format, *scan_jobs); });

  auto* changes = app.add_subcommand("changes", "list a history's incompatible changes");
  auto changes_history = std::make_shared<std::string>();
  changes->add_option("history", *changes_history, "release-history manifest (JSON)")->required();
  changes->callback([=, &rc] { rc = run_changes(*changes_history); });

  auto* diff = app.add_subcommand("diff", "diff two ABI snapshots");
  auto diff_a = std::make_shared<std::string>();
  auto diff_b = std::make_shared<std::string>();
  auto diff_direction = std::make_shared<std::string>("both");
  diff->add_option("old", *diff_a, "earlier snapshot (JSON)")->required();
  diff->add_option("new", *diff_b, "later snapshot (JSON)")->required();
  diff->add_option("--direction", *diff_direction, "which incompatibilities to report")
      ->check(CLI::IsMember({"backward", "forward", "both"}));
  diff->callback([=, &rc] { rc = run_diff(*diff_a, *diff_b, *diff_direction); });

  auto* detect = app.add_subcommand("detect", "detect dependency bugs for one application");
  auto detect_history = std::make_shared<std::string>();
  auto detect_facts = std::make_shared<std::string>();
  auto detect_depends = std::make_shared<std::string>();
  detect->add_option("history", *detect_history, "release-history manifest (JSON)")->required();
  detect->add_option("usage", *detect_facts, "application usage-facts file (JSON)")->required();
  detect->add_option("--depends", *detect_depends,
                     "accepted version range, e.g. \">= 2.37.6\" (empty accepts all)");
  detect->callback([=, &rc] { rc = run_detect(*detect_history, *detect_facts, *detect_depends); });

  auto* elf = app.add_subcommand("elf-imports", "list an ELF binary's dynamic imports");
  auto elf_binary = std::make_shared<std::string>();
  elf->add_option("binary", *elf_binary, "ELF shared object or executable")->required();
  elf->callback([=, &rc] { rc = run_elf_imports(*elf_binary); });

  // Debugging aid for fixture authors; not part of the supported surface.
  auto* oracle = app.add_subcommand("oracle", "link-simulation ground truth for one application");
  oracle->group("");
  auto oracle_history = std::make_shared<std::string>();
  auto oracle_facts = std::make_shared<std::string>();
  auto oracle_depends = std::make_shared<std::string>();
  oracle->add_option("history", *oracle_history, "release-history manifest (JSON)")->required();
  oracle->add_option("usage", *oracle_facts, "application usage-facts file (JSON)")->required();
  oracle->add_option("--depends", *oracle_depends, "accepted version range (empty accepts all)");
  oracle->callback([=, &rc] { rc = run_oracle(*oracle_history, *oracle_facts, *oracle_depends); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return rc;
}
