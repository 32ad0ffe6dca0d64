// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The depscan authors
#include "repo_scan.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>
#include <utility>

#include "elf_reader.hpp"
#include "suggest.hpp"

namespace depscan {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
  throw LoadError(context + ": " + message);
}

std::string require_string(const json& obj, const char* field, const std::string& context) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string())
    fail(context, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<std::filesystem::path> path_array(const json& obj, const char* field,
                                              const std::filesystem::path& base,
                                              const std::string& context) {
  std::vector<std::filesystem::path> out;
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) fail(context, std::string("field '") + field + "' must be an array");
  for (const auto& entry : *it) {
    if (!entry.is_string())
      fail(context, std::string("field '") + field + "' must contain only strings");
    out.push_back(resolve(base, entry.get<std::string>()));
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read source file '" + path.string() + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

RepoManifest load_repo_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  const std::string context = "repo manifest " + path.string();
  if (!in) fail(context, "cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(context, e.what());
  }
  if (!doc.is_object()) fail(context, "document must be a JSON object");
  const std::filesystem::path base = path.parent_path();

  RepoManifest manifest;

  auto packages = doc.find("packages");
  if (packages == doc.end() || !packages->is_array())
    fail(context, "field 'packages' must be an array");
  std::set<std::string> package_names;
  std::size_t index = 0;
  for (const auto& entry : *packages) {
    std::string pctx = context + ".packages[" + std::to_string(index++) + "]";
    if (!entry.is_object()) fail(pctx, "package must be an object");
    AppPackage pkg;
    pkg.name = require_string(entry, "name", pctx);
    if (pkg.name.empty()) fail(pctx, "package name must be non-empty");
    if (!package_names.insert(pkg.name).second)
      fail(pctx, "duplicate package name '" + pkg.name + "'");
    try {
      pkg.version = parse_version(require_string(entry, "version", pctx));
    } catch (const ParseError& e) {
      fail(pctx, e.what());
    }
    if (auto it = entry.find("depends"); it != entry.end() && !it->is_null()) {
      if (!it->is_string()) fail(pctx, "field 'depends' must be a string");
      try {
        pkg.depends = parse_depends(it->get<std::string>());
      } catch (const ParseError& e) {
        fail(pctx, e.what());
      }
    }

    auto usage = entry.find("usage");
    if (usage == entry.end() || !usage->is_object())
      fail(pctx, "field 'usage' must be an object");
    if (auto it = usage->find("facts"); it != usage->end() && !it->is_null()) {
      if (!it->is_string()) fail(pctx, "field 'usage.facts' must be a string");
      pkg.usage.facts = resolve(base, it->get<std::string>());
    }
    pkg.usage.binaries = path_array(*usage, "binaries", base, pctx);
    pkg.usage.sources = path_array(*usage, "sources", base, pctx);
    if (!pkg.usage.facts && pkg.usage.binaries.empty() && pkg.usage.sources.empty())
      fail(pctx, "usage must name a facts file, binaries, or sources");

    manifest.packages.push_back(std::move(pkg));
  }

  auto libraries = doc.find("libraries");
  if (libraries == doc.end() || !libraries->is_array())
    fail(context, "field 'libraries' must be an array");
  std::set<std::string> binding_names;
  index = 0;
  for (const auto& entry : *libraries) {
    std::string lctx = context + ".libraries[" + std::to_string(index++) + "]";
    if (!entry.is_object()) fail(lctx, "library binding must be an object");
    LibraryBinding binding;
    binding.package = require_string(entry, "package", lctx);
    if (binding.package.empty()) fail(lctx, "binding package must be non-empty");
    if (!binding_names.insert(binding.package).second)
      fail(lctx, "duplicate library binding for package '" + binding.package + "'");
    binding.library = require_string(entry, "library", lctx);
    binding.history = resolve(base, require_string(entry, "history", lctx));
    if (!std::filesystem::exists(binding.history))
      fail(lctx, "names a missing history manifest '" + binding.history.string() + "'");
    manifest.libraries.push_back(std::move(binding));
  }

  return manifest;
}

bool ScanReport::has_bugs() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const ScanFinding& f) { return f.has_bugs(); });
}

namespace {

// Per-library state shared read-only by all workers.
struct LibraryState {
  const LibraryBinding* binding = nullptr;
  std::optional<LibraryHistory> history;
  std::vector<IncompatibleChange> changes;
  std::string error;  // non-empty when the history failed to load
};

// Per-app state shared read-only by all workers.
struct AppState {
  const AppPackage* package = nullptr;
  AppUsage usage;
  std::string error;  // non-empty when usage could not be assembled
};

struct PairTask {
  const AppState* app = nullptr;
  const LibraryState* lib = nullptr;
  VersionRange required;
};

// Every symbol and type member mentioned anywhere in the given histories;
// bounds what source scanning may report.
std::vector<ElementRef> elements_of_interest(const std::vector<const LibraryState*>& libs) {
  std::set<ElementRef> out;
  for (const LibraryState* lib : libs) {
    if (!lib->history) continue;
    for (const AbiSnapshot& s : lib->history->releases) {
      for (const auto& [key, def] : s.symbols) out.insert(symbol_element(key));
      for (const auto& [name, def] : s.types)
        for (const TypeMember& m : def.members) out.insert(type_element(name, def.kind, m.name));
    }
  }
  return {out.begin(), out.end()};
}

AppUsage assemble_usage(const AppPackage& pkg, const std::vector<const LibraryState*>& libs) {
  AppUsage usage;
  usage.app = pkg.name;
  usage.version = pkg.version;
  if (pkg.usage.facts) {
    AppUsage loaded = load_usage_facts(*pkg.usage.facts);
    usage.imports = std::move(loaded.imports);
    usage.facts = std::move(loaded.facts);
  }
  for (const auto& binary : pkg.usage.binaries) {
    for (const ImportRef& ref : read_elf_imports_file(binary.string())) usage.imports.insert(ref);
  }
  if (!pkg.usage.sources.empty()) {
    std::vector<ElementRef> elements = elements_of_interest(libs);
    for (const auto& source : pkg.usage.sources) {
      for (UsageFact fact : scan_source_usage(read_text_file(source), elements)) {
        if (!fact.symbol.empty()) usage.imports.insert({fact.symbol, std::nullopt});
        usage.facts.insert(std::move(fact));
      }
    }
  }
  return usage;
}

// Direction-insensitive change identity. Type-change kinds are collected
// in both directions with identical payloads; a report must carry each
// verdict once.
IncompatibleChange canonical_change(IncompatibleChange c) {
  c.direction = Direction::Backward;
  return c;
}

void dedupe_bugs(std::vector<BugEntry>& bugs) {
  auto less = [](const BugEntry& a, const BugEntry& b) {
    IncompatibleChange ca = canonical_change(a.change);
    IncompatibleChange cb = canonical_change(b.change);
    if (change_less(ca, cb)) return true;
    if (change_less(cb, ca)) return false;
    return a.bug_version < b.bug_version;
  };
  // stable: collect order lists the backward record first, so dedup keeps it
  std::stable_sort(bugs.begin(), bugs.end(), less);
  bugs.erase(std::unique(bugs.begin(), bugs.end(),
                         [&](const BugEntry& a, const BugEntry& b) {
                           return !less(a, b) && !less(b, a);
                         }),
             bugs.end());
}

void dedupe_warnings(std::vector<WarningEntry>& warnings) {
  auto less = [](const WarningEntry& a, const WarningEntry& b) {
    return change_less(canonical_change(a.change), canonical_change(b.change));
  };
  std::stable_sort(warnings.begin(), warnings.end(), less);
  warnings.erase(std::unique(warnings.begin(), warnings.end(),
                             [&](const WarningEntry& a, const WarningEntry& b) {
                               return !less(a, b) && !less(b, a);
                             }),
                 warnings.end());
}

void run_pair(const LibraryHistory& h, const std::vector<IncompatibleChange>& changes,
              const AppUsage& usage, const VersionRange& required, ScanFinding& finding) {
  try {
    for (const IncompatibleChange& ic : changes) {
      DetectOutcome out = detect(usage, {h.library, required}, ic, h);
      if (out.undecidable) {
        finding.warnings.push_back({ic, out.reason});
        continue;
      }
      if (out.bug_old) finding.bugs.push_back({ic, *out.bug_old});
      if (out.bug_new) finding.bugs.push_back({ic, *out.bug_new});
    }
    dedupe_bugs(finding.bugs);
    dedupe_warnings(finding.warnings);

    std::vector<IntervalSet> sets;
    for (const BugEntry& bug : finding.bugs)
      sets.push_back(suggest_incompatible_versions(h, bug.change, bug.bug_version, required));
    finding.incompatible = union_over_changes(h, required, sets);
  } catch (const std::exception& e) {
    finding.bugs.clear();
    finding.warnings.clear();
    finding.incompatible = {};
    finding.error = e.what();
  }
}

ScanFinding scan_pair(const PairTask& task) {
  ScanFinding finding;
  finding.app = task.app->package->name;
  finding.app_version = task.app->package->version;
  finding.library_package = task.lib->binding->package;
  finding.library = task.lib->binding->library;
  finding.required = task.required;

  if (!task.lib->error.empty()) {
    finding.error = task.lib->error;
    return finding;
  }
  if (!task.app->error.empty()) {
    finding.error = task.app->error;
    return finding;
  }

  run_pair(*task.lib->history, task.lib->changes, task.app->usage, task.required, finding);
  return finding;
}

}  // namespace

ScanFinding scan_pair(const LibraryHistory& history, const AppUsage& usage,
                      const VersionRange& required) {
  ScanFinding finding;
  finding.app = usage.app;
  finding.app_version = usage.version;
  finding.library_package = history.library;
  finding.library = history.library;
  finding.required = required;
  run_pair(history, collect_incompatible_changes(history), usage, required, finding);
  return finding;
}

ScanReport scan_repository(const RepoManifest& manifest, unsigned jobs) {
  // Load every referenced file up front, single-threaded: IO errors get
  // stable attribution and the parallel phase touches only const data.
  std::vector<LibraryState> libraries(manifest.libraries.size());
  std::map<std::string, const LibraryState*> bindings;
  for (std::size_t i = 0; i < manifest.libraries.size(); ++i) {
    LibraryState& lib = libraries[i];
    lib.binding = &manifest.libraries[i];
    try {
      lib.history = load_history(lib.binding->history);
      if (lib.history->library != lib.binding->library)
        throw LoadError("history manifest describes library '" + lib.history->library +
                        "' but the binding says '" + lib.binding->library + "'");
      lib.changes = collect_incompatible_changes(*lib.history);
    } catch (const std::exception& e) {
      lib.history.reset();
      lib.error = e.what();
    }
    bindings[lib.binding->package] = &lib;
  }

  std::vector<AppState> apps(manifest.packages.size());
  std::vector<PairTask> tasks;
  for (std::size_t i = 0; i < manifest.packages.size(); ++i) {
    AppState& app = apps[i];
    app.package = &manifest.packages[i];

    // Several entries may constrain the same package; they conjoin.
    std::vector<std::string> order;
    std::map<std::string, VersionRange> merged;
    std::vector<const LibraryState*> bound;
    for (const Dependency& dep : app.package->depends) {
      auto binding = bindings.find(dep.package);
      if (binding == bindings.end()) continue;  // not a bound library: skip
      auto [it, fresh] = merged.try_emplace(dep.package);
      if (fresh) {
        order.push_back(dep.package);
        bound.push_back(binding->second);
      }
      it->second.constraints.insert(it->second.constraints.end(), dep.range.constraints.begin(),
                                    dep.range.constraints.end());
    }
    if (order.empty()) continue;

    try {
      app.usage = assemble_usage(*app.package, bound);
    } catch (const std::exception& e) {
      app.error = e.what();
    }
    for (const std::string& package : order)
      tasks.push_back({&app, bindings.at(package), merged.at(package)});
  }

  std::vector<ScanFinding> results(tasks.size());
  unsigned workers = std::max(1u, jobs);
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, tasks.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = scan_pair(tasks[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
          results[i] = scan_pair(tasks[i]);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  ScanReport report;
  for (ScanFinding& f : results) {
    if (f.has_bugs() || !f.warnings.empty() || f.error) report.findings.push_back(std::move(f));
  }
  std::sort(report.findings.begin(), report.findings.end(),
            [](const ScanFinding& a, const ScanFinding& b) {
              return std::tie(a.app, a.library_package) < std::tie(b.app, b.library_package);
            });
  return report;
}

std::string render_report_text(const ScanReport& report) {
  std::vector<std::array<std::string, 4>> rows;
  for (const ScanFinding& f : report.findings) {
    for (const BugEntry& bug : f.bugs) {
      rows.push_back({f.app + " (" + render_version(f.app_version) + ")",
                      f.library_package + " (" + render_range(f.required) + ")",
                      describe_change(bug.change), render_interval_set(f.incompatible)});
    }
  }

  std::string out;
  if (rows.empty()) {
    out = "no dependency bugs found\n";
  } else {
    const std::array<std::string, 4> header = {"App", "Library (Required)",
                                               "Change Symbol/Data-type", "Incompatible Versions"};
    std::array<std::size_t, 4> width{};
    for (std::size_t c = 0; c < 4; ++c) width[c] = header[c].size();
    for (const auto& row : rows)
      for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
    auto emit = [&](const std::array<std::string, 4>& row) {
      std::string line;
      for (std::size_t c = 0; c < 4; ++c) {
        line += row[c];
        if (c + 1 < 4) line.append(width[c] - row[c].size() + 2, ' ');
      }
      out += line;
      out += '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
  }

  std::string trailer;
  for (const ScanFinding& f : report.findings) {
    for (const WarningEntry& w : f.warnings)
      trailer += "warning: " + f.app + " / " + f.library_package + ": " +
                 describe_change(w.change) + ": " + w.reason + "\n";
  }
  for (const ScanFinding& f : report.findings) {
    if (f.error) trailer += "error: " + f.app + " / " + f.library_package + ": " + *f.error + "\n";
  }
  if (!trailer.empty()) {
    out += '\n';
    out += trailer;
  }
  return out;
}

nlohmann::ordered_json report_to_json(const ScanReport& report) {
  nlohmann::ordered_json doc;
  doc["schema"] = "depscan-report/1";
  doc["bugs_found"] = report.has_bugs();
  auto& findings = doc["findings"] = nlohmann::ordered_json::array();
  for (const ScanFinding& f : report.findings) {
    nlohmann::ordered_json entry;
    entry["app"] = f.app;
    entry["app_version"] = render_version(f.app_version);
    entry["library_package"] = f.library_package;
    entry["library"] = f.library;
    entry["required"] = render_range(f.required);
    auto& bugs = entry["bugs"] = nlohmann::ordered_json::array();
    for (const BugEntry& bug : f.bugs) {
      nlohmann::ordered_json b;
      b["change"] = change_to_json(bug.change);
      b["bug_version"] = render_version(bug.bug_version);
      bugs.push_back(std::move(b));
    }
    auto& incompatible = entry["incompatible"] = nlohmann::ordered_json::array();
    for (const VersionInterval& iv : f.incompatible.intervals) {
      nlohmann::ordered_json v;
      v["lo"] = render_version(iv.lo);
      v["hi"] = render_version(iv.hi);
      v["lo_open"] = iv.lo_open;
      v["hi_open"] = iv.hi_open;
      incompatible.push_back(std::move(v));
    }
    entry["incompatible_rendered"] = render_interval_set(f.incompatible);
    auto& warnings = entry["warnings"] = nlohmann::ordered_json::array();
    for (const WarningEntry& w : f.warnings) {
      nlohmann::ordered_json v;
      v["change"] = change_to_json(w.change);
      v["reason"] = w.reason;
      warnings.push_back(std::move(v));
    }
    entry["error"] = f.error ? nlohmann::ordered_json(*f.error) : nlohmann::ordered_json(nullptr);
    findings.push_back(std::move(entry));
  }
  return doc;
}

ScanReport report_from_json(const nlohmann::json& doc) {
  const std::string context = "scan report";
  if (!doc.is_object()) fail(context, "document must be a JSON object");
  if (require_string(doc, "schema", context) != "depscan-report/1")
    fail(context, "unsupported schema (want depscan-report/1)");
  auto findings = doc.find("findings");
  if (findings == doc.end() || !findings->is_array())
    fail(context, "field 'findings' must be an array");

  auto parse_range_text = [](const std::string& text) {
    return text == "*" ? VersionRange{} : parse_range(text);
  };

  ScanReport report;
  std::size_t index = 0;
  for (const auto& entry : *findings) {
    std::string fctx = context + ".findings[" + std::to_string(index++) + "]";
    if (!entry.is_object()) fail(fctx, "finding must be an object");
    ScanFinding f;
    f.app = require_string(entry, "app", fctx);
    f.app_version = parse_version(require_string(entry, "app_version", fctx));
    f.library_package = require_string(entry, "library_package", fctx);
    f.library = require_string(entry, "library", fctx);
    f.required = parse_range_text(require_string(entry, "required", fctx));

    if (auto it = entry.find("bugs"); it != entry.end() && it->is_array()) {
      for (const auto& b : *it) {
        if (!b.is_object() || !b.contains("change")) fail(fctx, "bug entries need a 'change'");
        BugEntry bug;
        bug.change = change_from_json(b["change"], fctx + ".change");
        bug.bug_version = parse_version(require_string(b, "bug_version", fctx));
        f.bugs.push_back(std::move(bug));
      }
    }
    if (auto it = entry.find("incompatible"); it != entry.end() && it->is_array()) {
      for (const auto& v : *it) {
        if (!v.is_object()) fail(fctx, "intervals must be objects");
        VersionInterval iv;
        iv.lo = parse_version(require_string(v, "lo", fctx));
        iv.hi = parse_version(require_string(v, "hi", fctx));
        auto flag = [&](const char* field) {
          auto fit = v.find(field);
          if (fit == v.end() || !fit->is_boolean())
            fail(fctx, std::string("field '") + field + "' must be a boolean");
          return fit->get<bool>();
        };
        iv.lo_open = flag("lo_open");
        iv.hi_open = flag("hi_open");
        f.incompatible.intervals.push_back(std::move(iv));
      }
    }
    if (auto it = entry.find("warnings"); it != entry.end() && it->is_array()) {
      for (const auto& w : *it) {
        if (!w.is_object() || !w.contains("change")) fail(fctx, "warnings need a 'change'");
        WarningEntry warning;
        warning.change = change_from_json(w["change"], fctx + ".change");
        warning.reason = require_string(w, "reason", fctx);
        f.warnings.push_back(std::move(warning));
      }
    }
    if (auto it = entry.find("error"); it != entry.end() && !it->is_null()) {
      if (!it->is_string()) fail(fctx, "field 'error' must be a string or null");
      f.error = it->get<std::string>();
    }
    report.findings.push_back(std::move(f));
  }
  return report;
}

}  // namespace depscan
