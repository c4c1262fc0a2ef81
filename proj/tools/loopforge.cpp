// loopforge: command-line front end for the quasigroup and loop workbench.
//
// Exit codes: 0 success, 1 sought object absent or suite failed,
// 2 usage error, 3 invalid input model.

#include "loopforge/errors.hpp"
#include "loopforge/isotopy.hpp"
#include "loopforge/mappings.hpp"
#include "loopforge/search.hpp"
#include "loopforge/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace loopforge;
using nlohmann::ordered_json;

enum Exit { kOk = 0, kAbsent = 1, kUsage = 2, kInvalidModel = 3 };

/// Collects records and prints them either as "key=value" lines or as one
/// JSON document.
class Output {
public:
  explicit Output(std::string command) : command_(std::move(command)) {}

  ordered_json& record() { return records_.emplace_back(ordered_json::object()); }
  void set_elapsed(double seconds) { elapsed_ = seconds; }

  void print(std::ostream& os, bool json) const {
    if (json) {
      ordered_json doc;
      doc["command"] = command_;
      doc["records"] = records_;
      if (elapsed_) doc["elapsed_seconds"] = *elapsed_;
      os << doc.dump(2) << "\n";
      return;
    }
    for (const auto& r : records_) {
      bool first = true;
      for (const auto& [k, v] : r.items()) {
        os << (first ? "" : " ") << k << "=" << scalar(v);
        first = false;
      }
      os << "\n";
    }
    if (elapsed_) os << "# elapsed seconds=" << std::fixed << std::setprecision(3) << *elapsed_ << "\n";
  }

private:
  static std::string scalar(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + scalar(v[i]);
      return s.empty() ? "-" : s;
    }
    if (v.is_null()) return "-";
    return v.dump();
  }

  std::string command_;
  std::vector<ordered_json> records_;
  std::optional<double> elapsed_;
};

std::string hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("LOOPFORGE_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    std::cerr << "warning: ignoring malformed LOOPFORGE_BUDGET='" << env << "'\n";
  }
  return kDefaultNodeBudget;
}

Quasigroup load_quasigroup(const std::string& path) { return Quasigroup(read_table_file(path)); }

// ---------------------------------------------------------------- props

int cmd_props(const std::string& path, bool with_g_loop, Output& out) {
  const Quasigroup q = load_quasigroup(path);
  const auto e = neutral(q);
  const auto view = ModelView::of(q);

  out.record()["order"] = q.order();
  out.record()["quasigroup"] = true;
  {
    auto& r = out.record();
    r["loop"] = e.has_value();
    if (e) r["neutral"] = *e;
  }
  {
    const auto assoc = is_associative(q);
    auto& r = out.record();
    r["group"] = assoc.holds && e.has_value();
    r["associative"] = assoc.holds;
    if (assoc.witness) r["witness"] = *assoc.witness;
  }
  out.record()["commutative"] = is_commutative(q);
  for (const char* name : {"moufang1", "moufang2", "moufang3", "moufang4", "extra1", "extra2", "extra3"}) {
    const auto v = holds(view, registry_get(name));
    auto& r = out.record();
    r[name] = v.holds;
    if (!v.holds) {
      ordered_json w = ordered_json::array();
      for (auto [var, val] : v.witness) w.push_back(std::string(1, var) + ":" + std::to_string(val));
      r["witness"] = w;
    }
  }
  if (!e) return kOk;

  const Loop l(q);
  out.record()["power_associative"] = associativity_rank_holds(l, 1);
  out.record()["diassociative"] = associativity_rank_holds(l, 2);
  out.record()["a_loop"] = is_A_loop(l);
  out.record()["cc"] = is_CC(l);
  {
    auto& r = out.record();
    r["nucleus_left"] = nucleus(l, NucleusPart::Left).size();
    r["nucleus_middle"] = nucleus(l, NucleusPart::Middle).size();
    r["nucleus_right"] = nucleus(l, NucleusPart::Right).size();
    r["nucleus"] = nucleus(l, NucleusPart::Full).size();
  }
  {
    constexpr std::size_t cap = 100'000;
    auto& r = out.record();
    try {
      r["inn_size"] = inner_mapping_group(l, cap).size();
    } catch (const CapExceeded&) {
      r["inn_size"] = ">" + std::to_string(cap);
    }
  }
  if (with_g_loop) {
    const auto ab = g_loop_counterexample(l);
    auto& r = out.record();
    r["g_loop"] = !ab.has_value();
    if (ab) r["witness"] = {ab->first, ab->second};
  }
  return kOk;
}

// ---------------------------------------------------------------- search

struct SearchFlags {
  std::string kind = "quasigroup";
  int order = 0;
  std::vector<std::string> require;
  std::vector<std::string> forbid;
  std::string mode = "all";
  std::string dedup = "none";
  std::optional<std::uint64_t> budget;
  std::string out_dir;
  std::string spec_file;
  int threads = 1;
};

std::vector<SearchSpec> specs_from(const SearchFlags& f) {
  std::vector<SearchSpec> specs;
  if (!f.spec_file.empty()) {
    std::ifstream in(f.spec_file);
    if (!in) throw Error("cannot read spec file '" + f.spec_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    specs = parse_search_specs(ss.str());
    for (auto& s : specs)
      if (f.budget) s.node_budget = *f.budget;
  } else {
    if (f.order < 1) throw Error("--order is required and must be >= 1");
    SearchSpec s;
    s.kind = parse_kind(f.kind);
    s.order = f.order;
    for (const auto& r : f.require) s.require.push_back(resolve_identity(r));
    for (const auto& r : f.forbid) s.forbid.push_back(resolve_identity(r));
    s.mode = parse_mode(f.mode);
    s.dedup = parse_dedup(f.dedup);
    s.node_budget = f.budget.value_or(default_budget());
    validate(s);
    specs.push_back(std::move(s));
  }
  for (auto& s : specs) s.threads = f.threads;
  return specs;
}

int cmd_search(const SearchFlags& flags, Output& out) {
  const auto specs = specs_from(flags);
  int status = kOk;
  for (const auto& spec : specs) {
    const auto res = search(spec);
    std::map<std::uint64_t, int> seen;
    for (const auto& m : res.models) {
      const auto canon = model_hash(m);
      auto& r = out.record();
      r["model"] = hex(canon);
      if (!flags.out_dir.empty()) {
        std::string name = hex(canon);
        if (spec.dedup == Dedup::None) name += "-" + std::to_string(seen[canon]++);
        const auto path = std::filesystem::path(flags.out_dir) / (name + ".tbl");
        std::filesystem::create_directories(flags.out_dir);
        std::ofstream(path) << write_model(m);
        r["file"] = path.string();
      }
    }
    auto& r = out.record();
    r["kind"] = to_string(spec.kind);
    r["order"] = spec.order;
    r["mode"] = to_string(spec.mode);
    r["raw_count"] = res.raw_count;
    r["iso_class_count"] = res.iso_class_count ? ordered_json(*res.iso_class_count) : ordered_json();
    r["nodes_expanded"] = res.nodes_expanded;
    r["exhausted"] = res.exhausted;
    if (!res.exhausted) std::cerr << "warning: node budget exhausted; results are partial\n";
    if (spec.mode == SearchMode::First && res.raw_count == 0) status = kAbsent;
  }
  return status;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, int max_order, const std::string& witness_dir,
               int threads, bool json) {
  SuiteOptions options;
  options.max_order = max_order;
  options.witness_dir = witness_dir;
  options.threads = threads;
  options.node_budget = default_budget();
  const auto report = run_suite(suite, options);
  if (json) {
    ordered_json doc;
    doc["command"] = "verify";
    doc["suite"] = report.suite;
    doc["status"] = report.passed() ? "PASS" : "FAIL";
    for (const auto& c : report.checks)
      doc["checks"].push_back({{"check", c.name},
                               {"orders", {c.min_order, c.max_order}},
                               {"status", c.passed ? "PASS" : "FAIL"},
                               {"detail", c.detail},
                               {"witness", c.witness_path},
                               {"elapsed_seconds", c.elapsed_seconds}});
    std::cout << doc.dump(2) << "\n";
  } else {
    print_report(std::cout, report);
  }
  return report.passed() ? kOk : kAbsent;
}

// ---------------------------------------------------------------- iso

int cmd_iso(const std::string& a, const std::string& b, Output& out) {
  const Quasigroup q1 = load_quasigroup(a);
  const Quasigroup q2 = load_quasigroup(b);
  const auto p = q1.order() == q2.order() ? isomorphism(q1, q2) : std::nullopt;
  auto& r = out.record();
  if (!p) {
    r["isomorphism"] = "NONE";
    return kAbsent;
  }
  const auto img = p->image();
  r["isomorphism"] = std::vector<Element>(img.begin(), img.end());
  return kOk;
}

// ---------------------------------------------------------------- isotopes

int cmd_isotopes(const std::string& path, Output& out) {
  const Loop l(load_quasigroup(path));
  const int n = l.order();
  // Classes in order of first appearance; representatives compared by
  // isomorphism search so that any order works.
  struct Class {
    Loop rep;
    std::pair<Element, Element> first;
    int count;
  };
  std::vector<Class> classes;
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      Loop iso = principal_isotope(l, a, b);
      auto it = std::find_if(classes.begin(), classes.end(), [&](const Class& c) {
        return isomorphism(c.rep.quasigroup(), iso.quasigroup()).has_value();
      });
      if (it == classes.end())
        classes.push_back({std::move(iso), {a, b}, 1});
      else
        ++it->count;
    }
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i];
    auto& r = out.record();
    r["class"] = i;
    r["count"] = c.count;
    r["first"] = {c.first.first, c.first.second};
    r["isomorphic_to_input"] = isomorphism(l.quasigroup(), c.rep.quasigroup()).has_value();
    r["model"] = hex(model_hash(Magma(c.rep.table())));
  }
  auto& r = out.record();
  r["isotopes"] = n * n;
  r["classes"] = classes.size();
  r["g_loop"] = classes.size() == 1;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite quasigroup and loop workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Emit one JSON document instead of key=value lines");

  std::string path, path_b;
  bool g_loop = false;
  auto* props = app.add_subcommand("props", "Report properties of a .tbl model");
  props->add_option("path", path, "Cayley table file")->required();
  props->add_flag("--g-loop", g_loop, "Also decide the G-loop property (slow)");

  SearchFlags sf;
  auto* search_cmd = app.add_subcommand("search", "Search for finite models");
  search_cmd->add_option("--kind", sf.kind, "quasigroup | loop | magma_inv");
  search_cmd->add_option("--order", sf.order, "Order of the models");
  search_cmd->add_option("--require", sf.require, "Identity name or id:<text> (repeatable)");
  search_cmd->add_option("--forbid", sf.forbid, "Identity every model must violate (repeatable)");
  search_cmd->add_option("--mode", sf.mode, "first | all | count");
  search_cmd->add_option("--dedup", sf.dedup, "none | up_to_iso");
  search_cmd->add_option("--budget", sf.budget, "Node budget (default: LOOPFORGE_BUDGET or 1e8)");
  search_cmd->add_option("--out", sf.out_dir, "Directory for .tbl outputs");
  search_cmd->add_option("--spec", sf.spec_file, "Search-spec file with one or more blocks");
  search_cmd->add_option("--threads", sf.threads, "Worker threads")->check(CLI::PositiveNumber);

  std::string suite, witness_dir = "witnesses";
  int max_order = 0, threads = 1;
  auto* verify = app.add_subcommand("verify", "Run a named verification suite");
  verify->add_option("suite", suite, "Suite name")->required();
  verify->add_option("--max-order", max_order, "Largest order examined (default per suite)");
  verify->add_option("--witness-dir", witness_dir, "Where failing checks write models");
  verify->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* iso = app.add_subcommand("iso", "Decide isomorphism of two .tbl models");
  iso->add_option("a", path, "First table")->required();
  iso->add_option("b", path_b, "Second table")->required();

  auto* isotopes = app.add_subcommand("isotopes", "Classify all principal isotopes of a loop");
  isotopes->add_option("path", path, "Cayley table file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  try {
    if (*verify) {
      if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
        std::cerr << "error: unknown suite '" << suite << "'\n";
        return kUsage;
      }
      return cmd_verify(suite, max_order, witness_dir, threads, json);
    }

    int status = kOk;
    Output out(app.get_subcommands().front()->get_name());
    try {
      if (*props) {
        status = cmd_props(path, g_loop, out);
      } else if (*iso) {
        status = cmd_iso(path, path_b, out);
      } else if (*isotopes) {
        status = cmd_isotopes(path, out);
      }
    } catch (const TableParseError& e) {
      std::cerr << "error: invalid model: " << e.what() << "\n";
      return kInvalidModel;
    } catch (const LatinViolation& e) {
      std::cerr << "error: invalid model: LatinViolation: " << e.what() << "\n";
      return kInvalidModel;
    }
    if (*search_cmd) {
      try {
        status = cmd_search(sf, out);
      } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
      } catch (const TableParseError& e) {
        std::cerr << "error: spec file " << e.what() << "\n";
        return kUsage;
      }
    }
    out.set_elapsed(elapsed());
    out.print(std::cout, json);
    return status;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return *search_cmd ? kUsage : kInvalidModel;
  }
}
