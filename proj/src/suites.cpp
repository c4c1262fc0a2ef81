#include "loopforge/suites.hpp"

#include "loopforge/errors.hpp"
#include "loopforge/isotopy.hpp"
#include "loopforge/mappings.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace loopforge {

namespace {

using Clock = std::chrono::steady_clock;

struct Suite {
  int default_max;
  std::function<void(SuiteReport&, int, const SuiteOptions&)> run;
};

SearchSpec make_spec(SearchKind kind, int order, const SuiteOptions& options,
                     std::initializer_list<std::string_view> require = {},
                     std::initializer_list<std::string_view> forbid = {}) {
  SearchSpec spec;
  spec.kind = kind;
  spec.order = order;
  spec.mode = SearchMode::All;
  spec.node_budget = options.node_budget;
  spec.threads = options.threads;
  for (auto name : require) spec.require.push_back(registry_get(name));
  for (auto name : forbid) spec.forbid.push_back(registry_get(name));
  return spec;
}

std::string save_witness(const SuiteOptions& options, const std::string& suite,
                         const std::string& check, const Magma& m) {
  if (options.witness_dir.empty()) return {};
  namespace fs = std::filesystem;
  fs::create_directories(options.witness_dir);
  const auto path = fs::path(options.witness_dir) / (suite + "." + check + ".tbl");
  std::ofstream(path) << write_model(m);
  return path.string();
}

// Runs one check, timing it and turning library errors into a failure.
// The body returns the failing model, if any, and fills in `detail`.
void run_check(SuiteReport& report, const SuiteOptions& options, std::string name, int lo, int hi,
               const std::function<std::optional<Magma>(std::ostringstream&, bool&)>& body) {
  CheckResult r;
  r.name = std::move(name);
  r.min_order = lo;
  r.max_order = hi;
  const auto start = Clock::now();
  std::ostringstream detail;
  bool failed = false;
  try {
    if (auto witness = body(detail, failed)) {
      r.passed = false;
      r.witness_path = save_witness(options, report.suite, r.name, *witness);
    }
  } catch (const Error& e) {
    r.passed = false;
    detail << (detail.tellp() > 0 ? " " : "") << "error=\"" << e.what() << "\"";
  }
  if (failed) r.passed = false;
  r.detail = detail.str();
  r.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  report.checks.push_back(std::move(r));
}

bool holds_on(const Quasigroup& q, std::string_view name) {
  return holds(ModelView::of(q), registry_get(name)).holds;
}

void equivalence_suite(SuiteReport& report, int max_order, const SuiteOptions& options,
                       const std::vector<std::string>& family) {
  const int filtered_max = std::min(max_order, 5);
  for (const auto& required : family) {
    for (const auto& forbidden : family) {
      if (required == forbidden) continue;
      run_check(report, options, required + "-implies-" + forbidden, 1, filtered_max,
                [&](std::ostringstream& detail, bool& failed) -> std::optional<Magma> {
                  std::uint64_t nodes = 0;
                  for (int n = 1; n <= filtered_max; ++n) {
                    const auto res = search(make_spec(SearchKind::Quasigroup, n, options,
                                                      {required}, {forbidden}));
                    nodes += res.nodes_expanded;
                    if (!res.models.empty()) {
                      detail << "counterexamples=" << res.models.size() << " order=" << n;
                      return res.models.front();
                    }
                    if (!res.exhausted) {
                      failed = true;
                    detail << "incomplete=budget order=" << n;
                      return std::nullopt;
                    }
                  }
                  detail << "counterexamples=0 nodes=" << nodes;
                  return std::nullopt;
                });
    }
  }
  if (max_order < 6) return;
  for (const auto& required : family) {
    run_check(report, options, required + "-order6", 6, 6,
              [&](std::ostringstream& detail, bool& failed) -> std::optional<Magma> {
                const auto res = search(make_spec(SearchKind::Quasigroup, 6, options, {required}));
                if (!res.exhausted) {
                  failed = true;
                    detail << "incomplete=budget";
                  return std::nullopt;
                }
                for (const auto& m : res.models) {
                  const Quasigroup q(m.mul);
                  for (const auto& other : family)
                    if (!holds_on(q, other)) {
                      detail << "models=" << res.raw_count << " violates=" << other;
                      return m;
                    }
                }
                detail << "models=" << res.raw_count << " nodes=" << res.nodes_expanded;
                return std::nullopt;
              });
  }
}

void moufang_quasigroup(SuiteReport& report, int max_order, const SuiteOptions& options) {
  for (int i = 1; i <= 4; ++i) {
    const std::string name = "moufang" + std::to_string(i);
    run_check(report, options, name + "-has-neutral", 1, max_order,
              [&](std::ostringstream& detail, bool& failed) -> std::optional<Magma> {
                std::uint64_t models = 0;
                for (int n = 1; n <= max_order; ++n) {
                  const auto res = search(make_spec(SearchKind::Quasigroup, n, options, {name}));
                  if (!res.exhausted) {
                    failed = true;
                    detail << "incomplete=budget order=" << n;
                    return std::nullopt;
                  }
                  models += res.raw_count;
                  for (const auto& m : res.models)
                    if (!neutral(Quasigroup(m.mul))) {
                      detail << "counterexample_order=" << n;
                      return m;
                    }
                }
                detail << "models=" << models << " counterexamples=0";
                return std::nullopt;
              });
  }
}

void assoc_quasigroup(SuiteReport& report, int max_order, const SuiteOptions& options) {
  std::vector<Magma> models;
  bool complete = true;
  for (int n = 1; n <= max_order; ++n) {
    auto res = search(make_spec(SearchKind::Quasigroup, n, options, {"assoc"}));
    complete = complete && res.exhausted;
    for (auto& m : res.models) models.push_back(std::move(m));
  }
  run_check(report, options, "associative-is-group", 1, max_order,
            [&](std::ostringstream& detail, bool& failed) -> std::optional<Magma> {
              if (!complete) {
                failed = true;
                    detail << "incomplete=budget";
                return std::nullopt;
              }
              for (const auto& m : models) {
                const Quasigroup q(m.mul);
                if (!neutral(q) || !is_group(q)) {
                  detail << "counterexample_order=" << m.order();
                  return m;
                }
              }
              detail << "models=" << models.size();
              return std::nullopt;
            });
  run_check(report, options, "associative-unit_xx", 1, max_order,
            [&](std::ostringstream& detail, bool&) -> std::optional<Magma> {
              for (const auto& m : models)
                if (!holds_on(Quasigroup(m.mul), "unit_xx")) return m;
              detail << "models=" << models.size();
              return std::nullopt;
            });
}

int occurrences(const Term& t) {
  switch (t.op()) {
    case Term::Op::Var: return 1;
    case Term::Op::One: return 0;
    case Term::Op::Inv: return occurrences(*t.left());
    default: return occurrences(*t.left()) + occurrences(*t.right());
  }
}

// A MAGMA_INV model is a group with ' as its inverse map.
bool is_group_with_inverse(const Magma& m) {
  const CayleyTable& t = m.mul;
  const int n = m.order();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (t(t(x, y), z) != t(x, t(y, z))) return false;
  std::optional<Element> e;
  for (int c = 0; c < n && !e; ++c) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = t(c, x) == x && t(x, c) == x;
    if (ok) e = c;
  }
  if (!e || !m.inv) return false;
  for (int x = 0; x < n; ++x) {
    const Element xi = (*m.inv)[static_cast<std::size_t>(x)];
    if (t(x, xi) != *e || t(xi, x) != *e) return false;
  }
  return true;
}

void single_axiom(SuiteReport& report, int max_order, const SuiteOptions& options) {
  for (const std::string axiom : {"mccune", "kunen3"}) {
    run_check(report, options, axiom + "-models-are-groups", 1, max_order,
              [&](std::ostringstream& detail, bool& failed) -> std::optional<Magma> {
                std::uint64_t models = 0, nodes = 0;
                for (int n = 1; n <= max_order; ++n) {
                  const auto res = search(make_spec(SearchKind::MagmaInv, n, options, {axiom}));
                  nodes += res.nodes_expanded;
                  models += res.raw_count;
                  for (const auto& m : res.models)
                    if (!is_group_with_inverse(m)) {
                      detail << "counterexample_order=" << n;
                      return m;
                    }
                  if (!res.exhausted) {
                    failed = true;
                    detail << "incomplete=budget order=" << n << " exhausted=false";
                    return std::nullopt;
                  }
                }
                detail << "models=" << models << " nodes=" << nodes << " exhausted=true";
                return std::nullopt;
              });
  }
  run_check(report, options, "kunen3-shape", 0, 0, [](std::ostringstream& detail, bool& failed) -> std::optional<Magma> {
    const auto& id = registry_get("kunen3");
    const int occ = occurrences(*id.lhs);
    detail << "lhs_occurrences=" << occ << " variables=" << id.vars.size();
    failed = occ != 7 || id.vars.size() != 3;
    return std::nullopt;
  });
}

void bruck_paige(SuiteReport& report, int max_order, const SuiteOptions& options) {
  run_check(report, options, "diassociative-A-loops-are-moufang", 1, max_order,
            [&](std::ostringstream& detail, bool& failed) -> std::optional<Magma> {
              std::size_t corpus = 0, candidates = 0, nonassociative = 0;
              for (int n = 1; n <= max_order; ++n) {
                std::vector<Loop> loops;
                if (n <= 6) {
                  loops = loops_up_to_iso(n, options);
                } else {
                  // Diassociative loops are flexible and alternative, so this
                  // search covers every diassociative loop of order n.
                  auto spec = make_spec(SearchKind::Loop, n, options,
                                        {"flexible", "left_alt", "right_alt"});
                  spec.dedup = Dedup::UpToIso;
                  const auto res = search(spec);
                  if (!res.exhausted) {
                    failed = true;
                    detail << "incomplete=budget order=" << n;
                    return std::nullopt;
                  }
                  for (const auto& m : res.models) loops.emplace_back(m.mul);
                }
                corpus += loops.size();
                for (const auto& l : loops) {
                  if (!associativity_rank_holds(l, 2) || !is_A_loop(l)) continue;
                  ++candidates;
                  if (!is_associative(l.quasigroup())) ++nonassociative;
                  for (int i = 1; i <= 4; ++i)
                    if (!holds_on(l.quasigroup(), "moufang" + std::to_string(i))) {
                      detail << "counterexample_order=" << n << " violates=moufang" << i;
                      return Magma(l.table());
                    }
                }
              }
              detail << "corpus=" << corpus << " diassociative_A_loops=" << candidates
                     << " nonassociative=" << nonassociative << " non_moufang=0";
              return std::nullopt;
            });
}

void cc_basarab(SuiteReport& report, int max_order, const SuiteOptions& options) {
  run_check(report, options, "nucleus-factor-abelian", 1, max_order,
            [&](std::ostringstream& detail, bool&) -> std::optional<Magma> {
              const auto loops = nonassociative_cc_loops(max_order, options);
              std::map<int, int> by_order;
              for (const auto& l : loops) {
                ++by_order[l.order()];
                const auto nuc = nucleus(l, NucleusPart::Full);
                if (!is_normal(l, nuc)) {
                  detail << "not_normal_order=" << l.order();
                  return Magma(l.table());
                }
                const auto f = factor(l, nuc);
                if (!is_associative(f.quotient.quasigroup()) || !is_commutative(f.quotient.quasigroup())) {
                  detail << "nonabelian_factor_order=" << l.order();
                  return Magma(l.table());
                }
              }
              detail << "cc_loops=" << loops.size();
              for (auto [n, c] : by_order) detail << " order" << n << "=" << c;
              return std::nullopt;
            });
}

void cc_gloop(SuiteReport& report, int max_order, const SuiteOptions& options) {
  run_check(report, options, "cc-loops-are-G-loops", 1, max_order,
            [&](std::ostringstream& detail, bool& failed) -> std::optional<Magma> {
              const auto loops = nonassociative_cc_loops(max_order, options);
              for (const auto& l : loops)
                if (auto ab = g_loop_counterexample(l)) {
                  detail << "isotope=" << ab->first << "," << ab->second;
                  return Magma(l.table());
                }
              detail << "cc_loops=" << loops.size();
              if (loops.size() < 3) {
                failed = true;
                detail << " reason=too_few_examples";
              }
              return std::nullopt;
            });
}

void gloop_order6(SuiteReport& report, int, const SuiteOptions& options) {
  run_check(report, options, "G-loops-associative", 6, 6,
            [&](std::ostringstream& detail, bool&) -> std::optional<Magma> {
              const auto loops = loops_up_to_iso(6, options);
              std::size_t g_loops = 0;
              std::optional<Magma> witness;
              std::size_t nonassociative = 0;
              for (const auto& l : loops) {
                if (!is_G_loop(l)) continue;
                ++g_loops;
                if (!is_associative(l.quasigroup())) {
                  ++nonassociative;
                  if (!witness) witness = Magma(l.table());
                }
              }
              detail << "classes=" << loops.size() << " g_loops=" << g_loops
                     << " nonassociative_g_loops=" << nonassociative;
              return witness;
            });
}

void pacc_exponent(SuiteReport& report, int max_order, const SuiteOptions& options) {
  run_check(report, options, "factor-exponent-divides-12", 1, max_order,
            [&](std::ostringstream& detail, bool&) -> std::optional<Magma> {
              const auto loops = nonassociative_cc_loops(max_order, options);
              std::size_t pacc = 0;
              for (const auto& l : loops) {
                if (!associativity_rank_holds(l, 1)) continue;
                ++pacc;
                const auto f = factor(l, nucleus(l, NucleusPart::Full));
                const auto e = abelian_exponent(f.quotient);
                if (!e || 12 % *e != 0) {
                  detail << "exponent=" << (e ? std::to_string(*e) : "none");
                  return Magma(l.table());
                }
              }
              detail << "cc_loops=" << loops.size() << " pacc_loops=" << pacc;
              return std::nullopt;
            });
}

const std::map<std::string, Suite, std::less<>>& suites() {
  static const std::map<std::string, Suite, std::less<>> table = {
      {"moufang-quasigroup", {5, moufang_quasigroup}},
      {"moufang-equivalence",
       {6, [](SuiteReport& r, int n, const SuiteOptions& o) {
          equivalence_suite(r, n, o, {"moufang1", "moufang2", "moufang3", "moufang4"});
        }}},
      {"extra-equivalence",
       {6, [](SuiteReport& r, int n, const SuiteOptions& o) {
          equivalence_suite(r, n, o, {"extra1", "extra2", "extra3"});
        }}},
      {"assoc-quasigroup", {5, assoc_quasigroup}},
      {"single-axiom", {4, single_axiom}},
      {"bruck-paige", {8, bruck_paige}},
      {"cc-basarab", {8, cc_basarab}},
      {"cc-gloop", {8, cc_gloop}},
      {"gloop-order6", {6, gloop_order6}},
      {"pacc-exponent", {8, pacc_exponent}},
  };
  return table;
}

const Suite& find_suite(std::string_view name) {
  const auto it = suites().find(name);
  if (it == suites().end()) throw Error("unknown suite '" + std::string(name) + "'");
  return it->second;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "moufang-quasigroup", "moufang-equivalence", "extra-equivalence", "assoc-quasigroup",
      "single-axiom",       "bruck-paige",         "cc-basarab",        "cc-gloop",
      "gloop-order6",       "pacc-exponent"};
  return names;
}

int default_max_order(std::string_view suite) { return find_suite(suite).default_max; }

SuiteReport run_suite(std::string_view suite, const SuiteOptions& options) {
  const Suite& s = find_suite(suite);
  const int max_order = options.max_order > 0 ? options.max_order : s.default_max;
  SuiteReport report;
  report.suite = std::string(suite);
  s.run(report, max_order, options);
  return report;
}

void print_report(std::ostream& os, const SuiteReport& report) {
  for (const auto& c : report.checks) {
    os << "suite=" << report.suite << " check=" << c.name << " orders=" << c.min_order << "-"
       << c.max_order << " status=" << (c.passed ? "PASS" : "FAIL");
    if (!c.detail.empty()) os << " " << c.detail;
    os << " witness=" << (c.witness_path.empty() ? "-" : c.witness_path) << "\n";
  }
  os << "suite=" << report.suite << " status=" << (report.passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& c : report.checks)
    os << "# elapsed check=" << c.name << " seconds=" << c.elapsed_seconds << "\n";
}

const Identity& lcc_identity() {
  static const Identity id = parse_identity("x*(y*z) = ((x*y)/x)*(x*z)");
  return id;
}

const Identity& rcc_identity() {
  static const Identity id = parse_identity("(z*y)*x = (z*x)*(x\\(y*x))");
  return id;
}

std::vector<Loop> loops_up_to_iso(int order, const SuiteOptions& options) {
  SearchSpec spec = make_spec(SearchKind::Loop, order, options);
  spec.dedup = Dedup::UpToIso;
  const auto res = search(spec);
  if (!res.exhausted) throw BudgetExhausted();
  std::vector<Loop> out;
  out.reserve(res.models.size());
  for (const auto& m : res.models) out.emplace_back(m.mul);
  return out;
}

std::vector<Loop> nonassociative_cc_loops(int max_order, const SuiteOptions& options) {
  std::vector<Loop> out;
  for (int n = 1; n <= max_order; ++n) {
    SearchSpec spec = make_spec(SearchKind::Loop, n, options, {}, {"assoc"});
    spec.require = {lcc_identity(), rcc_identity()};
    spec.dedup = Dedup::UpToIso;
    const auto res = search(spec);
    if (!res.exhausted) throw BudgetExhausted();
    for (const auto& m : res.models) {
      Loop l(m.mul);
      if (!is_CC(l)) throw InvariantViolation("conjugacy-closure filter admitted a non-CC loop");
      out.push_back(std::move(l));
    }
  }
  return out;
}

}  // namespace loopforge
