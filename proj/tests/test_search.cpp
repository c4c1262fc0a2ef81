#include "fixtures.hpp"
#include "loopforge/errors.hpp"
#include "loopforge/isotopy.hpp"

#include <doctest.h>

#include <set>

using namespace loopforge;
using namespace fixtures;

namespace {

SearchSpec spec_of(SearchKind kind, int order, std::vector<std::string> require = {},
                   std::vector<std::string> forbid = {}) {
  SearchSpec s;
  s.kind = kind;
  s.order = order;
  for (const auto& r : require) s.require.push_back(resolve_identity(r));
  for (const auto& f : forbid) s.forbid.push_back(resolve_identity(f));
  return s;
}

std::uint64_t naive_latin_count(int n) {
  std::uint64_t count = 0;
  oracle::each_latin_square(n, [&](const oracle::Table&) { ++count; });
  return count;
}

Magma relabel(const Magma& m, const std::vector<Element>& p) {
  const int n = m.order();
  std::vector<Element> mul(static_cast<std::size_t>(n * n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) mul[static_cast<std::size_t>(p[x] * n + p[y])] = p[static_cast<std::size_t>(m.mul(x, y))];
  std::optional<std::vector<Element>> inv;
  if (m.inv) {
    inv.emplace(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) (*inv)[static_cast<std::size_t>(p[x])] = p[static_cast<std::size_t>((*m.inv)[x])];
  }
  std::optional<Element> one;
  if (m.one) one = p[static_cast<std::size_t>(*m.one)];
  return Magma(CayleyTable(n, std::move(mul)), std::move(inv), one);
}

bool same(const SearchResult& a, const SearchResult& b) {
  if (a.models.size() != b.models.size()) return false;
  for (std::size_t i = 0; i < a.models.size(); ++i) {
    if (a.models[i].mul != b.models[i].mul || a.models[i].inv != b.models[i].inv || a.models[i].one != b.models[i].one)
      return false;
  }
  return a.raw_count == b.raw_count && a.iso_class_count == b.iso_class_count &&
         a.nodes_expanded == b.nodes_expanded && a.exhausted == b.exhausted;
}

}  // namespace

TEST_CASE("search: loop of order 3 is unique") {
  auto s = spec_of(SearchKind::Loop, 3);
  s.mode = SearchMode::Count;
  const auto r = search(s);
  CHECK(r.raw_count == 1);
  CHECK(r.models.empty());
  CHECK(r.exhausted);
}

TEST_CASE("search: quasigroup raw counts equal a naive enumeration") {
  for (int n = 1; n <= 4; ++n) {
    auto s = spec_of(SearchKind::Quasigroup, n);
    s.mode = SearchMode::Count;
    CHECK(search(s).raw_count == naive_latin_count(n));
  }
}

TEST_CASE("search: loop raw counts equal a naive enumeration") {
  for (int n = 1; n <= 5; ++n) {
    auto s = spec_of(SearchKind::Loop, n);
    s.mode = SearchMode::Count;
    CHECK(search(s).raw_count == oracle::loops_with_neutral_zero(n).size());
  }
}

TEST_CASE("search: Moufang quasigroups of order <= 4 have a neutral element") {
  for (int n = 1; n <= 4; ++n) {
    const auto r = search(spec_of(SearchKind::Quasigroup, n, {"moufang1"}));
    CHECK(r.exhausted);
    // cross-check the count against the naive enumerator filtered by the oracle evaluator
    std::uint64_t expected = 0;
    oracle::each_latin_square(n, [&](const oracle::Table& t) {
      if (oracle::satisfies(oracle::Model{n, t, {}, -1}, "x*((y*z)*x) = (x*y)*(z*x)")) ++expected;
    });
    CHECK(r.raw_count == expected);
    for (const auto& m : r.models) CHECK(neutral(Quasigroup(m.mul)));
  }
}

TEST_CASE("search: MAGMA_INV models of mccune at order <= 3 match an exhaustive scan") {
  const auto mccune = oracle::parse(std::string(registry_source("mccune")));
  for (int n = 1; n <= 3; ++n) {
    std::set<std::pair<std::vector<Element>, std::vector<Element>>> expected;
    const int cells = n * n;
    int tables = 1, invs = 1;
    for (int i = 0; i < cells; ++i) tables *= n;
    for (int i = 0; i < n; ++i) invs *= n;
    for (int code = 0; code < tables; ++code) {
      oracle::Table t;
      for (int i = 0, c = code; i < cells; ++i, c /= n) t.push_back(c % n);
      for (int icode = 0; icode < invs; ++icode) {
        std::vector<int> inv;
        for (int i = 0, c = icode; i < n; ++i, c /= n) inv.push_back(c % n);
        if (!oracle::counterexample(oracle::Model{n, t, inv, -1}, mccune)) expected.insert({t, inv});
      }
    }
    const auto r = search(spec_of(SearchKind::MagmaInv, n, {"mccune"}));
    REQUIRE(r.exhausted);
    std::set<std::pair<std::vector<Element>, std::vector<Element>>> found;
    for (const auto& m : r.models) {
      found.insert({raw(m.mul), *m.inv});
      CHECK(is_associative(Quasigroup(m.mul)).holds);
      CHECK(neutral(Quasigroup(m.mul)));
    }
    CHECK(found == expected);
  }
}

TEST_CASE("search: soundness of emitted models") {
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> cases = {
      {{"flexible"}, {"comm"}},
      {{"left_alt"}, {"assoc"}},
      {{"moufang2"}, {}},
      {{}, {"assoc", "comm"}},
  };
  for (const auto& [req, forb] : cases) {
    for (int n = 4; n <= 5; ++n) {
      const auto r = search(spec_of(SearchKind::Loop, n, req, forb));
      for (const auto& m : r.models) {
        const auto om = oracle_model(Magma(m.mul));
        for (const auto& name : req) REQUIRE(oracle::satisfies(om, std::string(registry_source(name))));
        for (const auto& name : forb) REQUIRE_FALSE(oracle::satisfies(om, std::string(registry_source(name))));
      }
    }
  }
}

TEST_CASE("count_models") {
  const auto four = count_models(spec_of(SearchKind::Loop, 4));
  CHECK(four.up_to_iso == 2);
  CHECK(oracle::classes(oracle::loops_with_neutral_zero(4), 4).size() == 2);

  const auto na5 = count_models(spec_of(SearchKind::Loop, 5, {}, {"assoc"}));
  CHECK(na5.up_to_iso >= 1);
  std::vector<oracle::Table> nonassoc;
  for (const auto& t : oracle::loops_with_neutral_zero(5))
    if (!oracle::associative(t, 5)) nonassoc.push_back(t);
  CHECK(na5.raw == nonassoc.size());
  CHECK(na5.up_to_iso == oracle::classes(nonassoc, 5).size());

  const auto one = count_models(spec_of(SearchKind::Quasigroup, 1));
  CHECK(one.raw == 1);
  CHECK(one.up_to_iso == 1);

  auto tight = spec_of(SearchKind::Quasigroup, 5);
  tight.node_budget = 50;
  CHECK_THROWS_AS(count_models(tight), BudgetExhausted);
}

TEST_CASE("search: budget exhaustion returns partial results") {
  auto s = spec_of(SearchKind::Quasigroup, 5);
  s.node_budget = 1000;
  const auto r = search(s);
  CHECK_FALSE(r.exhausted);
  CHECK(r.raw_count > 0);
  CHECK(r.raw_count < 161280);
  CHECK(r.nodes_expanded <= 1000);
}

TEST_CASE("search: FIRST returns one model") {
  auto s = spec_of(SearchKind::Loop, 5, {}, {"assoc"});
  s.mode = SearchMode::First;
  const auto r = search(s);
  REQUIRE(r.models.size() == 1);
  CHECK_FALSE(is_associative(Quasigroup(r.models[0].mul)));
  s.order = 4;
  CHECK(search(s).models.empty());
}

TEST_CASE("search: determinism across runs and thread counts") {
  for (auto kind : {SearchKind::Quasigroup, SearchKind::Loop}) {
    auto s = spec_of(kind, kind == SearchKind::Loop ? 6 : 4, {}, {"comm"});
    s.dedup = Dedup::UpToIso;
    const auto a = search(s);
    const auto b = search(s);
    CHECK(same(a, b));
    for (int threads : {2, 3, 4}) {
      s.threads = threads;
      CHECK(same(a, search(s)));
    }
  }
  auto m = spec_of(SearchKind::MagmaInv, 4, {"kunen3"});
  const auto serial = search(m);
  m.threads = 3;
  CHECK(same(serial, search(m)));
}

TEST_CASE("search: models are sorted by canonical form") {
  const auto r = search(spec_of(SearchKind::Loop, 5));
  REQUIRE(r.models.size() == 56);
  for (std::size_t i = 1; i < r.models.size(); ++i) {
    const auto a = canonical_form(Loop(r.models[i - 1].mul));
    const auto b = canonical_form(Loop(r.models[i].mul));
    CHECK(a <= b);
  }
}

TEST_CASE("search: symmetry breaking keeps every class") {
  for (int n = 4; n <= 6; ++n) {
    auto s = spec_of(SearchKind::Loop, n);
    s.mode = SearchMode::Count;
    s.dedup = Dedup::UpToIso;
    const auto plain = search(s);
    s.break_symmetry = true;
    const auto broken = search(s);
    CHECK(broken.iso_class_count == plain.iso_class_count);
    CHECK(broken.raw_count <= plain.raw_count);
  }
}

TEST_CASE("validate") {
  CHECK_THROWS_AS(validate(spec_of(SearchKind::Loop, 0)), Error);
  CHECK_THROWS_AS(validate(spec_of(SearchKind::Loop, 3, {"mccune"})), Error);
  CHECK_THROWS_AS(validate(spec_of(SearchKind::MagmaInv, 3, {"qg1"})), Error);
  CHECK_THROWS_AS(validate(spec_of(SearchKind::Quasigroup, 3, {"id:x*1 = x"})), Error);
  CHECK_NOTHROW(validate(spec_of(SearchKind::Loop, 3, {"id:x*1 = x"})));
  CHECK_NOTHROW(validate(spec_of(SearchKind::MagmaInv, 3, {"id:x*x' = 1"})));
  CHECK_THROWS_AS(validate(spec_of(SearchKind::Quasigroup, kMaxOrder + 1)), Error);
}

TEST_CASE("search: constant and inverse cells in MAGMA_INV") {
  const auto r = search(spec_of(SearchKind::MagmaInv, 3, {"assoc", "id:x*1 = x", "id:1*x = x", "id:x*x' = 1"}));
  REQUIRE(r.exhausted);
  CHECK(r.raw_count == 3);  // labelled copies of Z3: 3! / |Aut(Z3)|
  for (const auto& m : r.models) {
    REQUIRE(m.one);
    REQUIRE(m.inv);
    CHECK(is_group(Quasigroup(m.mul)));
  }
}

TEST_CASE("implied_bijections") {
  const auto mc = implied_bijections(registry_get("mccune"));
  CHECK(mc.rows);
  CHECK(mc.columns);
  CHECK(mc.inverse);
  const auto none = implied_bijections(registry_get("assoc"));
  CHECK_FALSE(none.rows);
  CHECK_FALSE(none.columns);
  CHECK_FALSE(none.inverse);
  const auto right = implied_bijections(parse_identity("x*y = x"));
  CHECK(right.columns);
  CHECK_FALSE(right.rows);
}

TEST_CASE("canonical_form") {
  const Quasigroup z3(cyclic(3));
  CHECK(canonical_form(z3) == cyclic(3));
  CHECK(canonical_form(Loop(cyclic(3))) == cyclic(3));

  std::vector<Element> p{0, 1, 2, 3, 4};
  const Magma base(nonassociative5().table());
  const auto c = canonical_form(nonassociative5());
  do {
    const auto relabelled = relabel(base, p);
    CHECK(canonical_form(Loop(relabelled.mul)) == c);
    CHECK(canonical_form(Quasigroup(relabelled.mul)) == canonical_form(Quasigroup(base.mul)));
  } while (std::next_permutation(p.begin(), p.end()));

  const auto big = cyclic(9);
  CHECK_THROWS_AS(canonical_form(Quasigroup(big)), NotSupported);
  CHECK_NOTHROW(canonical_form(Loop(direct_product(cyclic(2), cyclic(4)))));

  const Magma with_inv(cyclic(3), std::vector<Element>{0, 2, 1});
  CHECK(canonical_form(relabel(with_inv, {2, 0, 1})).inv == canonical_form(with_inv).inv);
}

TEST_CASE("canonical_form separates exactly the isomorphism classes of order-5 loops") {
  const auto loops = oracle::loops_with_neutral_zero(5);
  const auto reps = oracle::classes(loops, 5);
  std::set<CayleyTable> forms;
  for (const auto& t : reps) forms.insert(canonical_form(Loop(CayleyTable(5, t))));
  CHECK(forms.size() == reps.size());
  for (const auto& t : loops) CHECK(forms.count(canonical_form(Loop(CayleyTable(5, t)))) == 1);
}

TEST_CASE("parse_search_specs") {
  const auto specs = parse_search_specs(
      "# two searches\n"
      "kind=loop\norder=5\nforbid=assoc, comm\nmode=count\ndedup=up_to_iso\n"
      "\n"
      "kind = magma_inv\norder = 3\nrequire = id:x*x' = x'*x\nrequire=mccune\nbudget=1000\n");
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].kind == SearchKind::Loop);
  CHECK(specs[0].order == 5);
  CHECK(specs[0].forbid.size() == 2);
  CHECK(specs[0].mode == SearchMode::Count);
  CHECK(specs[0].dedup == Dedup::UpToIso);
  CHECK(specs[1].kind == SearchKind::MagmaInv);
  CHECK(specs[1].require.size() == 2);
  CHECK(specs[1].node_budget == 1000);

  auto line_of = [](std::string_view text) -> std::size_t {
    try {
      parse_search_specs(text);
    } catch (const TableParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("order=3\nbogus=1\n") == 2);
  CHECK(line_of("order=x\n") == 1);
  CHECK(line_of("kind=loop\norder=3\nrequire=nope\n") == 3);
  CHECK(line_of("kind=loop\nmode=first\n") != 0);
  CHECK(line_of("order 3\n") == 1);
  CHECK_THROWS(parse_search_specs("kind=loop\norder=3\nrequire=mccune\n"));
}

TEST_CASE("enum names round-trip") {
  for (auto k : {SearchKind::Quasigroup, SearchKind::Loop, SearchKind::MagmaInv}) CHECK(parse_kind(to_string(k)) == k);
  for (auto m : {SearchMode::First, SearchMode::All, SearchMode::Count}) CHECK(parse_mode(to_string(m)) == m);
  for (auto d : {Dedup::None, Dedup::UpToIso}) CHECK(parse_dedup(to_string(d)) == d);
  CHECK_THROWS_AS(parse_kind("group"), Error);
}

TEST_CASE("write_model and model_hash") {
  const Magma m(cyclic(3), std::vector<Element>{0, 2, 1}, 0);
  const auto text = write_model(m);
  CHECK(text == "# inv 0 2 1\n# one 0\n3\n0 1 2\n1 2 0\n2 0 1\n");
  CHECK(parse_table(text) == cyclic(3));
  CHECK(model_hash(m) == model_hash(relabel(m, {1, 2, 0})));
  CHECK(model_hash(Magma(cyclic(4))) != model_hash(Magma(klein())));
}
