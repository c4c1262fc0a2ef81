#include "fixtures.hpp"
#include "loopforge/errors.hpp"
#include "loopforge/mappings.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace loopforge;
using namespace fixtures;

TEST_CASE("parse_table reads the .tbl format") {
  const auto z3 = parse_table("3\n0 1 2\n1 2 0\n2 0 1");
  CHECK(z3 == cyclic(3));

  const auto raw = parse_table("2\n0 0\n1 1");
  CHECK(raw.order() == 2);
  CHECK(raw(0, 1) == 0);

  const auto commented = parse_table("# a comment\n#another\n1\n0\n");
  CHECK(commented.order() == 1);
}

TEST_CASE("parse_table reports errors with line numbers") {
  try {
    parse_table("2\n0 3\n1 0");
    FAIL("expected an error");
  } catch (const TableParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_table("2\n0 x\n1 0"), TableParseError);
  CHECK_THROWS_AS(parse_table("3\n0 1 2\n1 2 0"), TableParseError);
  CHECK_THROWS_AS(parse_table("2\n0 1 1\n1 0"), TableParseError);
  CHECK_THROWS_AS(parse_table(""), TableParseError);
}

TEST_CASE("write_table round-trips") {
  const auto t = symmetric3();
  const auto text = write_table(t);
  CHECK(text.back() == '\n');
  CHECK(text.find("  ") == std::string::npos);
  CHECK(parse_table(text) == t);
  CHECK(write_table(cyclic(2)) == "2\n0 1\n1 0\n");
  std::ostringstream os;
  os << t;
  CHECK(os.str() == text);
}

TEST_CASE("CayleyTable rejects bad entries") {
  CHECK_THROWS_AS(CayleyTable(2, {0, 1, 2, 0}), Error);
  CHECK_THROWS_AS(CayleyTable(2, {0, 1, 0}), Error);
  CHECK(cyclic(2) < cyclic(3));
  CHECK(table_hash(cyclic(4)) == table_hash(cyclic(4)));
  CHECK(table_hash(cyclic(4)) != table_hash(klein()));
}

TEST_CASE("as_quasigroup computes divisions") {
  const Quasigroup z3(cyclic(3));
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) CHECK(z3.ldiv(x, y) == ((y - x) % 3 + 3) % 3);

  try {
    Quasigroup bad(parse_table("2\n0 0\n1 1"));
    FAIL("expected LatinViolation");
  } catch (const LatinViolation& e) {
    CHECK(e.line() == LatinViolation::Line::Row);
    CHECK(e.index() == 0);
    CHECK(e.value() == 0);
  }
  try {
    Quasigroup bad(parse_table("2\n0 1\n0 1"));
    FAIL("expected LatinViolation");
  } catch (const LatinViolation& e) {
    CHECK(e.line() == LatinViolation::Line::Column);
  }
  CHECK_NOTHROW(Quasigroup(nonassociative5().table()));
}

TEST_CASE("division axioms hold on every quasigroup of order <= 4") {
  for (int n = 1; n <= 4; ++n)
    oracle::each_latin_square(n, [n](const oracle::Table& t) {
      const Quasigroup q(CayleyTable(n, t));
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          REQUIRE(q.ldiv(x, q.mul(x, y)) == y);
          REQUIRE(q.mul(x, q.ldiv(x, y)) == y);
          REQUIRE(q.rdiv(q.mul(x, y), y) == x);
          REQUIRE(q.mul(q.rdiv(x, y), y) == x);
        }
    });
}

TEST_CASE("neutral") {
  CHECK(neutral(Quasigroup(cyclic(3))) == 0);
  CHECK_FALSE(neutral(Quasigroup(CayleyTable::from_function(3, [](int x, int y) { return ((y - x) % 3 + 3) % 3; }))));
  // Neutral element need not be 0 in input tables.
  const auto shifted = CayleyTable::from_function(3, [](int x, int y) { return (x + y + 2) % 3; });
  CHECK(neutral(Quasigroup(shifted)) == 1);
  CHECK(Loop(shifted).neutral() == 1);
  CHECK_THROWS_AS(Loop(subtraction(3)), Error);
}

TEST_CASE("neutral agrees with a direct scan on all quasigroups of order <= 4") {
  for (int n = 1; n <= 4; ++n)
    oracle::each_latin_square(n, [n](const oracle::Table& t) {
      const auto e = neutral(Quasigroup(CayleyTable(n, t)));
      REQUIRE(e == oracle::identity_element(t, n));
    });
}

TEST_CASE("is_associative returns the least witness") {
  CHECK(is_associative(Quasigroup(cyclic(3))).holds);
  const auto v = is_associative(Quasigroup(subtraction(3)));
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK(*v.witness == std::array<Element, 3>{0, 0, 1});
  CHECK_FALSE(is_associative(nonassociative5().quasigroup()));

  // Exhaustive comparison with a scan in lexicographic order.
  oracle::each_latin_square(3, [](const oracle::Table& t) {
    const Quasigroup q(CayleyTable(3, t));
    const auto verdict = is_associative(q);
    std::optional<std::array<Element, 3>> least;
    for (int x = 0; x < 3 && !least; ++x)
      for (int y = 0; y < 3 && !least; ++y)
        for (int z = 0; z < 3 && !least; ++z)
          if (t[(t[x * 3 + y]) * 3 + z] != t[x * 3 + t[y * 3 + z]]) least = std::array<Element, 3>{x, y, z};
    REQUIRE(verdict.holds == !least.has_value());
    REQUIRE(verdict.witness == least);
  });
}

TEST_CASE("subloop") {
  const Loop z6(cyclic(6));
  const std::vector<Element> evens{0, 2, 4};
  CHECK(std::ranges::equal(subloop(z6, {2}).elements(), evens));
  CHECK(subloop(z6, {}).size() == 1);
  CHECK(subloop(z6, {}).contains(0));
  const Loop k(klein());
  CHECK(subloop(k, {1, 2}).size() == 4);
  CHECK(subloop(Loop(symmetric3()), {1}).size() == 2);
  CHECK(subloop(z6, {2}).as_loop().table() == cyclic(3));
}

TEST_CASE("subloop is a fixpoint and matches an independent closure") {
  for (const auto& l : loop_corpus()) {
    const auto raw_table = raw(l.table());
    for (Element a = 0; a < l.order(); ++a)
      for (Element b = a; b < l.order(); ++b) {
        const auto s = subloop(l, {a, b});
        const std::vector<Element> elems(s.elements().begin(), s.elements().end());
        CHECK(subloop(l, std::span<const Element>(elems)) == s);
        CHECK(is_closed_subloop(l, elems));
        const auto expected = oracle::generated(raw_table, l.order(), {a, b});
        CHECK(std::ranges::equal(elems, expected));
      }
  }
}

TEST_CASE("associativity_rank_holds") {
  for (const auto& t : {cyclic(5), klein(), symmetric3()}) {
    const Loop g(t);
    CHECK(associativity_rank_holds(g, 1));
    CHECK(associativity_rank_holds(g, 2));
  }
  CHECK_FALSE(associativity_rank_holds(nonassociative5(), 2));
  CHECK_FALSE(associativity_rank_holds(Loop(cc6()), 1));
  CHECK_THROWS_AS(associativity_rank_holds(Loop(cyclic(2)), 3), Error);

  // Smallest loop in which some x has (x*x)*x != x*(x*x).
  SearchSpec spec;
  spec.kind = SearchKind::Loop;
  spec.mode = SearchMode::First;
  spec.forbid = {parse_identity("(x*x)*x = x*(x*x)")};
  std::optional<Loop> found;
  for (int n = 1; n <= 6 && !found; ++n) {
    spec.order = n;
    const auto res = search(spec);
    if (!res.models.empty()) found.emplace(res.models.front().mul);
  }
  REQUIRE(found);
  CHECK(found->order() == 5);
  CHECK_FALSE(associativity_rank_holds(*found, 1));
}

TEST_CASE("is_normal") {
  const Loop z6(cyclic(6));
  CHECK(is_normal(z6, subloop(z6, {2})));
  CHECK(is_normal(z6, subloop(z6, {3})));
  const Loop s3(symmetric3());
  CHECK_FALSE(is_normal(s3, subloop(s3, {1})));
  // the rotations form a normal subgroup
  CHECK(subloop(s3, {3}).size() == 3);
  CHECK(is_normal(s3, subloop(s3, {3})));
}

TEST_CASE("factor") {
  const Loop z4(cyclic(4));
  const auto f = factor(z4, subloop(z4, {2}));
  CHECK(f.quotient.table() == cyclic(2));
  CHECK(f.coset_of == std::vector<Element>{0, 1, 0, 1});

  const Loop s3(symmetric3());
  CHECK_THROWS_AS(factor(s3, subloop(s3, {1})), NotNormal);

  for (const auto& l : loop_corpus()) {
    const auto id = factor(l, subloop(l, {}));
    CHECK(id.quotient.order() == l.order());
    CHECK(id.quotient.table() == l.table());
  }
}

TEST_CASE("factor is a homomorphism onto the quotient") {
  for (const auto& l : loop_corpus())
    for (Element g = 0; g < l.order(); ++g) {
      const auto s = subloop(l, {g});
      if (!is_normal(l, s)) continue;
      const auto f = factor(l, s);
      CHECK(f.quotient.order() * static_cast<int>(s.size()) == l.order());
      std::set<Element> image(f.coset_of.begin(), f.coset_of.end());
      CHECK(static_cast<int>(image.size()) == f.quotient.order());
      for (Element x = 0; x < l.order(); ++x)
        for (Element y = 0; y < l.order(); ++y)
          REQUIRE(f.coset_of[static_cast<std::size_t>(l.mul(x, y))] ==
                  f.quotient.mul(f.coset_of[static_cast<std::size_t>(x)], f.coset_of[static_cast<std::size_t>(y)]));
    }
}

TEST_CASE("power and abelian_exponent") {
  const Loop z6(cyclic(6));
  CHECK(power(z6, 1, 0) == 0);
  CHECK(power(z6, 1, 4) == 4);
  CHECK(abelian_exponent(z6) == 6);
  CHECK(abelian_exponent(Loop(klein())) == 2);
  CHECK(abelian_exponent(Loop(cyclic(1))) == 1);
  CHECK_FALSE(abelian_exponent(Loop(symmetric3())));
  CHECK_FALSE(abelian_exponent(nonassociative5()));
}

TEST_CASE("is_group") {
  CHECK(is_group(Quasigroup(cyclic(7))));
  CHECK(is_group(Quasigroup(symmetric3())));
  CHECK_FALSE(is_group(Quasigroup(subtraction(3))));
  CHECK_FALSE(is_group(nonassociative5().quasigroup()));
}

TEST_CASE("associative quasigroups of order <= 5 are groups") {
  for (int n = 1; n <= 4; ++n)
    oracle::each_latin_square(n, [n](const oracle::Table& t) {
      if (!oracle::associative(t, n)) return;
      const Quasigroup q(CayleyTable(n, t));
      REQUIRE(neutral(q));
      REQUIRE(is_group(q));
    });
}

TEST_CASE("is_commutative and is_associative_on") {
  CHECK(is_commutative(Quasigroup(klein())));
  CHECK_FALSE(is_commutative(Quasigroup(symmetric3())));
  const Loop l(cc6());
  const auto n = nucleus(l, NucleusPart::Full);
  CHECK(is_associative_on(l.quasigroup(), n.elements()).holds);
  const std::vector<Element> all{0, 1, 2, 3, 4, 5};
  CHECK_FALSE(is_associative_on(l.quasigroup(), all).holds);
}
