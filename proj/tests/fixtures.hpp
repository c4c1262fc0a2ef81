#pragma once

#include "loopforge/quasigroup.hpp"
#include "loopforge/search.hpp"
#include "loopforge/term.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

namespace fixtures {

using namespace loopforge;

inline CayleyTable cyclic(int n) {
  return CayleyTable::from_function(n, [n](int x, int y) { return (x + y) % n; });
}

/// x*y = (x - y) mod n
inline CayleyTable subtraction(int n) {
  return CayleyTable::from_function(n, [n](int x, int y) { return ((x - y) % n + n) % n; });
}

inline CayleyTable klein() { return CayleyTable::from_function(4, [](int x, int y) { return x ^ y; }); }

/// Symmetric group on three points; element i is the i-th permutation in
/// lexicographic order, so 0 is the identity and 1 = (1 2) a transposition.
inline CayleyTable symmetric3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto index = [&](const std::array<int, 3>& q) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };
  return CayleyTable::from_function(6, [&](int x, int y) {
    std::array<int, 3> r{};
    for (int i = 0; i < 3; ++i) r[i] = perms[y][perms[x][i]];  // x first, then y
    return index(r);
  });
}

inline CayleyTable direct_product(const CayleyTable& a, const CayleyTable& b) {
  const int m = b.order();
  return CayleyTable::from_function(a.order() * m, [&](int x, int y) {
    return a(x / m, y / m) * m + b(x % m, y % m);
  });
}

/// The nonassociative conjugacy-closed loop of order 6.
inline CayleyTable cc6() {
  return CayleyTable(6, {0, 1, 2, 3, 4, 5,  //
                         1, 2, 0, 4, 5, 3,  //
                         2, 0, 1, 5, 3, 4,  //
                         3, 5, 4, 1, 0, 2,  //
                         4, 3, 5, 2, 1, 0,  //
                         5, 4, 3, 0, 2, 1});
}

/// The first nonassociative loop of order 5 reported by the search engine.
inline const Loop& nonassociative5() {
  static const Loop l = [] {
    SearchSpec spec;
    spec.kind = SearchKind::Loop;
    spec.order = 5;
    spec.forbid = {registry_get("assoc")};
    spec.mode = SearchMode::First;
    return Loop(search(spec).models.at(0).mul);
  }();
  return l;
}

inline oracle::Table raw(const CayleyTable& t) { return {t.entries().begin(), t.entries().end()}; }

inline oracle::Model oracle_model(const Magma& m) {
  oracle::Model o{m.order(), raw(m.mul), {}, -1};
  if (m.inv) o.inv = *m.inv;
  if (m.one) o.one = *m.one;
  return o;
}

/// Every loop of order n up to isomorphism, from the library search.
inline std::vector<Loop> loop_classes(int n) {
  SearchSpec spec;
  spec.kind = SearchKind::Loop;
  spec.order = n;
  spec.dedup = Dedup::UpToIso;
  std::vector<Loop> out;
  for (const auto& m : search(spec).models) out.emplace_back(m.mul);
  return out;
}

/// A small corpus of loops: all classes of order <= 5, plus groups and the CC-loop of order 6.
inline std::vector<Loop> loop_corpus() {
  std::vector<Loop> out;
  for (int n = 1; n <= 5; ++n)
    for (auto& l : loop_classes(n)) out.push_back(std::move(l));
  out.emplace_back(cyclic(6));
  out.emplace_back(symmetric3());
  out.emplace_back(cc6());
  out.emplace_back(klein());
  out.emplace_back(direct_product(cyclic(2), cyclic(4)));
  return out;
}

}  // namespace fixtures
