#include "loopforge/quasigroup.hpp"

#include "loopforge/errors.hpp"
#include "loopforge/mappings.hpp"

#include <algorithm>

namespace loopforge {

namespace {

std::size_t idx(int n, Element x, Element y) { return static_cast<std::size_t>(x) * n + y; }

}  // namespace

Quasigroup::Quasigroup(CayleyTable mul) : mul_(std::move(mul)) {
  const int n = mul_.order();
  std::vector<Element> ld(static_cast<std::size_t>(n) * n, -1), rd(static_cast<std::size_t>(n) * n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const Element v = mul_(x, y);
      // x*y = v  gives  x\v = y
      if (ld[idx(n, x, v)] != -1) throw LatinViolation(LatinViolation::Line::Row, x, v);
      ld[idx(n, x, v)] = y;
    }
  }
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const Element v = mul_(x, y);
      // x*y = v  gives  v/y = x
      if (rd[idx(n, v, y)] != -1) throw LatinViolation(LatinViolation::Line::Column, y, v);
      rd[idx(n, v, y)] = x;
    }
  }
  ldiv_ = CayleyTable(n, std::move(ld));
  rdiv_ = CayleyTable(n, std::move(rd));
}

std::optional<Element> neutral(const Quasigroup& q) {
  const int n = q.order();
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = q.mul(e, x) == x && q.mul(x, e) == x;
    if (ok) return e;
  }
  return std::nullopt;
}

Loop::Loop(Quasigroup q) : q_(std::move(q)) {
  auto e = loopforge::neutral(q_);
  if (!e) throw Error("quasigroup has no neutral element");
  neutral_ = *e;
}

AssociativityVerdict is_associative(const Quasigroup& q) {
  const int n = q.order();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (q.mul(q.mul(x, y), z) != q.mul(x, q.mul(y, z))) return {false, std::array{x, y, z}};
  return {};
}

AssociativityVerdict is_associative_on(const Quasigroup& q, std::span<const Element> elements) {
  for (Element x : elements)
    for (Element y : elements)
      for (Element z : elements)
        if (q.mul(q.mul(x, y), z) != q.mul(x, q.mul(y, z))) return {false, std::array{x, y, z}};
  return {};
}

bool is_commutative(const Quasigroup& q) {
  for (int x = 0; x < q.order(); ++x)
    for (int y = x + 1; y < q.order(); ++y)
      if (q.mul(x, y) != q.mul(y, x)) return false;
  return true;
}

bool SubloopHandle::contains(Element x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

Loop SubloopHandle::as_loop() const {
  const int m = static_cast<int>(elements_.size());
  std::vector<Element> label(static_cast<std::size_t>(parent_->order()), -1);
  for (int i = 0; i < m; ++i) label[static_cast<std::size_t>(elements_[static_cast<std::size_t>(i)])] = i;
  return Loop(CayleyTable::from_function(m, [&](int i, int j) {
    return label[static_cast<std::size_t>(parent_->mul(elements_[static_cast<std::size_t>(i)],
                                                       elements_[static_cast<std::size_t>(j)]))];
  }));
}

SubloopHandle subloop(const Loop& l, std::span<const Element> generators) {
  const int n = l.order();
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  std::vector<Element> members;
  auto add = [&](Element x) {
    if (x < 0 || x >= n) throw Error("generator " + std::to_string(x) + " out of range");
    if (!in[static_cast<std::size_t>(x)]) {
      in[static_cast<std::size_t>(x)] = true;
      members.push_back(x);
    }
  };
  add(l.neutral());
  for (Element g : generators) add(g);

  // Pairs (i, j) with max(i, j) < done have already been combined.
  std::size_t done = 0;
  while (done < members.size()) {
    const std::size_t limit = members.size();
    for (std::size_t i = 0; i < limit; ++i) {
      for (std::size_t j = (i < done ? done : 0); j < limit; ++j) {
        const Element a = members[i], b = members[j];
        add(l.mul(a, b));
        add(l.ldiv(a, b));
        add(l.rdiv(a, b));
      }
    }
    done = limit;
  }
  std::sort(members.begin(), members.end());
  return SubloopHandle(l, std::move(members));
}

bool is_closed_subloop(const Loop& l, std::span<const Element> sorted_elements) {
  auto in = [&](Element x) {
    return std::binary_search(sorted_elements.begin(), sorted_elements.end(), x);
  };
  if (!in(l.neutral())) return false;
  for (Element a : sorted_elements)
    for (Element b : sorted_elements)
      if (!in(l.mul(a, b)) || !in(l.ldiv(a, b)) || !in(l.rdiv(a, b))) return false;
  return true;
}

bool associativity_rank_holds(const Loop& l, int k) {
  const int n = l.order();
  if (k == 1) {
    for (int x = 0; x < n; ++x) {
      auto s = subloop(l, {x});
      if (!is_associative_on(l.quasigroup(), s.elements())) return false;
    }
    return true;
  }
  if (k == 2) {
    for (int x = 0; x < n; ++x)
      for (int y = x; y < n; ++y) {
        auto s = subloop(l, {x, y});
        if (!is_associative_on(l.quasigroup(), s.elements())) return false;
      }
    return true;
  }
  throw Error("associativity rank must be 1 or 2");
}

bool is_normal(const Loop& l, const SubloopHandle& s) {
  for (const auto& g : inner_generators(l))
    for (Element x : s.elements())
      if (!s.contains(g(x))) return false;
  return true;
}

FactorLoop factor(const Loop& l, const SubloopHandle& s) {
  if (!is_normal(l, s)) throw NotNormal("subloop is not normal");
  const int n = l.order();
  const int k = static_cast<int>(s.size());
  if (n % k != 0) throw InvariantViolation("subloop order does not divide loop order");

  std::vector<Element> coset_of(static_cast<std::size_t>(n), -1);
  std::vector<Element> rep;
  for (int x = 0; x < n; ++x) {
    if (coset_of[static_cast<std::size_t>(x)] != -1) continue;
    const Element label = static_cast<Element>(rep.size());
    rep.push_back(x);
    for (Element a : s.elements()) {
      const Element y = l.mul(x, a);
      if (coset_of[static_cast<std::size_t>(y)] != -1)
        throw InvariantViolation("cosets of a normal subloop overlap");
      coset_of[static_cast<std::size_t>(y)] = label;
    }
  }
  const int m = static_cast<int>(rep.size());
  if (m * k != n) throw InvariantViolation("cosets do not partition the loop evenly");

  auto quotient = CayleyTable::from_function(m, [&](int i, int j) {
    return coset_of[static_cast<std::size_t>(
        l.mul(rep[static_cast<std::size_t>(i)], rep[static_cast<std::size_t>(j)]))];
  });
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (coset_of[static_cast<std::size_t>(l.mul(x, y))] !=
          quotient(coset_of[static_cast<std::size_t>(x)], coset_of[static_cast<std::size_t>(y)]))
        throw InvariantViolation("coset multiplication is not well defined");
  return {Loop(std::move(quotient)), std::move(coset_of)};
}

Element power(const Loop& l, Element x, int k) {
  Element acc = l.neutral();
  for (int i = 0; i < k; ++i) acc = l.mul(acc, x);
  return acc;
}

std::optional<int> abelian_exponent(const Loop& l) {
  if (!is_associative(l.quasigroup()) || !is_commutative(l.quasigroup())) return std::nullopt;
  const int n = l.order();
  for (int k = 1; k <= n; ++k) {
    bool all = true;
    for (int x = 0; x < n && all; ++x) all = power(l, x, k) == l.neutral();
    if (all) return k;
  }
  throw InvariantViolation("no exponent found for a finite abelian group");
}

bool is_group(const Quasigroup& q) {
  if (!is_associative(q)) return false;
  const auto e = neutral(q);
  if (!e) return false;
  const int n = q.order();
  for (int x = 0; x < n; ++x) {
    bool has_inverse = false;
    for (int y = 0; y < n && !has_inverse; ++y) has_inverse = q.mul(x, y) == *e && q.mul(y, x) == *e;
    if (!has_inverse) return false;
  }
  return true;
}

}  // namespace loopforge
