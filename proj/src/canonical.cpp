#include "loopforge/errors.hpp"
#include "loopforge/search.hpp"

#include <algorithm>
#include <numeric>

namespace loopforge {

namespace {

// Minimizes the relabelled (table, inverse table) over every ordering `order`
// of the elements, where order[i] is the old element that receives label i.
// The first `pinned_prefix` entries of `order` stay fixed.
Magma canonical_impl(const Magma& m, std::size_t pinned_prefix, std::vector<Element> order) {
  const int n = m.order();
  if (n > kMaxCanonicalOrder)
    throw NotSupported("canonical form requires order <= " + std::to_string(kMaxCanonicalOrder));
  const auto un = static_cast<std::size_t>(n);
  const auto& T = m.mul;
  const bool has_inv = m.inv.has_value();
  const std::size_t len = un * un + (has_inv ? un : 0) + (m.one ? 1 : 0);

  std::vector<Element> best(len, n), cur(len);
  std::vector<Element> label(un);

  // Entries of the relabelled structure, in comparison order.
  auto entry = [&](std::size_t k) -> Element {
    if (k < un * un) {
      const auto i = k / un, j = k % un;
      return label[static_cast<std::size_t>(T(order[i], order[j]))];
    }
    k -= un * un;
    if (has_inv && k < un) return label[static_cast<std::size_t>((*m.inv)[static_cast<std::size_t>(order[k])])];
    return label[static_cast<std::size_t>(*m.one)];
  };

  do {
    for (std::size_t i = 0; i < un; ++i) label[static_cast<std::size_t>(order[i])] = static_cast<Element>(i);
    std::size_t k = 0;
    Element e = 0;
    for (; k < len; ++k) {
      e = entry(k);
      if (e != best[k]) break;
    }
    if (k == len || e > best[k]) continue;
    // strictly smaller from position k on
    for (std::size_t i = 0; i < k; ++i) cur[i] = best[i];
    cur[k] = e;
    for (std::size_t i = k + 1; i < len; ++i) cur[i] = entry(i);
    best.swap(cur);
  } while (std::next_permutation(order.begin() + static_cast<std::ptrdiff_t>(pinned_prefix), order.end()));

  std::vector<Element> mul(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(un * un));
  std::optional<std::vector<Element>> inv;
  std::size_t pos = un * un;
  if (has_inv) {
    inv.emplace(best.begin() + static_cast<std::ptrdiff_t>(pos),
                best.begin() + static_cast<std::ptrdiff_t>(pos + un));
    pos += un;
  }
  std::optional<Element> one;
  if (m.one) one = best[pos];
  return Magma(CayleyTable(n, std::move(mul)), std::move(inv), one);
}

std::vector<Element> iota(int n) {
  std::vector<Element> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

CayleyTable canonical_form(const Quasigroup& q) {
  return canonical_impl(Magma(q.table()), 0, iota(q.order())).mul;
}

CayleyTable canonical_form(const Loop& l) {
  auto order = iota(l.order());
  std::rotate(order.begin(), order.begin() + l.neutral(), order.begin() + l.neutral() + 1);
  return canonical_impl(Magma(l.table()), 1, std::move(order)).mul;
}

Magma canonical_form(const Magma& m) { return canonical_impl(m, 0, iota(m.order())); }

}  // namespace loopforge
