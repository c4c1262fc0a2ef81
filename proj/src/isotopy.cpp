#include "loopforge/isotopy.hpp"

#include "loopforge/errors.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace loopforge {

Loop principal_isotope(const Loop& l, Element a, Element b) {
  const int n = l.order();
  if (a < 0 || a >= n || b < 0 || b >= n) throw Error("isotope parameter out of range");
  Loop iso(CayleyTable::from_function(n, [&](int x, int y) { return l.mul(l.rdiv(x, a), l.ldiv(b, y)); }));
  if (iso.neutral() != l.mul(b, a)) throw InvariantViolation("isotope neutral element is not b*a");
  return iso;
}

namespace {

using Signature = std::array<int, 7>;

// Per-element data preserved by every isomorphism.
std::vector<Signature> signatures(const Quasigroup& q) {
  const int n = q.order();
  std::vector<Signature> out(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    Signature s{};
    s[0] = q.mul(x, x) == x;
    // left powers x, x*x, (x*x)*x, ... : index of first repeat and its cycle length
    std::vector<int> seen_at(static_cast<std::size_t>(n), -1);
    Element cur = x;
    int step = 0;
    while (seen_at[static_cast<std::size_t>(cur)] == -1) {
      seen_at[static_cast<std::size_t>(cur)] = step++;
      cur = q.mul(cur, x);
    }
    s[1] = seen_at[static_cast<std::size_t>(cur)];
    s[2] = step - s[1];
    for (int y = 0; y < n; ++y) {
      s[3] += q.mul(x, y) == q.mul(y, x);
      s[4] += q.mul(y, y) == x;
      s[5] += q.mul(x, y) == y;
      s[6] += q.mul(y, x) == y;
    }
    out[static_cast<std::size_t>(x)] = s;
  }
  return out;
}

class IsoSearch {
public:
  IsoSearch(const Quasigroup& a, const Quasigroup& b)
      : a_(a), b_(b), n_(a.order()), sig_a_(signatures(a)), sig_b_(signatures(b)),
        img_(static_cast<std::size_t>(n_), -1), pre_(static_cast<std::size_t>(n_), -1) {}

  std::optional<Permutation> run() {
    auto sa = sig_a_, sb = sig_b_;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;

    // Branch on elements with the rarest signature first; ties by index.
    order_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) order_[static_cast<std::size_t>(i)] = i;
    auto rarity = [&](int x) {
      return std::count(sig_a_.begin(), sig_a_.end(), sig_a_[static_cast<std::size_t>(x)]);
    };
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int x, int y) { return rarity(x) < rarity(y); });

    if (!search(0)) return std::nullopt;
    Permutation p(img_);
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        if (p(a_.mul(x, y)) != b_.mul(p(x), p(y)))
          throw InvariantViolation("isomorphism search produced an invalid map");
    return p;
  }

private:
  bool search(std::size_t k) {
    while (k < order_.size() && img_[static_cast<std::size_t>(order_[k])] != -1) ++k;
    if (k == order_.size()) return true;
    const int x = order_[k];
    for (int u = 0; u < n_; ++u) {
      if (pre_[static_cast<std::size_t>(u)] != -1) continue;
      if (sig_b_[static_cast<std::size_t>(u)] != sig_a_[static_cast<std::size_t>(x)]) continue;
      const std::size_t mark = trail_.size();
      if (assign(x, u) && search(k + 1)) return true;
      undo(mark);
    }
    return false;
  }

  // Sets img(x) = u and closes under p(s*t) = p(s)*p(t).
  bool assign(int x, int u) {
    std::vector<int> queue;
    if (!set(x, u, queue)) return false;
    while (!queue.empty()) {
      const int s = queue.back();
      queue.pop_back();
      for (std::size_t i = 0; i < trail_.size(); ++i) {
        const int t = trail_[i];
        if (!imply(a_.mul(s, t), b_.mul(img_[static_cast<std::size_t>(s)], img_[static_cast<std::size_t>(t)]), queue))
          return false;
        if (!imply(a_.mul(t, s), b_.mul(img_[static_cast<std::size_t>(t)], img_[static_cast<std::size_t>(s)]), queue))
          return false;
      }
    }
    return true;
  }

  bool imply(int x, int u, std::vector<int>& queue) {
    const int cur = img_[static_cast<std::size_t>(x)];
    if (cur != -1) return cur == u;
    return set(x, u, queue);
  }

  bool set(int x, int u, std::vector<int>& queue) {
    if (pre_[static_cast<std::size_t>(u)] != -1) return false;
    if (sig_a_[static_cast<std::size_t>(x)] != sig_b_[static_cast<std::size_t>(u)]) return false;
    img_[static_cast<std::size_t>(x)] = u;
    pre_[static_cast<std::size_t>(u)] = x;
    trail_.push_back(x);
    queue.push_back(x);
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const int x = trail_.back();
      trail_.pop_back();
      pre_[static_cast<std::size_t>(img_[static_cast<std::size_t>(x)])] = -1;
      img_[static_cast<std::size_t>(x)] = -1;
    }
  }

  const Quasigroup& a_;
  const Quasigroup& b_;
  int n_;
  std::vector<Signature> sig_a_, sig_b_;
  std::vector<int> img_, pre_;
  std::vector<int> order_;
  std::vector<int> trail_;
};

}  // namespace

std::optional<Permutation> isomorphism(const Quasigroup& q1, const Quasigroup& q2) {
  if (q1.order() != q2.order()) return std::nullopt;
  return IsoSearch(q1, q2).run();
}

std::optional<std::pair<Element, Element>> g_loop_counterexample(const Loop& l) {
  const int n = l.order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!isomorphism(l.quasigroup(), principal_isotope(l, a, b).quasigroup()))
        return std::pair{a, b};
  return std::nullopt;
}

}  // namespace loopforge
