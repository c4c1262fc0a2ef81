#pragma once

#include "loopforge/table.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace loopforge {

/// A finite quasigroup: a Latin multiplication table together with its left
/// division x\y and right division x/y tables.
class Quasigroup {
public:
  /// Verifies the Latin property and derives both divisions.
  /// Throws LatinViolation naming the first repeated value (rows checked before columns).
  explicit Quasigroup(CayleyTable mul);

  int order() const { return mul_.order(); }
  Element mul(Element x, Element y) const { return mul_(x, y); }
  /// The unique z with x*z = y.
  Element ldiv(Element x, Element y) const { return ldiv_(x, y); }
  /// The unique z with z*y = x.
  Element rdiv(Element x, Element y) const { return rdiv_(x, y); }

  const CayleyTable& table() const { return mul_; }
  const CayleyTable& ldiv_table() const { return ldiv_; }
  const CayleyTable& rdiv_table() const { return rdiv_; }

  friend bool operator==(const Quasigroup& a, const Quasigroup& b) { return a.mul_ == b.mul_; }

private:
  CayleyTable mul_;
  CayleyTable ldiv_;
  CayleyTable rdiv_;
};

inline Quasigroup as_quasigroup(CayleyTable t) { return Quasigroup(std::move(t)); }

/// The two-sided neutral element, if one exists. It is unique when it exists.
std::optional<Element> neutral(const Quasigroup& q);

/// A quasigroup with a distinguished two-sided neutral element.
class Loop {
public:
  /// Throws Error when `q` has no neutral element.
  explicit Loop(Quasigroup q);
  explicit Loop(CayleyTable t) : Loop(Quasigroup(std::move(t))) {}

  int order() const { return q_.order(); }
  Element neutral() const { return neutral_; }
  Element mul(Element x, Element y) const { return q_.mul(x, y); }
  Element ldiv(Element x, Element y) const { return q_.ldiv(x, y); }
  Element rdiv(Element x, Element y) const { return q_.rdiv(x, y); }

  const Quasigroup& quasigroup() const { return q_; }
  const CayleyTable& table() const { return q_.table(); }

  friend bool operator==(const Loop& a, const Loop& b) { return a.q_ == b.q_; }

private:
  Quasigroup q_;
  Element neutral_;
};

/// Verdict of a universally quantified check; `witness` holds the
/// lexicographically least counterexample on failure.
template <std::size_t Arity>
struct Verdict {
  bool holds = true;
  std::optional<std::array<Element, Arity>> witness;

  explicit operator bool() const { return holds; }
};

using AssociativityVerdict = Verdict<3>;

AssociativityVerdict is_associative(const Quasigroup& q);
/// Associativity of the operation restricted to `elements` (which must be closed).
AssociativityVerdict is_associative_on(const Quasigroup& q, std::span<const Element> elements);

bool is_commutative(const Quasigroup& q);

/// A subset of a parent loop closed under *, \ and /, containing the neutral element.
/// The parent must outlive the handle.
class SubloopHandle {
public:
  SubloopHandle(const Loop& parent, std::vector<Element> sorted_elements)
      : parent_(&parent), elements_(std::move(sorted_elements)) {}

  const Loop& parent() const { return *parent_; }
  /// Sorted ascending.
  std::span<const Element> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(Element x) const;

  /// The subloop as a standalone loop on {0..size-1}, labelled in sorted order.
  Loop as_loop() const;

  friend bool operator==(const SubloopHandle& a, const SubloopHandle& b) {
    return a.parent_ == b.parent_ && a.elements_ == b.elements_;
  }

private:
  const Loop* parent_;
  std::vector<Element> elements_;
};

/// Least subloop containing `generators` and the neutral element.
SubloopHandle subloop(const Loop& l, std::span<const Element> generators);
inline SubloopHandle subloop(const Loop& l, std::initializer_list<Element> generators) {
  return subloop(l, std::span<const Element>(generators.begin(), generators.size()));
}

/// Checks closure under *, \, / and presence of the neutral element; used to
/// validate sets computed by other means (nuclei, for instance).
bool is_closed_subloop(const Loop& l, std::span<const Element> sorted_elements);

/// k = 1: power-associative (every 1-generated subloop is a group).
/// k = 2: diassociative (every 2-generated subloop is a group).
bool associativity_rank_holds(const Loop& l, int k);

/// Normality: `s` is invariant under every generator of the inner mapping group.
bool is_normal(const Loop& l, const SubloopHandle& s);

struct FactorLoop {
  Loop quotient;
  /// Parent element -> coset index in the quotient.
  std::vector<Element> coset_of;
};

/// Quotient by a normal subloop. Cosets are numbered by their least element.
/// Throws NotNormal when `s` is not normal.
FactorLoop factor(const Loop& l, const SubloopHandle& s);

/// x^k with left bracketing x^(k) = x^(k-1) * x, x^0 = e.
Element power(const Loop& l, Element x, int k);

/// Least k >= 1 with x^k = e for all x when `l` is an abelian group, otherwise nullopt.
std::optional<int> abelian_exponent(const Loop& l);

/// Associative and has inverses (the latter always holds in a loop via divisions,
/// but is checked directly: for every x some y has x*y = y*x = e).
bool is_group(const Quasigroup& q);

}  // namespace loopforge
