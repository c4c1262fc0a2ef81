#pragma once

#include "loopforge/permutation.hpp"
#include "loopforge/quasigroup.hpp"

#include <optional>
#include <utility>

namespace loopforge {

/// The loop (Q, o) with x o y = (x/a) * (b\y). Its neutral element is b*a.
Loop principal_isotope(const Loop& l, Element a, Element b);

/// Some p with p(x*y) = p(x)*p(y), mapping q1 onto q2, or nullopt.
/// Backtracks over images with closure propagation, pruned by per-element
/// invariants. Any returned map has been re-verified on all pairs.
std::optional<Permutation> isomorphism(const Quasigroup& q1, const Quasigroup& q2);

/// The lexicographically least (a, b) whose principal isotope is not isomorphic
/// to `l`, or nullopt when `l` is a G-loop (with respect to principal isotopes).
std::optional<std::pair<Element, Element>> g_loop_counterexample(const Loop& l);

inline bool is_G_loop(const Loop& l) { return !g_loop_counterexample(l); }

}  // namespace loopforge
