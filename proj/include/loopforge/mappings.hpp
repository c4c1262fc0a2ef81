#pragma once

#include "loopforge/permutation.hpp"
#include "loopforge/quasigroup.hpp"

#include <cstddef>
#include <vector>

namespace loopforge {

/// Default element budget for permutation group closures.
inline constexpr std::size_t kDefaultGroupCap = 1'000'000;

struct Translations {
  Permutation left;   ///< y -> x*y
  Permutation right;  ///< y -> y*x
};

Translations translations(const Quasigroup& q, Element x);

/// All left translations, indexed by element.
std::vector<Permutation> left_translations(const Quasigroup& q);
std::vector<Permutation> right_translations(const Quasigroup& q);

/// Generators of the inner mapping group, in this order and with duplicates kept:
///   R_x L_x^-1            for every x,
///   R_x R_y R_{xy}^-1     for every (x, y) in row-major order,
///   L_x L_y L_{yx}^-1     for every (x, y) in row-major order.
/// That is 3n^2 + n maps, each fixing the neutral element.
std::vector<Permutation> inner_generators(const Loop& l);

/// Mlt(l): the group generated by all translations.
PermGroup multiplication_group(const Loop& l, std::size_t cap = kDefaultGroupCap);

/// Inn(l): the closure of inner_generators(l).
PermGroup inner_mapping_group(const Loop& l, std::size_t cap = kDefaultGroupCap);

bool is_automorphism(const Quasigroup& q, const Permutation& p);

/// Every inner mapping is an automorphism. Automorphisms form a group, so
/// checking the generators decides the whole of Inn(l).
bool is_A_loop(const Loop& l);

/// Conjugacy closed: for all x, y the conjugates L_x^-1 L_y L_x and R_x^-1 R_y R_x
/// are again a left (respectively right) translation.
bool is_CC(const Loop& l);

enum class NucleusPart { Left, Middle, Right, Full };

/// LEFT   = {a : (a*x)*y = a*(x*y) for all x, y}
/// MIDDLE = {a : (x*a)*y = x*(a*y) for all x, y}
/// RIGHT  = {a : (x*y)*a = x*(y*a) for all x, y}
/// FULL   = intersection of the three.
/// The result is validated as a subloop; a failure throws InvariantViolation.
SubloopHandle nucleus(const Loop& l, NucleusPart part);

}  // namespace loopforge
