#pragma once

#include "loopforge/table.hpp"

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace loopforge {

/// A bijection of {0..n-1}, stored as its image array.
///
/// Permutations act on the right: `p * q` applies p first and then q, so
/// (p * q)(i) == q(p(i)). All composition in the library follows this rule.
class Permutation {
public:
  Permutation() = default;
  /// Throws Error if `image` is not a bijection.
  explicit Permutation(std::vector<Element> image);

  static Permutation identity(int degree);

  int degree() const { return static_cast<int>(image_.size()); }
  Element operator()(Element i) const { return image_[static_cast<std::size_t>(i)]; }
  std::span<const Element> image() const { return image_; }

  bool is_identity() const;
  Permutation inverse() const;

  /// Right action: apply *this, then `next`.
  friend Permutation operator*(const Permutation& first, const Permutation& next);

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
  std::vector<Element> image_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

/// A permutation group held as an explicit, sorted element list.
class PermGroup {
public:
  PermGroup(int degree, std::vector<Permutation> generators, std::vector<Permutation> sorted_elements)
      : degree_(degree), generators_(std::move(generators)), elements_(std::move(sorted_elements)) {}

  int degree() const { return degree_; }
  std::size_t size() const { return elements_.size(); }
  std::span<const Permutation> generators() const { return generators_; }
  /// Sorted by image array.
  std::span<const Permutation> elements() const { return elements_; }
  bool contains(const Permutation& p) const;

private:
  int degree_;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
};

/// Closure of `generators` under composition, breadth first. Throws CapExceeded
/// once more than `cap` elements have been found. `degree` is only consulted when
/// `generators` is empty.
PermGroup close_group(std::span<const Permutation> generators, std::size_t cap, int degree = 0);

}  // namespace loopforge
