#include "loopforge/permutation.hpp"

#include "loopforge/errors.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace loopforge {

Permutation::Permutation(std::vector<Element> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (Element v : image_) {
    if (v < 0 || static_cast<std::size_t>(v) >= image_.size() || seen[static_cast<std::size_t>(v)])
      throw Error("image array is not a bijection");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int degree) {
  std::vector<Element> image(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) image[static_cast<std::size_t>(i)] = i;
  Permutation p;
  p.image_ = std::move(image);
  return p;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < image_.size(); ++i)
    if (image_[i] != static_cast<Element>(i)) return false;
  return true;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.image_.resize(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i)
    p.image_[static_cast<std::size_t>(image_[i])] = static_cast<Element>(i);
  return p;
}

Permutation operator*(const Permutation& first, const Permutation& next) {
  if (first.degree() != next.degree()) throw Error("composing permutations of different degree");
  Permutation p;
  p.image_.resize(first.image_.size());
  for (std::size_t i = 0; i < first.image_.size(); ++i)
    p.image_[i] = next.image_[static_cast<std::size_t>(first.image_[i])];
  return p;
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (Element v : p.image()) {
    h ^= static_cast<std::size_t>(v);
    h *= 1099511628211ULL;
  }
  return h;
}

bool PermGroup::contains(const Permutation& p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

PermGroup close_group(std::span<const Permutation> generators, std::size_t cap, int degree) {
  if (!generators.empty()) degree = generators.front().degree();
  for (const auto& g : generators)
    if (g.degree() != degree) throw Error("generators of mixed degree");

  std::unordered_set<Permutation, PermutationHash> seen;
  std::vector<Permutation> found;
  std::deque<std::size_t> queue;
  auto admit = [&](Permutation p) {
    if (!seen.insert(p).second) return;
    if (seen.size() > cap) throw CapExceeded(cap);
    found.push_back(std::move(p));
    queue.push_back(found.size() - 1);
  };

  admit(Permutation::identity(degree));
  // In a finite group every inverse is a positive power, so products with
  // generators on the right reach the whole group.
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    for (const auto& g : generators) admit(found[idx] * g);
  }

  std::sort(found.begin(), found.end());
  return PermGroup(degree, std::vector<Permutation>(generators.begin(), generators.end()),
                   std::move(found));
}

}  // namespace loopforge
