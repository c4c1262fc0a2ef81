#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace loopforge {

/// Elements of a finite structure are the indices 0..n-1.
using Element = int;

/// Largest order any operation accepts.
inline constexpr int kMaxOrder = 64;

/// An n x n table of a binary operation on {0..n-1}. Entry (x, y) is x*y.
/// No Latin constraint is imposed here.
class CayleyTable {
public:
  CayleyTable() = default;

  /// Builds a table from row-major entries; throws Error if sizes or entries are out of range.
  CayleyTable(int order, std::vector<Element> entries);

  /// Builds the table of `op` over {0..order-1}.
  template <typename Op>
  static CayleyTable from_function(int order, Op&& op) {
    std::vector<Element> entries(static_cast<std::size_t>(order) * order);
    for (int x = 0; x < order; ++x)
      for (int y = 0; y < order; ++y) entries[static_cast<std::size_t>(x) * order + y] = op(x, y);
    return CayleyTable(order, std::move(entries));
  }

  int order() const { return order_; }
  Element operator()(Element x, Element y) const {
    return entries_[static_cast<std::size_t>(x) * order_ + y];
  }
  std::span<const Element> row(Element x) const {
    return {entries_.data() + static_cast<std::size_t>(x) * order_, static_cast<std::size_t>(order_)};
  }
  /// Row-major entries.
  std::span<const Element> entries() const { return entries_; }

  friend bool operator==(const CayleyTable&, const CayleyTable&) = default;
  /// Orders by size, then lexicographically on row-major entries.
  friend std::strong_ordering operator<=>(const CayleyTable& a, const CayleyTable& b);

private:
  int order_ = 0;
  std::vector<Element> entries_;
};

/// Parses the .tbl format: '#' comment lines, then n, then n rows of n integers.
CayleyTable parse_table(std::string_view text);

/// Writes the .tbl format with single spaces and a trailing newline.
std::string write_table(const CayleyTable& table);

CayleyTable read_table_file(const std::string& path);

std::ostream& operator<<(std::ostream& os, const CayleyTable& table);

/// FNV-1a over the order and entries; stable across platforms.
std::uint64_t table_hash(const CayleyTable& table);

}  // namespace loopforge
