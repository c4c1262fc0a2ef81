#include "loopforge/table.hpp"

#include "loopforge/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace loopforge {

CayleyTable::CayleyTable(int order, std::vector<Element> entries)
    : order_(order), entries_(std::move(entries)) {
  if (order < 1 || order > kMaxOrder)
    throw Error("table order " + std::to_string(order) + " outside 1.." + std::to_string(kMaxOrder));
  if (entries_.size() != static_cast<std::size_t>(order) * order)
    throw Error("table of order " + std::to_string(order) + " needs " +
                std::to_string(order * order) + " entries, got " + std::to_string(entries_.size()));
  for (Element v : entries_)
    if (v < 0 || v >= order) throw Error("entry " + std::to_string(v) + " out of range");
}

std::strong_ordering operator<=>(const CayleyTable& a, const CayleyTable& b) {
  if (auto c = a.order_ <=> b.order_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(),
                                                b.entries_.begin(), b.entries_.end());
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

int parse_int(std::string_view token, std::size_t line_no) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw TableParseError(line_no, "non-integer token '" + std::string(token) + "'");
  return value;
}

}  // namespace

CayleyTable parse_table(std::string_view text) {
  // (line number, tokens) for every content line
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    lines.emplace_back(line_no, std::move(tokens));
    if (end == text.size()) break;
  }
  if (lines.empty()) throw TableParseError(line_no, "missing order line");

  const auto& [order_line, order_tokens] = lines.front();
  if (order_tokens.size() != 1) throw TableParseError(order_line, "order line must hold one integer");
  const int n = parse_int(order_tokens.front(), order_line);
  if (n < 1 || n > kMaxOrder)
    throw TableParseError(order_line, "order " + std::to_string(n) + " outside 1.." +
                                          std::to_string(kMaxOrder));
  if (lines.size() != static_cast<std::size_t>(n) + 1)
    throw TableParseError(lines.back().first, "expected " + std::to_string(n) + " rows, found " +
                                                  std::to_string(lines.size() - 1));

  std::vector<Element> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto& [ln, tokens] = lines[r];
    if (tokens.size() != static_cast<std::size_t>(n))
      throw TableParseError(ln, "expected " + std::to_string(n) + " entries, found " +
                                    std::to_string(tokens.size()));
    for (auto tok : tokens) {
      int v = parse_int(tok, ln);
      if (v < 0 || v >= n) throw TableParseError(ln, "entry " + std::to_string(v) + " out of range");
      entries.push_back(v);
    }
  }
  return CayleyTable(n, std::move(entries));
}

std::string write_table(const CayleyTable& table) {
  std::ostringstream os;
  os << table;
  return os.str();
}

CayleyTable read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str());
}

std::ostream& operator<<(std::ostream& os, const CayleyTable& table) {
  const int n = table.order();
  os << n << '\n';
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (y) os << ' ';
      os << table(x, y);
    }
    os << '\n';
  }
  return os;
}

std::uint64_t table_hash(const CayleyTable& table) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  mix(static_cast<std::uint64_t>(table.order()));
  for (Element v : table.entries()) mix(static_cast<std::uint64_t>(v));
  return h;
}

}  // namespace loopforge
