#pragma once

#include "loopforge/quasigroup.hpp"
#include "loopforge/table.hpp"
#include "loopforge/term.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace loopforge {

enum class SearchKind { Quasigroup, Loop, MagmaInv };
enum class SearchMode { First, All, Count };
enum class Dedup { None, UpToIso };

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

/// Declarative description of a finite model search.
struct SearchSpec {
  SearchKind kind = SearchKind::Quasigroup;
  int order = 1;
  /// Every model satisfies all of these.
  std::vector<Identity> require;
  /// Every model violates each of these (checked on completed tables).
  std::vector<Identity> forbid;
  SearchMode mode = SearchMode::All;
  Dedup dedup = Dedup::None;
  std::uint64_t node_budget = kDefaultNodeBudget;
  /// Opt-in symmetry breaking for LOOP searches: restricts 1*1 to {0, 2}.
  /// Every isomorphism class keeps a representative, but raw counts shrink.
  bool break_symmetry = false;
  /// Worker threads for ALL/COUNT searches. Output does not depend on it.
  int threads = 1;
  /// Optional extra predicate on completed models, applied after `forbid`.
  std::function<bool(const Magma&)> filter;
};

struct SearchResult {
  /// Models in canonical-form order. With UpToIso each entry is the canonical
  /// representative of its class. Empty in COUNT mode.
  std::vector<Magma> models;
  std::uint64_t raw_count = 0;
  /// Number of distinct canonical forms; only computed with Dedup::UpToIso.
  std::optional<std::uint64_t> iso_class_count;
  std::uint64_t nodes_expanded = 0;
  /// True iff the search tree was fully explored within the node budget.
  bool exhausted = false;
};

/// Permutation constraints implied by an identity of the form t = x, where x
/// occurs exactly once in t: each translation, and the inverse map, on the path
/// from the root of t down to x must be a bijection. A bare-variable sibling
/// makes every row (or every column) a permutation.
struct ImpliedBijections {
  bool rows = false;
  bool columns = false;
  bool inverse = false;
};

ImpliedBijections implied_bijections(const Identity& id);

/// Throws Error when the spec is malformed (bad order, or an identity needs an
/// operation the kind lacks).
void validate(const SearchSpec& spec);

/// Depth-first table filling with Latin and identity propagation. On budget
/// exhaustion the partial result is returned with exhausted = false.
SearchResult search(const SearchSpec& spec);

struct ModelCounts {
  std::uint64_t raw = 0;
  std::uint64_t up_to_iso = 0;
};

/// COUNT search with isomorphism classes. Throws BudgetExhausted.
ModelCounts count_models(SearchSpec spec);

/// Lexicographically least table over all relabelings (loops: neutral first
/// relabelled to 0). Throws NotSupported for order > 8.
CayleyTable canonical_form(const Quasigroup& q);
CayleyTable canonical_form(const Loop& l);

/// Canonical form of a magma with its optional inverse table and constant,
/// minimized on (table, inverse table). Throws NotSupported for order > 8.
Magma canonical_form(const Magma& m);

inline constexpr int kMaxCanonicalOrder = 8;

/// Search-spec text: "key=value" lines, blocks separated by blank lines, '#'
/// comments. Keys: kind, order, require, forbid, mode, dedup, budget.
/// `require` and `forbid` may repeat and take registry names or "id:..." text.
std::vector<SearchSpec> parse_search_specs(std::string_view text);

/// .tbl text for a model: "# inv ..." and "# one ..." comment lines when those
/// operations are present, then the multiplication table.
std::string write_model(const Magma& m);

/// Hash of the canonical form (or of the model itself above kMaxCanonicalOrder),
/// used to name output files.
std::uint64_t model_hash(const Magma& m);

std::string_view to_string(SearchKind k);
std::string_view to_string(SearchMode m);
std::string_view to_string(Dedup d);
SearchKind parse_kind(std::string_view s);
SearchMode parse_mode(std::string_view s);
Dedup parse_dedup(std::string_view s);

}  // namespace loopforge
