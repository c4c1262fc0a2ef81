#pragma once

#include "loopforge/quasigroup.hpp"
#include "loopforge/table.hpp"

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace loopforge {

/// Maximum nesting depth of a term.
inline constexpr int kMaxTermDepth = 64;

/// Immutable term over *, \, /, ' (inverse), 1 and single-letter variables.
class Term {
public:
  enum class Op { Var, One, Mul, LDiv, RDiv, Inv };
  using Ptr = std::shared_ptr<const Term>;

  static Ptr var(char name);
  static Ptr one();
  static Ptr binary(Op op, Ptr left, Ptr right);
  static Ptr inv(Ptr arg);

  Op op() const { return op_; }
  char name() const { return name_; }
  /// Left operand, or the argument of Inv.
  const Ptr& left() const { return left_; }
  const Ptr& right() const { return right_; }
  int depth() const { return depth_; }

  bool uses(Op op) const;

  friend bool operator==(const Term& a, const Term& b);

private:
  Term(Op op, char name, Ptr left, Ptr right);

  Op op_;
  char name_ = 0;
  Ptr left_;
  Ptr right_;
  int depth_ = 1;
};

/// An equation lhs = rhs; `vars` lists variables in first-appearance order
/// (lhs before rhs, left to right).
struct Identity {
  Term::Ptr lhs;
  Term::Ptr rhs;
  std::vector<char> vars;

  bool uses(Term::Op op) const { return lhs->uses(op) || rhs->uses(op); }
  friend bool operator==(const Identity& a, const Identity& b) {
    return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
};

/// Parses the identity grammar: infix *, \ and / share one precedence level and
/// associate left; postfix ' is inverse; "1" is the neutral constant.
/// Throws SyntaxError with a byte offset.
Identity parse_identity(std::string_view src);
Term::Ptr parse_term(std::string_view src);

/// Canonical text: minimal parentheses, no spaces inside terms, " = " between sides.
std::string to_string(const Term& t);
std::string to_string(const Identity& id);

/// A raw finite model with a binary table, an optional unary table for ' and an
/// optional constant for 1. Neither Latin nor bijective tables are required.
struct Magma {
  CayleyTable mul;
  std::optional<std::vector<Element>> inv;
  std::optional<Element> one;

  Magma(CayleyTable mul, std::optional<std::vector<Element>> inv = std::nullopt,
        std::optional<Element> one = std::nullopt);
  int order() const { return mul.order(); }
};

/// Non-owning view of whatever operations a model supplies.
/// The viewed object must outlive the view.
struct ModelView {
  int order = 0;
  std::span<const Element> mul;
  std::span<const Element> ldiv;  ///< empty when unavailable
  std::span<const Element> rdiv;  ///< empty when unavailable
  std::span<const Element> inv;   ///< empty when unavailable
  std::optional<Element> one;

  static ModelView of(const Magma& m);
  /// Supplies 1 exactly when the quasigroup has a neutral element.
  static ModelView of(const Quasigroup& q);
  static ModelView of(const Loop& l);
};

using Assignment = std::map<char, Element>;

/// Throws MissingOperation / MissingAssignment.
Element eval_term(const ModelView& m, const Term& t, const Assignment& assignment);

struct IdentityVerdict {
  bool holds = true;
  /// Least failing assignment, in the identity's variable order.
  std::vector<std::pair<char, Element>> witness;

  explicit operator bool() const { return holds; }
};

/// Checks lhs = rhs under all n^|vars| assignments in lexicographic order
/// (first variable most significant).
IdentityVerdict holds(const ModelView& m, const Identity& id);

/// Throws MissingOperation when `id` needs an operation `m` lacks.
void require_operations(const ModelView& m, const Identity& id);

/// Built-in identities by name.
const Identity& registry_get(std::string_view name);
/// Source text of a built-in identity.
std::string_view registry_source(std::string_view name);
/// All registered names, sorted.
std::vector<std::string> registry_names();

/// Either a registry name, or inline text prefixed with "id:".
Identity resolve_identity(std::string_view name_or_inline);

}  // namespace loopforge
