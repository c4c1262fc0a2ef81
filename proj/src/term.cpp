#include "loopforge/term.hpp"

#include "loopforge/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace loopforge {

// ---------------------------------------------------------------- Term

Term::Term(Op op, char name, Ptr left, Ptr right)
    : op_(op), name_(name), left_(std::move(left)), right_(std::move(right)) {
  int d = 0;
  if (left_) d = std::max(d, left_->depth_);
  if (right_) d = std::max(d, right_->depth_);
  depth_ = d + 1;
}

Term::Ptr Term::var(char name) {
  if (name < 'a' || name > 'z') throw Error(std::string("invalid variable name '") + name + "'");
  return Ptr(new Term(Op::Var, name, nullptr, nullptr));
}

Term::Ptr Term::one() { return Ptr(new Term(Op::One, 0, nullptr, nullptr)); }

Term::Ptr Term::binary(Op op, Ptr left, Ptr right) {
  if (op != Op::Mul && op != Op::LDiv && op != Op::RDiv) throw Error("not a binary operation");
  return Ptr(new Term(op, 0, std::move(left), std::move(right)));
}

Term::Ptr Term::inv(Ptr arg) { return Ptr(new Term(Op::Inv, 0, std::move(arg), nullptr)); }

bool Term::uses(Op op) const {
  if (op_ == op) return true;
  return (left_ && left_->uses(op)) || (right_ && right_->uses(op));
}

bool operator==(const Term& a, const Term& b) {
  if (a.op_ != b.op_ || a.name_ != b.name_) return false;
  auto same = [](const Term::Ptr& x, const Term::Ptr& y) {
    return (!x && !y) || (x && y && *x == *y);
  };
  return same(a.left_, b.left_) && same(a.right_, b.right_);
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  Identity identity() {
    auto lhs = term();
    skip_ws();
    if (!eat('=')) fail("expected '='");
    auto rhs = term();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    Identity id{std::move(lhs), std::move(rhs), {}};
    collect_vars(*id.lhs, id.vars);
    collect_vars(*id.rhs, id.vars);
    return id;
  }

  Term::Ptr whole_term() {
    auto t = term();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return t;
  }

private:
  Term::Ptr term() {
    auto acc = factor();
    for (;;) {
      skip_ws();
      if (pos_ >= src_.size()) return acc;
      Term::Op op;
      switch (src_[pos_]) {
        case '*': op = Term::Op::Mul; break;
        case '\\': op = Term::Op::LDiv; break;
        case '/': op = Term::Op::RDiv; break;
        default: return acc;
      }
      ++pos_;
      acc = checked(Term::binary(op, std::move(acc), factor()));
    }
  }

  Term::Ptr factor() {
    auto t = primary();
    for (;;) {
      skip_ws();
      if (!eat('\'')) return t;
      t = checked(Term::inv(std::move(t)));
    }
  }

  Term::Ptr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c >= 'a' && c <= 'z') {
      ++pos_;
      return Term::var(c);
    }
    if (c == '1') {
      ++pos_;
      return Term::one();
    }
    if (c == '(') {
      ++pos_;
      if (++nesting_ > kMaxTermDepth) fail("term nested too deeply");
      auto t = term();
      skip_ws();
      if (!eat(')')) fail("expected ')'");
      --nesting_;
      return t;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Term::Ptr checked(Term::Ptr t) {
    if (t->depth() > kMaxTermDepth) fail("term deeper than " + std::to_string(kMaxTermDepth));
    return t;
  }

  static void collect_vars(const Term& t, std::vector<char>& out) {
    if (t.op() == Term::Op::Var) {
      if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
      return;
    }
    if (t.left()) collect_vars(*t.left(), out);
    if (t.right()) collect_vars(*t.right(), out);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(pos_, what); }

  std::string_view src_;
  std::size_t pos_ = 0;
  int nesting_ = 0;
};

bool is_binary(const Term& t) {
  return t.op() == Term::Op::Mul || t.op() == Term::Op::LDiv || t.op() == Term::Op::RDiv;
}

void print(const Term& t, std::string& out) {
  switch (t.op()) {
    case Term::Op::Var: out += t.name(); return;
    case Term::Op::One: out += '1'; return;
    case Term::Op::Inv:
      if (is_binary(*t.left())) {
        out += '(';
        print(*t.left(), out);
        out += ')';
      } else {
        print(*t.left(), out);
      }
      out += '\'';
      return;
    default: break;
  }
  print(*t.left(), out);
  out += t.op() == Term::Op::Mul ? '*' : t.op() == Term::Op::LDiv ? '\\' : '/';
  if (is_binary(*t.right())) {
    out += '(';
    print(*t.right(), out);
    out += ')';
  } else {
    print(*t.right(), out);
  }
}

}  // namespace

Identity parse_identity(std::string_view src) { return Parser(src).identity(); }
Term::Ptr parse_term(std::string_view src) { return Parser(src).whole_term(); }

std::string to_string(const Term& t) {
  std::string out;
  print(t, out);
  return out;
}

std::string to_string(const Identity& id) { return to_string(*id.lhs) + " = " + to_string(*id.rhs); }

// ---------------------------------------------------------------- models

Magma::Magma(CayleyTable m, std::optional<std::vector<Element>> i, std::optional<Element> o)
    : mul(std::move(m)), inv(std::move(i)), one(o) {
  const int n = mul.order();
  if (inv) {
    if (inv->size() != static_cast<std::size_t>(n)) throw Error("inverse table has wrong length");
    for (Element v : *inv)
      if (v < 0 || v >= n) throw Error("inverse table entry " + std::to_string(v) + " out of range");
  }
  if (one && (*one < 0 || *one >= n)) throw Error("constant 1 out of range");
}

ModelView ModelView::of(const Magma& m) {
  ModelView v;
  v.order = m.order();
  v.mul = m.mul.entries();
  if (m.inv) v.inv = *m.inv;
  v.one = m.one;
  return v;
}

ModelView ModelView::of(const Quasigroup& q) {
  ModelView v;
  v.order = q.order();
  v.mul = q.table().entries();
  v.ldiv = q.ldiv_table().entries();
  v.rdiv = q.rdiv_table().entries();
  v.one = neutral(q);
  return v;
}

ModelView ModelView::of(const Loop& l) {
  ModelView v = of(l.quasigroup());
  v.one = l.neutral();
  return v;
}

void require_operations(const ModelView& m, const Identity& id) {
  if (m.ldiv.empty() && id.uses(Term::Op::LDiv))
    throw MissingOperation("identity uses \\ but the model has no left division");
  if (m.rdiv.empty() && id.uses(Term::Op::RDiv))
    throw MissingOperation("identity uses / but the model has no right division");
  if (m.inv.empty() && id.uses(Term::Op::Inv))
    throw MissingOperation("identity uses ' but the model has no inverse table");
  if (!m.one && id.uses(Term::Op::One))
    throw MissingOperation("identity uses 1 but the model has no neutral constant");
}

namespace {

Element eval_rec(const ModelView& m, const Term& t, const std::array<Element, 26>& vals) {
  const auto n = static_cast<std::size_t>(m.order);
  auto cell = [n](std::span<const Element> tbl, Element a, Element b) {
    return tbl[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)];
  };
  switch (t.op()) {
    case Term::Op::Var: {
      const Element v = vals[static_cast<std::size_t>(t.name() - 'a')];
      if (v < 0) throw MissingAssignment(std::string("variable ") + t.name() + " is unassigned");
      return v;
    }
    case Term::Op::One:
      if (!m.one) throw MissingOperation("model has no neutral constant");
      return *m.one;
    case Term::Op::Inv:
      if (m.inv.empty()) throw MissingOperation("model has no inverse table");
      return m.inv[static_cast<std::size_t>(eval_rec(m, *t.left(), vals))];
    case Term::Op::Mul:
      return cell(m.mul, eval_rec(m, *t.left(), vals), eval_rec(m, *t.right(), vals));
    case Term::Op::LDiv:
      if (m.ldiv.empty()) throw MissingOperation("model has no left division");
      return cell(m.ldiv, eval_rec(m, *t.left(), vals), eval_rec(m, *t.right(), vals));
    case Term::Op::RDiv:
      if (m.rdiv.empty()) throw MissingOperation("model has no right division");
      return cell(m.rdiv, eval_rec(m, *t.left(), vals), eval_rec(m, *t.right(), vals));
  }
  throw InvariantViolation("unknown term node");
}

// Postfix program for the hot loop in holds().
struct Instr {
  Term::Op op;
  int var;  // index into the identity's variable list, for Var
};

void compile(const Term& t, const std::vector<char>& vars, std::vector<Instr>& out) {
  switch (t.op()) {
    case Term::Op::Var: {
      const auto it = std::find(vars.begin(), vars.end(), t.name());
      out.push_back({t.op(), static_cast<int>(it - vars.begin())});
      return;
    }
    case Term::Op::One: out.push_back({t.op(), -1}); return;
    case Term::Op::Inv:
      compile(*t.left(), vars, out);
      out.push_back({t.op(), -1});
      return;
    default:
      compile(*t.left(), vars, out);
      compile(*t.right(), vars, out);
      out.push_back({t.op(), -1});
  }
}

Element run(const ModelView& m, const std::vector<Instr>& code, const std::vector<Element>& vals) {
  const auto n = static_cast<std::size_t>(m.order);
  std::array<Element, 2 * kMaxTermDepth + 2> stack{};
  std::size_t sp = 0;
  for (const Instr& in : code) {
    switch (in.op) {
      case Term::Op::Var: stack[sp++] = vals[static_cast<std::size_t>(in.var)]; break;
      case Term::Op::One: stack[sp++] = *m.one; break;
      case Term::Op::Inv: stack[sp - 1] = m.inv[static_cast<std::size_t>(stack[sp - 1])]; break;
      default: {
        const auto b = static_cast<std::size_t>(stack[--sp]);
        const auto a = static_cast<std::size_t>(stack[sp - 1]);
        const auto& tbl = in.op == Term::Op::Mul ? m.mul : in.op == Term::Op::LDiv ? m.ldiv : m.rdiv;
        stack[sp - 1] = tbl[a * n + b];
      }
    }
  }
  return stack[0];
}

}  // namespace

Element eval_term(const ModelView& m, const Term& t, const Assignment& assignment) {
  std::array<Element, 26> vals;
  vals.fill(-1);
  for (const auto& [name, value] : assignment) {
    if (name < 'a' || name > 'z') throw Error(std::string("invalid variable name '") + name + "'");
    if (value < 0 || value >= m.order) throw Error("assigned value out of range");
    vals[static_cast<std::size_t>(name - 'a')] = value;
  }
  return eval_rec(m, t, vals);
}

IdentityVerdict holds(const ModelView& m, const Identity& id) {
  require_operations(m, id);
  std::vector<Instr> lhs, rhs;
  compile(*id.lhs, id.vars, lhs);
  compile(*id.rhs, id.vars, rhs);

  const std::size_t k = id.vars.size();
  std::vector<Element> vals(k, 0);
  for (;;) {
    if (run(m, lhs, vals) != run(m, rhs, vals)) {
      IdentityVerdict v{false, {}};
      for (std::size_t i = 0; i < k; ++i) v.witness.emplace_back(id.vars[i], vals[i]);
      return v;
    }
    // odometer, last variable fastest
    std::size_t i = k;
    while (i > 0) {
      if (++vals[i - 1] < m.order) break;
      vals[i - 1] = 0;
      --i;
    }
    if (i == 0) return {};
  }
}

// ---------------------------------------------------------------- registry

namespace {

struct Entry {
  std::string_view name;
  std::string_view source;
};

constexpr std::array kRegistry{
    Entry{"qg1", "x\\(x*y) = y"},
    Entry{"qg2", "x*(x\\y) = y"},
    Entry{"qg3", "(x*y)/y = x"},
    Entry{"qg4", "(x/y)*y = x"},
    Entry{"assoc", "(x*y)*z = x*(y*z)"},
    Entry{"comm", "x*y = y*x"},
    Entry{"flexible", "x*(y*x) = (x*y)*x"},
    Entry{"left_alt", "x*(x*y) = (x*x)*y"},
    Entry{"right_alt", "(y*x)*x = y*(x*x)"},
    Entry{"unit_xx", "x\\x = y/y"},
    Entry{"moufang1", "x*((y*z)*x) = (x*y)*(z*x)"},
    Entry{"moufang2", "(x*(y*z))*x = (x*y)*(z*x)"},
    Entry{"moufang3", "x*(y*(x*z)) = ((x*y)*x)*z"},
    Entry{"moufang4", "((x*y)*z)*y = x*(y*(z*y))"},
    Entry{"extra1", "(x*(y*z))*y = (x*y)*(z*y)"},
    Entry{"extra2", "((x*y)*z)*x = x*(y*(z*x))"},
    Entry{"extra3", "(y*z)*(y*x) = y*((z*y)*x)"},
    Entry{"mccune", "(w*(((x'*w)')*z))*(((y*z)')*y) = x"},
    Entry{"kunen3", "((y*y')')*((y'*z)*(((y*x)'*z)')) = x"},
};

struct ParsedRegistry {
  std::map<std::string, Identity, std::less<>> by_name;
  ParsedRegistry() {
    for (const auto& e : kRegistry) by_name.emplace(std::string(e.name), parse_identity(e.source));
  }
};

const ParsedRegistry& parsed_registry() {
  static const ParsedRegistry r;
  return r;
}

}  // namespace

const Identity& registry_get(std::string_view name) {
  const auto& r = parsed_registry().by_name;
  auto it = r.find(name);
  if (it == r.end()) throw UnknownIdentity(std::string(name));
  return it->second;
}

std::string_view registry_source(std::string_view name) {
  for (const auto& e : kRegistry)
    if (e.name == name) return e.source;
  throw UnknownIdentity(std::string(name));
}

std::vector<std::string> registry_names() {
  std::vector<std::string> out;
  for (const auto& e : kRegistry) out.emplace_back(e.name);
  std::sort(out.begin(), out.end());
  return out;
}

Identity resolve_identity(std::string_view name_or_inline) {
  if (name_or_inline.starts_with("id:")) return parse_identity(name_or_inline.substr(3));
  return registry_get(name_or_inline);
}

}  // namespace loopforge
