#include "loopforge/search.hpp"

#include "loopforge/errors.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <thread>

namespace loopforge {

std::string_view to_string(SearchKind k) {
  switch (k) {
    case SearchKind::Quasigroup: return "quasigroup";
    case SearchKind::Loop: return "loop";
    case SearchKind::MagmaInv: return "magma_inv";
  }
  return "?";
}

std::string_view to_string(SearchMode m) {
  switch (m) {
    case SearchMode::First: return "first";
    case SearchMode::All: return "all";
    case SearchMode::Count: return "count";
  }
  return "?";
}

std::string_view to_string(Dedup d) { return d == Dedup::None ? "none" : "up_to_iso"; }

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

SearchKind parse_kind(std::string_view s) {
  const auto v = lower(s);
  if (v == "quasigroup") return SearchKind::Quasigroup;
  if (v == "loop") return SearchKind::Loop;
  if (v == "magma_inv" || v == "magma-inv") return SearchKind::MagmaInv;
  throw Error("unknown kind '" + std::string(s) + "'");
}

SearchMode parse_mode(std::string_view s) {
  const auto v = lower(s);
  if (v == "first") return SearchMode::First;
  if (v == "all") return SearchMode::All;
  if (v == "count") return SearchMode::Count;
  throw Error("unknown mode '" + std::string(s) + "'");
}

Dedup parse_dedup(std::string_view s) {
  const auto v = lower(s);
  if (v == "none") return Dedup::None;
  if (v == "up_to_iso" || v == "up-to-iso" || v == "iso") return Dedup::UpToIso;
  throw Error("unknown dedup mode '" + std::string(s) + "'");
}

void validate(const SearchSpec& spec) {
  if (spec.order < 1 || spec.order > kMaxOrder)
    throw Error("search order " + std::to_string(spec.order) + " outside 1.." + std::to_string(kMaxOrder));
  if (spec.threads < 1) throw Error("threads must be positive");
  auto check = [&](const Identity& id) {
    const bool latin = spec.kind != SearchKind::MagmaInv;
    if (latin && id.uses(Term::Op::Inv))
      throw Error("identity " + to_string(id) + " uses ' which " + std::string(to_string(spec.kind)) +
                  " searches lack");
    if (!latin && (id.uses(Term::Op::LDiv) || id.uses(Term::Op::RDiv)))
      throw Error("identity " + to_string(id) + " uses a division which magma_inv searches lack");
    if (spec.kind == SearchKind::Quasigroup && id.uses(Term::Op::One))
      throw Error("identity " + to_string(id) + " uses 1 which quasigroup searches lack");
  };
  for (const auto& id : spec.require) check(id);
  for (const auto& id : spec.forbid) check(id);
}

namespace {

using Mask = std::uint64_t;

struct BudgetHit {};

// Flattened term node used by the partial evaluator.
struct Node {
  Term::Op op;
  int left = -1;
  int right = -1;
  int var = -1;
};

// Outcome of evaluating a term against a partially filled model.
struct Partial {
  int value = -1;  // >= 0 when determined
  int key = -1;    // watch key that blocks evaluation
  bool top = false;  // blocked only at the root node (children known)
  int node = -1;
  int a = -1, b = -1;  // child values when top-blocked
};

int occurrences(const Term& t, char v) {
  if (t.op() == Term::Op::Var) return t.name() == v;
  return (t.left() ? occurrences(*t.left(), v) : 0) + (t.right() ? occurrences(*t.right(), v) : 0);
}

// Walks from the root of `t` down to the single occurrence of v. Every map on
// that path is a bijection because their composite is the identity on a finite set.
void collect_path(const Term& t, char v, ImpliedBijections& out) {
  switch (t.op()) {
    case Term::Op::Var: return;
    case Term::Op::Inv:
      out.inverse = true;
      collect_path(*t.left(), v, out);
      return;
    case Term::Op::Mul: {
      const bool in_left = occurrences(*t.left(), v) > 0;
      const Term& sibling = in_left ? *t.right() : *t.left();
      // A bare-variable sibling ranges over every element.
      if (sibling.op() == Term::Op::Var) (in_left ? out.columns : out.rows) = true;
      collect_path(in_left ? *t.left() : *t.right(), v, out);
      return;
    }
    default: return;  // divisions and 1 do not occur in magma searches
  }
}

}  // namespace

ImpliedBijections implied_bijections(const Identity& id) {
  ImpliedBijections out;
  auto from_side = [&](const Term& bare, const Term& other) {
    if (bare.op() != Term::Op::Var) return;
    if (occurrences(other, bare.name()) != 1) return;
    collect_path(other, bare.name(), out);
  };
  from_side(*id.lhs, *id.rhs);
  from_side(*id.rhs, *id.lhs);
  return out;
}

namespace {

Magma canonical_model(const Magma& m, SearchKind kind) {
  if (kind == SearchKind::Loop) {
    Magma c(canonical_form(Loop(m.mul)));
    c.one = 0;
    return c;
  }
  if (kind == SearchKind::Quasigroup) return Magma(canonical_form(Quasigroup(m.mul)));
  return canonical_form(m);
}

bool magma_less(const Magma& a, const Magma& b) {
  if (auto c = a.mul <=> b.mul; c != 0) return c < 0;
  if (a.inv != b.inv) return a.inv < b.inv;
  return a.one < b.one;
}

struct MagmaLess {
  bool operator()(const Magma& a, const Magma& b) const { return magma_less(a, b); }
};

class Engine {
public:
  explicit Engine(const SearchSpec& spec) : spec_(spec), n_(spec.order) {
    const int n = n_;
    const bool latin = spec.kind != SearchKind::MagmaInv;
    rows_perm_ = cols_perm_ = latin;
    if (!latin) {
      for (const auto& id : spec.require) {
        const auto implied = implied_bijections(id);
        rows_perm_ = rows_perm_ || implied.rows;
        cols_perm_ = cols_perm_ || implied.columns;
        inv_perm_ = inv_perm_ || implied.inverse;
      }
    }
    uses_inv_ = false;
    uses_one_cell_ = false;
    for (const auto& id : spec.require) {
      uses_inv_ = uses_inv_ || id.uses(Term::Op::Inv);
      uses_one_cell_ = uses_one_cell_ || (spec.kind == SearchKind::MagmaInv && id.uses(Term::Op::One));
    }
    for (const auto& id : spec.forbid) {
      uses_inv_ = uses_inv_ || id.uses(Term::Op::Inv);
      uses_one_cell_ = uses_one_cell_ || (spec.kind == SearchKind::MagmaInv && id.uses(Term::Op::One));
    }
    // MAGMA_INV always searches an inverse table.
    if (spec.kind == SearchKind::MagmaInv) uses_inv_ = true;

    mul_cells_ = n * n;
    inv_base_ = mul_cells_;
    one_cell_ = inv_base_ + n;
    cells_ = mul_cells_ + (uses_inv_ ? n : 0) + (uses_one_cell_ ? 1 : 0);
    if (!uses_inv_) one_cell_ = inv_base_;
    row_key_ = cells_;
    col_key_ = cells_ + n;
    keys_ = cells_ + 2 * n;

    const Mask full = n == 64 ? ~Mask{0} : ((Mask{1} << n) - 1);
    dom_.assign(static_cast<std::size_t>(cells_), full);
    val_.assign(static_cast<std::size_t>(cells_), -1);
    ldivpos_.assign(static_cast<std::size_t>(n * n), -1);
    rdivpos_.assign(static_cast<std::size_t>(n * n), -1);
    invpos_.assign(static_cast<std::size_t>(n), -1);
    watch_.assign(static_cast<std::size_t>(keys_), {});

    // Tie-break rank: unary and constant cells come before the binary table so
    // that fail-first interleaves them early when domains are equal in size.
    rank_.resize(static_cast<std::size_t>(cells_));
    int r = 0;
    if (uses_one_cell_) rank_[static_cast<std::size_t>(one_cell_)] = r++;
    if (uses_inv_)
      for (int i = 0; i < n; ++i) rank_[static_cast<std::size_t>(inv_base_ + i)] = r++;
    for (int c = 0; c < mul_cells_; ++c) rank_[static_cast<std::size_t>(c)] = r++;
    branch_order_.resize(static_cast<std::size_t>(cells_));
    for (int c = 0; c < cells_; ++c) branch_order_[static_cast<std::size_t>(rank_[static_cast<std::size_t>(c)])] = c;

    compile_instances();
  }

  // Root propagation. False when the spec is already inconsistent.
  bool init() {
    const int n = n_;
    if (spec_.kind == SearchKind::Loop) {
      for (int x = 0; x < n; ++x) {
        if (!assign(x, x) || !assign(x * n, x)) return false;
      }
      if (spec_.break_symmetry && n >= 3) {
        if (!restrict(n + 1, (Mask{1} << 0) | (Mask{1} << 2))) return false;
      }
    }
    for (int i = 0; i < static_cast<int>(inst_ident_.size()); ++i)
      if (!examine(i, -1)) return false;
    return propagate();
  }

  void run() {
    dfs();
  }

  // Root-level split for the parallel mode: the branch cell and its values.
  std::optional<std::pair<int, std::vector<int>>> root_branches() const {
    const int cell = choose();
    if (cell < 0) return std::nullopt;
    std::vector<int> values;
    for (Mask m = dom_[static_cast<std::size_t>(cell)]; m; m &= m - 1) values.push_back(std::countr_zero(m));
    return std::pair{cell, values};
  }

  // Explores the subtree below cell = v, counting the branch itself as a node.
  void run_branch(int cell, int v) {
    count_node();
    if (assign(cell, v) && propagate()) dfs();
  }

  std::uint64_t nodes() const { return nodes_; }
  bool stopped() const { return stop_; }
  bool budget_hit() const { return budget_hit_; }
  std::vector<Magma>& found() { return found_; }
  std::set<Magma, MagmaLess>& classes() { return classes_; }
  std::uint64_t raw() const { return raw_; }

private:
  // ------------------------------------------------------------ compile

  int add_term(const Term& t, const std::vector<char>& vars) {
    Node node{t.op()};
    switch (t.op()) {
      case Term::Op::Var:
        node.var = static_cast<int>(std::find(vars.begin(), vars.end(), t.name()) - vars.begin());
        break;
      case Term::Op::One: break;
      case Term::Op::Inv: node.left = add_term(*t.left(), vars); break;
      default:
        node.left = add_term(*t.left(), vars);
        node.right = add_term(*t.right(), vars);
    }
    nodes_pool_.push_back(node);
    return static_cast<int>(nodes_pool_.size()) - 1;
  }

  void compile_instances() {
    for (const auto& id : spec_.require) {
      const int lhs = add_term(*id.lhs, id.vars);
      const int rhs = add_term(*id.rhs, id.vars);
      const int ident = static_cast<int>(roots_.size());
      roots_.push_back({lhs, rhs});
      const std::size_t k = id.vars.size();
      std::vector<int> vals(k, 0);
      for (;;) {
        inst_ident_.push_back(ident);
        inst_offset_.push_back(static_cast<int>(inst_vals_.size()));
        inst_vals_.insert(inst_vals_.end(), vals.begin(), vals.end());
        std::size_t i = k;
        while (i > 0) {
          if (++vals[i - 1] < n_) break;
          vals[i - 1] = 0;
          --i;
        }
        if (i == 0) break;
      }
    }
  }

  // ------------------------------------------------------------ evaluation

  Partial eval(int node_idx, const int* vars) const {
    const Node& node = nodes_pool_[static_cast<std::size_t>(node_idx)];
    Partial p;
    p.node = node_idx;
    switch (node.op) {
      case Term::Op::Var: p.value = vars[node.var]; return p;
      case Term::Op::One:
        if (spec_.kind == SearchKind::Loop) {
          p.value = 0;
          return p;
        }
        p.value = val_[static_cast<std::size_t>(one_cell_)];
        if (p.value < 0) {
          p.key = one_cell_;
          p.top = true;
        }
        return p;
      case Term::Op::Inv: {
        const Partial a = eval(node.left, vars);
        if (a.value < 0) return blocked(a.key, node_idx);
        const int cell = inv_base_ + a.value;
        p.value = val_[static_cast<std::size_t>(cell)];
        if (p.value < 0) {
          p.key = cell;
          p.top = true;
          p.a = a.value;
        }
        return p;
      }
      default: break;
    }
    const Partial a = eval(node.left, vars);
    if (a.value < 0) return blocked(a.key, node_idx);
    const Partial b = eval(node.right, vars);
    if (b.value < 0) return blocked(b.key, node_idx);
    p.a = a.value;
    p.b = b.value;
    switch (node.op) {
      case Term::Op::Mul:
        p.value = val_[static_cast<std::size_t>(a.value * n_ + b.value)];
        if (p.value < 0) p.key = a.value * n_ + b.value;
        break;
      case Term::Op::LDiv:  // z with a*z = b
        p.value = ldivpos_[static_cast<std::size_t>(a.value * n_ + b.value)];
        if (p.value < 0) p.key = row_key_ + a.value;
        break;
      case Term::Op::RDiv:  // z with z*b = a
        p.value = rdivpos_[static_cast<std::size_t>(b.value * n_ + a.value)];
        if (p.value < 0) p.key = col_key_ + b.value;
        break;
      default: break;
    }
    p.top = p.value < 0;
    return p;
  }

  static Partial blocked(int key, int node) {
    Partial p;
    p.key = key;
    p.node = node;
    return p;
  }

  // Forces the top node of `p` to evaluate to v.
  bool force(const Partial& p, int v) {
    const Node& node = nodes_pool_[static_cast<std::size_t>(p.node)];
    switch (node.op) {
      case Term::Op::Mul: return assign(p.a * n_ + p.b, v);
      case Term::Op::LDiv: return assign(p.a * n_ + v, p.b);
      case Term::Op::RDiv: return assign(v * n_ + p.b, p.a);
      case Term::Op::Inv: return assign(inv_base_ + p.a, v);
      case Term::Op::One: return assign(one_cell_, v);
      default: return false;
    }
  }

  // Re-evaluates instance i; `from_key` is the watch list being processed.
  bool examine(int i, int from_key) {
    const auto& [lhs, rhs] = roots_[static_cast<std::size_t>(inst_ident_[static_cast<std::size_t>(i)])];
    const int* vars = inst_vals_.data() + inst_offset_[static_cast<std::size_t>(i)];
    const Partial L = eval(lhs, vars);
    const Partial R = eval(rhs, vars);
    if (L.value >= 0 && R.value >= 0) return L.value == R.value;
    if (L.value >= 0 && R.top) return force(R, L.value);
    if (R.value >= 0 && L.top) return force(L, R.value);
    if (L.value < 0 && !L.top) {
      add_watch(L.key, i, from_key);
    } else if (R.value < 0 && !R.top) {
      add_watch(R.key, i, from_key);
    } else {
      // both sides top-blocked: either resolving enables a forcing step
      add_watch(L.key, i, from_key);
      if (R.key != L.key) add_watch(R.key, i, from_key);
    }
    return true;
  }

  void add_watch(int key, int inst, int from_key) {
    if (key == from_key) return;  // still listed there
    watch_[static_cast<std::size_t>(key)].push_back(inst);
    trail_.push_back({TrailKind::Watch, key, 0});
  }

  // ------------------------------------------------------------ domains

  enum class TrailKind : std::uint8_t { Dom, Val, LDivPos, RDivPos, InvPos, Watch };
  struct TrailEntry {
    TrailKind kind;
    int index;
    Mask old;
  };

  bool is_mul(int cell) const { return cell < mul_cells_; }
  bool is_inv(int cell) const { return uses_inv_ && cell >= inv_base_ && cell < inv_base_ + n_; }

  void set_dom(int cell, Mask m) {
    trail_.push_back({TrailKind::Dom, cell, dom_[static_cast<std::size_t>(cell)]});
    dom_[static_cast<std::size_t>(cell)] = m;
  }

  bool restrict(int cell, Mask allowed) {
    const Mask before = dom_[static_cast<std::size_t>(cell)];
    const Mask after = before & allowed;
    if (after == before) return true;
    if (!after) return false;
    if (val_[static_cast<std::size_t>(cell)] >= 0) return true;
    set_dom(cell, after);
    for (Mask gone = before & ~after; gone; gone &= gone - 1)
      if (!value_left(cell, std::countr_zero(gone))) return false;
    if (std::popcount(after) == 1) return assign(cell, std::countr_zero(after));
    return true;
  }

  bool assign(int cell, int v) {
    const int cur = val_[static_cast<std::size_t>(cell)];
    if (cur >= 0) return cur == v;
    const Mask before = dom_[static_cast<std::size_t>(cell)];
    if (!(before >> v & 1)) return false;
    if (is_mul(cell)) {
      const int r = cell / n_, c = cell % n_;
      if (rows_perm_) {
        const auto li = static_cast<std::size_t>(r * n_ + v);
        if (ldivpos_[li] >= 0) return false;
        trail_.push_back({TrailKind::LDivPos, static_cast<int>(li), 0});
        ldivpos_[li] = c;
      }
      if (cols_perm_) {
        const auto ri = static_cast<std::size_t>(c * n_ + v);
        if (rdivpos_[ri] >= 0) return false;
        trail_.push_back({TrailKind::RDivPos, static_cast<int>(ri), 0});
        rdivpos_[ri] = r;
      }
    } else if (inv_perm_ && is_inv(cell)) {
      if (invpos_[static_cast<std::size_t>(v)] >= 0) return false;
      trail_.push_back({TrailKind::InvPos, v, 0});
      invpos_[static_cast<std::size_t>(v)] = cell - inv_base_;
    }
    trail_.push_back({TrailKind::Val, cell, 0});
    val_[static_cast<std::size_t>(cell)] = v;
    if (before != (Mask{1} << v)) set_dom(cell, Mask{1} << v);
    pending_.push_back(cell);
    for (Mask gone = before & ~(Mask{1} << v); gone; gone &= gone - 1)
      if (!value_left(cell, std::countr_zero(gone))) return false;
    return true;
  }

  // Places the only remaining spot for value w among `spots`, or fails when none is left.
  template <typename Spot>
  bool hidden_single(int w, Spot&& spot_of) {
    int spot = -1, count = 0;
    for (int j = 0; j < n_ && count < 2; ++j) {
      const int s = spot_of(j);
      if (dom_[static_cast<std::size_t>(s)] >> w & 1) {
        spot = s;
        ++count;
      }
    }
    if (count == 0) return false;
    return count > 1 || assign(spot, w);
  }

  // Value w can no longer go into `cell`; look for hidden singles in every
  // permutation constraint through that cell.
  bool value_left(int cell, int w) {
    if (is_mul(cell)) {
      const int r = cell / n_, c = cell % n_;
      if (rows_perm_ && ldivpos_[static_cast<std::size_t>(r * n_ + w)] < 0 &&
          !hidden_single(w, [&](int j) { return r * n_ + j; }))
        return false;
      if (cols_perm_ && rdivpos_[static_cast<std::size_t>(c * n_ + w)] < 0 &&
          !hidden_single(w, [&](int i) { return i * n_ + c; }))
        return false;
    } else if (inv_perm_ && is_inv(cell)) {
      if (invpos_[static_cast<std::size_t>(w)] < 0 &&
          !hidden_single(w, [&](int i) { return inv_base_ + i; }))
        return false;
    }
    return true;
  }

  bool propagate() {
    while (!pending_.empty()) {
      const int cell = pending_.back();
      pending_.pop_back();
      const int v = val_[static_cast<std::size_t>(cell)];
      const Mask keep = ~(Mask{1} << v);
      if (is_mul(cell)) {
        const int r = cell / n_, c = cell % n_;
        if (rows_perm_)
          for (int j = 0; j < n_; ++j)
            if (j != c && !restrict(r * n_ + j, keep)) return false;
        if (cols_perm_)
          for (int i = 0; i < n_; ++i)
            if (i != r && !restrict(i * n_ + c, keep)) return false;
        if (!process_watch(cell) || !process_watch(row_key_ + r) || !process_watch(col_key_ + c))
          return false;
        continue;
      }
      if (inv_perm_ && is_inv(cell))
        for (int i = 0; i < n_; ++i)
          if (inv_base_ + i != cell && !restrict(inv_base_ + i, keep)) return false;
      if (!process_watch(cell)) return false;
    }
    return true;
  }

  bool process_watch(int key) {
    auto& list = watch_[static_cast<std::size_t>(key)];
    for (std::size_t k = 0; k < list.size(); ++k)
      if (!examine(list[k], key)) return false;
    return true;
  }

  void undo(std::size_t mark) {
    pending_.clear();
    while (trail_.size() > mark) {
      const TrailEntry e = trail_.back();
      trail_.pop_back();
      switch (e.kind) {
        case TrailKind::Dom: dom_[static_cast<std::size_t>(e.index)] = e.old; break;
        case TrailKind::Val: val_[static_cast<std::size_t>(e.index)] = -1; break;
        case TrailKind::LDivPos: ldivpos_[static_cast<std::size_t>(e.index)] = -1; break;
        case TrailKind::RDivPos: rdivpos_[static_cast<std::size_t>(e.index)] = -1; break;
        case TrailKind::InvPos: invpos_[static_cast<std::size_t>(e.index)] = -1; break;
        case TrailKind::Watch: watch_[static_cast<std::size_t>(e.index)].pop_back(); break;
      }
    }
  }

  // ------------------------------------------------------------ search

  // Most constrained unassigned cell, ties broken by rank; -1 when complete.
  int choose() const {
    int best = -1, best_size = 65;
    for (int cell : branch_order_) {
      if (val_[static_cast<std::size_t>(cell)] >= 0) continue;
      const int size = std::popcount(dom_[static_cast<std::size_t>(cell)]);
      if (size < best_size) {
        best = cell;
        best_size = size;
        if (size <= 2) break;
      }
    }
    return best;
  }

  void count_node() {
    if (++nodes_ > spec_.node_budget) {
      --nodes_;
      stop_ = true;
      budget_hit_ = true;
      throw BudgetHit{};
    }
  }

  void dfs() {
    if (stop_) return;
    const int cell = choose();
    if (cell < 0) {
      leaf();
      return;
    }
    for (Mask m = dom_[static_cast<std::size_t>(cell)]; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      count_node();
      const std::size_t mark = trail_.size();
      if (assign(cell, v) && propagate()) dfs();
      undo(mark);
      if (stop_) return;
    }
  }

  void leaf() {
    const int n = n_;
    std::vector<Element> entries(val_.begin(), val_.begin() + mul_cells_);
    std::optional<std::vector<Element>> inv;
    if (spec_.kind == SearchKind::MagmaInv)
      inv.emplace(val_.begin() + inv_base_, val_.begin() + inv_base_ + n);
    std::optional<Element> one;
    if (spec_.kind == SearchKind::Loop) one = 0;
    if (uses_one_cell_) one = val_[static_cast<std::size_t>(one_cell_)];
    Magma m(CayleyTable(n, std::move(entries)), std::move(inv), one);

    if (!accept(m)) return;
    ++raw_;
    if (spec_.mode == SearchMode::Count) {
      if (spec_.dedup == Dedup::UpToIso) classes_.insert(canonical_model(m, spec_.kind));
    } else {
      found_.push_back(std::move(m));
    }
    if (spec_.mode == SearchMode::First) stop_ = true;
  }

  // Post-hoc validation through the term evaluator, then forbid and filter.
  bool accept(const Magma& m) const {
    if (spec_.kind == SearchKind::MagmaInv) {
      const ModelView view = ModelView::of(m);
      for (const auto& id : spec_.require)
        if (!holds(view, id)) throw InvariantViolation("search emitted a model violating " + to_string(id));
      for (const auto& id : spec_.forbid)
        if (holds(view, id)) return false;
    } else {
      const Quasigroup q(m.mul);
      ModelView view = ModelView::of(q);
      if (spec_.kind == SearchKind::Loop) view.one = 0;
      for (const auto& id : spec_.require)
        if (!holds(view, id)) throw InvariantViolation("search emitted a model violating " + to_string(id));
      for (const auto& id : spec_.forbid)
        if (holds(view, id)) return false;
    }
    return !spec_.filter || spec_.filter(m);
  }

  const SearchSpec& spec_;
  int n_;
  bool rows_perm_ = true;  // every row of the table is a permutation
  bool cols_perm_ = true;  // every column is a permutation
  bool inv_perm_ = false;  // the inverse table is a permutation
  bool uses_inv_ = false;
  bool uses_one_cell_ = false;
  int mul_cells_ = 0, inv_base_ = 0, one_cell_ = 0, cells_ = 0;
  int row_key_ = 0, col_key_ = 0, keys_ = 0;

  std::vector<Mask> dom_;
  std::vector<int> val_;
  std::vector<int> ldivpos_;  // [row * n + value] -> column
  std::vector<int> rdivpos_;  // [column * n + value] -> row
  std::vector<int> invpos_;   // value -> i with inv(i) = value
  std::vector<std::vector<int>> watch_;
  std::vector<int> rank_;
  std::vector<int> branch_order_;

  std::vector<Node> nodes_pool_;
  std::vector<std::pair<int, int>> roots_;
  std::vector<int> inst_ident_;
  std::vector<int> inst_offset_;
  std::vector<int> inst_vals_;

  std::vector<TrailEntry> trail_;
  std::vector<int> pending_;

  std::uint64_t nodes_ = 0;
  std::uint64_t raw_ = 0;
  bool stop_ = false;
  bool budget_hit_ = false;
  std::vector<Magma> found_;
  std::set<Magma, MagmaLess> classes_;

};

// Runs the engine, optionally splitting the root branch point across threads.
// Returns nullopt when a parallel run hit the budget (the caller reruns serially).
std::optional<SearchResult> explore(const SearchSpec& spec, bool parallel,
                                   std::set<Magma, MagmaLess>& classes) {
  SearchResult result;
  Engine root(spec);
  if (!root.init()) {
    result.exhausted = true;
    return result;
  }

  auto branches = parallel ? root.root_branches() : std::nullopt;
  if (!parallel || !branches) {
    try {
      root.run();
    } catch (const BudgetHit&) {
    }
    result.nodes_expanded = root.nodes();
    result.exhausted = !root.budget_hit();
    result.raw_count = root.raw();
    result.models = std::move(root.found());
    classes = std::move(root.classes());
    return result;
  }

  const auto& [cell, values] = *branches;
  std::vector<Engine> workers(values.size(), root);
  std::vector<bool> hit(values.size(), false);
  std::vector<std::exception_ptr> errors(values.size());
  auto work = [&](std::size_t k) {
    try {
      workers[k].run_branch(cell, values[k]);
    } catch (const BudgetHit&) {
      hit[k] = true;
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(spec.threads), values.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < nthreads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t k = t; k < values.size(); k += nthreads) work(k);
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::uint64_t nodes = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (hit[k]) return std::nullopt;
    nodes += workers[k].nodes();
    result.raw_count += workers[k].raw();
    for (auto& m : workers[k].found()) result.models.push_back(std::move(m));
    classes.merge(workers[k].classes());
  }
  if (nodes > spec.node_budget) return std::nullopt;
  result.nodes_expanded = nodes;
  result.exhausted = true;
  return result;
}

}  // namespace

SearchResult search(const SearchSpec& spec) {
  validate(spec);
  const bool parallel = spec.threads > 1 && spec.mode != SearchMode::First;
  const bool canonical_ok = spec.order <= kMaxCanonicalOrder;
  if (spec.dedup == Dedup::UpToIso && !canonical_ok)
    throw NotSupported("isomorphism dedup requires order <= " + std::to_string(kMaxCanonicalOrder));
  std::set<Magma, MagmaLess> classes;
  auto res = explore(spec, parallel, classes);
  if (!res) {
    classes.clear();
    res = explore(spec, false, classes);
  }
  SearchResult result = std::move(*res);

  if (spec.mode == SearchMode::Count) {
    if (spec.dedup == Dedup::UpToIso) result.iso_class_count = classes.size();
    return result;
  }
  if (spec.dedup == Dedup::UpToIso) {
    std::vector<Magma> reps;
    for (const auto& m : result.models) reps.push_back(canonical_model(m, spec.kind));
    std::sort(reps.begin(), reps.end(), magma_less);
    reps.erase(std::unique(reps.begin(), reps.end(),
                           [](const Magma& a, const Magma& b) {
                             return a.mul == b.mul && a.inv == b.inv && a.one == b.one;
                           }),
               reps.end());
    result.iso_class_count = reps.size();
    result.models = std::move(reps);
  } else if (canonical_ok) {
    std::vector<std::pair<Magma, Magma>> keyed;
    keyed.reserve(result.models.size());
    for (auto& m : result.models) {
      Magma c = canonical_model(m, spec.kind);
      keyed.emplace_back(std::move(c), std::move(m));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
      if (magma_less(a.first, b.first)) return true;
      if (magma_less(b.first, a.first)) return false;
      return magma_less(a.second, b.second);
    });
    result.models.clear();
    for (auto& [c, m] : keyed) result.models.push_back(std::move(m));
  } else {
    std::sort(result.models.begin(), result.models.end(), magma_less);
  }
  return result;
}

ModelCounts count_models(SearchSpec spec) {
  spec.mode = SearchMode::Count;
  spec.dedup = Dedup::UpToIso;
  const auto res = search(spec);
  if (!res.exhausted) throw BudgetExhausted();
  return {res.raw_count, *res.iso_class_count};
}

}  // namespace loopforge
