#ifndef POLITE_LOGIC_HPP
#define POLITE_LOGIC_HPP

// Terms, formulas and the syntactic operations on them.
//
// The signatures handled here are tiny: at most two sorts (index 0 is the
// sort called S, index 1 is S2) and at most one unary function s : S -> S.
// A term is therefore always s^k(x) and is stored as (variable, depth).

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace polite {

using SortId = int;

inline constexpr int kMaxDepth = 64;

inline const char* sort_name(SortId s) { return s == 0 ? "S" : "S2"; }

struct Signature {
  int num_sorts = 1;
  bool has_s = false;  // s : S -> S

  bool operator==(const Signature&) const = default;
};

inline Signature sig_one() { return {1, false}; }
inline Signature sig_two() { return {2, false}; }
inline Signature sig_s() { return {1, true}; }
inline Signature sig_two_s() { return {2, true}; }

inline std::string to_string(const Signature& g) {
  std::string r = g.num_sorts == 1 ? "{S" : "{S,S2";
  if (g.has_s) r += ";s";
  return r + "}";
}

struct Var {
  std::string name;
  SortId sort = 0;

  auto operator<=>(const Var&) const = default;
  bool operator==(const Var&) const = default;
};

using VarSet = std::set<Var>;

struct Term {
  Var var;
  int depth = 0;

  auto operator<=>(const Term& o) const {
    if (auto c = var.name <=> o.var.name; c != 0) return c;
    if (auto c = var.sort <=> o.var.sort; c != 0) return c;
    return depth <=> o.depth;
  }
  bool operator==(const Term&) const = default;
  SortId sort() const { return var.sort; }
};

inline Term v(std::string name, SortId sort = 0) { return Term{Var{std::move(name), sort}, 0}; }
inline Term tv(const Var& x) { return Term{x, 0}; }

inline Term s(Term t, int k = 1) {
  if (t.var.sort != 0) throw std::invalid_argument("s applied to a term of sort S2");
  if (t.depth + k > kMaxDepth) throw std::invalid_argument("term depth exceeds cap");
  t.depth += k;
  return t;
}

enum class Kind : std::uint8_t { True, False, Eq, Not, And, Or, Exists, Forall };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::True;
  Term lhs, rhs;
  std::vector<Formula> kids;
  std::vector<Var> bound;
};

// ---- construction -------------------------------------------------------

inline Formula top() {
  static const Formula t = std::make_shared<Node>(Node{Kind::True, {}, {}, {}, {}});
  return t;
}
inline Formula bot() {
  static const Formula f = std::make_shared<Node>(Node{Kind::False, {}, {}, {}, {}});
  return f;
}

// Equalities are stored with the smaller side first.
inline Formula eq(Term a, Term b) {
  if (a.sort() != b.sort()) throw std::invalid_argument("equality between different sorts");
  if (b < a) std::swap(a, b);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Eq;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

inline Formula neg(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->kids.push_back(std::move(f));
  return n;
}

inline Formula nary(Kind k, std::vector<Formula> kids) {
  if (kids.empty()) return k == Kind::And ? top() : bot();
  if (kids.size() == 1) return kids.front();
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->kids = std::move(kids);
  return n;
}
inline Formula conj(std::vector<Formula> kids) { return nary(Kind::And, std::move(kids)); }
inline Formula disj(std::vector<Formula> kids) { return nary(Kind::Or, std::move(kids)); }
inline Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{std::move(a), std::move(b)}); }
inline Formula disj(Formula a, Formula b) { return disj(std::vector<Formula>{std::move(a), std::move(b)}); }
inline Formula implies(Formula a, Formula b) { return disj(neg(std::move(a)), std::move(b)); }
inline Formula neq(Term a, Term b) { return neg(eq(std::move(a), std::move(b))); }

inline Formula quant(Kind k, std::vector<Var> bound, Formula body) {
  if (bound.empty()) return body;
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->bound = std::move(bound);
  n->kids.push_back(std::move(body));
  return n;
}
inline Formula exists(std::vector<Var> b, Formula body) { return quant(Kind::Exists, std::move(b), std::move(body)); }
inline Formula forall(std::vector<Var> b, Formula body) { return quant(Kind::Forall, std::move(b), std::move(body)); }

// ---- inspection ---------------------------------------------------------

inline bool same(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  if (a->kind == Kind::Eq) return a->lhs == b->lhs && a->rhs == b->rhs;
  if (a->bound != b->bound || a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!same(a->kids[i], b->kids[i])) return false;
  return true;
}

inline bool quantifier_free(const Formula& f) {
  if (f->kind == Kind::Exists || f->kind == Kind::Forall) return false;
  for (auto& k : f->kids)
    if (!quantifier_free(k)) return false;
  return true;
}

namespace detail {
inline void collect_vars(const Formula& f, VarSet& out, std::vector<Var>& scope) {
  auto free_in_scope = [&](const Var& x) {
    return std::find(scope.begin(), scope.end(), x) == scope.end();
  };
  switch (f->kind) {
    case Kind::Eq:
      if (free_in_scope(f->lhs.var)) out.insert(f->lhs.var);
      if (free_in_scope(f->rhs.var)) out.insert(f->rhs.var);
      return;
    case Kind::Exists:
    case Kind::Forall: {
      auto n = scope.size();
      scope.insert(scope.end(), f->bound.begin(), f->bound.end());
      collect_vars(f->kids[0], out, scope);
      scope.resize(n);
      return;
    }
    default:
      for (auto& k : f->kids) collect_vars(k, out, scope);
  }
}
}  // namespace detail

// Free variables, optionally restricted to one sort.
inline VarSet vars_of(const Formula& f, std::optional<SortId> sort = std::nullopt) {
  VarSet all;
  std::vector<Var> scope;
  detail::collect_vars(f, all, scope);
  if (!sort) return all;
  VarSet r;
  for (auto& x : all)
    if (x.sort == *sort) r.insert(x);
  return r;
}

// Largest s-depth applied to each free variable.
inline std::map<Var, int> max_depths(const Formula& f) {
  std::map<Var, int> m;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    if (g->kind == Kind::Eq) {
      for (const Term* t : {&g->lhs, &g->rhs}) {
        auto [it, fresh] = m.emplace(t->var, t->depth);
        if (!fresh) it->second = std::max(it->second, t->depth);
      }
      return;
    }
    for (auto& k : g->kids) self(self, k);
  };
  rec(rec, f);
  return m;
}

inline int max_depth(const Formula& f) {
  int d = 0;
  for (auto& [x, k] : max_depths(f)) d = std::max(d, k);
  return d;
}

inline bool uses_s(const Formula& f) { return max_depth(f) > 0; }

inline std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  for (auto& k : f->kids) n += formula_size(k);
  return n;
}

// ---- printing -----------------------------------------------------------

inline std::string to_string(const Term& t) {
  std::string r = t.var.name;
  for (int i = 0; i < t.depth; ++i) r = "(s " + r + ")";
  return r;
}

inline std::string to_string(const Formula& f) {
  switch (f->kind) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Eq: return "(= " + to_string(f->lhs) + " " + to_string(f->rhs) + ")";
    case Kind::Not: return "(not " + to_string(f->kids[0]) + ")";
    case Kind::And:
    case Kind::Or: {
      std::string r = f->kind == Kind::And ? "(and" : "(or";
      for (auto& k : f->kids) r += " " + to_string(k);
      return r + ")";
    }
    case Kind::Exists:
    case Kind::Forall: {
      std::string r = f->kind == Kind::Exists ? "(exists (" : "(forall (";
      for (std::size_t i = 0; i < f->bound.size(); ++i) {
        if (i) r += " ";
        r += "(" + f->bound[i].name + " " + sort_name(f->bound[i].sort) + ")";
      }
      return r + ") " + to_string(f->kids[0]) + ")";
    }
  }
  return "?";
}

// ---- literals, cubes, DNF -------------------------------------------------

struct Literal {
  Term a, b;  // a <= b
  bool pos = true;

  auto operator<=>(const Literal&) const = default;
  bool operator==(const Literal&) const = default;
};

using Cube = std::vector<Literal>;

inline Formula to_formula(const Literal& l) {
  auto e = eq(l.a, l.b);
  return l.pos ? e : neg(e);
}

inline Formula to_formula(const Cube& c) {
  std::vector<Formula> ks;
  for (auto& l : c) ks.push_back(to_formula(l));
  return conj(std::move(ks));
}

inline std::size_t dnf_limit = 1u << 20;

namespace detail {
// Cubes of f (polarity p); a nullopt cube list never happens, an empty list is false.
inline std::vector<Cube> dnf(const Formula& f, bool p) {
  switch (f->kind) {
    case Kind::True: return p ? std::vector<Cube>{Cube{}} : std::vector<Cube>{};
    case Kind::False: return p ? std::vector<Cube>{} : std::vector<Cube>{Cube{}};
    case Kind::Eq: {
      if (f->lhs == f->rhs) return p ? std::vector<Cube>{Cube{}} : std::vector<Cube>{};
      return {Cube{Literal{f->lhs, f->rhs, p}}};
    }
    case Kind::Not: return dnf(f->kids[0], !p);
    case Kind::And:
    case Kind::Or: {
      bool conjunctive = (f->kind == Kind::And) == p;
      if (!conjunctive) {
        std::vector<Cube> out;
        for (auto& k : f->kids) {
          auto part = dnf(k, p);
          out.insert(out.end(), part.begin(), part.end());
          if (out.size() > dnf_limit) throw std::length_error("DNF too large");
        }
        return out;
      }
      std::vector<Cube> acc{Cube{}};
      for (auto& k : f->kids) {
        auto part = dnf(k, p);
        std::vector<Cube> next;
        if (acc.size() * part.size() > dnf_limit) throw std::length_error("DNF too large");
        for (auto& c1 : acc)
          for (auto& c2 : part) {
            Cube c = c1;
            c.insert(c.end(), c2.begin(), c2.end());
            next.push_back(std::move(c));
          }
        acc = std::move(next);
        if (acc.empty()) break;
      }
      return acc;
    }
    default: throw std::invalid_argument("to_dnf: quantified formula");
  }
}
}  // namespace detail

// Sorted, duplicate-free cubes; cubes holding l and not-l are dropped.
inline std::vector<Cube> dnf_cubes(const Formula& f) {
  auto raw = detail::dnf(f, true);
  std::set<Cube> seen;
  std::vector<Cube> out;
  for (auto& c : raw) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    bool clash = false;
    for (std::size_t i = 0; i + 1 < c.size() && !clash; ++i)
      clash = c[i].a == c[i + 1].a && c[i].b == c[i + 1].b && c[i].pos != c[i + 1].pos;
    if (clash) continue;
    if (seen.insert(c).second) out.push_back(std::move(c));
  }
  return out;
}

inline Formula to_dnf(const Formula& f) {
  std::vector<Formula> ds;
  for (auto& c : dnf_cubes(f)) ds.push_back(to_formula(c));
  return disj(std::move(ds));
}

// Negation normal form helper used by the solvers: pushes negations to atoms.
inline Formula nnf(const Formula& f, bool p = true) {
  switch (f->kind) {
    case Kind::True: return p ? top() : bot();
    case Kind::False: return p ? bot() : top();
    case Kind::Eq: return p ? f : neg(f);
    case Kind::Not: return nnf(f->kids[0], !p);
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> ks;
      for (auto& k : f->kids) ks.push_back(nnf(k, p));
      bool a = (f->kind == Kind::And) == p;
      return a ? conj(std::move(ks)) : disj(std::move(ks));
    }
    default: throw std::invalid_argument("nnf: quantified formula");
  }
}

// ---- substitutions ------------------------------------------------------

template <class F>
Formula map_terms(const Formula& f, F&& fn) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False: return f;
    case Kind::Eq: return eq(fn(f->lhs), fn(f->rhs));
    case Kind::Not: return neg(map_terms(f->kids[0], fn));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> ks;
      for (auto& k : f->kids) ks.push_back(map_terms(k, fn));
      return nary(f->kind, std::move(ks));
    }
    case Kind::Exists:
    case Kind::Forall: return quant(f->kind, f->bound, map_terms(f->kids[0], fn));
  }
  return f;
}

// Replaces every s^k(x) by x.
inline Formula erase_s(const Formula& f) {
  return map_terms(f, [](const Term& t) { return Term{t.var, 0}; });
}

inline Formula rename(const Formula& f, const std::map<Var, Var>& m) {
  return map_terms(f, [&](const Term& t) {
    auto it = m.find(t.var);
    return it == m.end() ? t : Term{it->second, t.depth};
  });
}

// ---- fresh variables ----------------------------------------------------

// Deterministic supply of @w<k> names, starting after any already used.
class FreshSupply {
 public:
  explicit FreshSupply(const VarSet& taken = {}, std::string prefix = "@w") : prefix_(std::move(prefix)) {
    for (auto& x : taken) note(x.name);
  }
  explicit FreshSupply(const Formula& f, std::string prefix = "@w")
      : FreshSupply(vars_of(f), std::move(prefix)) {}

  void note(const std::string& name) {
    if (name.rfind(prefix_, 0) != 0) return;
    auto rest = name.substr(prefix_.size());
    if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) return;
    next_ = std::max(next_, std::stoi(rest) + 1);
  }
  void note(const Formula& f) {
    for (auto& x : vars_of(f)) note(x.name);
  }
  Var make(SortId sort) { return Var{prefix_ + std::to_string(next_++), sort}; }

 private:
  std::string prefix_;
  int next_ = 1;
};

// ---- dagger -------------------------------------------------------------

struct Dagger {
  Formula phi;                          // symbol-free image
  std::vector<Var> z;                   // variables of sort S, sorted
  std::vector<int> M;                   // largest depth per z_i
  std::vector<std::vector<Var>> grid;   // grid[i][j] stands for s^j(z_i), j = 0..M_i+2
};

inline std::string grid_prefix(const VarSet& taken) {
  std::string p = "@y";
  for (;;) {
    bool clash = false;
    for (auto& x : taken)
      if (x.name.rfind(p, 0) == 0 && x.name.size() > p.size() &&
          std::isdigit(static_cast<unsigned char>(x.name[p.size()])))
        clash = true;
    if (!clash) return p;
    p += "y";
  }
}

// Replaces each atom s^j(z_i)=s^q(z_p) of sort S by y_{i,j}=y_{p,q}.
inline Dagger dagger(const Formula& f) {
  if (!quantifier_free(f)) throw std::invalid_argument("dagger: quantified formula");
  auto all = vars_of(f);
  if (all.empty()) throw std::invalid_argument("dagger: formula without variables");
  Dagger d;
  auto depths = max_depths(f);
  auto p = grid_prefix(all);
  std::map<Var, int> index;
  for (auto& x : all) {
    if (x.sort != 0) continue;
    int i = static_cast<int>(d.z.size());
    index[x] = i;
    d.z.push_back(x);
    int m = depths.count(x) ? depths[x] : 0;
    d.M.push_back(m);
    std::vector<Var> row;
    for (int j = 0; j <= m + 2; ++j)
      row.push_back(Var{p + std::to_string(i + 1) + "_" + std::to_string(j), 0});
    d.grid.push_back(std::move(row));
  }
  d.phi = map_terms(f, [&](const Term& t) {
    if (t.sort() != 0) return t;
    return Term{d.grid[index.at(t.var)][t.depth], 0};
  });
  return d;
}

// ---- cardinality and fixed-point formulas -------------------------------

namespace detail {
inline std::vector<Var> bound_vars(const char* base, int n, SortId sort) {
  std::vector<Var> xs;
  for (int i = 1; i <= n; ++i) xs.push_back(Var{std::string(base) + std::to_string(i), sort});
  return xs;
}
inline Formula distinct(const std::vector<Var>& xs) {
  std::vector<Formula> ks;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) ks.push_back(neq(tv(xs[i]), tv(xs[j])));
  return conj(std::move(ks));
}
}  // namespace detail

inline Formula distinct(const std::vector<Var>& xs) { return detail::distinct(xs); }

// psi_{>=n}: n pairwise distinct elements exist.
inline Formula mk_card_geq(SortId sort, int n) {
  if (n < 0) throw std::invalid_argument("mk_card_geq: negative n");
  if (n == 0) return top();
  auto xs = detail::bound_vars("x", n, sort);
  return exists(xs, detail::distinct(xs));
}

// psi_{<=n}: every element is one of n.
inline Formula mk_card_leq(SortId sort, int n) {
  if (n < 1) throw std::invalid_argument("mk_card_leq: n must be positive");
  auto xs = detail::bound_vars("x", n, sort);
  Var y{"y", sort};
  std::vector<Formula> alts;
  for (auto& x : xs) alts.push_back(eq(tv(y), tv(x)));
  return exists(xs, forall({y}, disj(std::move(alts))));
}

inline Formula mk_card_eq(SortId sort, int n) {
  if (n < 1) throw std::invalid_argument("mk_card_eq: n must be positive");
  return conj(mk_card_geq(sort, n), mk_card_leq(sort, n));
}

enum class FixKind { AtLeast, Exactly };
enum class FixFlavor { Fixed, Moved };

// At least / exactly n elements a with s(a)=a (Fixed) or s(a)!=a (Moved).
inline Formula mk_fix_count(FixKind kind, FixFlavor flavor, int n) {
  if (n < 0) throw std::invalid_argument("mk_fix_count: negative n");
  auto lit = [&](const Var& x) {
    auto e = eq(s(tv(x)), tv(x));
    return flavor == FixFlavor::Fixed ? e : neg(e);
  };
  auto xs = detail::bound_vars("x", n, 0);
  std::vector<Formula> body{detail::distinct(xs)};
  for (auto& x : xs) body.push_back(lit(x));
  if (kind == FixKind::Exactly) {
    Var y{"y", 0};
    std::vector<Formula> alts;
    for (auto& x : xs) alts.push_back(eq(tv(y), tv(x)));
    body.push_back(forall({y}, implies(lit(y), disj(std::move(alts)))));
  }
  return exists(xs, conj(std::move(body)));
}

// forall x. s(s(x))=x or s(s(x))=s(x)
inline Formula mk_psi_vee() {
  Var x{"x", 0};
  return forall({x}, disj(eq(s(tv(x), 2), tv(x)), eq(s(tv(x), 2), s(tv(x)))));
}

inline Formula mk_all_fixed() {
  Var x{"x", 0};
  return forall({x}, eq(s(tv(x)), tv(x)));
}

inline Formula mk_all_moved() {
  Var x{"x", 0};
  return forall({x}, neq(s(tv(x)), tv(x)));
}

}  // namespace polite

#endif  // POLITE_LOGIC_HPP
