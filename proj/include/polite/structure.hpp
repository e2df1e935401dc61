#ifndef POLITE_STRUCTURE_HPP
#define POLITE_STRUCTURE_HPP

// Finite structures, interpretations, evaluation, and the congruence-closure
// procedure for the theory with no axioms.

#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "logic.hpp"

namespace polite {

struct FiniteStructure {
  Signature sig;
  std::vector<int> sizes;  // per sort, all >= 1
  std::vector<int> s;      // table for s on sort 0; empty when sig.has_s is false

  int size(SortId k) const { return sizes.at(k); }
  bool operator==(const FiniteStructure&) const = default;
};

inline void validate(const FiniteStructure& a) {
  if (static_cast<int>(a.sizes.size()) != a.sig.num_sorts) throw std::invalid_argument("structure: wrong sort count");
  for (int n : a.sizes)
    if (n < 1) throw std::invalid_argument("structure: empty domain");
  if (a.sig.has_s != !a.s.empty() || (a.sig.has_s && static_cast<int>(a.s.size()) != a.sizes[0]))
    throw std::invalid_argument("structure: missing or misshapen function table");
  for (int v : a.s)
    if (v < 0 || v >= a.sizes[0]) throw std::invalid_argument("structure: table entry out of range");
}

inline FiniteStructure identity_structure(Signature sig, std::vector<int> sizes) {
  FiniteStructure a{sig, std::move(sizes), {}};
  if (sig.has_s) {
    a.s.resize(a.sizes[0]);
    std::iota(a.s.begin(), a.s.end(), 0);
  }
  return a;
}

inline int fixed_points(const FiniteStructure& a) {
  int n = 0;
  for (int i = 0; i < static_cast<int>(a.s.size()); ++i) n += a.s[i] == i;
  return n;
}

inline bool satisfies_psi_vee(const FiniteStructure& a) {
  for (int i = 0; i < static_cast<int>(a.s.size()); ++i) {
    int t = a.s[a.s[i]];
    if (t != i && t != a.s[i]) return false;
  }
  return true;
}

using Assignment = std::map<Var, int>;

struct Interpretation {
  FiniteStructure structure;
  Assignment assignment;
};

struct EvalError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline int eval_term(const FiniteStructure& a, const Assignment& env, const Term& t) {
  auto it = env.find(t.var);
  if (it == env.end()) throw EvalError("unassigned variable " + t.var.name);
  if (t.var.sort >= a.sig.num_sorts) throw EvalError("variable of a sort outside the signature");
  int v = it->second;
  if (v < 0 || v >= a.sizes[t.var.sort]) throw EvalError("assignment out of range for " + t.var.name);
  if (t.depth > 0 && !a.sig.has_s) throw EvalError("function symbol outside the signature");
  for (int i = 0; i < t.depth; ++i) v = a.s[v];
  return v;
}

inline bool eval(const FiniteStructure& a, Assignment& env, const Formula& f) {
  switch (f->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Eq: return eval_term(a, env, f->lhs) == eval_term(a, env, f->rhs);
    case Kind::Not: return !eval(a, env, f->kids[0]);
    case Kind::And:
      for (auto& k : f->kids)
        if (!eval(a, env, k)) return false;
      return true;
    case Kind::Or:
      for (auto& k : f->kids)
        if (eval(a, env, k)) return true;
      return false;
    case Kind::Exists:
    case Kind::Forall: {
      bool want = f->kind == Kind::Exists;
      std::vector<std::optional<int>> saved;
      for (auto& x : f->bound) {
        auto it = env.find(x);
        saved.push_back(it == env.end() ? std::nullopt : std::optional<int>(it->second));
        if (x.sort >= a.sig.num_sorts) throw EvalError("bound variable of a sort outside the signature");
      }
      std::vector<int> idx(f->bound.size(), 0);
      bool result = !want;
      for (;;) {
        for (std::size_t i = 0; i < idx.size(); ++i) env[f->bound[i]] = idx[i];
        if (eval(a, env, f->kids[0]) == want) {
          result = want;
          break;
        }
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == a.sizes[f->bound[i].sort]) idx[i++] = 0;
        if (i == idx.size()) break;
      }
      for (std::size_t i = 0; i < f->bound.size(); ++i) {
        if (saved[i])
          env[f->bound[i]] = *saved[i];
        else
          env.erase(f->bound[i]);
      }
      return result;
    }
  }
  return false;
}

}  // namespace detail

inline bool evaluate(const Interpretation& m, const Formula& f) {
  Assignment env = m.assignment;
  return detail::eval(m.structure, env, f);
}

inline bool evaluate(const FiniteStructure& a, const Formula& closed) {
  Assignment env;
  return detail::eval(a, env, closed);
}

inline std::string to_string(const FiniteStructure& a) {
  std::string out;
  for (std::size_t k = 0; k < a.sizes.size(); ++k) out += (k ? " " : "") + std::string(sort_name(static_cast<SortId>(k))) + "=" + std::to_string(a.sizes[k]);
  if (a.sig.has_s) {
    out += " s=[";
    for (std::size_t i = 0; i < a.s.size(); ++i) out += (i ? "," : "") + std::to_string(a.s[i]);
    out += "]";
  }
  return out;
}

inline std::string to_string(const Interpretation& m) {
  std::string out = to_string(m.structure) + " {";
  bool first = true;
  for (auto& [x, v] : m.assignment) {
    if (x.name.rfind("@", 0) == 0) continue;
    out += (first ? "" : ", ") + x.name + ":" + std::to_string(v);
    first = false;
  }
  return out + "}";
}

// ---- exhaustive enumeration ---------------------------------------------

// Every structure with the given sizes, function tables in lexicographic order.
class StructureStream {
 public:
  StructureStream(Signature sig, std::vector<int> sizes) : cur_{sig, std::move(sizes), {}} {
    if (static_cast<int>(cur_.sizes.size()) != sig.num_sorts) throw std::invalid_argument("sizes do not match signature");
    for (int n : cur_.sizes)
      if (n < 1) throw std::invalid_argument("domain size must be positive");
    if (sig.has_s) cur_.s.assign(cur_.sizes[0], 0);
  }

  std::optional<FiniteStructure> next() {
    if (done_) return std::nullopt;
    if (!started_) {
      started_ = true;
      return cur_;
    }
    int n = cur_.sig.has_s ? cur_.sizes[0] : 0;
    int i = n - 1;
    while (i >= 0 && cur_.s[i] == n - 1) cur_.s[i--] = 0;
    if (i < 0) {
      done_ = true;
      return std::nullopt;
    }
    ++cur_.s[i];
    return cur_;
  }

 private:
  FiniteStructure cur_;
  bool started_ = false, done_ = false;
};

inline StructureStream enumerate_structures(Signature sig, std::vector<int> sizes) {
  return StructureStream(sig, std::move(sizes));
}

inline std::uint64_t structure_count(const Signature& sig, const std::vector<int>& sizes) {
  std::uint64_t c = 1;
  if (sig.has_s)
    for (int i = 0; i < sizes[0]; ++i) c *= static_cast<std::uint64_t>(sizes[0]);
  return c;
}

// ---- satisfiability results ---------------------------------------------

enum class Verdict { Sat, Unsat, Unknown };

inline const char* to_string(Verdict v) {
  return v == Verdict::Sat ? "SAT" : v == Verdict::Unsat ? "UNSAT" : "UNKNOWN";
}

struct SatResult {
  Verdict verdict = Verdict::Unsat;
  std::optional<Interpretation> model;
  std::string note;

  bool sat() const { return verdict == Verdict::Sat; }
  static SatResult unsat(std::string note = {}) { return {Verdict::Unsat, std::nullopt, std::move(note)}; }
  static SatResult unknown(std::string note = {}) { return {Verdict::Unknown, std::nullopt, std::move(note)}; }
  static SatResult sat_with(Interpretation m, std::string note = {}) {
    return {Verdict::Sat, std::move(m), std::move(note)};
  }
  static SatResult sat_without(std::string note) { return {Verdict::Sat, std::nullopt, std::move(note)}; }
};

// ---- congruence closure -------------------------------------------------

// Subterm universe of a formula: every s^j(x) with j up to the largest depth of x.
class TermTable {
 public:
  TermTable() = default;
  explicit TermTable(const Formula& f) {
    for (auto& [x, d] : max_depths(f)) add(x, d);
  }
  void add(const Var& x, int depth) {
    auto it = base_.find(x);
    if (it == base_.end()) {
      int id = static_cast<int>(terms_.size());
      base_[x] = id;
      terms_.push_back(Term{x, 0});
      succ_.push_back(-1);
      it = base_.find(x);
    }
    int cur = it->second;
    int d = 0;
    while (succ_[cur] >= 0) cur = succ_[cur], ++d;
    for (; d < depth; ++d) {
      int id = static_cast<int>(terms_.size());
      terms_.push_back(Term{x, d + 1});
      succ_.push_back(-1);
      succ_[cur] = id;
      cur = id;
    }
  }
  int id(const Term& t) const {
    int cur = base_.at(t.var);
    for (int i = 0; i < t.depth; ++i) cur = succ_.at(cur);
    return cur;
  }
  int size() const { return static_cast<int>(terms_.size()); }
  const Term& term(int i) const { return terms_[i]; }
  int succ(int i) const { return succ_[i]; }
  const std::map<Var, int>& bases() const { return base_; }

 private:
  std::vector<Term> terms_;
  std::vector<int> succ_;
  std::map<Var, int> base_;
};

class Congruence {
 public:
  explicit Congruence(const TermTable* t) : t_(t), parent_(t->size()) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int a) const {
    while (parent_[a] != a) a = parent_[a];
    return a;
  }
  bool same(int a, int b) const { return find(a) == find(b); }
  bool apart(int a, int b) const {
    int ra = find(a), rb = find(b);
    for (auto& [x, y] : diseq_) {
      int rx = find(x), ry = find(y);
      if ((rx == ra && ry == rb) || (rx == rb && ry == ra)) return true;
    }
    return false;
  }

  // Returns false on conflict.
  bool merge(int a, int b) {
    std::vector<std::pair<int, int>> work{{a, b}};
    while (!work.empty()) {
      auto [x, y] = work.back();
      work.pop_back();
      int rx = find(x), ry = find(y);
      if (rx == ry) continue;
      parent_[std::max(rx, ry)] = std::min(rx, ry);
      // congruence: successors of members of the two classes must agree
      int sx = -1;
      for (int i = 0; i < t_->size(); ++i) {
        if (t_->succ(i) < 0 || find(i) != std::min(rx, ry)) continue;
        if (sx < 0)
          sx = t_->succ(i);
        else
          work.emplace_back(sx, t_->succ(i));
      }
    }
    return consistent();
  }
  bool separate(int a, int b) {
    if (same(a, b)) return false;
    diseq_.emplace_back(a, b);
    return true;
  }
  bool consistent() const {
    for (auto& [x, y] : diseq_)
      if (same(x, y)) return false;
    return true;
  }
  const TermTable& table() const { return *t_; }

 private:
  const TermTable* t_;
  std::vector<int> parent_;
  std::vector<std::pair<int, int>> diseq_;
};

namespace detail {

enum class Tri { F, T, U };

inline Tri eval3(const Congruence& cc, const Formula& f) {
  switch (f->kind) {
    case Kind::True: return Tri::T;
    case Kind::False: return Tri::F;
    case Kind::Eq: {
      int a = cc.table().id(f->lhs), b = cc.table().id(f->rhs);
      if (cc.same(a, b)) return Tri::T;
      return cc.apart(a, b) ? Tri::F : Tri::U;
    }
    case Kind::Not: {
      auto v = eval3(cc, f->kids[0]);
      return v == Tri::U ? Tri::U : v == Tri::T ? Tri::F : Tri::T;
    }
    case Kind::And: {
      Tri r = Tri::T;
      for (auto& k : f->kids) {
        auto v = eval3(cc, k);
        if (v == Tri::F) return Tri::F;
        if (v == Tri::U) r = Tri::U;
      }
      return r;
    }
    case Kind::Or: {
      Tri r = Tri::F;
      for (auto& k : f->kids) {
        auto v = eval3(cc, k);
        if (v == Tri::T) return Tri::T;
        if (v == Tri::U) r = Tri::U;
      }
      return r;
    }
    default: throw std::invalid_argument("quantified formula in congruence closure");
  }
}

// Depth-first search over the disjunctions of an NNF agenda; cubes are explored lazily.
inline bool cc_search(Congruence cc, std::vector<Formula> agenda, std::vector<Formula> ors, Congruence& out) {
  for (;;) {
    while (!agenda.empty()) {
      auto f = agenda.back();
      agenda.pop_back();
      switch (f->kind) {
        case Kind::True: break;
        case Kind::False: return false;
        case Kind::Eq:
          if (!cc.merge(cc.table().id(f->lhs), cc.table().id(f->rhs))) return false;
          break;
        case Kind::Not:
          if (!cc.separate(cc.table().id(f->kids[0]->lhs), cc.table().id(f->kids[0]->rhs))) return false;
          break;
        case Kind::And:
          for (auto& k : f->kids) agenda.push_back(k);
          break;
        case Kind::Or: ors.push_back(f); break;
        default: throw std::invalid_argument("quantified formula in congruence closure");
      }
    }
    // settle disjunctions that are already decided or have one live disjunct
    std::vector<Formula> open;
    bool progress = false;
    for (auto& o : ors) {
      std::vector<Formula> live;
      bool done = false;
      for (auto& k : o->kids) {
        auto v = eval3(cc, k);
        if (v == Tri::T) {
          done = true;
          break;
        }
        if (v == Tri::U) live.push_back(k);
      }
      if (done) continue;
      if (live.empty()) return false;
      if (live.size() == 1) {
        agenda.push_back(live[0]);
        progress = true;
      } else {
        open.push_back(o);
      }
    }
    ors = std::move(open);
    if (progress) continue;
    if (ors.empty()) {
      out = std::move(cc);
      return true;
    }
    auto branch = ors.back();
    ors.pop_back();
    for (auto& k : branch->kids) {
      if (eval3(cc, k) == Tri::F) continue;
      if (cc_search(cc, {k}, ors, out)) return true;
    }
    return false;
  }
}

inline std::vector<Formula> top_conjuncts(const Formula& f) {
  std::vector<Formula> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    auto g = stack.back();
    stack.pop_back();
    if (g->kind == Kind::And)
      for (auto it = g->kids.rbegin(); it != g->kids.rend(); ++it) stack.push_back(*it);
    else
      out.push_back(g);
  }
  return out;
}

// Groups top-level conjuncts whose variables overlap.
inline std::vector<Formula> components(const Formula& f) {
  auto parts = top_conjuncts(f);
  std::map<Var, int> owner;
  std::vector<int> uf(parts.size());
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> root = [&](int i) { return uf[i] == i ? i : uf[i] = root(uf[i]); };
  for (int i = 0; i < static_cast<int>(parts.size()); ++i)
    for (auto& x : vars_of(parts[i])) {
      auto [it, fresh] = owner.emplace(x, i);
      if (!fresh) uf[root(i)] = root(it->second);
    }
  std::map<int, std::vector<Formula>> groups;
  for (int i = 0; i < static_cast<int>(parts.size()); ++i) groups[root(i)].push_back(parts[i]);
  std::vector<Formula> out;
  for (auto& [r, g] : groups) out.push_back(conj(g));
  return out;
}

}  // namespace detail

// One element per class; successors missing from the term table map to themselves.
inline Interpretation model_from_classes(const std::vector<Congruence>& parts, const Signature& sig) {
  Interpretation m;
  m.structure.sig = sig;
  m.structure.sizes.assign(sig.num_sorts, 0);
  std::vector<std::pair<int, int>> succ_edges;  // sort-0 element -> element
  for (auto& cc : parts) {
    auto& t = cc.table();
    std::map<int, int> elem;
    for (int i = 0; i < t.size(); ++i) {
      int r = cc.find(i);
      if (!elem.count(r)) elem[r] = m.structure.sizes[t.term(i).sort()]++;
    }
    for (int i = 0; i < t.size(); ++i)
      if (t.succ(i) >= 0) succ_edges.emplace_back(elem[cc.find(i)], elem[cc.find(t.succ(i))]);
    for (auto& [x, id] : t.bases()) m.assignment[x] = elem[cc.find(id)];
  }
  for (auto& n : m.structure.sizes) n = std::max(n, 1);
  if (sig.has_s) {
    m.structure.s.resize(m.structure.sizes[0]);
    std::iota(m.structure.s.begin(), m.structure.s.end(), 0);
    for (auto [a, b] : succ_edges) m.structure.s[a] = b;
  }
  return m;
}

inline Signature signature_of(const Formula& f, int min_sorts = 1) {
  Signature g{min_sorts, uses_s(f)};
  for (auto& x : vars_of(f)) g.num_sorts = std::max(g.num_sorts, x.sort + 1);
  return g;
}

// Satisfiability with no axioms (free s), by case splitting and congruence closure.
inline SatResult free_qf_sat(const Formula& phi, std::optional<Signature> sig = std::nullopt) {
  if (!quantifier_free(phi)) throw std::invalid_argument("free_qf_sat: quantified formula");
  Signature g = sig ? *sig : signature_of(phi);
  if (uses_s(phi)) g.has_s = true;
  std::vector<TermTable> tables;
  auto comps = detail::components(nnf(phi));
  tables.reserve(comps.size());
  std::vector<Congruence> solved;
  for (auto& c : comps) {
    tables.emplace_back(c);
    Congruence cc(&tables.back()), out(&tables.back());
    if (!detail::cc_search(cc, {c}, {}, out)) return SatResult::unsat();
    solved.push_back(std::move(out));
  }
  return SatResult::sat_with(model_from_classes(solved, g));
}

// Classes of the sort's variables once the cube's equalities are closed.
inline int min_classes(const Cube& cube, SortId sort) {
  auto f = to_formula(cube);
  TermTable t(f);
  Congruence cc(&t);
  for (auto& l : cube)
    if (l.pos && !cc.merge(t.id(l.a), t.id(l.b))) throw std::invalid_argument("min_classes: inconsistent cube");
  for (auto& l : cube)
    if (!l.pos && !cc.separate(t.id(l.a), t.id(l.b))) throw std::invalid_argument("min_classes: inconsistent cube");
  std::set<int> roots;
  for (auto& [x, id] : t.bases())
    if (x.sort == sort) roots.insert(cc.find(id));
  return static_cast<int>(roots.size());
}

}  // namespace polite

#endif  // POLITE_STRUCTURE_HPP
