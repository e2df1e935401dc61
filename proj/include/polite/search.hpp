#ifndef POLITE_SEARCH_HPP
#define POLITE_SEARCH_HPP

// Model search at exact domain sizes.
//
// Variables and entries of the s table are assigned lazily: the formula is
// evaluated three-valued and the search branches on the first unknown it
// meets. Unused elements are interchangeable, so a branch only ever tries
// the elements already in use plus one fresh element. Structural axioms of
// the catalog theories are enforced through SPolicy.

#include <cstdint>
#include <optional>
#include <vector>

#include "structure.hpp"

namespace polite {

enum class SPolicy {
  None,         // no function symbol
  Free,         // any table
  Identity,     // s(x)=x everywhere
  PsiVee,       // s(s(x)) in {x, s(x)}
  Moved,        // s(x)!=x everywhere
  Count,        // exactly fixed_count fixed points
  CountPsiVee,  // both of the above
};

struct SearchSpec {
  Signature sig;
  std::vector<int> sizes;
  SPolicy policy = SPolicy::Free;
  int fixed_count = 0;
  bool covering = false;                  // every element must be the value of a variable
  std::optional<std::vector<int>> table;  // use this s table as given
  Assignment preassigned;
  std::uint64_t node_limit = 4'000'000;
};

namespace detail {

class Searcher {
 public:
  Searcher(const Formula& phi, const SearchSpec& spec) : spec_(spec) {
    if (!quantifier_free(phi)) throw std::invalid_argument("search: quantified formula");
    int ns = spec.sig.num_sorts;
    if (static_cast<int>(spec.sizes.size()) != ns) throw std::invalid_argument("search: sizes do not match signature");
    for (auto& x : vars_of(phi)) {
      if (x.sort >= ns) throw std::invalid_argument("search: variable of a sort outside the signature");
      var_ids_[x] = static_cast<int>(vars_.size());
      vars_.push_back(x);
    }
    for (auto& [x, v] : spec.preassigned)
      if (!var_ids_.count(x) && x.sort < ns) {
        var_ids_[x] = static_cast<int>(vars_.size());
        vars_.push_back(x);
      }
    if (uses_s(phi) && !spec.sig.has_s) throw std::invalid_argument("search: formula uses s outside the signature");
    root_ = compile(nnf(phi));
    for (int k : top_) collect_units(k);

    sizes_ = spec.sizes;
    used_.resize(ns);
    covered_.resize(ns);
    symmetric_.assign(ns, true);
    for (int k = 0; k < ns; ++k) {
      used_[k].assign(sizes_[k], 0);
      covered_[k].assign(sizes_[k], 0);
    }
    unassigned_.assign(ns, 0);
    for (auto& x : vars_) ++unassigned_[x.sort];
    assign_.assign(vars_.size(), -1);
    has_s_ = spec.sig.has_s;
    policy_ = has_s_ ? spec.policy : SPolicy::None;
    if (has_s_) {
      int n = sizes_[0];
      s_.assign(n, -1);
      if (spec.table) {
        if (static_cast<int>(spec.table->size()) != n) throw std::invalid_argument("search: table size mismatch");
        s_ = *spec.table;
        symmetric_[0] = false;
        policy_ = SPolicy::Free;
      } else if (policy_ == SPolicy::Identity) {
        for (int i = 0; i < n; ++i) s_[i] = i;
      }
      fixed_target_ = spec.fixed_count;
      moved_target_ = n - spec.fixed_count;
    }
    for (auto& [x, v] : spec.preassigned) {
      if (x.sort >= ns) continue;
      if (v < 0 || v >= sizes_[x.sort]) throw std::invalid_argument("search: preassigned value out of range");
      set_var(var_ids_.at(x), v);
    }
    trail_.clear();
  }

  SatResult run() {
    if (has_s_ && (policy_ == SPolicy::Count || policy_ == SPolicy::CountPsiVee) &&
        (fixed_target_ < 0 || moved_target_ < 0))
      return SatResult::unsat("fixed-point count out of range");
    try {
      if (dfs()) return SatResult::sat_with(model_);
    } catch (const Budget&) {
      return SatResult::unknown("search node limit reached");
    }
    return SatResult::unsat();
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  struct Budget {};
  struct CTerm {
    int var, depth;
  };
  struct CNode {
    Kind kind;
    int lhs = -1, rhs = -1;
    std::vector<int> kids;
  };
  struct Need {
    bool is_var = true;
    int idx = -1;
  };
  enum class Tri { F, T, U };
  struct TermVal {
    int value = -1;
    int stuck_var = -1, stuck_elem = -1, remaining = 0;
  };
  enum class Undo { Var, Fun, Used };
  struct TrailEntry {
    Undo what;
    int a, b;
  };

  const SearchSpec& spec_;
  std::vector<Var> vars_;
  std::map<Var, int> var_ids_;
  std::vector<CTerm> terms_;
  std::vector<CNode> nodes_v_;
  std::vector<int> top_;
  std::vector<std::pair<int, int>> units_;  // top-level positive equalities
  int root_ = -1;

  std::vector<int> sizes_;
  std::vector<std::vector<char>> used_;
  std::vector<std::vector<int>> covered_;
  std::vector<bool> symmetric_;
  std::vector<int> unassigned_;
  std::vector<int> assign_;
  std::vector<int> s_;
  bool has_s_ = false;
  SPolicy policy_ = SPolicy::None;
  int fixed_target_ = 0, moved_target_ = 0;
  int fixed_now_ = 0, moved_now_ = 0;
  std::vector<TrailEntry> trail_;
  std::uint64_t nodes_ = 0;
  Interpretation model_;

  int add_term(const Term& t) {
    terms_.push_back(CTerm{var_ids_.at(t.var), t.depth});
    return static_cast<int>(terms_.size()) - 1;
  }

  int compile(const Formula& f, bool top = true) {
    CNode n{f->kind, -1, -1, {}};
    switch (f->kind) {
      case Kind::True:
      case Kind::False: break;
      case Kind::Eq:
        if (f->lhs == f->rhs) {
          n.kind = Kind::True;
          break;
        }
        n.lhs = add_term(f->lhs);
        n.rhs = add_term(f->rhs);
        break;
      case Kind::Not: n.kids.push_back(compile(f->kids[0], false)); break;
      case Kind::And:
      case Kind::Or:
        for (auto& k : f->kids) n.kids.push_back(compile(k, top && f->kind == Kind::And));
        break;
      default: throw std::invalid_argument("search: quantified formula");
    }
    nodes_v_.push_back(std::move(n));
    int id = static_cast<int>(nodes_v_.size()) - 1;
    if (top && f->kind != Kind::And) top_.push_back(id);
    return id;
  }

  void collect_units(int id) {
    auto& n = nodes_v_[id];
    if (n.kind == Kind::Eq) units_.emplace_back(n.lhs, n.rhs);
  }

  // ---- state changes, all undoable through the trail ----

  void mark_used(int sort, int e) {
    if (used_[sort][e]) return;
    used_[sort][e] = 1;
    trail_.push_back({Undo::Used, sort, e});
  }

  void set_var(int v, int e) {
    assign_[v] = e;
    int k = vars_[v].sort;
    ++covered_[k][e];
    --unassigned_[k];
    trail_.push_back({Undo::Var, v, e});
    mark_used(k, e);
  }

  // Returns false when the policy forbids s(a)=b.
  bool set_fun(int a, int b) {
    if (!fun_allowed(a, b)) return false;
    s_[a] = b;
    if (a == b)
      ++fixed_now_;
    else
      ++moved_now_;
    trail_.push_back({Undo::Fun, a, b});
    mark_used(0, a);
    mark_used(0, b);
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      auto e = trail_.back();
      trail_.pop_back();
      switch (e.what) {
        case Undo::Var: {
          int k = vars_[e.a].sort;
          assign_[e.a] = -1;
          --covered_[k][e.b];
          ++unassigned_[k];
          break;
        }
        case Undo::Fun:
          s_[e.a] = -1;
          if (e.a == e.b)
            --fixed_now_;
          else
            --moved_now_;
          break;
        case Undo::Used: used_[e.a][e.b] = 0; break;
      }
    }
  }

  bool fun_allowed(int a, int b) const {
    bool psi = policy_ == SPolicy::PsiVee || policy_ == SPolicy::CountPsiVee;
    bool count = policy_ == SPolicy::Count || policy_ == SPolicy::CountPsiVee;
    if (policy_ == SPolicy::Identity && a != b) return false;
    if (policy_ == SPolicy::Moved && a == b) return false;
    if (count) {
      if (a == b && fixed_now_ + 1 > fixed_target_) return false;
      if (a != b && moved_now_ + 1 > moved_target_) return false;
    }
    if (psi) {
      if (s_[b] >= 0 && s_[b] != a && s_[b] != b) return false;
      for (int c = 0; c < static_cast<int>(s_.size()); ++c)
        if (s_[c] == a && b != c && b != a) return false;
      // a itself may be the target of b already handled above; a fixed point is always fine
    }
    return true;
  }

  // ---- evaluation ----

  TermVal eval_term(int t) const {
    TermVal r;
    const auto& ct = terms_[t];
    int v = assign_[ct.var];
    if (v < 0) {
      r.stuck_var = ct.var;
      r.remaining = ct.depth;
      return r;
    }
    for (int i = 0; i < ct.depth; ++i) {
      if (s_[v] < 0) {
        r.stuck_elem = v;
        r.remaining = ct.depth - i;
        return r;
      }
      v = s_[v];
    }
    r.value = v;
    return r;
  }

  static Need need_of(const TermVal& v) {
    if (v.stuck_var >= 0) return Need{true, v.stuck_var};
    return Need{false, v.stuck_elem};
  }

  Tri eval(int id, Need& need) const {
    const auto& n = nodes_v_[id];
    switch (n.kind) {
      case Kind::True: return Tri::T;
      case Kind::False: return Tri::F;
      case Kind::Eq: {
        auto a = eval_term(n.lhs), b = eval_term(n.rhs);
        if (a.value >= 0 && b.value >= 0) return a.value == b.value ? Tri::T : Tri::F;
        if (a.value < 0 && b.value < 0 && a.stuck_var == b.stuck_var && a.stuck_elem == b.stuck_elem &&
            a.remaining == b.remaining)
          return Tri::T;
        need = need_of(a.value < 0 ? a : b);
        return Tri::U;
      }
      case Kind::Not: {
        auto v = eval(n.kids[0], need);
        return v == Tri::U ? Tri::U : v == Tri::T ? Tri::F : Tri::T;
      }
      case Kind::And:
      case Kind::Or: {
        bool is_and = n.kind == Kind::And;
        Tri r = is_and ? Tri::T : Tri::F;
        Need first;
        bool have = false;
        for (int k : n.kids) {
          Need nk;
          auto v = eval(k, nk);
          if (v == (is_and ? Tri::F : Tri::T)) return v;
          if (v == Tri::U) {
            r = Tri::U;
            if (!have) first = nk, have = true;
          }
        }
        if (have) need = first;
        return r;
      }
      default: return Tri::U;
    }
  }

  // ---- pruning and propagation ----

  bool counts_ok() const {
    if (!spec_.covering) return true;
    for (int k = 0; k < static_cast<int>(sizes_.size()); ++k) {
      int uncovered = 0;
      for (int e = 0; e < sizes_[k]; ++e) uncovered += covered_[k][e] == 0;
      if (uncovered > unassigned_[k]) return false;
    }
    return true;
  }

  // Forces top-level equalities whose only unknown is a variable or a single s entry.
  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto [l, r] : units_) {
        auto a = eval_term(l), b = eval_term(r);
        if (a.value >= 0 && b.value >= 0) {
          if (a.value != b.value) return false;
          continue;
        }
        if (a.value < 0 && b.value < 0) continue;
        auto& known = a.value >= 0 ? a : b;
        auto& open = a.value >= 0 ? b : a;
        if (open.stuck_var >= 0 && open.remaining == 0) {
          set_var(open.stuck_var, known.value);
          changed = true;
        } else if (open.stuck_elem >= 0 && open.remaining == 1) {
          if (!set_fun(open.stuck_elem, known.value)) return false;
          changed = true;
        }
      }
    }
    return true;
  }

  std::vector<int> candidates(int sort) const {
    std::vector<int> out;
    int fresh = -1;
    for (int e = 0; e < sizes_[sort]; ++e) {
      if (used_[sort][e] || !symmetric_[sort])
        out.push_back(e);
      else if (fresh < 0)
        fresh = e;
    }
    if (fresh >= 0) out.push_back(fresh);
    return out;
  }

  // An element of sort 0 that is in use but whose successor is still open.
  int open_touched() const {
    for (int a = 0; a < static_cast<int>(s_.size()); ++a)
      if (s_[a] < 0 && used_[0][a]) return a;
    return -1;
  }

  bool complete() {
    std::vector<int> table = s_;
    if (has_s_) {
      int n = static_cast<int>(table.size());
      std::vector<int> open;
      for (int a = 0; a < n; ++a)
        if (table[a] < 0) open.push_back(a);
      switch (policy_) {
        case SPolicy::Count:
        case SPolicy::CountPsiVee: {
          int x = fixed_target_ - fixed_now_;
          int u = static_cast<int>(open.size());
          if (x < 0 || x > u) return false;
          for (int i = 0; i < x; ++i) table[open[i]] = open[i];
          std::vector<int> rest(open.begin() + x, open.end());
          if (rest.empty()) break;
          if (policy_ == SPolicy::Count) {
            if (n < 2) return false;
            for (int a : rest) table[a] = (a + 1) % n;
            break;
          }
          int fixed_elem = -1;
          for (int a = 0; a < n && fixed_elem < 0; ++a)
            if (table[a] == a) fixed_elem = a;
          if (fixed_elem >= 0) {
            for (int a : rest) table[a] = fixed_elem;
          } else {
            if (rest.size() % 2) return false;
            for (std::size_t i = 0; i < rest.size(); i += 2) {
              table[rest[i]] = rest[i + 1];
              table[rest[i + 1]] = rest[i];
            }
          }
          break;
        }
        case SPolicy::Moved:
          if (!open.empty() && n < 2) return false;
          for (int a : open) table[a] = (a + 1) % n;
          break;
        default:
          for (int a : open) table[a] = a;
      }
    }
    std::vector<int> values = assign_;
    for (int k = 0; k < static_cast<int>(sizes_.size()); ++k) {
      std::vector<int> uncovered;
      if (spec_.covering)
        for (int e = 0; e < sizes_[k]; ++e)
          if (!covered_[k][e]) uncovered.push_back(e);
      std::size_t next = 0;
      for (int v = 0; v < static_cast<int>(vars_.size()); ++v) {
        if (vars_[v].sort != k || values[v] >= 0) continue;
        values[v] = next < uncovered.size() ? uncovered[next++] : 0;
      }
      if (next < uncovered.size()) return false;
    }
    model_.structure = FiniteStructure{spec_.sig, sizes_, has_s_ ? table : std::vector<int>{}};
    model_.assignment.clear();
    for (int v = 0; v < static_cast<int>(vars_.size()); ++v) model_.assignment[vars_[v]] = values[v];
    return true;
  }

  bool dfs() {
    if (++nodes_ > spec_.node_limit) throw Budget{};
    auto mark = trail_.size();
    if (!propagate() || !counts_ok()) {
      undo_to(mark);
      return false;
    }
    Need need;
    auto v = eval(root_, need);
    if (v == Tri::F) {
      undo_to(mark);
      return false;
    }
    if (v == Tri::T) {
      int a = policy_ == SPolicy::CountPsiVee ? open_touched() : -1;
      if (a < 0) {
        if (complete()) return true;
        undo_to(mark);
        return false;
      }
      need = Need{false, a};
    }
    if (need.is_var) {
      for (int e : candidates(vars_[need.idx].sort)) {
        auto m2 = trail_.size();
        set_var(need.idx, e);
        if (dfs()) return true;
        undo_to(m2);
      }
    } else {
      for (int e : candidates(0)) {
        auto m2 = trail_.size();
        if (set_fun(need.idx, e) && dfs()) return true;
        undo_to(m2);
      }
    }
    undo_to(mark);
    return false;
  }
};

}  // namespace detail

inline SatResult search_model(const Formula& phi, const SearchSpec& spec) {
  detail::Searcher s(phi, spec);
  return s.run();
}

}  // namespace polite

#endif  // POLITE_SEARCH_HPP
