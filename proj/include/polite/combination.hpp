#ifndef POLITE_COMBINATION_HPP
#define POLITE_COMBINATION_HPP

// Combination of two theories over disjoint signatures sharing sorts:
// guess an arrangement of the shared variables of the strong witness of phi2
// and check each side in its own theory.

#include <functional>
#include <future>
#include <numeric>

#include "arrangements.hpp"
#include "theories.hpp"
#include "witnesses.hpp"

namespace polite {

struct CombinationProblem {
  TheoryPtr t1, t2;
  Formula phi1, phi2;
};

struct CombineOptions {
  bool prune = false;       // union-find over syntactically forced (dis)equalities
  bool lookahead = false;   // check partial arrangements against both sides
  bool unsound_ok = false;  // allow a second theory not marked stably infinite
  std::uint64_t max_arrangements = 0;  // 0 = no cap
  int jobs = 1;
};

struct CombinationStats {
  std::uint64_t tried = 0;          // complete arrangements checked
  std::uint64_t pruned_subtrees = 0;
  std::uint64_t pruned_leaves = 0;  // complete arrangements skipped by pruning
  std::uint64_t examined() const { return tried + pruned_leaves; }
};

struct CombinationResult {
  Verdict verdict = Verdict::Unsat;
  Formula psi;
  SortedVars shared;
  std::optional<Arrangement> certificate;
  SatResult side1, side2;
  CombinationStats stats;
  bool unsound = false;
  std::string note;
};

namespace detail {

// Number of restricted-growth completions of r further positions when k blocks exist.
inline double rgs_completions(int r, int k) {
  std::vector<std::vector<double>> g(r + 1, std::vector<double>(k + r + 2, 0));
  for (int j = 0; j <= k + r + 1; ++j) g[0][j] = 1;
  for (int i = 1; i <= r; ++i)
    for (int j = 0; j + 1 <= k + r + 1; ++j) g[i][j] = j * g[i - 1][j] + g[i - 1][j + 1];
  return g[r][k];
}

// Leaves below a prefix of length len of the variable order.
inline std::uint64_t leaves_below(const std::vector<Var>& order, const std::vector<int>& rgs) {
  std::size_t len = rgs.size();
  double total = 1;
  // Current sort: blocks used so far in the prefix part of that sort.
  SortId cur = order[len - 1].sort;
  int blocks = 0, remaining_cur = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i].sort != cur) continue;
    if (i < len)
      blocks = std::max(blocks, rgs[i] + 1);
    else
      ++remaining_cur;
  }
  total *= rgs_completions(remaining_cur, blocks);
  std::map<SortId, int> later;
  for (std::size_t i = len; i < order.size(); ++i)
    if (order[i].sort != cur) ++later[order[i].sort];
  for (auto& [s, n] : later) total *= static_cast<double>(bell_numbers(n).back());
  return static_cast<std::uint64_t>(total + 0.5);
}

inline Cube prefix_cube(const std::vector<Var>& order, const std::vector<int>& rgs) {
  Arrangement a;
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    auto& bs = a.blocks[order[i].sort];
    if (static_cast<int>(bs.size()) <= rgs[i]) bs.resize(rgs[i] + 1);
    bs[rgs[i]].push_back(order[i]);
  }
  return arrangement_to_cube(a);
}

// Top-level variable (dis)equalities of a formula.
inline void forced_literals(const Formula& f, std::vector<std::pair<Var, Var>>& eqs, std::vector<std::pair<Var, Var>>& neqs) {
  for (auto& c : top_conjuncts(nnf(f))) {
    bool pos = true;
    Formula atom = c;
    if (c->kind == Kind::Not) {
      pos = false;
      atom = c->kids[0];
    }
    if (atom->kind != Kind::Eq || atom->lhs.depth || atom->rhs.depth) continue;
    (pos ? eqs : neqs).emplace_back(atom->lhs.var, atom->rhs.var);
  }
}

}  // namespace detail

inline void check_problem(const CombinationProblem& p, const CombineOptions& opt) {
  if (p.t1->sig.has_s && p.t2->sig.has_s) throw std::invalid_argument("combine: both theories use s; signatures must be disjoint");
  p.t1->check_formula(p.phi1);
  p.t2->check_formula(p.phi2);
  if (!p.t2->expected.sw) throw std::invalid_argument("combine: " + p.t2->name + " has no strong witness");
  if (!p.t2->expected.si && !opt.unsound_ok)
    throw std::invalid_argument("combine: " + p.t2->name + " is not stably infinite; pass --unsound-ok to run anyway");
}

inline CombinationResult polite_combine(const CombinationProblem& p, const CombineOptions& opt = {}) {
  check_problem(p, opt);
  CombinationResult res;
  res.unsound = !p.t2->expected.si;
  auto wit = strong_witness_for(*p.t2);
  res.psi = (*wit)(p.phi2);
  int shared_sorts = std::min(p.t1->sig.num_sorts, p.t2->sig.num_sorts);
  VarSet v;
  for (auto& x : vars_of(res.psi))
    if (x.sort < shared_sorts) v.insert(x);
  res.shared = by_sort(v);

  PruneHook hook;
  std::vector<std::pair<Var, Var>> eqs, neqs;
  if (opt.prune) {
    detail::forced_literals(p.phi1, eqs, neqs);
    detail::forced_literals(res.psi, eqs, neqs);
  }
  if (opt.prune || opt.lookahead) {
    hook = [&](const std::vector<Var>& order, const std::vector<int>& rgs) {
      std::map<Var, int> at;
      for (std::size_t i = 0; i < rgs.size(); ++i) at[order[i]] = rgs[i];
      bool cut = false;
      auto both = [&](const std::pair<Var, Var>& e) { return at.count(e.first) && at.count(e.second) && e.first.sort == e.second.sort; };
      for (auto& e : eqs)
        if (both(e) && at[e.first] != at[e.second]) cut = true;
      for (auto& e : neqs)
        if (both(e) && at[e.first] == at[e.second]) cut = true;
      if (!cut && opt.lookahead) {
        auto d = to_formula(detail::prefix_cube(order, rgs));
        if (p.t1->qf_sat(conj(p.phi1, d)).verdict == Verdict::Unsat || p.t2->qf_sat(conj(res.psi, d)).verdict == Verdict::Unsat)
          cut = true;
      }
      if (cut) {
        ++res.stats.pruned_subtrees;
        res.stats.pruned_leaves += detail::leaves_below(order, rgs);
      }
      return cut;
    };
  }

  auto check = [&](const Arrangement& a) {
    auto d = arrangement_to_formula(a);
    auto r1 = p.t1->qf_sat(conj(p.phi1, d));
    SatResult r2 = SatResult::unsat();
    if (r1.sat()) r2 = p.t2->qf_sat(conj(res.psi, d));
    return std::pair{r1, r2};
  };

  bool unknown = false;
  auto stream = enumerate_arrangements(res.shared, hook);
  int jobs = std::max(opt.jobs, 1);
  for (;;) {
    std::vector<Arrangement> batch;
    while (static_cast<int>(batch.size()) < (jobs > 1 ? 8 * jobs : 1)) {
      if (opt.max_arrangements && res.stats.tried + batch.size() >= opt.max_arrangements) break;
      auto a = stream.next();
      if (!a) break;
      batch.push_back(std::move(*a));
    }
    if (batch.empty()) {
      if (opt.max_arrangements && res.stats.tried >= opt.max_arrangements && stream.next()) {
        res.verdict = Verdict::Unknown;
        res.note = "arrangement cap reached";
        return res;
      }
      break;
    }
    std::vector<std::pair<SatResult, SatResult>> out(batch.size());
    if (jobs > 1) {
      std::vector<std::future<void>> fs;
      for (int w = 0; w < jobs; ++w)
        fs.push_back(std::async(std::launch::async, [&, w] {
          for (std::size_t i = w; i < batch.size(); i += jobs) out[i] = check(batch[i]);
        }));
      for (auto& f : fs) f.get();
    } else {
      for (std::size_t i = 0; i < batch.size(); ++i) out[i] = check(batch[i]);
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      ++res.stats.tried;
      auto& [r1, r2] = out[i];
      if (r1.sat() && r2.sat()) {
        res.verdict = Verdict::Sat;
        res.certificate = batch[i];
        res.side1 = r1;
        res.side2 = r2;
        if (res.unsound) res.note = "second theory not stably infinite; verdict unsound";
        return res;
      }
      unknown |= r1.verdict == Verdict::Unknown || r2.verdict == Verdict::Unknown;
    }
  }
  res.verdict = unknown ? Verdict::Unknown : Verdict::Unsat;
  if (unknown) res.note = "a side check hit its search limit";
  else if (res.unsound) res.note = "second theory not stably infinite; verdict unsound";
  return res;
}

// Re-checks a SAT certificate through both side procedures.
inline bool recheck_certificate(const CombinationProblem& p, const CombinationResult& r) {
  if (r.verdict != Verdict::Sat || !r.certificate) return false;
  auto d = arrangement_to_formula(*r.certificate);
  return p.t1->qf_sat(conj(p.phi1, d)).sat() && p.t2->qf_sat(conj(r.psi, d)).sat();
}

// ---- brute-force oracle ----

inline FiniteStructure reduct(const FiniteStructure& a, const Signature& sig) {
  FiniteStructure r;
  r.sig = sig;
  r.sizes.assign(a.sizes.begin(), a.sizes.begin() + sig.num_sorts);
  if (sig.has_s) r.s = a.s;
  return r;
}

// Searches every structure with all domains <= bound that is a member of both theories.
inline SatResult oracle_combined_sat(const Theory& t1, const Theory& t2, const Formula& phi, int bound) {
  if (bound < 1) throw std::invalid_argument("oracle: bound must be >= 1");
  Signature sig{std::max(t1.sig.num_sorts, t2.sig.num_sorts), t1.sig.has_s || t2.sig.has_s};
  int ns = sig.num_sorts;
  std::vector<int> sizes(ns, 1);
  bool unknown = false;
  for (;;) {
    Profile p1(sizes.begin(), sizes.begin() + t1.sig.num_sorts), p2(sizes.begin(), sizes.begin() + t2.sig.num_sorts);
    if (t1.admits(p1) && t2.admits(p2)) {
      auto st = enumerate_structures(sig, sizes);
      while (auto a = st.next()) {
        if (!t1.member(reduct(*a, t1.sig)) || !t2.member(reduct(*a, t2.sig))) continue;
        SearchSpec sp;
        sp.sig = sig;
        sp.sizes = sizes;
        sp.policy = SPolicy::Free;
        if (sig.has_s) sp.table = a->s;
        auto r = search_model(phi, sp);
        if (r.sat()) return r;
        unknown |= r.verdict == Verdict::Unknown;
      }
    }
    int k = 0;
    while (k < ns && sizes[k] == bound) sizes[k++] = 1;
    if (k == ns) break;
    ++sizes[k];
  }
  if (unknown) return SatResult::unknown("search node limit reached");
  return SatResult::unsat("no model with domains <= " + std::to_string(bound));
}

}  // namespace polite

#endif  // POLITE_COMBINATION_HPP
