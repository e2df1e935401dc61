#ifndef POLITE_LAB_HPP
#define POLITE_LAB_HPP

// Bounded checking and refutation of the five properties, the witness
// contract checkers, and the table reproduction.
//
// Refutations are sound: every one carries a formula (and profiles or
// arrangements) that can be re-checked with the exact per-theory procedures.
// Confirmations only cover the checked corpus and window.

#include <array>
#include <chrono>
#include <future>
#include <random>

#include "arrangements.hpp"
#include "combination.hpp"
#include "theories.hpp"
#include "witnesses.hpp"

namespace polite::lab {

enum class Property { SI = 0, SM = 1, FW = 2, SW = 3, CV = 4 };
inline constexpr std::array<Property, 5> kProperties = {Property::SI, Property::SM, Property::FW, Property::SW, Property::CV};

inline const char* to_string(Property p) { return kPropertyNames[static_cast<int>(p)]; }

enum class Status { Confirmed, Refuted, Inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Confirmed: return "confirmed-bounded";
    case Status::Refuted: return "refuted";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct Evidence {
  std::string kind;
  std::string summary;
  std::vector<std::string> formulas;
  std::vector<std::string> models;
  bool conditional = false;  // rests on a hypothesis the artifact cannot check
};

struct PropertyVerdict {
  Property property = Property::SI;
  Status status = Status::Inconclusive;
  Evidence evidence;
  int bound = 0;
  std::function<bool()> recheck;  // re-derives a refutation from scratch
};

// ---- corpus ----

struct CorpusOptions {
  int count = 200;
  std::uint64_t seed = 0x5eed;
  int vars_per_sort = 3;
  int max_depth = 2;
  int max_atoms = 4;
};

inline Var corpus_var(SortId k, int i) {
  static const char* names[2][3] = {{"x", "y", "z"}, {"u", "v", "w"}};
  if (i < 3) return Var{names[k][i], k};
  return Var{std::string(names[k][0]) + std::to_string(i), k};
}

inline Formula random_formula(std::mt19937_64& rng, const Signature& sig, const CorpusOptions& o) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  auto term = [&](SortId k) {
    Term t = tv(corpus_var(k, pick(o.vars_per_sort)));
    if (k == 0 && sig.has_s) t = s(t, pick(o.max_depth + 1));
    return t;
  };
  auto atom = [&]() {
    SortId k = (sig.num_sorts > 1 && pick(3) == 0) ? 1 : 0;
    Formula a = eq(term(k), term(k));
    return pick(2) ? neg(a) : a;
  };
  std::function<Formula(int)> build = [&](int n) -> Formula {
    if (n <= 1) return atom();
    int left = 1 + pick(n - 1);
    auto a = build(left), b = build(n - left);
    Formula f = pick(3) ? conj(a, b) : disj(a, b);
    return pick(7) == 0 ? neg(f) : f;
  };
  return build(1 + pick(o.max_atoms));
}

inline std::vector<Formula> random_corpus(const Signature& sig, const CorpusOptions& o = {}) {
  std::mt19937_64 rng(o.seed ^ (static_cast<std::uint64_t>(sig.num_sorts) << 8) ^ (sig.has_s ? 0x100000u : 0u));
  std::vector<Formula> out;
  for (int i = 0; i < o.count; ++i) out.push_back(random_formula(rng, sig, o));
  return out;
}

// The formulas used by the counterexamples, per signature.
inline std::vector<Formula> handcrafted_corpus(const Signature& sig) {
  auto x = tv(corpus_var(0, 0)), y = tv(corpus_var(0, 1)), z = tv(corpus_var(0, 2));
  std::vector<Formula> out{eq(x, x), eq(x, y), neq(x, y), distinct({x.var, y.var, z.var})};
  for (int k = 4; k <= 5; ++k) {
    std::vector<Var> xs;
    for (int i = 0; i < k; ++i) xs.push_back(corpus_var(0, i));
    out.push_back(distinct(xs));
  }
  if (sig.has_s) {
    out.push_back(eq(s(x), x));
    out.push_back(neq(s(x), x));
    out.push_back(conj(eq(y, s(x)), eq(z, s(y))));
    out.push_back(conj({eq(y, s(x)), eq(z, s(y)), neq(x, y), neq(y, z)}));
    out.push_back(conj(eq(s(x), x), neq(s(y), y)));
    out.push_back(conj(eq(s(x, 2), x), neq(s(x), x)));
    out.push_back(conj(neq(s(x), x), neq(x, y)));
  }
  if (sig.num_sorts > 1) {
    auto u = tv(corpus_var(1, 0)), v = tv(corpus_var(1, 1)), w = tv(corpus_var(1, 2));
    out.push_back(eq(u, u));
    out.push_back(neq(u, v));
    out.push_back(conj(eq(x, x), eq(u, u)));
    out.push_back(conj(distinct({x.var, y.var, z.var}), neq(u, v)));
    out.push_back(conj(distinct({x.var, y.var, z.var}), distinct({u.var, v.var, w.var})));
  }
  return out;
}

inline std::vector<Formula> standard_corpus(const Signature& sig, int random_count, std::uint64_t seed = 0x5eed) {
  auto out = handcrafted_corpus(sig);
  CorpusOptions o;
  o.count = random_count;
  o.seed = seed;
  for (auto& f : random_corpus(sig, o)) out.push_back(f);
  return out;
}

// ---- bounded member structures ----

inline std::vector<int> canonical_table(const std::vector<int>& s) {
  int n = static_cast<int>(s.size());
  std::vector<int> perm(n), best = s, cur(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (int a = 0; a < n; ++a) cur[perm[a]] = perm[s[a]];
    if (cur < best) best = cur;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Member structures with every domain <= bound; function tables up to isomorphism.
inline std::vector<FiniteStructure> member_structures(const Theory& t, int bound) {
  std::vector<FiniteStructure> out;
  int ns = t.sig.num_sorts;
  std::vector<int> sizes(ns, 1);
  for (;;) {
    if (t.admits(sizes)) {
      if (!t.sig.has_s) {
        FiniteStructure a{t.sig, sizes, {}};
        if (t.member(a)) out.push_back(a);
      } else {
        std::set<std::vector<int>> seen;
        auto st = enumerate_structures(t.sig, sizes);
        while (auto a = st.next()) {
          if (!t.member(*a)) continue;
          if (seen.insert(canonical_table(a->s)).second) out.push_back(*a);
        }
      }
    }
    int k = 0;
    while (k < ns && sizes[k] == bound) sizes[k++] = 1;
    if (k == ns) break;
    ++sizes[k];
  }
  return out;
}

// Calls f on every assignment of vars into a; canonical (growth-string) values on sorts without s.
inline void for_each_assignment(const FiniteStructure& a, const std::vector<Var>& vars, const std::function<bool(const Assignment&)>& f) {
  Assignment env;
  std::map<SortId, int> used;
  std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
    if (i == vars.size()) return f(env);
    auto& x = vars[i];
    int n = a.sizes[x.sort];
    bool sym = !(x.sort == 0 && a.sig.has_s);
    int hi = sym ? std::min(n - 1, used[x.sort]) : n - 1;
    for (int v = 0; v <= hi; ++v) {
      env[x] = v;
      int saved = used[x.sort];
      if (sym && v == used[x.sort]) ++used[x.sort];
      bool go_on = go(i + 1);
      used[x.sort] = saved;
      if (!go_on) return false;
    }
    env.erase(x);
    return true;
  };
  go(0);
}

// ---- covering models ----

// A member model of f whose domains are exactly the values of its variables.
inline SatResult covering_model(const Theory& t, const Formula& f, std::uint64_t node_limit = 4'000'000) {
  int ns = t.sig.num_sorts;
  std::vector<int> hi(ns);
  for (int k = 0; k < ns; ++k) hi[k] = std::max<int>(1, static_cast<int>(vars_of(f, k).size()));
  std::vector<std::vector<int>> profiles;
  std::vector<int> p(ns, 1);
  for (;;) {
    profiles.push_back(p);
    int k = 0;
    while (k < ns && p[k] == hi[k]) p[k++] = 1;
    if (k == ns) break;
    ++p[k];
  }
  std::stable_sort(profiles.begin(), profiles.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.begin(), a.end(), 0) < std::accumulate(b.begin(), b.end(), 0);
  });
  bool unknown = false;
  for (auto& prof : profiles)
    for (auto& b : t.boxes) {
      if (!t.box_admits(b, prof)) continue;
      auto sp = t.spec_for(b, prof);
      sp.covering = true;
      sp.node_limit = node_limit;
      auto r = search_model(f, sp);
      if (r.sat()) return r;
      unknown |= r.verdict == Verdict::Unknown;
    }
  return unknown ? SatResult::unknown("search node limit reached") : SatResult::unsat();
}

// All covering models, one per size profile.
inline std::vector<Interpretation> covering_models(const Theory& t, const Formula& f, int max_models = 6) {
  std::vector<Interpretation> out;
  int ns = t.sig.num_sorts;
  std::vector<int> hi(ns), p(ns, 1);
  for (int k = 0; k < ns; ++k) hi[k] = std::max<int>(1, static_cast<int>(vars_of(f, k).size()));
  for (;;) {
    for (auto& b : t.boxes) {
      if (!t.box_admits(b, p)) continue;
      auto sp = t.spec_for(b, p);
      sp.covering = true;
      auto r = search_model(f, sp);
      if (r.sat()) {
        out.push_back(*r.model);
        break;
      }
    }
    if (static_cast<int>(out.size()) >= max_models) break;
    int k = 0;
    while (k < ns && p[k] == hi[k]) p[k++] = 1;
    if (k == ns) break;
    ++p[k];
  }
  return out;
}

// ---- witness contracts ----

struct ContractOptions {
  int bound = 4;
  bool strong = false;
  int vmax = 4;
  bool condition_i = true;
  bool model_induced = true;
};

struct ContractReport {
  Status status = Status::Confirmed;
  int formulas = 0;
  std::uint64_t instances_i = 0;
  std::uint64_t instances_ii = 0;
  std::uint64_t arrangements = 0;
  std::string failed_condition;
  Formula phi, witness;
  std::optional<Arrangement> delta;
  std::string detail;
};

// Arrangement extended by one fresh variable in its own block.
inline Arrangement with_singleton(Arrangement a, const Var& y) {
  a.blocks[y.sort].push_back({y});
  a.order.push_back(y);
  a.rgs.push_back(static_cast<int>(a.blocks[y.sort].size()) - 1);
  return a;
}

inline std::string arrangement_str(const Arrangement& a) {
  std::string out;
  for (auto& [s, bs] : a.blocks) {
    for (auto& b : bs) {
      out += "{";
      for (std::size_t i = 0; i < b.size(); ++i) out += (i ? "," : "") + b[i].name;
      out += "}";
    }
  }
  return out;
}

namespace detail {

inline bool condition_i(const Theory& t, const Formula& phi, const Formula& w, const std::vector<FiniteStructure>& models, ContractReport& rep) {
  auto pv = vars_of(phi);
  std::vector<Var> vars(pv.begin(), pv.end());
  for (auto& a : models) {
    bool ok = true;
    for_each_assignment(a, vars, [&](const Assignment& env) {
      ++rep.instances_i;
      bool lhs = evaluate(Interpretation{a, env}, phi);
      SearchSpec sp;
      sp.sig = t.sig;
      sp.sizes = a.sizes;
      sp.policy = SPolicy::Free;
      if (t.sig.has_s) sp.table = a.s;
      sp.preassigned = env;
      auto r = search_model(w, sp);
      if (r.verdict == Verdict::Unknown) return true;
      if (lhs != r.sat()) {
        ok = false;
        rep.detail = "in " + to_string(Interpretation{a, env}) + " phi is " + (lhs ? "true" : "false") +
                     " but the witness " + (r.sat() ? "has" : "has no") + " extension";
        return false;
      }
      return true;
    });
    if (!ok) return false;
  }
  return true;
}

inline bool coverage(const Theory& t, const Formula& g, ContractReport& rep, std::optional<Interpretation>* cover = nullptr) {
  auto q = t.qf_sat(g);
  if (q.verdict != Verdict::Sat) return true;
  ++rep.instances_ii;
  auto c = covering_model(t, g);
  if (c.sat()) {
    if (cover) *cover = c.model;
    return true;
  }
  if (c.verdict == Verdict::Unknown) return true;
  rep.detail = "satisfiable in the theory" + (q.model ? " (e.g. " + to_string(*q.model) + ")" : std::string(" (" + q.note + ")")) +
               " but no model whose domains are exactly the variable values";
  return false;
}

}  // namespace detail

inline ContractReport check_witness_contract(const Theory& t, const WitnessFn& w, const std::vector<Formula>& corpus, const ContractOptions& o = {}) {
  ContractReport rep;
  std::vector<FiniteStructure> models;
  if (o.condition_i) models = member_structures(t, o.bound);
  auto fail = [&](const char* cond, const Formula& phi, const Formula& wf, std::optional<Arrangement> d = std::nullopt) {
    rep.status = Status::Refuted;
    rep.failed_condition = cond;
    rep.phi = phi;
    rep.witness = wf;
    rep.delta = std::move(d);
    return rep;
  };
  for (auto& phi : corpus) {
    ++rep.formulas;
    auto wf = w(phi);
    if (o.condition_i && !detail::condition_i(t, phi, wf, models, rep)) return fail("i", phi, wf);
    if (!detail::coverage(t, wf, rep)) return fail("ii", phi, wf);
    if (!o.strong) continue;
    // Subsets of the first vmax variables, phi's first.
    std::vector<Var> pool;
    for (auto& x : vars_of(phi)) pool.push_back(x);
    for (auto& x : vars_of(wf))
      if (std::find(pool.begin(), pool.end(), x) == pool.end()) pool.push_back(x);
    if (static_cast<int>(pool.size()) > o.vmax) pool.resize(o.vmax);
    for (unsigned mask = 1; mask < (1u << pool.size()); ++mask) {
      VarSet v;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (mask >> i & 1) v.insert(pool[i]);
      auto st = enumerate_arrangements(by_sort(v));
      while (auto a = st.next()) {
        ++rep.arrangements;
        auto g = conj(wf, arrangement_to_formula(*a));
        if (!detail::coverage(t, g, rep)) return fail("ii'", phi, wf, *a);
      }
    }
    if (!o.model_induced) continue;
    // Arrangements induced by covering models on all witness variables, plus a fresh singleton.
    auto all = vars_of(wf);
    FreshSupply fs(all, "@v");
    for (auto& b : covering_models(t, wf)) {
      auto base = arrangement_of(b, all);
      for (int k = 0; k < t.sig.num_sorts; ++k) {
        auto a = with_singleton(base, fs.make(static_cast<SortId>(k)));
        ++rep.arrangements;
        auto g = conj({wf, arrangement_to_formula(a), eq(tv(a.order.back()), tv(a.order.back()))});
        if (!detail::coverage(t, g, rep)) return fail("ii'", phi, wf, a);
      }
    }
  }
  return rep;
}

// ---- stable infiniteness ----

inline Profile all_inf(const Theory& t) { return Profile(t.sig.num_sorts, kInf); }

inline PropertyVerdict check_stable_infinite(TheoryPtr t, const std::vector<Formula>& corpus) {
  PropertyVerdict v;
  v.property = Property::SI;
  for (auto& phi : corpus) {
    auto r = t->qf_sat(phi);
    if (!r.sat()) continue;
    auto inf = t->sat_at(phi, all_inf(*t));
    if (inf.verdict == Verdict::Unsat) {
      v.status = Status::Refuted;
      v.evidence = {"formula-without-infinite-model", "satisfiable, but no model with every domain infinite", {to_string(phi)},
                    r.model ? std::vector<std::string>{to_string(*r.model)} : std::vector<std::string>{}, false};
      v.recheck = [t, phi] { return t->qf_sat(phi).sat() && t->sat_at(phi, all_inf(*t)).verdict == Verdict::Unsat; };
      return v;
    }
  }
  v.status = Status::Confirmed;
  v.evidence = {"envelope", "every satisfiable corpus formula (" + std::to_string(corpus.size()) + ") has an all-infinite model", {}, {}, false};
  return v;
}

// ---- smoothness ----

// Profiles with each entry in [lo, hi] or infinite.
inline std::vector<Profile> window_profiles(int ns, int lo, int hi) {
  std::vector<int> vals;
  for (int n = lo; n <= hi; ++n) vals.push_back(n);
  vals.push_back(kInf);
  std::vector<Profile> out;
  std::vector<std::size_t> idx(ns, 0);
  for (;;) {
    Profile p(ns);
    for (int k = 0; k < ns; ++k) p[k] = vals[idx[k]];
    out.push_back(p);
    int k = 0;
    while (k < ns && idx[k] + 1 == vals.size()) idx[k++] = 0;
    if (k == ns) break;
    ++idx[k];
  }
  return out;
}

struct SmoothOptions {
  bool spectrum_relative = false;  // only compare against profiles the theory admits
  bool infinite = true;            // also compare against infinite entries
};

inline PropertyVerdict check_smoothness_window(TheoryPtr t, const Formula& phi, int lo, int hi, SmoothOptions o = {}) {
  if (lo < 1 || lo > hi) throw std::invalid_argument("smoothness window needs 1 <= lo <= hi");
  PropertyVerdict v;
  v.property = Property::SM;
  v.bound = hi;
  auto ps = window_profiles(t->sig.num_sorts, lo, hi);
  if (!o.infinite)
    std::erase_if(ps, [](const Profile& p) { return std::find(p.begin(), p.end(), kInf) != p.end(); });
  std::vector<char> sat(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) sat[i] = t->sat_at(phi, ps[i]).sat();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!sat[i]) continue;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (i == j || sat[j] || !profile_leq(ps[i], ps[j])) continue;
      if (o.spectrum_relative && !t->admits(ps[j])) continue;
      auto p = ps[i], q = ps[j];
      if (t->sat_at(phi, q).verdict != Verdict::Unsat) continue;
      v.status = Status::Refuted;
      auto m = t->sat_at(phi, p);
      v.evidence = {"gap-profile", "model at " + profile_str(p) + " but none at the larger profile " + profile_str(q), {to_string(phi)},
                    m.model ? std::vector<std::string>{to_string(*m.model)} : std::vector<std::string>{}, false};
      v.recheck = [t, phi, p, q] { return t->sat_at(phi, p).sat() && t->sat_at(phi, q).verdict == Verdict::Unsat; };
      return v;
    }
  }
  v.status = Status::Confirmed;
  v.evidence = {"envelope",
                std::string("no gap between ") + (o.spectrum_relative ? "admitted " : "") + "profiles in [" + std::to_string(lo) + "," +
                    std::to_string(hi) + "]" + (o.infinite ? " and inf" : ""),
                {},
                {},
                false};
  return v;
}

inline PropertyVerdict check_smooth(TheoryPtr t, const std::vector<Formula>& corpus, int bound) {
  for (auto& phi : corpus) {
    auto v = check_smoothness_window(t, phi, 1, bound);
    if (v.status == Status::Refuted) return v;
  }
  PropertyVerdict v;
  v.property = Property::SM;
  v.bound = bound;
  v.status = Status::Confirmed;
  v.evidence = {"envelope", std::to_string(corpus.size()) + " formulas, every profile in [1," + std::to_string(bound) + "] and inf", {}, {}, false};
  return v;
}

// ---- convexity ----

struct ConvexityInstance {
  std::string family;
  Formula cube;
  std::vector<std::pair<Term, Term>> pairs;
};

// Exact entailment check of cube -> OR pairs and of each single pair.
inline PropertyVerdict check_convexity(TheoryPtr t, const Formula& cube, const std::vector<std::pair<Term, Term>>& pairs, const std::string& family = "cube") {
  PropertyVerdict v;
  v.property = Property::CV;
  std::vector<Formula> negs{cube};
  for (auto& [a, b] : pairs) negs.push_back(neq(a, b));
  auto whole = t->qf_sat(conj(negs));
  if (whole.verdict != Verdict::Unsat) {
    v.status = Status::Confirmed;
    return v;
  }
  std::vector<std::string> models;
  for (auto& [a, b] : pairs) {
    auto r = t->qf_sat(conj(cube, neq(a, b)));
    if (r.verdict != Verdict::Sat) {
      v.status = Status::Confirmed;
      return v;
    }
    models.push_back(to_string(a) + "!=" + to_string(b) + ": " + (r.model ? to_string(*r.model) : r.note));
  }
  std::string ds;
  for (auto& [a, b] : pairs) ds += (ds.empty() ? "" : " or ") + to_string(a) + "=" + to_string(b);
  v.status = Status::Refuted;
  v.evidence = {family, "the cube entails " + ds + " but no single disjunct", {to_string(cube)}, models, false};
  v.recheck = [t, cube, pairs] {
    std::vector<Formula> ks{cube};
    for (auto& [a, b] : pairs) ks.push_back(neq(a, b));
    if (t->qf_sat(conj(ks)).verdict != Verdict::Unsat) return false;
    for (auto& [a, b] : pairs)
      if (!t->qf_sat(conj(cube, neq(a, b))).sat()) return false;
    return true;
  };
  return v;
}

inline std::vector<ConvexityInstance> convexity_families(const Theory& t, int bound, int random_count, std::uint64_t seed) {
  std::vector<ConvexityInstance> out;
  auto all_pairs = [](const std::vector<Var>& xs) {
    std::vector<std::pair<Term, Term>> ps;
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j) ps.emplace_back(tv(xs[i]), tv(xs[j]));
    return ps;
  };
  for (int k = 0; k < t.sig.num_sorts; ++k)
    for (int n = 2; n <= bound + 2; ++n) {
      std::vector<Var> xs;
      for (int i = 1; i <= n; ++i) xs.push_back(Var{std::string(k ? "u" : "x") + std::to_string(i), static_cast<SortId>(k)});
      std::vector<Formula> self;
      for (auto& x : xs) self.push_back(eq(tv(x), tv(x)));
      out.push_back({"pigeonhole", conj(self), all_pairs(xs)});
      if (k == 0 && t.sig.has_s) {
        self.push_back(eq(s(tv(xs[0])), tv(xs[0])));
        out.push_back({"pigeonhole", conj(self), all_pairs(xs)});
      }
    }
  if (t.sig.has_s) {
    auto x = tv(corpus_var(0, 0)), y = tv(corpus_var(0, 1)), z = tv(corpus_var(0, 2));
    out.push_back({"psi-vee", conj(eq(y, s(x)), eq(z, s(y))), {{x, y}, {x, z}, {y, z}}});
  }
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  for (int i = 0; i < random_count; ++i) {
    SortId k = (t.sig.num_sorts > 1 && pick(3) == 0) ? 1 : 0;
    auto term = [&](bool deep) {
      Term tt = tv(corpus_var(k, pick(3)));
      if (deep && k == 0 && t.sig.has_s) tt = s(tt, pick(3));
      return tt;
    };
    std::vector<Formula> lits;
    int nl = 1 + pick(3);
    for (int j = 0; j < nl; ++j) {
      auto a = eq(term(true), term(true));
      lits.push_back(pick(2) ? a : neg(a));
    }
    std::vector<std::pair<Term, Term>> ps;
    int np = 2 + pick(2);
    for (int j = 0; j < np; ++j) ps.emplace_back(term(false), term(false));
    out.push_back({"random-cube", conj(lits), ps});
  }
  return out;
}

inline PropertyVerdict check_convex(TheoryPtr t, int bound, int random_count, std::uint64_t seed) {
  auto fams = convexity_families(*t, bound, random_count, seed);
  for (auto& c : fams) {
    auto v = check_convexity(t, c.cube, c.pairs, c.family);
    if (v.status == Status::Refuted) {
      v.bound = bound;
      return v;
    }
  }
  PropertyVerdict v;
  v.property = Property::CV;
  v.bound = bound;
  v.status = Status::Confirmed;
  v.evidence = {"envelope", std::to_string(fams.size()) + " entailment instances (pigeonhole, choice-function and random cubes)", {}, {}, false};
  return v;
}

// ---- finite witnessability ----

// A satisfiable formula with no finite model: no witness can exist.
inline std::optional<PropertyVerdict> refute_fmp(TheoryPtr t, const std::vector<Formula>& corpus) {
  for (auto& phi : corpus) {
    auto r = t->qf_sat(phi);
    if (!r.sat() || r.model) continue;
    if (t->finite_sat(phi).verdict != Verdict::Unsat) continue;
    PropertyVerdict v;
    v.property = Property::FW;
    v.status = Status::Refuted;
    v.evidence = {"no-finite-model", "satisfiable, but only in infinite models; a witness would yield a finite one", {to_string(phi)}, {}, false};
    v.recheck = [t, phi] { return t->qf_sat(phi).sat() && t->finite_sat(phi).verdict == Verdict::Unsat; };
    return v;
  }
  return std::nullopt;
}

inline PropertyVerdict from_contract(Property p, const ContractReport& rep, const std::string& label) {
  PropertyVerdict v;
  v.property = p;
  if (rep.status == Status::Confirmed) {
    v.status = Status::Confirmed;
    v.evidence = {"envelope",
                  "witness " + label + ": " + std::to_string(rep.formulas) + " formulas, " + std::to_string(rep.instances_i) +
                      " equivalence instances, " + std::to_string(rep.instances_ii) + " coverage instances, " +
                      std::to_string(rep.arrangements) + " arrangements",
                  {},
                  {},
                  false};
  } else {
    v.status = Status::Inconclusive;
    v.evidence = {"witness-failure", "witness " + label + " fails condition (" + rep.failed_condition + "): " + rep.detail,
                  {to_string(rep.phi)}, {}, false};
  }
  return v;
}

// ---- strong finite witnessability ----

namespace detail {

inline int spectrum_threshold(const Theory& t) {
  int th = 2;
  for (auto& b : t.boxes)
    for (auto& c : b.cards) th = std::max(th, c.threshold() + 1);
  return th;
}

// A finite profile r with q <= r <= upper that the theory does not admit.
inline std::optional<Profile> gap_in(const Theory& t, const Profile& q, const Profile& upper, int window) {
  int ns = t.sig.num_sorts;
  Profile hi(ns), r = q;
  for (int k = 0; k < ns; ++k) hi[k] = upper[k] == kInf ? window : upper[k];
  for (int k = 0; k < ns; ++k)
    if (q[k] > hi[k]) return std::nullopt;
  for (;;) {
    if (!t.admits(r)) return r;
    int k = 0;
    while (k < ns && r[k] == hi[k]) r[k] = q[k], ++k;
    if (k == ns) return std::nullopt;
    ++r[k];
  }
}

inline std::vector<Profile> profiles_upto(const Profile& top_p, int window) {
  int ns = static_cast<int>(top_p.size());
  Profile hi(ns), q(ns, 1);
  for (int k = 0; k < ns; ++k) hi[k] = top_p[k] == kInf ? window : top_p[k];
  std::vector<Profile> out;
  for (;;) {
    out.push_back(q);
    int k = 0;
    while (k < ns && q[k] == hi[k]) q[k++] = 1;
    if (k == ns) break;
    ++q[k];
  }
  return out;
}

}  // namespace detail

struct SpectralRefutation {
  std::string lemma;  // "interval" or "padded-interval"
  Profile model_profile, padded_profile;
  std::vector<std::pair<Profile, Profile>> gaps;  // (covering profile q, missing profile r)
};

// A strong witness turns a model of x=x with profile p into covering models of
// every profile between the witness's class count q and p (and, when models can
// be padded with fixed points, between q and any admitted p' >= p). Finding a
// missing profile in each interval refutes the property.
inline std::optional<SpectralRefutation> refute_sw_spectral(const Theory& t) {
  int ns = t.sig.num_sorts;
  int th = detail::spectrum_threshold(t);
  int qmax = th + 2, window = th + 4;
  std::vector<Formula> ks;
  for (int k = 0; k < ns; ++k) ks.push_back(eq(tv(corpus_var(static_cast<SortId>(k), 0)), tv(corpus_var(static_cast<SortId>(k), 0))));
  auto phi0 = conj(ks);
  auto ps = window_profiles(ns, 1, window);
  std::vector<Profile> models;
  for (auto& p : ps)
    if (t.admits(p) && t.sat_at(phi0, p).sat()) models.push_back(p);
  auto every_q = [&](const Profile& p, const std::function<std::optional<Profile>(const Profile&)>& gap_for) {
    std::vector<std::pair<Profile, Profile>> gaps;
    Profile cap = p;
    for (auto& c : cap)
      if (c == kInf) c = qmax;
    for (auto& q : detail::profiles_upto(cap, qmax)) {
      auto g = gap_for(q);
      if (!g) return std::optional<std::vector<std::pair<Profile, Profile>>>{};
      gaps.emplace_back(q, *g);
    }
    return std::optional{gaps};
  };
  for (auto& p : models) {
    auto g = every_q(p, [&](const Profile& q) { return detail::gap_in(t, q, p, window); });
    if (g) return SpectralRefutation{"interval", p, p, *g};
  }
  if (!t.paddable()) return std::nullopt;
  for (auto& p : models) {
    if (std::find(p.begin(), p.end(), kInf) != p.end()) continue;
    for (auto& p2 : ps) {
      if (!profile_leq(p, p2) || !t.admits(p2)) continue;
      auto g = every_q(p, [&](const Profile& q) { return detail::gap_in(t, q, p2, window); });
      if (g) return SpectralRefutation{"padded-interval", p, p2, *g};
    }
  }
  return std::nullopt;
}

struct ProbeRow {
  int n = 0;
  int f_next = 0;
  MincardResult mincard;
  bool consistent = false;
};

// phi_n: f1(n)+1 distinct fixed points.
inline Formula probe_formula(const FofFunction& f, int n) {
  std::vector<Var> xs;
  std::vector<Formula> ks;
  int c = static_cast<int>(f.f1(static_cast<std::uint64_t>(n))) + 1;
  for (int i = 1; i <= c; ++i) {
    xs.push_back(Var{"x" + std::to_string(i), 0});
    ks.push_back(eq(s(tv(xs.back())), tv(xs.back())));
  }
  ks.push_back(distinct(xs));
  return conj(ks);
}

inline std::vector<ProbeRow> mincard_f_probe(const Theory& t, int n_max) {
  if (!t.is_f_family()) throw std::invalid_argument("probe: " + t.name + " is not parameterized by f");
  if (n_max > 10) throw std::invalid_argument("probe: n_max must be <= 10");
  std::vector<ProbeRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    ProbeRow r;
    r.n = n;
    r.f_next = t.fof->bit(static_cast<std::uint64_t>(n + 1));
    r.mincard = t.mincard(probe_formula(*t.fof, n));
    bool hit = r.mincard.kind == MincardResult::Kind::Finite && r.mincard.value == n + 1;
    r.consistent = (r.f_next == 1) == hit;
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<ProbeRow> mincard_f_probe(const FofPtr& f, int n_max) { return mincard_f_probe(*make_base(BaseKind::F, 0, 0, f), n_max); }

// ---- classification ----

struct ClassifyOptions {
  int bound = 4;
  int corpus_random = 24;      // random formulas on top of the handcrafted ones
  int contract_random = 12;    // random formulas for the witness contracts
  int smooth_random = 6;
  int cv_random = 24;
  int probe_n = 10;
  std::uint64_t seed = 0x5eed;
};

struct TheoryReport {
  TheoryPtr theory;
  std::array<PropertyVerdict, 5> verdicts;
  double seconds = 0;

  std::optional<bool> computed(Property p) const {
    auto s = verdicts[static_cast<int>(p)].status;
    if (s == Status::Inconclusive) return std::nullopt;
    return s == Status::Confirmed;
  }
  bool matches() const {
    for (auto p : kProperties) {
      auto c = computed(p);
      if (!c || *c != theory->expected.get(static_cast<int>(p))) return false;
    }
    return true;
  }
  std::string computed_str() const {
    std::string out;
    for (auto p : kProperties) {
      auto c = computed(p);
      out += !c ? '?' : *c ? 'T' : 'F';
    }
    return out;
  }
};

inline std::string gaps_str(const SpectralRefutation& r) {
  std::string out;
  int shown = 0;
  for (auto& [q, g] : r.gaps) {
    if (shown++ == 4) {
      out += ", ...";
      break;
    }
    out += (out.empty() ? "" : ", ") + profile_str(q) + "->" + profile_str(g);
  }
  return out;
}

inline TheoryReport classify(TheoryPtr t, const ClassifyOptions& o = {}) {
  auto start = std::chrono::steady_clock::now();
  TheoryReport rep;
  rep.theory = t;
  auto corpus = standard_corpus(t->sig, o.corpus_random, o.seed);
  auto contract_corpus = standard_corpus(t->sig, o.contract_random, o.seed + 1);
  auto smooth_corpus = standard_corpus(t->sig, o.smooth_random, o.seed + 2);

  rep.verdicts[0] = check_stable_infinite(t, corpus);
  rep.verdicts[0].bound = o.bound;
  rep.verdicts[1] = check_smooth(t, smooth_corpus, o.bound);
  rep.verdicts[4] = check_convex(t, o.bound, o.cv_random, o.seed + 3);

  // FW: refutation by finite-model failure, confirmation by the witness contract.
  auto& fw = rep.verdicts[2];
  auto fmp = refute_fmp(t, corpus);
  auto wit = witness_for(*t);
  if (fmp) {
    fw = *fmp;
  } else if (wit) {
    ContractOptions co;
    co.bound = o.bound;
    fw = from_contract(Property::FW, check_witness_contract(*t, *wit, contract_corpus, co), wit->label);
  } else {
    fw.property = Property::FW;
    fw.status = Status::Inconclusive;
    fw.evidence = {"none", "no witness and no finite-model failure found", {}, {}, false};
  }
  fw.bound = o.bound;

  auto& sw = rep.verdicts[3];
  sw.property = Property::SW;
  sw.bound = o.bound;
  if (fw.status == Status::Refuted) {
    sw.status = Status::Refuted;
    sw.evidence = fw.evidence;
    sw.evidence.summary = "not finitely witnessable: " + fw.evidence.summary;
    sw.recheck = fw.recheck;
  } else if (auto spec = refute_sw_spectral(*t)) {
    sw.status = Status::Refuted;
    sw.evidence = {spec->lemma == "interval" ? "spectral-interval" : "padded-spectral-interval",
                   "model of x=x at " + profile_str(spec->model_profile) +
                       (spec->lemma == "interval" ? "" : ", padded to " + profile_str(spec->padded_profile)) +
                       "; every witness class count q leaves a missing profile r between q and the model: " + gaps_str(*spec),
                   {},
                   {},
                   false};
    sw.recheck = [t] { return refute_sw_spectral(*t).has_value(); };
  } else if (t->is_f_family()) {
    auto rows = mincard_f_probe(*t, o.probe_n);
    bool ok = std::all_of(rows.begin(), rows.end(), [](const ProbeRow& r) { return r.consistent; });
    std::string tbl;
    for (auto& r : rows) tbl += (tbl.empty() ? "" : " ") + std::to_string(r.n) + ":" + std::to_string(r.f_next) + "/" + r.mincard.str();
    if (ok) {
      sw.status = Status::Refuted;
      sw.evidence = {"mincard-reduction",
                     "f(n+1)=1 iff mincard(phi_n)=n+1 for n<=" + std::to_string(o.probe_n) +
                         " (n:f(n+1)/mincard " + tbl + "); a strong witness would make mincard and hence f computable",
                     {},
                     {},
                     true};
      int pn = o.probe_n;
      sw.recheck = [t, pn] {
        auto rs = mincard_f_probe(*t, pn);
        return std::all_of(rs.begin(), rs.end(), [](const ProbeRow& r) { return r.consistent; });
      };
    } else {
      sw.status = Status::Inconclusive;
      sw.evidence = {"mincard-reduction", "probe inconsistent: " + tbl, {}, {}, false};
    }
  } else if (auto sw_wit = strong_witness_for(*t)) {
    ContractOptions co;
    co.bound = o.bound;
    co.strong = true;
    co.condition_i = false;  // already covered by the FW run with the same function
    sw = from_contract(Property::SW, check_witness_contract(*t, *sw_wit, contract_corpus, co), sw_wit->label);
    sw.bound = o.bound;
  } else {
    sw.status = Status::Inconclusive;
    sw.evidence = {"none", "no strong witness and no refutation found", {}, {}, false};
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// ---- meta checks over computed verdicts ----

struct MetaCheck {
  std::string name;
  bool holds = true;
  int instances = 0;
  std::string detail;
};

inline bool one_sorted_empty(const Theory& t) { return t.sig.num_sorts == 1 && !t.sig.has_s; }

// True when no model has a domain of size 1 in any sort.
inline bool proves_two_elements(const Theory& t) {
  for (auto& b : t.boxes)
    for (int k = 0; k < t.sig.num_sorts; ++k) {
      if (!b.cards[k].admits(1)) continue;
      Profile p(t.sig.num_sorts, kInf);
      p[k] = 1;
      for (int j = 0; j < t.sig.num_sorts; ++j)
        if (j != k && !b.cards[j].admits(kInf)) p[j] = b.cards[j].least_finite_from(1);
      if (t.box_admits(b, p)) return false;
    }
  return true;
}

inline std::vector<MetaCheck> meta_checks(const std::vector<TheoryReport>& rows) {
  std::vector<MetaCheck> out;
  auto run = [&](std::string name, auto applies, auto holds) {
    MetaCheck m{std::move(name), true, 0, {}};
    for (auto& r : rows) {
      if (!applies(r)) continue;
      ++m.instances;
      if (!holds(r)) {
        m.holds = false;
        m.detail += (m.detail.empty() ? "" : ", ") + r.theory->name;
      }
    }
    out.push_back(m);
  };
  auto is = [](const TheoryReport& r, Property p, bool v) {
    auto c = r.computed(p);
    return c && *c == v;
  };
  run("convex with at least two elements in every sort implies stably infinite",
      [&](const TheoryReport& r) { return is(r, Property::CV, true) && proves_two_elements(*r.theory); },
      [&](const TheoryReport& r) { return is(r, Property::SI, true); });
  run("stably infinite over an empty signature implies convex",
      [&](const TheoryReport& r) { return !r.theory->sig.has_s && is(r, Property::SI, true); },
      [&](const TheoryReport& r) { return is(r, Property::CV, true); });
  run("one-sorted empty signature: not stably infinite implies finitely witnessable",
      [&](const TheoryReport& r) { return one_sorted_empty(*r.theory) && is(r, Property::SI, false); },
      [&](const TheoryReport& r) { return is(r, Property::FW, true); });
  run("one-sorted, stably infinite and strongly finitely witnessable implies smooth",
      [&](const TheoryReport& r) { return r.theory->sig.num_sorts == 1 && is(r, Property::SI, true) && is(r, Property::SW, true); },
      [&](const TheoryReport& r) { return is(r, Property::SM, true); });
  run("one-sorted empty signature: neither strongly finitely witnessable nor stably infinite implies not convex",
      [&](const TheoryReport& r) { return one_sorted_empty(*r.theory) && is(r, Property::SW, false) && is(r, Property::SI, false); },
      [&](const TheoryReport& r) { return is(r, Property::CV, false); });
  run("smooth implies stably infinite",
      [&](const TheoryReport& r) { return is(r, Property::SM, true); },
      [&](const TheoryReport& r) { return is(r, Property::SI, true); });
  run("strongly finitely witnessable implies finitely witnessable",
      [&](const TheoryReport& r) { return is(r, Property::SW, true); },
      [&](const TheoryReport& r) { return is(r, Property::FW, true); });
  return out;
}

struct TableReport {
  std::vector<TheoryReport> rows;
  std::vector<MetaCheck> meta;
  int bound = 4;
  double seconds = 0;
  int mismatches() const {
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const TheoryReport& r) { return !r.matches(); }));
  }
};

inline TableReport reproduce_table(const ClassifyOptions& o = {}, int jobs = 1, const std::vector<TheoryPtr>& theories = catalog()) {
  auto start = std::chrono::steady_clock::now();
  TableReport rep;
  rep.bound = o.bound;
  rep.rows.resize(theories.size());
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < theories.size(); ++i) rep.rows[i] = classify(theories[i], o);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> fs;
    for (int w = 0; w < jobs; ++w)
      fs.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i; (i = next++) < theories.size();) rep.rows[i] = classify(theories[i], o);
      }));
    for (auto& f : fs) f.get();
  }
  rep.meta = meta_checks(rep.rows);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace polite::lab

#endif  // POLITE_LAB_HPP
