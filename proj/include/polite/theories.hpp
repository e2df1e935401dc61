#ifndef POLITE_THEORIES_HPP
#define POLITE_THEORIES_HPP

// The theory catalog. Every theory is a finite union of boxes; a box fixes a
// cardinality constraint per sort and a policy for s. Satisfiability at a size
// profile reduces to bounded search because models of the padding policies
// can be cut down to the s-closure of the named elements and padded back with
// fixed points.

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "foracle.hpp"
#include "search.hpp"

namespace polite {

inline constexpr int kInf = -1;  // profile entry for an infinite domain
using Profile = std::vector<int>;

inline std::string profile_str(const Profile& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += p[i] == kInf ? "inf" : std::to_string(p[i]);
  }
  return out + ")";
}

// Componentwise order with inf above every finite size.
inline bool profile_leq(const Profile& a, const Profile& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] == kInf) continue;
    if (a[i] == kInf || a[i] > b[i]) return false;
  }
  return true;
}

struct Card {
  enum class Kind { Any, AtLeast, Exactly, Infinite, OddOrInfinite, EvenOrInfinite };
  Kind kind = Kind::Any;
  int k = 1;
  std::set<int> set;

  static Card any() { return {}; }
  static Card at_least(int k) { return {Kind::AtLeast, k, {}}; }
  static Card exactly(std::set<int> s) { return {Kind::Exactly, 0, std::move(s)}; }
  static Card infinite() { return {Kind::Infinite, 0, {}}; }
  static Card odd_or_inf() { return {Kind::OddOrInfinite, 0, {}}; }
  static Card even_or_inf() { return {Kind::EvenOrInfinite, 0, {}}; }

  bool admits(int n) const {
    if (n == kInf) return kind != Kind::Exactly;
    switch (kind) {
      case Kind::Any: return true;
      case Kind::AtLeast: return n >= k;
      case Kind::Exactly: return set.count(n) > 0;
      case Kind::Infinite: return false;
      case Kind::OddOrInfinite: return n % 2 == 1;
      case Kind::EvenOrInfinite: return n % 2 == 0;
    }
    return false;
  }
  bool admits_finite_from(int lo) const { return least_finite_from(lo) > 0; }
  // Least admitted finite size >= lo, or 0.
  int least_finite_from(int lo) const {
    lo = std::max(lo, 1);
    switch (kind) {
      case Kind::Any: return lo;
      case Kind::AtLeast: return std::max(lo, k);
      case Kind::Exactly: {
        auto it = set.lower_bound(lo);
        return it == set.end() ? 0 : *it;
      }
      case Kind::Infinite: return 0;
      case Kind::OddOrInfinite: return lo % 2 ? lo : lo + 1;
      case Kind::EvenOrInfinite: return lo % 2 ? lo + 1 : lo;
    }
    return 0;
  }
  // Largest admitted finite size <= hi, or 0.
  int greatest_finite_upto(int hi) const {
    for (int n = hi; n >= 1; --n)
      if (admits(n)) return n;
    return 0;
  }
  // Every admitted size is decided by its value below this bound and by its parity above it.
  int threshold() const {
    switch (kind) {
      case Kind::AtLeast: return k;
      case Kind::Exactly: return set.empty() ? 1 : *set.rbegin();
      default: return 1;
    }
  }
  std::string str() const {
    switch (kind) {
      case Kind::Any: return "any";
      case Kind::AtLeast: return ">=" + std::to_string(k);
      case Kind::Exactly: {
        std::string s = "{";
        for (int v : set) s += (s.size() > 1 ? "," : "") + std::to_string(v);
        return s + "}";
      }
      case Kind::Infinite: return "inf";
      case Kind::OddOrInfinite: return "odd|inf";
      case Kind::EvenOrInfinite: return "even|inf";
    }
    return "?";
  }
};

struct Box {
  std::vector<Card> cards;
  SPolicy policy = SPolicy::None;
};

enum class BaseKind { Geq, Inf, Even, NInf, Leq, Mn, T23, OneOdd, OneInf, TwoInf, F, Fs, NeqOdd, Neq1Inf, Neq2Inf };
enum class Layer { AddSort, AddFun, AddNc };

struct Flags {
  bool si = false, sm = false, fw = false, sw = false, cv = false;
  bool operator==(const Flags&) const = default;
  bool get(int i) const { return i == 0 ? si : i == 1 ? sm : i == 2 ? fw : i == 3 ? sw : cv; }
  std::string str() const {
    std::string out;
    for (int i = 0; i < 5; ++i) out += get(i) ? 'T' : 'F';
    return out;
  }
};

inline const char* kPropertyNames[5] = {"SI", "SM", "FW", "SW", "CV"};

struct MincardResult {
  enum class Kind { Finite, InfiniteOnly, Unsat, Unknown } kind = Kind::Unsat;
  int value = 0;
  std::string str() const {
    switch (kind) {
      case Kind::Finite: return std::to_string(value);
      case Kind::InfiniteOnly: return "infinite-only";
      case Kind::Unsat: return "unsat";
      case Kind::Unknown: return "unknown";
    }
    return "?";
  }
};

class Theory {
 public:
  std::string name;
  BaseKind base = BaseKind::Geq;
  int n = 0, m = 0;
  FofPtr fof;
  std::vector<Layer> layers;
  Signature sig;
  std::vector<Box> boxes;
  Flags expected;
  int row = 0;
  std::uint64_t node_limit = 4'000'000;

  std::vector<SortId> sorts() const {
    std::vector<SortId> out;
    for (int k = 0; k < sig.num_sorts; ++k) out.push_back(k);
    return out;
  }
  bool has_layer(Layer l) const { return std::find(layers.begin(), layers.end(), l) != layers.end(); }
  bool is_f_family() const { return base == BaseKind::F || base == BaseKind::Fs; }
  bool paddable() const {
    for (auto& b : boxes)
      if (!padding_policy(b.policy)) return false;
    return true;
  }

  static bool padding_policy(SPolicy p) {
    return p == SPolicy::None || p == SPolicy::Identity || p == SPolicy::PsiVee || p == SPolicy::Free;
  }

  int fixed_at(int size) const { return fof ? static_cast<int>(fof->f1(static_cast<std::uint64_t>(size))) : 0; }

  // ---- spectrum ----

  bool box_admits(const Box& b, const Profile& p) const {
    for (int k = 0; k < sig.num_sorts; ++k)
      if (!b.cards[k].admits(p[k])) return false;
    if (b.policy == SPolicy::Moved && p[0] == 1) return false;
    return true;
  }
  bool admits(const Profile& p) const {
    for (auto& b : boxes)
      if (box_admits(b, p)) return true;
    return false;
  }

  // ---- membership ----

  bool member(const FiniteStructure& a) const {
    if (a.sig.num_sorts != sig.num_sorts || a.sig.has_s != sig.has_s)
      throw std::invalid_argument("membership: signature mismatch for " + name);
    validate(a);
    for (auto& b : boxes)
      if (box_admits(b, a.sizes) && policy_holds(b.policy, a)) return true;
    return false;
  }

  bool policy_holds(SPolicy p, const FiniteStructure& a) const {
    int fp = fixed_points(a), n0 = a.sizes.empty() ? 0 : a.sizes[0];
    switch (p) {
      case SPolicy::None:
      case SPolicy::Free: return true;
      case SPolicy::Identity: return fp == n0;
      case SPolicy::PsiVee: return satisfies_psi_vee(a);
      case SPolicy::Moved: return fp == 0;
      case SPolicy::Count: return fp == fixed_at(n0);
      case SPolicy::CountPsiVee: return fp == fixed_at(n0) && satisfies_psi_vee(a);
    }
    return false;
  }

  // ---- satisfiability ----

  // Size at which a padding search for sort k is complete.
  int cap(const Formula& phi, SortId k, SPolicy p) const {
    int c = static_cast<int>(vars_of(phi, k).size());
    if (k == 0 && p == SPolicy::PsiVee) c *= 2;
    if (k == 0 && p == SPolicy::Free) c = std::max(c, TermTable(phi).size());
    return std::max(c, 1);
  }

  void check_formula(const Formula& phi) const {
    if (!quantifier_free(phi)) throw std::invalid_argument("formula must be quantifier-free");
    for (auto& x : vars_of(phi))
      if (x.sort >= sig.num_sorts)
        throw std::invalid_argument("variable " + x.name + " has a sort outside the signature of " + name);
    if (uses_s(phi) && !sig.has_s) throw std::invalid_argument("formula uses s but " + name + " has no function symbol");
  }

  SearchSpec spec_for(const Box& b, std::vector<int> sizes) const {
    SearchSpec sp;
    sp.sig = sig;
    sp.sizes = std::move(sizes);
    sp.policy = b.policy;
    sp.node_limit = node_limit;
    if (b.policy == SPolicy::Count || b.policy == SPolicy::CountPsiVee) sp.fixed_count = fixed_at(sp.sizes[0]);
    return sp;
  }

  // Adds fixed points / unnamed elements until the sizes reach target.
  static Interpretation pad(Interpretation m, const std::vector<int>& target) {
    auto& st = m.structure;
    for (std::size_t k = 0; k < target.size(); ++k) {
      while (st.sizes[k] < target[k]) {
        if (k == 0 && st.sig.has_s) st.s.push_back(st.sizes[0]);
        ++st.sizes[k];
      }
    }
    return m;
  }

  // phi and s(t)!=t for every term t whose successor occurs.
  static Formula moved_closure(const Formula& phi) {
    std::vector<Formula> ks{phi};
    for (auto& [x, d] : max_depths(phi))
      for (int j = 0; j < d; ++j) ks.push_back(neq(s(tv(x), j + 1), s(tv(x), j)));
    return conj(ks);
  }

  // phi and s(s(w)) in {w, s(w)} for every variable of sort S.
  static Formula psi_bar(const Formula& phi) {
    std::vector<Formula> ks{phi};
    for (auto& w : vars_of(phi, 0)) ks.push_back(disj(eq(s(tv(w), 2), tv(w)), eq(s(tv(w), 2), s(tv(w)))));
    return conj(ks);
  }

  SatResult sat_in_box(const Formula& phi, const Box& b, const Profile& p) const {
    if (!box_admits(b, p)) return SatResult::unsat();
    if (padding_policy(b.policy)) {
      std::vector<int> e(sig.num_sorts);
      for (int k = 0; k < sig.num_sorts; ++k) {
        int c = cap(phi, k, b.policy);
        e[k] = p[k] == kInf ? c : std::min(p[k], c);
      }
      auto r = search_model(phi, spec_for(b, e));
      if (!r.sat()) return r;
      bool finite = std::none_of(p.begin(), p.end(), [](int v) { return v == kInf; });
      if (finite) return SatResult::sat_with(pad(*r.model, p));
      return SatResult::sat_without("infinite model");
    }
    if (p[0] != kInf) return search_model(phi, spec_for(b, p));
    if (b.policy == SPolicy::Moved) {
      auto r = free_qf_sat(moved_closure(phi), sig);
      return r.sat() ? SatResult::sat_without("infinite model") : SatResult::unsat();
    }
    auto r = free_qf_sat(b.policy == SPolicy::Count ? phi : psi_bar(phi), sig);
    return r.sat() ? SatResult::sat_without("infinite model") : SatResult::unsat();
  }

  SatResult sat_at(const Formula& phi, const Profile& p) const {
    check_formula(phi);
    if (static_cast<int>(p.size()) != sig.num_sorts) throw std::invalid_argument("profile does not match signature");
    bool unknown = false;
    for (auto& b : boxes) {
      auto r = sat_in_box(phi, b, p);
      if (r.sat()) return r;
      unknown |= r.verdict == Verdict::Unknown;
    }
    return unknown ? SatResult::unknown("search node limit reached") : SatResult::unsat();
  }

  // Box-wise effective sizes: the largest size at which the search still says something new.
  std::optional<std::vector<int>> effective(const Formula& phi, const Box& b, bool allow_inf) const {
    std::vector<int> e(sig.num_sorts);
    for (int k = 0; k < sig.num_sorts; ++k) {
      int c = cap(phi, k, b.policy);
      const auto& card = b.cards[k];
      if (card.admits_finite_from(c) || (allow_inf && card.admits(kInf)))
        e[k] = c;
      else if (int g = card.greatest_finite_upto(c))
        e[k] = g;
      else
        return std::nullopt;
    }
    return e;
  }

  SatResult sat_padding_box(const Formula& phi, const Box& b, bool allow_inf) const {
    auto e = effective(phi, b, allow_inf);
    if (!e) return SatResult::unsat();
    auto r = search_model(phi, spec_for(b, *e));
    if (!r.sat()) return r;
    std::vector<int> target(sig.num_sorts);
    for (int k = 0; k < sig.num_sorts; ++k) {
      target[k] = b.cards[k].least_finite_from((*e)[k]);
      if (!target[k]) return SatResult::sat_without("infinite model");
    }
    return SatResult::sat_with(pad(*r.model, target));
  }

  // Small-model bound for the f family.
  static int f_bound(const Formula& phi) {
    int M = 0;
    auto depths = max_depths(phi);
    for (auto& x : vars_of(phi, 0)) M += (depths.count(x) ? depths[x] : 0) + 2;
    int p = 1;
    while (p < 2 * std::max(M, 1)) p *= 2;
    return 2 * p;
  }

  // Searches finite sizes lo..hi of a non-padding box in increasing order.
  SatResult scan_sizes(const Formula& phi, const Box& b, int lo, int hi, int step = 1) const {
    bool unknown = false;
    for (int n0 = lo; n0 <= hi; n0 += step) {
      Profile p{n0};
      if (!box_admits(b, p)) continue;
      auto r = search_model(phi, spec_for(b, p));
      if (r.sat()) return r;
      unknown |= r.verdict == Verdict::Unknown;
    }
    return unknown ? SatResult::unknown("search node limit reached") : SatResult::unsat();
  }

  // Model search window used to attach models in the non-padding boxes.
  int scan_window(const Formula& phi) const { return std::min(TermTable(phi).size() + 3, 9); }

  SatResult sat_nonpadding_box(const Formula& phi, const Box& b, bool allow_inf) const {
    if (b.cards[0].kind == Card::Kind::Exactly) return scan_sizes(phi, b, 1, *b.cards[0].set.rbegin());
    bool count = b.policy == SPolicy::Count || b.policy == SPolicy::CountPsiVee;
    Formula decided = b.policy == SPolicy::Moved ? moved_closure(phi) : b.policy == SPolicy::Count ? phi : psi_bar(phi);
    if (!free_qf_sat(decided, sig).sat()) return SatResult::unsat();
    bool finite_too = count || b.cards[0].kind == Card::Kind::OddOrInfinite;
    if (!finite_too) return allow_inf ? SatResult::sat_without("infinite model") : SatResult::unsat();
    auto r = scan_sizes(phi, b, 1, scan_window(phi), 1);
    if (r.sat()) return r;
    return SatResult::sat_without(count ? "finite model beyond the search window" : "odd model beyond the search window");
  }

  SatResult qf_sat_impl(const Formula& phi, bool allow_inf) const {
    check_formula(phi);
    bool unknown = false;
    std::optional<SatResult> without_model;
    for (auto& b : boxes) {
      auto r = padding_policy(b.policy) ? sat_padding_box(phi, b, allow_inf) : sat_nonpadding_box(phi, b, allow_inf);
      if (r.sat() && r.model) return r;
      if (r.sat() && !without_model) without_model = r;
      unknown |= r.verdict == Verdict::Unknown;
    }
    if (without_model) return *without_model;
    return unknown ? SatResult::unknown("search node limit reached") : SatResult::unsat();
  }

  SatResult qf_sat(const Formula& phi) const { return qf_sat_impl(phi, true); }

  // Satisfiable in some finite member structure.
  SatResult finite_sat(const Formula& phi) const { return qf_sat_impl(phi, false); }

  // Upper end of the size scan for mincard.
  int mincard_bound(const Formula& phi) const {
    if (is_f_family()) return f_bound(phi);
    int hi = TermTable(phi).size() + 3;
    for (auto& b : boxes) {
      int c = cap(phi, 0, b.policy);
      hi = std::max(hi, b.cards[0].least_finite_from(c));
      hi = std::max(hi, b.cards[0].threshold() + 1);
    }
    return hi;
  }

  MincardResult mincard(const Formula& phi) const {
    if (sig.num_sorts != 1) throw std::invalid_argument("mincard: " + name + " is not one-sorted");
    check_formula(phi);
    int hi = mincard_bound(phi);
    bool unknown = false;
    for (int n0 = 1; n0 <= hi; ++n0) {
      auto r = sat_at(phi, {n0});
      if (r.sat()) return {MincardResult::Kind::Finite, n0};
      unknown |= r.verdict == Verdict::Unknown;
    }
    if (unknown) return {MincardResult::Kind::Unknown, 0};
    if (sat_at(phi, {kInf}).sat()) return {MincardResult::Kind::InfiniteOnly, 0};
    return {MincardResult::Kind::Unsat, 0};
  }

  // Closed axiom instances with schema parameter k up to kmax.
  std::vector<Formula> axioms(int kmax) const;
};

using TheoryPtr = std::shared_ptr<const Theory>;

namespace detail {

inline Flags base_flags(BaseKind b, int n) {
  auto f = [](bool si, bool sm, bool fw, bool sw, bool cv) { return Flags{si, sm, fw, sw, cv}; };
  switch (b) {
    case BaseKind::Geq: return f(1, 1, 1, 1, 1);
    case BaseKind::T23: return f(1, 1, 1, 0, 1);
    case BaseKind::F: return f(1, 1, 1, 0, 1);
    case BaseKind::Fs: return f(1, 1, 1, 0, 0);
    case BaseKind::Inf: return f(1, 1, 0, 0, 1);
    case BaseKind::Even: return f(1, 0, 1, 0, 1);
    case BaseKind::NInf: return f(1, 0, 0, 0, 1);
    case BaseKind::Leq: return n == 1 ? f(0, 0, 1, 1, 1) : f(0, 0, 1, 1, 0);
    case BaseKind::OneOdd: return f(0, 0, 1, 0, 1);
    case BaseKind::NeqOdd: return f(0, 0, 1, 0, 1);
    case BaseKind::Mn: return f(0, 0, 1, 0, 0);
    case BaseKind::OneInf: return f(0, 0, 0, 0, 1);
    case BaseKind::Neq1Inf: return f(0, 0, 0, 0, 1);
    case BaseKind::TwoInf: return f(0, 0, 0, 0, 0);
    case BaseKind::Neq2Inf: return f(0, 0, 0, 0, 0);
  }
  return {};
}

inline int row_of(const Flags& f) {
  int idx = 0;
  for (int i = 0; i < 5; ++i) idx = idx * 2 + (f.get(i) ? 0 : 1);
  return idx + 1;
}

inline std::set<int> range_set(int lo, int hi) {
  std::set<int> s;
  for (int i = lo; i <= hi; ++i) s.insert(i);
  return s;
}

inline std::string base_name(BaseKind b, int n, int m, const FofPtr& f) {
  switch (b) {
    case BaseKind::Geq: return "T_geq:" + std::to_string(n);
    case BaseKind::Inf: return "T_inf";
    case BaseKind::Even: return "T_even";
    case BaseKind::NInf: return "T_n_inf:" + std::to_string(n);
    case BaseKind::Leq: return "T_leq:" + std::to_string(n);
    case BaseKind::Mn: return "T_mn:" + std::to_string(m) + "," + std::to_string(n);
    case BaseKind::T23: return "T_2_3";
    case BaseKind::OneOdd: return "T_1_odd";
    case BaseKind::OneInf: return "T_1_inf";
    case BaseKind::TwoInf: return "T_2_inf";
    case BaseKind::F: return f->label() == "fig" ? "T_f" : "T_f:" + f->label();
    case BaseKind::Fs: return f->label() == "fig" ? "T_f_s" : "T_f_s:" + f->label();
    case BaseKind::NeqOdd: return "T_neq_odd";
    case BaseKind::Neq1Inf: return "T_neq_1_inf";
    case BaseKind::Neq2Inf: return "T_neq_2_inf";
  }
  return "?";
}

}  // namespace detail

inline std::shared_ptr<Theory> make_base(BaseKind b, int n = 0, int m = 0, FofPtr f = nullptr) {
  auto t = std::make_shared<Theory>();
  t->base = b;
  t->n = n;
  t->m = m;
  using C = Card;
  auto one = [&](Card c, SPolicy p = SPolicy::None) { t->boxes.push_back(Box{{std::move(c)}, p}); };
  auto two = [&](Card a, Card c) { t->boxes.push_back(Box{{std::move(a), std::move(c)}, SPolicy::None}); };
  switch (b) {
    case BaseKind::Geq:
      if (n < 1) throw std::invalid_argument("T_geq needs n >= 1");
      t->sig = sig_one();
      one(C::at_least(n));
      break;
    case BaseKind::Inf:
      t->sig = sig_one();
      one(C::infinite());
      break;
    case BaseKind::Even:
      t->sig = sig_one();
      one(C::even_or_inf());
      break;
    case BaseKind::NInf:
      if (n < 1) throw std::invalid_argument("T_n_inf needs n >= 1");
      t->sig = sig_one();
      one(C::exactly({n}));
      one(C::infinite());
      break;
    case BaseKind::Leq:
      if (n < 1) throw std::invalid_argument("T_leq needs n >= 1");
      t->sig = sig_one();
      one(C::exactly(detail::range_set(1, n)));
      break;
    case BaseKind::Mn:
      if (m < 1 || n < 1 || m == n) throw std::invalid_argument("T_mn needs distinct m, n >= 1");
      t->sig = sig_one();
      one(C::exactly({m, n}));
      break;
    case BaseKind::T23:
      t->sig = sig_two();
      two(C::exactly({2}), C::infinite());
      two(C::at_least(3), C::at_least(3));
      break;
    case BaseKind::OneOdd:
      t->sig = sig_two();
      two(C::exactly({1}), C::odd_or_inf());
      break;
    case BaseKind::OneInf:
      t->sig = sig_two();
      two(C::exactly({1}), C::infinite());
      break;
    case BaseKind::TwoInf:
      t->sig = sig_two();
      two(C::exactly({2}), C::infinite());
      break;
    case BaseKind::F:
    case BaseKind::Fs:
      if (!f) f = make_fof("fig");
      t->fof = f;
      t->sig = sig_s();
      one(C::any(), b == BaseKind::F ? SPolicy::Count : SPolicy::CountPsiVee);
      break;
    case BaseKind::NeqOdd:
      t->sig = sig_s();
      one(C::exactly({1}), SPolicy::Free);
      one(C::odd_or_inf(), SPolicy::Moved);
      break;
    case BaseKind::Neq1Inf:
      t->sig = sig_s();
      one(C::exactly({1}), SPolicy::Free);
      one(C::infinite(), SPolicy::Moved);
      break;
    case BaseKind::Neq2Inf:
      t->sig = sig_s();
      one(C::exactly({2}), SPolicy::Identity);
      one(C::infinite(), SPolicy::Moved);
      break;
  }
  t->expected = detail::base_flags(b, n);
  t->row = detail::row_of(t->expected);
  t->name = detail::base_name(b, n, m, t->fof);
  return t;
}

inline std::shared_ptr<Theory> apply_layer(const Theory& base, Layer l) {
  auto t = std::make_shared<Theory>(base);
  switch (l) {
    case Layer::AddSort:
      if (base.sig.num_sorts != 1 || base.sig.has_s)
        throw std::invalid_argument("add_sort applies to one-sorted empty theories, not " + base.name);
      t->sig.num_sorts = 2;
      for (auto& b : t->boxes) b.cards.push_back(Card::any());
      t->name = "add_sort(" + base.name + ")";
      break;
    case Layer::AddFun:
    case Layer::AddNc:
      if (base.sig.has_s) throw std::invalid_argument("function layers apply to empty signatures, not " + base.name);
      t->sig.has_s = true;
      for (auto& b : t->boxes) b.policy = l == Layer::AddFun ? SPolicy::Identity : SPolicy::PsiVee;
      if (l == Layer::AddNc) t->expected.cv = false;
      t->name = std::string(l == Layer::AddFun ? "add_fun(" : "add_nc(") + base.name + ")";
      break;
  }
  t->layers.push_back(l);
  t->row = detail::row_of(t->expected);
  return t;
}

inline std::vector<Formula> Theory::axioms(int kmax) const {
  std::vector<Formula> ax;
  auto card_eq = [](SortId k, int c) { return mk_card_eq(k, c); };
  auto fixed_eq = [](int c) { return mk_fix_count(FixKind::Exactly, FixFlavor::Fixed, c); };
  auto moved_eq = [](int c) { return mk_fix_count(FixKind::Exactly, FixFlavor::Moved, c); };
  switch (base) {
    case BaseKind::Geq: ax.push_back(mk_card_geq(0, n)); break;
    case BaseKind::Inf:
      for (int k = 1; k <= kmax; ++k) ax.push_back(mk_card_geq(0, k));
      break;
    case BaseKind::Even:
      for (int k = 0; 2 * k + 1 <= kmax; ++k) ax.push_back(neg(card_eq(0, 2 * k + 1)));
      break;
    case BaseKind::NInf:
      for (int k = 1; k <= kmax; ++k) ax.push_back(disj(card_eq(0, n), mk_card_geq(0, k)));
      break;
    case BaseKind::Leq: ax.push_back(mk_card_leq(0, n)); break;
    case BaseKind::Mn: ax.push_back(disj(card_eq(0, m), card_eq(0, n))); break;
    case BaseKind::T23:
      for (int k = 1; k <= kmax; ++k)
        ax.push_back(disj(conj(card_eq(0, 2), mk_card_geq(1, k)), conj(mk_card_geq(0, 3), mk_card_geq(1, 3))));
      break;
    case BaseKind::OneOdd:
      ax.push_back(card_eq(0, 1));
      for (int k = 1; 2 * k <= kmax; ++k) ax.push_back(neg(card_eq(1, 2 * k)));
      break;
    case BaseKind::OneInf:
    case BaseKind::TwoInf:
      ax.push_back(card_eq(0, base == BaseKind::OneInf ? 1 : 2));
      for (int k = 1; k <= kmax; ++k) ax.push_back(mk_card_geq(1, k));
      break;
    case BaseKind::F:
    case BaseKind::Fs:
      for (int k = 1; k <= kmax; ++k) {
        auto [f1k, f0k] = fof->counts(k);
        std::vector<Formula> alts{conj(mk_fix_count(FixKind::AtLeast, FixFlavor::Fixed, static_cast<int>(f1k)),
                                       mk_fix_count(FixKind::AtLeast, FixFlavor::Moved, static_cast<int>(f0k)))};
        for (int i = 1; i <= k; ++i) {
          auto [a, b] = fof->counts(i);
          alts.push_back(conj(fixed_eq(static_cast<int>(a)), moved_eq(static_cast<int>(b))));
        }
        ax.push_back(disj(alts));
      }
      if (base == BaseKind::Fs) ax.push_back(mk_psi_vee());
      break;
    case BaseKind::NeqOdd:
      for (int k = 1; 2 * k <= kmax; ++k)
        ax.push_back(disj(card_eq(0, 1), conj(neg(card_eq(0, 2 * k)), mk_all_moved())));
      ax.push_back(disj(card_eq(0, 1), mk_all_moved()));
      break;
    case BaseKind::Neq1Inf:
      for (int k = 1; k <= kmax; ++k) ax.push_back(disj(card_eq(0, 1), conj(mk_card_geq(0, k), mk_all_moved())));
      break;
    case BaseKind::Neq2Inf:
      for (int k = 1; k <= kmax; ++k)
        ax.push_back(disj(conj(card_eq(0, 2), mk_all_fixed()), conj(mk_card_geq(0, k), mk_all_moved())));
      break;
  }
  if (has_layer(Layer::AddFun)) ax.push_back(mk_all_fixed());
  if (has_layer(Layer::AddNc)) ax.push_back(mk_psi_vee());
  return ax;
}

// ---- names ----

inline std::vector<std::string> catalog_base_names() {
  return {"T_geq:<n>", "T_inf",       "T_even",      "T_n_inf:<n>", "T_leq:<n>",        "T_mn:<m>,<n>",
          "T_2_3",     "T_1_odd",     "T_1_inf",     "T_2_inf",     "T_f[:<oracle>]",   "T_f_s[:<oracle>]",
          "T_neq_odd", "T_neq_1_inf", "T_neq_2_inf", "add_sort(<T>)", "add_fun(<T>)", "add_nc(<T>)"};
}

namespace detail {

inline int parse_int(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("malformed parameter '" + s + "' in " + whole);
  return v;
}

inline std::string trim(std::string s) {
  auto a = s.find_first_not_of(" \t");
  auto b = s.find_last_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace detail

struct UnknownTheory : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline std::shared_ptr<Theory> parse_theory_mut(const std::string& raw) {
  auto spec = detail::trim(raw);
  for (auto [prefix, layer] : {std::pair{"add_sort(", Layer::AddSort}, std::pair{"add_fun(", Layer::AddFun},
                               std::pair{"add_nc(", Layer::AddNc}}) {
    std::string p = prefix;
    if (spec.rfind(p, 0) == 0) {
      if (spec.back() != ')') throw std::invalid_argument("unbalanced parentheses in " + spec);
      auto inner = parse_theory_mut(spec.substr(p.size(), spec.size() - p.size() - 1));
      return apply_layer(*inner, layer);
    }
  }
  std::string head = spec, arg;
  if (auto c = spec.find(':'); c != std::string::npos) {
    head = spec.substr(0, c);
    arg = spec.substr(c + 1);
  }
  auto need_arg = [&]() {
    if (arg.empty()) throw std::invalid_argument(head + " needs a parameter, e.g. " + head + ":2");
  };
  auto no_arg = [&]() {
    if (!arg.empty()) throw std::invalid_argument(head + " takes no parameter");
  };
  if (head == "T_geq" || head == "T_geq_n") {
    need_arg();
    return make_base(BaseKind::Geq, detail::parse_int(arg, spec));
  }
  if (head == "T_n_inf") {
    need_arg();
    return make_base(BaseKind::NInf, detail::parse_int(arg, spec));
  }
  if (head == "T_leq" || head == "T_leq_n") {
    need_arg();
    return make_base(BaseKind::Leq, detail::parse_int(arg, spec));
  }
  if (head == "T_mn" || head == "T_m_n") {
    need_arg();
    auto comma = arg.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("T_mn needs two parameters, e.g. T_mn:2,5");
    return make_base(BaseKind::Mn, detail::parse_int(arg.substr(comma + 1), spec), detail::parse_int(arg.substr(0, comma), spec));
  }
  if (head == "T_f" || head == "T_f_s") {
    std::string o = arg.empty() ? "fig" : arg;
    if (o.rfind("seed=", 0) == 0) o = o.substr(5);
    return make_base(head == "T_f" ? BaseKind::F : BaseKind::Fs, 0, 0, make_fof(o));
  }
  static const std::vector<std::pair<std::string, BaseKind>> plain = {
      {"T_inf", BaseKind::Inf},        {"T_even", BaseKind::Even},           {"T_even_inf", BaseKind::Even},
      {"T_2_3", BaseKind::T23},        {"T_1_odd", BaseKind::OneOdd},        {"T_1_inf", BaseKind::OneInf},
      {"T_2_inf", BaseKind::TwoInf},   {"T_neq_odd", BaseKind::NeqOdd},      {"T_neq_1_inf", BaseKind::Neq1Inf},
      {"T_neq_2_inf", BaseKind::Neq2Inf}};
  for (auto& [nm, b] : plain)
    if (head == nm) {
      no_arg();
      return make_base(b);
    }
  std::string list;
  for (auto& s : catalog_base_names()) list += "\n  " + s;
  throw UnknownTheory("unknown theory '" + spec + "'; the catalog has:" + list);
}

inline TheoryPtr parse_theory(const std::string& spec) { return parse_theory_mut(spec); }

// Every parameterization listed in the property table.
inline std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  auto four = [&](const std::string& b) {
    out.push_back(b);
    out.push_back("add_sort(" + b + ")");
    out.push_back("add_fun(" + b + ")");
    out.push_back("add_fun(add_sort(" + b + "))");
  };
  auto nc = [&](const std::string& b) {
    out.push_back("add_nc(" + b + ")");
    out.push_back("add_nc(add_sort(" + b + "))");
  };
  for (int n = 1; n <= 3; ++n) four("T_geq:" + std::to_string(n));
  for (int n = 1; n <= 3; ++n) nc("T_geq:" + std::to_string(n));
  for (auto s : {"T_2_3", "T_f", "add_fun(T_2_3)", "T_f_s", "add_nc(T_2_3)"}) out.push_back(s);
  four("T_inf");
  nc("T_inf");
  four("T_even");
  nc("T_even");
  for (int n = 1; n <= 3; ++n) four("T_n_inf:" + std::to_string(n));
  for (int n = 1; n <= 3; ++n) nc("T_n_inf:" + std::to_string(n));
  four("T_leq:1");
  four("T_leq:2");
  four("T_leq:3");
  for (auto s : {"T_1_odd", "T_neq_odd", "add_fun(T_1_odd)"}) out.push_back(s);
  four("T_mn:2,5");
  four("T_mn:3,5");
  for (auto s : {"T_1_inf", "T_neq_1_inf", "add_fun(T_1_inf)", "T_2_inf", "T_neq_2_inf", "add_fun(T_2_inf)"})
    out.push_back(s);
  return out;
}

inline std::vector<TheoryPtr> catalog() {
  std::vector<TheoryPtr> out;
  for (auto& n : catalog_names()) out.push_back(parse_theory(n));
  return out;
}

}  // namespace polite

#endif  // POLITE_THEORIES_HPP
