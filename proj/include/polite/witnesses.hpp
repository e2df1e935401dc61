#ifndef POLITE_WITNESSES_HPP
#define POLITE_WITNESSES_HPP

// Witness functions. Most witnesses have the shape phi /\ rest(vars(phi)),
// where rest only looks at the variable set; those carry a `suffix` so the
// sort and choice-function lifts can reuse them.

#include <functional>
#include <optional>
#include <string>

#include "arrangements.hpp"
#include "theories.hpp"

namespace polite {

enum class WitnessKind { Plain, Strong };

inline const char* to_string(WitnessKind k) { return k == WitnessKind::Strong ? "strong" : "plain"; }

using Suffix = std::function<Formula(const VarSet&, FreshSupply&)>;

struct WitnessFn {
  WitnessKind kind = WitnessKind::Plain;
  std::string label;
  std::function<Formula(const Formula&)> apply;
  std::optional<Suffix> suffix;  // present when the witness only depends on vars(phi)

  Formula operator()(const Formula& phi) const {
    if (!quantifier_free(phi)) throw std::invalid_argument("witness: quantified formula");
    return apply(phi);
  }
};

namespace detail {

inline Formula self_eqs(const std::vector<Var>& xs) {
  std::vector<Formula> ks;
  for (auto& x : xs) ks.push_back(eq(tv(x), tv(x)));
  return conj(ks);
}

inline std::vector<Var> fresh_vars(FreshSupply& fs, SortId sort, int n) {
  std::vector<Var> out;
  for (int i = 0; i < n; ++i) out.push_back(fs.make(sort));
  return out;
}

inline WitnessFn from_suffix(WitnessKind kind, std::string label, Suffix suffix) {
  WitnessFn w;
  w.kind = kind;
  w.label = std::move(label);
  w.suffix = suffix;
  w.apply = [suffix](const Formula& phi) {
    FreshSupply fs(phi);
    return conj(phi, suffix(vars_of(phi), fs));
  };
  return w;
}

// Grid variables g[i][j] = s^j(x_i) for j = 0..depth(x_i)+extra over the sort-S variables of phi.
struct Grid {
  std::vector<Var> roots;
  std::vector<std::vector<Var>> cells;
  Formula links = top();
};

inline Grid make_grid(const Formula& phi, int extra, const VarSet& taken) {
  Grid g;
  auto depths = max_depths(phi);
  auto prefix = grid_prefix(taken);
  std::vector<Formula> ks;
  int i = 0;
  for (auto& x : vars_of(phi, 0)) {
    ++i;
    g.roots.push_back(x);
    int M = depths.count(x) ? depths[x] : 0;
    std::vector<Var> row;
    for (int j = 0; j <= M + extra; ++j) {
      Var y{prefix + std::to_string(i) + "_" + std::to_string(j), 0};
      row.push_back(y);
      ks.push_back(eq(tv(y), s(tv(x), j)));
    }
    g.cells.push_back(std::move(row));
  }
  g.links = conj(ks);
  return g;
}

inline int pow2_at_least(int v) {
  int p = 1;
  while (p < v) p *= 2;
  return p;
}

}  // namespace detail

// ---- base witnesses ----

inline WitnessFn witness_geq(int n) {
  return detail::from_suffix(WitnessKind::Strong, "distinct-" + std::to_string(n),
                             [n](const VarSet&, FreshSupply& fs) { return distinct(detail::fresh_vars(fs, 0, n)); });
}

inline WitnessFn witness_identity(WitnessKind kind = WitnessKind::Strong) {
  return detail::from_suffix(kind, "identity", [](const VarSet&, FreshSupply&) { return top(); });
}

inline WitnessFn witness_padding(std::vector<int> per_sort, std::string label) {
  return detail::from_suffix(WitnessKind::Plain, std::move(label), [per_sort](const VarSet&, FreshSupply& fs) {
    std::vector<Formula> ks;
    for (std::size_t k = 0; k < per_sort.size(); ++k)
      ks.push_back(detail::self_eqs(detail::fresh_vars(fs, static_cast<SortId>(k), per_sort[k])));
    return conj(ks);
  });
}

// Chain grid up to one step past the deepest term, and 2^(k+1) padding variables.
inline WitnessFn witness_f() {
  WitnessFn w;
  w.label = "f-grid";
  w.apply = [](const Formula& phi) {
    FreshSupply fs(phi);
    auto g = detail::make_grid(phi, 1, vars_of(phi));
    int M = 0;
    for (auto& row : g.cells) M += static_cast<int>(row.size());  // M_i + 2 per row
    int p = detail::pow2_at_least(2 * M);
    return conj({phi, g.links, detail::self_eqs(detail::fresh_vars(fs, 0, 2 * p))});
  };
  return w;
}

inline WitnessFn witness_f_s() {
  WitnessFn w;
  w.label = "f-s-chain";
  w.apply = [](const Formula& phi) {
    FreshSupply fs(phi);
    auto ws = vars_of(phi, 0);
    std::vector<Formula> ks{phi};
    for (auto& x : ws) {
      auto y = fs.make(0), z = fs.make(0);
      ks.push_back(eq(tv(y), s(tv(x))));
      ks.push_back(eq(tv(z), s(tv(y))));
    }
    int n = static_cast<int>(ws.size());
    int p = detail::pow2_at_least(2 * n + 1);
    ks.push_back(detail::self_eqs(detail::fresh_vars(fs, 0, 2 * p)));
    return conj(ks);
  };
  return w;
}

inline WitnessFn witness_neq_odd() {
  WitnessFn w;
  w.label = "odd-grid";
  w.apply = [](const Formula& phi) {
    FreshSupply fs(phi);
    auto y = fs.make(0);
    auto g = detail::make_grid(phi, 1, vars_of(phi));
    return conj({phi, eq(tv(y), tv(y)), g.links});
  };
  return w;
}

// ---- lifts ----

enum class LiftKind { AddSortPlain, AddSortStrong, AddFun, AddNc };

// Needs a variable-dependent base.
inline WitnessFn lift_add_sort(const WitnessFn& base) {
  if (!base.suffix) throw std::invalid_argument("add_sort lift needs a variable-dependent witness");
  auto suf = *base.suffix;
  return detail::from_suffix(base.kind, "add_sort(" + base.label + ")", [suf](const VarSet& vs, FreshSupply& fs) {
    VarSet s0;
    for (auto& x : vs)
      if (x.sort == 0) s0.insert(x);
    auto rest = suf(s0, fs);
    // With no S variables in phi nothing would cover sort S.
    if (s0.empty()) {
      auto x = fs.make(0);
      rest = conj(rest, eq(tv(x), tv(x)));
    }
    auto u = fs.make(1);
    return conj(rest, eq(tv(u), tv(u)));
  });
}

inline WitnessFn lift_add_fun(const WitnessFn& base) {
  WitnessFn w;
  w.kind = base.kind;
  w.label = "add_fun(" + base.label + ")";
  w.apply = [base](const Formula& phi) { return conj(phi, base.apply(erase_s(phi))); };
  return w;
}

inline WitnessFn lift_add_nc(const WitnessFn& base) {
  if (!base.suffix) throw std::invalid_argument("add_nc lift needs a variable-dependent witness");
  WitnessFn w;
  w.kind = base.kind;
  w.label = "add_nc(" + base.label + ")";
  auto suf = *base.suffix;
  w.apply = [suf](const Formula& phi) {
    std::vector<Formula> ks{phi};
    auto all = vars_of(phi);
    if (vars_of(phi, 0).empty()) {
      FreshSupply fs(phi);
      ks.push_back(suf(all, fs));
      return conj(ks);
    }
    auto d = dagger(phi);
    VarSet vs = all;
    for (auto& row : d.grid)
      for (auto& y : row) vs.insert(y);
    FreshSupply fs(vs);
    ks.push_back(suf(vs, fs));
    std::size_t n = d.z.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d.grid[i].size(); ++j) ks.push_back(eq(tv(d.grid[i][j]), s(tv(d.z[i]), static_cast<int>(j))));
    for (std::size_t i = 0; i < n; ++i) {
      auto& y = d.grid[i];
      ks.push_back(disj(eq(tv(y[2]), tv(y[1])), eq(tv(y[2]), tv(y[0]))));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t p = i; p < n; ++p)
        for (int j = 0; j <= d.M[i]; ++j)
          for (int q = 0; q <= d.M[p]; ++q) {
            if (i == p && q <= j) continue;  // each unordered pair once
            ks.push_back(implies(eq(tv(d.grid[i][j]), tv(d.grid[p][q])), eq(tv(d.grid[i][j + 1]), tv(d.grid[p][q + 1]))));
          }
    return conj(ks);
  };
  return w;
}

inline WitnessFn lift_witness(LiftKind kind, const WitnessFn& base) {
  switch (kind) {
    case LiftKind::AddSortPlain:
    case LiftKind::AddSortStrong: {
      if (kind == LiftKind::AddSortStrong && base.kind != WitnessKind::Strong)
        throw std::invalid_argument("strong add_sort lift of a plain witness");
      auto w = lift_add_sort(base);
      if (kind == LiftKind::AddSortPlain) w.kind = WitnessKind::Plain;
      return w;
    }
    case LiftKind::AddFun: return lift_add_fun(base);
    case LiftKind::AddNc: return lift_add_nc(base);
  }
  throw std::logic_error("lift_witness");
}

// phi /\ OR over arrangements E of vars(phi) of wit(delta_E).
inline WitnessFn variable_dependent(const WitnessFn& base, const Theory& t) {
  if (t.sig.has_s) throw std::invalid_argument("variable_dependent: " + t.name + " has a function symbol");
  WitnessFn w;
  w.kind = base.kind;
  w.label = "vd(" + base.label + ")";
  auto chi = [base](const VarSet& vs, FreshSupply& fs) {
    std::vector<Formula> alts;
    std::vector<Var> xs(vs.begin(), vs.end());
    auto st = enumerate_arrangements(by_sort(vs));
    while (auto a = st.next()) {
      auto delta = conj(arrangement_to_formula(*a), detail::self_eqs(xs));
      auto wd = base.apply(delta);
      fs.note(wd);
      alts.push_back(wd);
    }
    return disj(alts);
  };
  w.suffix = chi;
  w.apply = [chi](const Formula& phi) {
    FreshSupply fs(phi);
    return conj(phi, chi(vars_of(phi), fs));
  };
  return w;
}

// ---- per theory ----

namespace detail {

inline std::optional<WitnessFn> base_witness(const Theory& t) {
  switch (t.base) {
    case BaseKind::Geq: return witness_geq(t.n);
    case BaseKind::Leq: return witness_identity();
    case BaseKind::Mn: return witness_padding({std::max(t.m, t.n)}, "pad-" + std::to_string(std::max(t.m, t.n)));
    case BaseKind::Even: return witness_padding({1}, "pad-1");
    case BaseKind::T23: return witness_padding({3, 3}, "pad-3-3");
    case BaseKind::OneOdd: return witness_padding({1, 1}, "pad-1-1");
    case BaseKind::F: return witness_f();
    case BaseKind::Fs: return witness_f_s();
    case BaseKind::NeqOdd: return witness_neq_odd();
    default: return std::nullopt;
  }
}

}  // namespace detail

// A witness following the table's FW column; absent for the others.
inline std::optional<WitnessFn> witness_for(const Theory& t) {
  if (!t.expected.fw) return std::nullopt;
  auto w = detail::base_witness(t);
  if (!w) return std::nullopt;
  if (!t.expected.sw) w->kind = WitnessKind::Plain;
  for (auto l : t.layers) {
    switch (l) {
      case Layer::AddSort: w = lift_add_sort(*w); break;
      case Layer::AddFun: w = lift_add_fun(*w); break;
      case Layer::AddNc: w = lift_add_nc(*w); break;
    }
  }
  return w;
}

inline std::optional<WitnessFn> strong_witness_for(const Theory& t) {
  if (!t.expected.sw) return std::nullopt;
  auto w = witness_for(t);
  if (w) w->kind = WitnessKind::Strong;
  return w;
}

}  // namespace polite

#endif  // POLITE_WITNESSES_HPP
