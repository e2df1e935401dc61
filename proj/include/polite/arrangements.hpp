#ifndef POLITE_ARRANGEMENTS_HPP
#define POLITE_ARRANGEMENTS_HPP

// Per-sort set partitions of a variable set, enumerated as restricted
// growth strings, and their cubes.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "structure.hpp"

namespace polite {

struct Arrangement {
  std::map<SortId, std::vector<std::vector<Var>>> blocks;  // blocks ordered by least member
  std::vector<Var> order;                                  // variables in enumeration order
  std::vector<int> rgs;                                    // block index of order[i] within its sort

  int classes(SortId s) const {
    auto it = blocks.find(s);
    return it == blocks.end() ? 0 : static_cast<int>(it->second.size());
  }
  bool operator==(const Arrangement& o) const { return blocks == o.blocks; }
};

using SortedVars = std::map<SortId, std::vector<Var>>;

inline SortedVars by_sort(const VarSet& vs) {
  SortedVars out;
  for (auto& x : vs) out[x.sort].push_back(x);
  return out;
}

// Receives the variable order and a prefix of the growth string; true prunes the subtree.
using PruneHook = std::function<bool(const std::vector<Var>&, const std::vector<int>&)>;

class ArrangementStream {
 public:
  explicit ArrangementStream(SortedVars vars, PruneHook hook = {}) : hook_(std::move(hook)) {
    for (auto& [s, vs] : vars) {
      auto sorted = vs;
      std::sort(sorted.begin(), sorted.end(), [](const Var& a, const Var& b) { return a.name < b.name; });
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        order_.push_back(sorted[i]);
        first_of_sort_.push_back(i == 0);
      }
    }
  }

  std::optional<Arrangement> next() {
    if (done_) return std::nullopt;
    if (!started_) {
      started_ = true;
      rgs_.clear();
      maxes_.clear();
      if (!descend()) {
        done_ = true;
        return std::nullopt;
      }
      return current();
    }
    if (!advance()) {
      done_ = true;
      return std::nullopt;
    }
    return current();
  }

  std::uint64_t pruned() const { return pruned_; }
  const std::vector<Var>& order() const { return order_; }

 private:
  std::vector<Var> order_;
  std::vector<bool> first_of_sort_;
  PruneHook hook_;
  std::vector<int> rgs_, maxes_;  // maxes_[i] = largest value in rgs_[start of sort .. i]
  bool started_ = false, done_ = false;
  std::uint64_t pruned_ = 0;

  int limit(std::size_t i) const { return (first_of_sort_[i] || i == 0) ? 0 : maxes_[i - 1] + 1; }

  bool push(int v) {
    std::size_t i = rgs_.size();
    rgs_.push_back(v);
    maxes_.push_back((first_of_sort_[i] || i == 0) ? v : std::max(maxes_[i - 1], v));
    if (hook_ && hook_(order_, rgs_)) {
      ++pruned_;
      return false;
    }
    return true;
  }
  void pop() {
    rgs_.pop_back();
    maxes_.pop_back();
  }

  // Extends the current prefix with the smallest admissible completion.
  bool descend() {
    while (rgs_.size() < order_.size()) {
      std::size_t i = rgs_.size();
      bool ok = false;
      for (int w = 0; w <= limit(i) && !ok; ++w) {
        ok = push(w);
        if (!ok) pop();
      }
      if (!ok && !bump()) return false;
    }
    return true;
  }

  // Moves to the next prefix in lexicographic order, at the current length or shorter.
  bool bump() {
    while (!rgs_.empty()) {
      std::size_t i = rgs_.size() - 1;
      int v = rgs_[i];
      pop();
      for (int w = v + 1; w <= limit(i); ++w) {
        if (push(w)) return true;
        pop();
      }
    }
    return false;
  }

  bool advance() {
    if (!bump()) return false;
    return descend();
  }

  Arrangement current() const {
    Arrangement a;
    a.order = order_;
    a.rgs = rgs_;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      auto& bs = a.blocks[order_[i].sort];
      if (static_cast<int>(bs.size()) <= rgs_[i]) bs.resize(rgs_[i] + 1);
      bs[rgs_[i]].push_back(order_[i]);
    }
    return a;
  }
};

inline ArrangementStream enumerate_arrangements(SortedVars vars, PruneHook hook = {}) {
  return ArrangementStream(std::move(vars), std::move(hook));
}

inline std::vector<Arrangement> all_arrangements(const SortedVars& vars) {
  std::vector<Arrangement> out;
  auto st = enumerate_arrangements(vars);
  while (auto a = st.next()) out.push_back(std::move(*a));
  return out;
}

// Chain equalities inside blocks, one disequality per pair of blocks.
inline Cube arrangement_to_cube(const Arrangement& a) {
  Cube c;
  for (auto& [s, bs] : a.blocks) {
    for (auto& b : bs)
      for (std::size_t i = 1; i < b.size(); ++i) c.push_back(Literal{std::min(tv(b[i - 1]), tv(b[i])), std::max(tv(b[i - 1]), tv(b[i])), true});
    for (std::size_t i = 0; i < bs.size(); ++i)
      for (std::size_t j = i + 1; j < bs.size(); ++j) {
        auto x = tv(bs[i][0]), y = tv(bs[j][0]);
        c.push_back(Literal{std::min(x, y), std::max(x, y), false});
      }
  }
  return c;
}

inline Formula arrangement_to_formula(const Arrangement& a) { return to_formula(arrangement_to_cube(a)); }

// The partition that an interpretation induces on vars.
inline Arrangement arrangement_of(const Interpretation& m, const VarSet& vars) {
  SortedVars sv = by_sort(vars);
  for (auto& x : vars)
    if (!m.assignment.count(x)) throw EvalError("arrangement_of: unassigned variable " + x.name);
  Arrangement a;
  for (auto& [s, vs0] : sv) {
    auto vs = vs0;
    std::sort(vs.begin(), vs.end(), [](const Var& p, const Var& q) { return p.name < q.name; });
    std::map<int, int> block_of_value;
    auto& bs = a.blocks[s];
    for (auto& x : vs) {
      int val = m.assignment.at(x);
      auto [it, fresh] = block_of_value.emplace(val, static_cast<int>(bs.size()));
      if (fresh) bs.emplace_back();
      bs[it->second].push_back(x);
      a.order.push_back(x);
      a.rgs.push_back(it->second);
    }
  }
  return a;
}

// Bell numbers B(0..n).
inline std::vector<std::uint64_t> bell_numbers(int n) {
  std::vector<std::uint64_t> out{1};
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
    out.push_back(row.front());
  }
  return out;
}

inline std::uint64_t arrangement_count(const SortedVars& vars) {
  std::uint64_t c = 1;
  for (auto& [s, vs] : vars) c *= bell_numbers(static_cast<int>(vs.size())).back();
  return c;
}

}  // namespace polite

#endif  // POLITE_ARRANGEMENTS_HPP
