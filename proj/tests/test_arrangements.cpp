#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polite/arrangements.hpp"

using namespace polite;

namespace {

Var x{"x", 0}, y{"y", 0}, z{"z", 0}, u{"u", 1}, w{"w", 1};

std::string blocks(const Arrangement& a) {
  std::string out;
  for (auto& [s, bs] : a.blocks)
    for (auto& b : bs) {
      out += "{";
      for (auto& v : b) out += v.name;
      out += "}";
    }
  return out;
}

}  // namespace

TEST_CASE("enumeration counts") {
  CHECK(all_arrangements({{0, {x, y, z}}}).size() == 5);
  CHECK(all_arrangements({{0, {x}}}).size() == 1);
  CHECK(all_arrangements({{0, {x, y}}, {1, {u, w}}}).size() == 4);
  CHECK(all_arrangements({}).size() == 1);
  auto bell = bell_numbers(10);
  CHECK(bell == std::vector<std::uint64_t>{1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975});
}

TEST_CASE("enumeration order") {
  std::vector<std::string> seen;
  for (auto& a : all_arrangements({{0, {x, y, z}}})) seen.push_back(blocks(a));
  CHECK(seen == std::vector<std::string>{"{xyz}", "{xy}{z}", "{xz}{y}", "{x}{yz}", "{x}{y}{z}"});
}

TEST_CASE("arrangement formulas") {
  Arrangement a;
  a.blocks[0] = {{x, y}, {z}};
  CHECK(to_string(arrangement_to_formula(a)) == "(and (= x y) (not (= x z)))");
  a.blocks[0] = {{x, y}};
  CHECK(to_string(arrangement_to_formula(a)) == "(= x y)");
  a.blocks[0] = {{x}, {y}};
  CHECK(to_string(arrangement_to_formula(a)) == "(not (= x y))");
}

TEST_CASE("arrangement of a model") {
  Interpretation m{FiniteStructure{sig_one(), {2}, {}}, {{x, 0}, {y, 0}, {z, 1}}};
  CHECK(blocks(arrangement_of(m, {x, y, z})) == "{xy}{z}");
  m.assignment = {{x, 1}, {y, 1}, {z, 1}};
  CHECK(blocks(arrangement_of(m, {x, y, z})) == "{xyz}");
  m.structure.sizes = {3};
  m.assignment = {{x, 2}, {y, 0}, {z, 1}};
  CHECK(blocks(arrangement_of(m, {x, y, z})) == "{x}{y}{z}");
}

TEST_CASE("every arrangement is satisfiable, distinct and round-trips through a model") {
  std::vector<Var> xs;
  for (int i = 0; i < 5; ++i) xs.push_back(Var{"a" + std::to_string(i), 0});
  std::vector<Var> us{u, w};
  SortedVars vars{{0, xs}, {1, us}};
  auto all = all_arrangements(vars);
  CHECK(all.size() == arrangement_count(vars));
  std::set<std::string> distinct;
  for (auto& a : all) {
    distinct.insert(blocks(a));
    Interpretation m{FiniteStructure{sig_two(), {std::max(1, a.classes(0)), std::max(1, a.classes(1))}, {}}, {}};
    for (auto& [s, bs] : a.blocks)
      for (std::size_t i = 0; i < bs.size(); ++i)
        for (auto& v : bs[i]) m.assignment[v] = static_cast<int>(i);
    CHECK(evaluate(m, arrangement_to_formula(a)));
    VarSet vs(xs.begin(), xs.end());
    vs.insert(u);
    vs.insert(w);
    CHECK(arrangement_of(m, vs) == a);
  }
  CHECK(distinct.size() == all.size());
}

TEST_CASE("pruning hook skips whole subtrees") {
  SortedVars vars{{0, {x, y, z}}};
  // Cut every prefix that puts x and y together.
  PruneHook hook = [](const std::vector<Var>& order, const std::vector<int>& rgs) {
    return rgs.size() >= 2 && order[0].name == "x" && order[1].name == "y" && rgs[0] == rgs[1];
  };
  std::vector<std::string> seen;
  auto st = enumerate_arrangements(vars, hook);
  while (auto a = st.next()) seen.push_back(blocks(*a));
  CHECK(seen == std::vector<std::string>{"{xz}{y}", "{x}{yz}", "{x}{y}{z}"});
}

TEST_CASE("streams restart independently") {
  SortedVars vars{{0, {x, y, z}}};
  auto a = enumerate_arrangements(vars), b = enumerate_arrangements(vars);
  a.next();
  a.next();
  CHECK(blocks(*b.next()) == "{xyz}");
  CHECK(blocks(*a.next()) == "{xz}{y}");
}
