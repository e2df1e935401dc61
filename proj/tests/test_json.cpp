#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polite/json_io.hpp"
#include "polite/parse.hpp"

using namespace polite;

TEST_CASE("interpretations round trip") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    Signature sig{1 + static_cast<int>(rng() % 2), rng() % 2 == 0};
    Interpretation m;
    m.structure.sig = sig;
    for (int k = 0; k < sig.num_sorts; ++k) m.structure.sizes.push_back(1 + static_cast<int>(rng() % 4));
    if (sig.has_s)
      for (int a = 0; a < m.structure.sizes[0]; ++a) m.structure.s.push_back(static_cast<int>(rng() % m.structure.sizes[0]));
    VarSet vars;
    for (int k = 0; k < sig.num_sorts; ++k)
      for (auto name : {"x", "y"}) {
        Var x{std::string(name) + std::to_string(k), static_cast<SortId>(k)};
        vars.insert(x);
        m.assignment[x] = static_cast<int>(rng() % m.structure.sizes[k]);
      }
    auto j = to_json(m);
    auto back = interpretation_from_json(json::parse(j.dump()), vars);
    CHECK(back.structure.sizes == m.structure.sizes);
    CHECK(back.structure.s == m.structure.s);
    CHECK(back.assignment == m.assignment);
    CHECK(to_json(back) == j);
  }
}

TEST_CASE("model layout") {
  Interpretation m{FiniteStructure{sig_two_s(), {2, 1}, {1, 1}}, {{Var{"x", 0}, 0}, {Var{"u", 1}, 0}}};
  CHECK(to_json(m).dump() == R"({"sorts":{"S":2,"S2":1},"functions":{"s":[1,1]},"assignment":{"u":0,"x":0}})");
  auto bad = to_json(m);
  bad["functions"]["s"] = {0, 5};
  CHECK_THROWS(interpretation_from_json(bad));
}

TEST_CASE("arrangements and results") {
  Arrangement a;
  a.blocks[0] = {{Var{"x", 0}, Var{"y", 0}}, {Var{"z", 0}}};
  a.blocks[1] = {{Var{"u", 1}}};
  CHECK(to_json(a).dump() == R"([["x","y"],["z"],["u"]])");
  CHECK(to_json(SatResult::sat_without("infinite model")).dump() == R"({"verdict":"SAT","note":"infinite model"})");
  CHECK(profile_json({3, kInf}).dump() == R"([3,"inf"])");
}

TEST_CASE("reports are deterministic") {
  auto t = parse_theory("T_leq:2");
  lab::ClassifyOptions o;
  auto a = lab::to_json(lab::classify(t, o)).dump(), b = lab::to_json(lab::classify(t, o)).dump();
  CHECK(a == b);
  auto j = json::parse(a);
  CHECK(j["theory"] == "T_leq:2");
  CHECK(j["match"] == true);
  REQUIRE(j["verdicts"].size() == 5);
  for (auto& v : j["verdicts"]) {
    CHECK(v.contains("property"));
    CHECK(v.contains("status"));
    CHECK(v.contains("evidence"));
    CHECK(v["bound"] == 4);
  }
}
