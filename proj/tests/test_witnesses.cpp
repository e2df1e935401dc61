#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polite/lab.hpp"
#include "polite/parse.hpp"
#include "polite/witnesses.hpp"

using namespace polite;

namespace {

Formula pf(const std::string& s) { return parse_formula(s); }

std::string wit(const std::string& theory, const std::string& f, bool strong = false) {
  auto t = parse_theory(theory);
  auto w = strong ? strong_witness_for(*t) : witness_for(*t);
  REQUIRE(w);
  return to_string((*w)(pf(f)));
}

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("per-theory witnesses") {
  CHECK(wit("T_leq:3", "(= x y)") == "(and (= x y) true)");
  CHECK(wit("T_mn:2,5", "(= x y)") ==
        "(and (= x y) (and (= @w1 @w1) (= @w2 @w2) (= @w3 @w3) (= @w4 @w4) (= @w5 @w5)))");
  CHECK(wit("T_leq:1", "(= x y)", true) == "(and (= x y) true)");
  CHECK(wit("T_geq:2", "(= x y)", true) == "(and (= x y) (not (= @w1 @w2)))");
  CHECK(wit("T_1_odd", "(= x y)") == "(and (= x y) (and (= @w1 @w1) (= @w2 @w2)))");
  CHECK_FALSE(strong_witness_for(*parse_theory("T_mn:2,5")));
  CHECK_FALSE(witness_for(*parse_theory("T_inf")));
}

TEST_CASE("f witness size") {
  // One variable of depth 1: M = 3, so 2^k = 8 and 16 padding variables.
  auto out = wit("T_f", "(= (s x) x)");
  CHECK(has(out, "(= @y1_2 (s (s x)))"));
  CHECK_FALSE(has(out, "@y1_3"));
  CHECK(has(out, "(= @w16 @w16)"));
  CHECK_FALSE(has(out, "@w17"));
  // Two variables, depths 0 and 2: M = 2 + 4 = 6, 2^k = 16.
  auto out2 = wit("T_f", "(= (s (s x)) y)");
  CHECK(has(out2, "(= @w32 @w32)"));
  CHECK_FALSE(has(out2, "@w33"));
}

TEST_CASE("lifts") {
  CHECK(wit("add_fun(T_geq:2)", "(= (s x) y)", true) == "(and (= (s x) y) (and (= x y) (not (= @w1 @w2))))");
  CHECK(wit("add_sort(T_leq:1)", "(= x y)") == "(and (= x y) (and true (= @w1 @w1)))");
  // No S variables: a fresh one covers S.
  auto t = parse_theory("add_sort(T_leq:1)");
  auto only_s2 = (*witness_for(*t))(eq(v("u", 1), v("w", 1)));
  CHECK(vars_of(only_s2, 0).size() == 1);

  auto nc = wit("add_nc(T_geq:1)", "(= (s x) x)", true);
  CHECK(has(nc, "(= @y1_0 x)"));
  CHECK(has(nc, "(= @y1_3 (s (s (s x))))"));
  CHECK(has(nc, "(or (= @y1_1 @y1_2) (= @y1_0 @y1_2))"));
  CHECK(has(nc, "(or (not (= @y1_0 @y1_1)) (= @y1_1 @y1_2))"));

  auto plain = witness_padding({2}, "pad-2");
  CHECK_THROWS_AS(lift_witness(LiftKind::AddSortStrong, plain), std::invalid_argument);
  CHECK(lift_witness(LiftKind::AddSortPlain, witness_geq(2)).kind == WitnessKind::Plain);
  CHECK_THROWS_AS(lift_witness(LiftKind::AddNc, witness_f()), std::invalid_argument);
}

TEST_CASE("variable-dependent form") {
  auto t = parse_theory("T_geq:2");
  auto vd = variable_dependent(witness_geq(2), *t);
  CHECK(vd.kind == WitnessKind::Strong);
  auto one = vd(pf("(= x x)"));
  REQUIRE(one->kind == Kind::And);
  CHECK(one->kids.size() == 2);
  CHECK(one->kids[1]->kind != Kind::Or);  // a single arrangement
  auto two = vd(pf("(= x y)"));
  REQUIRE(two->kids[1]->kind == Kind::Or);
  CHECK(two->kids[1]->kids.size() == 2);
  CHECK(same(two->kids[0], pf("(= x y)")));
  CHECK_THROWS_AS(variable_dependent(witness_geq(2), *parse_theory("T_f")), std::invalid_argument);
}

TEST_CASE("witness outputs are quantifier-free, deterministic and keep the input's variables") {
  lab::CorpusOptions o;
  o.count = 30;
  for (auto& t : catalog()) {
    auto w = witness_for(*t);
    if (!w) continue;
    for (auto& f : lab::random_corpus(t->sig, o)) {
      auto a = (*w)(f), b = (*w)(f);
      CHECK(quantifier_free(a));
      CHECK(same(a, b));
      auto in = vars_of(f), out = vars_of(a);
      CHECK(std::includes(out.begin(), out.end(), in.begin(), in.end()));
      for (auto& x : out)
        if (!in.count(x)) CHECK(x.name[0] == '@');
    }
  }
  CHECK_THROWS(witness_geq(2)(mk_card_geq(0, 2)));
}

TEST_CASE("contracts hold on a small corpus") {
  lab::ContractOptions co;
  co.bound = 3;
  for (auto name : {"T_geq:2", "T_leq:2", "T_mn:2,5", "T_1_odd", "add_sort(T_geq:1)", "add_fun(T_leq:1)",
                    "add_nc(T_geq:1)", "T_f", "T_neq_odd"}) {
    auto t = parse_theory(name);
    auto corpus = lab::standard_corpus(t->sig, 6);
    auto w = witness_for(*t);
    REQUIRE(w);
    co.strong = t->expected.sw;
    auto rep = lab::check_witness_contract(*t, *w, corpus, co);
    CHECK_MESSAGE(rep.status == lab::Status::Confirmed, name << " failed (" << rep.failed_condition << ") on " << to_string(rep.phi));
  }
}

TEST_CASE("plain witnesses that are not strong get caught") {
  lab::ContractOptions co;
  co.strong = true;
  co.condition_i = false;
  for (auto name : {"T_mn:2,5", "T_1_odd"}) {
    auto t = parse_theory(name);
    auto rep = lab::check_witness_contract(*t, *witness_for(*t), lab::handcrafted_corpus(t->sig), co);
    CHECK(rep.status == lab::Status::Refuted);
    CHECK(rep.failed_condition == "ii'");
    CHECK(rep.delta);
  }
}
