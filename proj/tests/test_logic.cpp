#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polite/logic.hpp"
#include "polite/parse.hpp"
#include "polite/structure.hpp"

using namespace polite;

namespace {

Term x = v("x"), y = v("y"), z = v("z");

std::string dnf_str(const Formula& f) {
  std::string out;
  for (auto& c : dnf_cubes(f)) out += to_string(to_formula(c)) + ";";
  return out;
}

// Random QF formula over x, y, z with s-depth <= 2.
Formula random_qf(std::mt19937_64& rng, int size) {
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  if (size <= 1) {
    Term vs[] = {x, y, z};
    auto a = eq(s(vs[pick(3)], pick(3)), s(vs[pick(3)], pick(3)));
    return pick(2) ? a : neg(a);
  }
  int l = 1 + pick(size - 1);
  auto a = random_qf(rng, l), b = random_qf(rng, size - l);
  switch (pick(3)) {
    case 0: return conj(a, b);
    case 1: return disj(a, b);
    default: return neg(conj(a, b));
  }
}

}  // namespace

TEST_CASE("cardinality formulas") {
  CHECK(to_string(mk_card_geq(0, 2)) == "(exists ((x1 S) (x2 S)) (not (= x1 x2)))");
  CHECK(to_string(mk_card_geq(0, 1)) == "(exists ((x1 S)) true)");
  CHECK(mk_card_geq(0, 0)->kind == Kind::True);
  CHECK(to_string(mk_card_leq(0, 1)) == "(exists ((x1 S)) (forall ((y S)) (= x1 y)))");
  CHECK_THROWS_AS(mk_card_geq(0, -1), std::invalid_argument);
  CHECK_THROWS_AS(mk_card_leq(0, 0), std::invalid_argument);

  FiniteStructure three{sig_one(), {3}, {}};
  CHECK(evaluate(three, mk_card_eq(0, 3)));
  CHECK_FALSE(evaluate(three, mk_card_leq(0, 2)));
  CHECK(evaluate(three, mk_card_geq(0, 3)));
  CHECK_FALSE(evaluate(three, mk_card_geq(0, 4)));
}

TEST_CASE("cardinality formulas on the second sort") {
  FiniteStructure a{sig_two(), {1, 4}, {}};
  CHECK(evaluate(a, mk_card_eq(1, 4)));
  CHECK_FALSE(evaluate(a, mk_card_geq(0, 2)));
  CHECK(to_string(mk_card_geq(1, 2)) == "(exists ((x1 S2) (x2 S2)) (not (= x1 x2)))");
}

TEST_CASE("fixed-point counting formulas") {
  // a1 fixed, a2 -> a1
  FiniteStructure a2{sig_s(), {2}, {0, 0}};
  CHECK(evaluate(a2, mk_fix_count(FixKind::Exactly, FixFlavor::Fixed, 1)));
  CHECK(evaluate(a2, mk_fix_count(FixKind::Exactly, FixFlavor::Moved, 1)));
  CHECK_FALSE(evaluate(a2, mk_fix_count(FixKind::AtLeast, FixFlavor::Fixed, 2)));
  CHECK(mk_fix_count(FixKind::AtLeast, FixFlavor::Moved, 0)->kind != Kind::False);
  CHECK(evaluate(a2, mk_fix_count(FixKind::AtLeast, FixFlavor::Moved, 0)));
  CHECK(evaluate(identity_structure(sig_s(), {2}), mk_fix_count(FixKind::Exactly, FixFlavor::Fixed, 2)));
}

TEST_CASE("psi-vee") {
  CHECK(evaluate(identity_structure(sig_s(), {3}), mk_psi_vee()));
  CHECK(evaluate(FiniteStructure{sig_s(), {2}, {1, 0}}, mk_psi_vee()));
  CHECK_FALSE(evaluate(FiniteStructure{sig_s(), {3}, {1, 2, 0}}, mk_psi_vee()));
  // a -> b -> b
  CHECK(evaluate(FiniteStructure{sig_s(), {2}, {1, 1}}, mk_psi_vee()));
}

TEST_CASE("dnf") {
  auto a = eq(x, y), b = eq(y, z), c = eq(x, z);
  CHECK(dnf_str(a) == "(= x y);");
  CHECK(dnf_str(conj(disj(a, b), c)) == "(and (= x y) (= x z));(and (= x z) (= y z));");
  CHECK(dnf_str(neg(conj(a, b))) == "(not (= x y));(not (= y z));");
  CHECK(dnf_cubes(conj(a, neg(a))).empty());
  CHECK(dnf_str(top()) == "true;");
  CHECK_THROWS_AS(dnf_cubes(mk_card_geq(0, 2)), std::invalid_argument);
}

TEST_CASE("erase_s") {
  CHECK(same(erase_s(eq(s(x), y)), eq(x, y)));
  CHECK(same(erase_s(eq(s(x, 3), s(x))), eq(x, x)));
  CHECK(same(erase_s(eq(x, y)), eq(x, y)));
}

TEST_CASE("dagger") {
  auto d = dagger(eq(s(x), x));
  REQUIRE(d.z.size() == 1);
  CHECK(d.M[0] == 1);
  CHECK(d.grid[0].size() == 4);  // rows j = 0..3
  CHECK(to_string(d.phi) == "(= @y1_0 @y1_1)");

  auto d2 = dagger(eq(x, y));
  CHECK(to_string(d2.phi) == "(= @y1_0 @y2_0)");

  auto d3 = dagger(eq(s(x, 2), s(y)));
  CHECK(to_string(d3.phi) == "(= @y1_2 @y2_1)");

  // Grid names avoid the formula's own variables.
  auto d4 = dagger(eq(v("@y1"), x));
  CHECK(d4.grid[0][0].name.rfind("@yy", 0) == 0);

  CHECK_THROWS_AS(dagger(top()), std::invalid_argument);
}

TEST_CASE("vars_of") {
  CHECK(vars_of(eq(x, y)) == VarSet{x.var, y.var});
  CHECK(vars_of(exists({x.var}, eq(x, y))) == VarSet{y.var});
  auto u = v("u", 1);
  auto delta = conj(eq(x, y), neq(u, v("w", 1)));
  CHECK(vars_of(delta, 0) == VarSet{x.var, y.var});
  CHECK(vars_of(delta, 1).size() == 2);
}

TEST_CASE("parser") {
  auto p = parse_input("(declare-sort S)\n(declare-fun s (S) S)\n(declare-const x S)\n(assert (= (s (s x)) x))");
  CHECK(p.sig.has_s);
  CHECK(to_string(p.formula) == "(= x (s (s x)))");

  auto d = parse_formula("(distinct x y z)");
  CHECK(to_string(d) == "(and (not (= x y)) (not (= x z)) (not (= y z)))");

  SUBCASE("errors carry line and column") {
    try {
      parse_input("(assert (and (= x y)\n   (= x)))");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
      CHECK(e.column == 4);
    }
    CHECK_THROWS_AS(parse_formula("(distinct x)"), ParseError);
    CHECK_THROWS_AS(parse_formula("(frobnicate x y)"), ParseError);
  }

  SUBCASE("script round trip") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
      auto f = random_qf(rng, 1 + static_cast<int>(rng() % 6));
      auto back = parse_input(to_script(f, sig_s())).formula;
      CHECK(same(back, f));
    }
  }
}

TEST_CASE("nnf and dnf preserve truth on random structures") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    auto f = random_qf(rng, 1 + static_cast<int>(rng() % 6));
    int n = 1 + static_cast<int>(rng() % 3);
    FiniteStructure a{sig_s(), {n}, std::vector<int>(n)};
    for (auto& t : a.s) t = static_cast<int>(rng() % n);
    Assignment env{{x.var, static_cast<int>(rng() % n)}, {y.var, static_cast<int>(rng() % n)}, {z.var, static_cast<int>(rng() % n)}};
    Interpretation m{a, env};
    bool want = evaluate(m, f);
    CHECK(evaluate(m, nnf(f)) == want);
    CHECK(evaluate(m, to_dnf(f)) == want);
  }
}
