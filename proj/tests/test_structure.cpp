#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polite/foracle.hpp"
#include "polite/search.hpp"
#include "polite/structure.hpp"

using namespace polite;

namespace {

Term x = v("x"), y = v("y"), z = v("z");

Formula random_qf(std::mt19937_64& rng, int size, int nvars) {
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  if (size <= 1) {
    auto t = [&] { return s(v(std::string(1, static_cast<char>('a' + pick(nvars)))), pick(3)); };
    auto a = eq(t(), t());
    return pick(2) ? a : neg(a);
  }
  int l = 1 + pick(size - 1);
  auto a = random_qf(rng, l, nvars), b = random_qf(rng, size - l, nvars);
  return pick(3) ? conj(a, b) : disj(a, b);
}

// Exhaustive check over every s table and assignment up to the given size.
bool brute_sat(const Formula& f, int max_size) {
  for (int n = 1; n <= max_size; ++n) {
    SearchSpec sp;
    sp.sig = sig_s();
    sp.sizes = {n};
    sp.policy = SPolicy::Free;
    if (search_model(f, sp).sat()) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("evaluate") {
  CHECK_FALSE(evaluate(FiniteStructure{sig_one(), {1}, {}}, mk_card_geq(0, 2)));
  CHECK(evaluate(identity_structure(sig_s(), {2}), mk_psi_vee()));
  // A_2 for the fig oracle: f1(2)=1, f0(2)=1
  auto f = make_fof("fig");
  auto [f1, f0] = f->counts(2);
  CHECK(f1 == 1);
  FiniteStructure a2{sig_s(), {2}, {0, 0}};
  CHECK(evaluate(a2, conj(mk_fix_count(FixKind::Exactly, FixFlavor::Fixed, static_cast<int>(f1)),
                          mk_fix_count(FixKind::Exactly, FixFlavor::Moved, static_cast<int>(f0)))));
  CHECK_THROWS_AS(evaluate(Interpretation{a2, {}}, eq(x, y)), EvalError);
}

TEST_CASE("structure enumeration") {
  auto count = [](Signature g, std::vector<int> sizes) {
    int c = 0;
    auto st = enumerate_structures(g, sizes);
    while (st.next()) ++c;
    return c;
  };
  CHECK(count(sig_one(), {3}) == 1);
  CHECK(count(sig_s(), {2}) == 4);
  CHECK(count(sig_s(), {1}) == 1);
  CHECK(count(sig_two_s(), {3, 2}) == 27);
  for (int n = 1; n <= 4; ++n) CHECK(static_cast<std::uint64_t>(count(sig_s(), {n})) == structure_count(sig_s(), {n}));
}

TEST_CASE("free satisfiability") {
  CHECK(free_qf_sat(conj(eq(s(x), x), neq(s(x, 2), x))).verdict == Verdict::Unsat);
  auto r = free_qf_sat(neq(s(x), x));
  REQUIRE(r.sat());
  CHECK(evaluate(*r.model, neq(s(x), x)));
  CHECK(free_qf_sat(conj(eq(x, y), neq(s(x), s(y)))).verdict == Verdict::Unsat);
  CHECK(free_qf_sat(conj({eq(s(x, 2), x), eq(s(x, 3), x), neq(s(x), x)})).verdict == Verdict::Unsat);
  CHECK(free_qf_sat(disj(neq(x, x), eq(s(y), z))).sat());
}

TEST_CASE("free satisfiability models satisfy the formula") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    auto f = random_qf(rng, 1 + static_cast<int>(rng() % 5), 3);
    auto r = free_qf_sat(f);
    if (r.sat()) {
      REQUIRE(r.model);
      CHECK(evaluate(*r.model, f));
    }
  }
}

TEST_CASE("free satisfiability agrees with brute force") {
  // A satisfiable formula with t subterms has a model with at most t elements.
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto f = random_qf(rng, 1 + static_cast<int>(rng() % 4), 2);
    int terms = 0;
    for (auto& [var, d] : max_depths(f)) terms += d + 1;
    if (terms > 5) continue;
    ++checked;
    CHECK_MESSAGE(free_qf_sat(f).sat() == brute_sat(f, terms), to_string(f));
  }
  CHECK(checked > 50);
}

TEST_CASE("min_classes") {
  auto lit = [](Term a, Term b, bool pos) { return Literal{std::min(a, b), std::max(a, b), pos}; };
  CHECK(min_classes({lit(x, y, false)}, 0) == 2);
  CHECK(min_classes({lit(x, y, true), lit(y, z, true)}, 0) == 1);
  CHECK(min_classes({lit(x, y, false), lit(y, z, false), lit(x, z, false)}, 0) == 3);
  CHECK_THROWS_AS(min_classes({lit(x, y, true), lit(x, y, false)}, 0), std::invalid_argument);
}

TEST_CASE("model search policies") {
  SearchSpec sp;
  sp.sig = sig_s();
  sp.sizes = {3};

  SUBCASE("identity") {
    sp.policy = SPolicy::Identity;
    CHECK(search_model(neq(s(x), x), sp).verdict == Verdict::Unsat);
    CHECK(search_model(conj(neq(x, y), eq(s(x), x)), sp).sat());
  }
  SUBCASE("moved") {
    sp.policy = SPolicy::Moved;
    CHECK(search_model(eq(s(x), x), sp).verdict == Verdict::Unsat);
  }
  SUBCASE("fixed count") {
    sp.policy = SPolicy::Count;
    sp.fixed_count = 1;
    CHECK(search_model(conj(eq(s(x), x), eq(s(y), y)), sp).sat());  // x = y
    CHECK(search_model(conj({eq(s(x), x), eq(s(y), y), neq(x, y)}), sp).verdict == Verdict::Unsat);
  }
  SUBCASE("psi-vee") {
    sp.policy = SPolicy::PsiVee;
    CHECK(search_model(conj({eq(y, s(x)), eq(z, s(y)), neq(x, y), neq(y, z), neq(x, z)}), sp).verdict == Verdict::Unsat);
  }
  SUBCASE("covering") {
    sp.policy = SPolicy::Free;
    sp.covering = true;
    CHECK(search_model(eq(x, y), sp).verdict == Verdict::Unsat);
    sp.sizes = {2};
    auto r = search_model(neq(x, y), sp);
    REQUIRE(r.sat());
    CHECK(r.model->assignment.at(x.var) != r.model->assignment.at(y.var));
  }
  SUBCASE("fixed table and preassigned values") {
    sp.policy = SPolicy::Free;
    sp.table = std::vector<int>{1, 2, 0};
    sp.preassigned = {{x.var, 0}};
    auto r = search_model(eq(s(x), y), sp);
    REQUIRE(r.sat());
    CHECK(r.model->assignment.at(y.var) == 1);
    CHECK(search_model(eq(s(x), x), sp).verdict == Verdict::Unsat);
  }
}
