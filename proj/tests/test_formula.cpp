#include <doctest.h>

#include "predkit/errors.hpp"
#include "predkit/formula.hpp"
#include "support/testutil.hpp"

using namespace predkit;
using namespace testutil;

namespace {

const VarId x = iv("x");
const VarId y = iv("y");
const VarId p = bvar("p");
const VarId q = bvar("q");

// Shared sweep ranges. Grid checks compare pointwise; witness searches rely
// on small-coefficient formulas (|coeff| <= 3, |bound| <= 6, sweep origin
// |x| <= 8) having witnesses well inside +/-60.
constexpr long kGrid = 4;
constexpr long kWitness = 60;

}  // namespace

TEST_SUITE("formula") {

TEST_CASE("linear term arithmetic") {
  LinearTerm t = term({{x, 4}, {y, -6}});
  CHECK(t.gcd() == 2);
  CHECK(t.coeff(x) == 4);
  CHECK(t.coeff(y) == -6);
  CHECK(t.to_string() == "4*x - 6*y");
  CHECK(t.negated().to_string() == "-4*x + 6*y");
  CHECK(t.scaled(3).coeff(x) == 12);
  CHECK(t.plus(term({{x, -4}, {y, 1}})).to_string() == "-5*y");
  CHECK(t.leading_positive());
  CHECK_FALSE(t.negated().leading_positive());

  // Coefficients cancel away entirely.
  CHECK(term({{x, 2}, {x, -2}}).empty());
  CHECK(term({}).gcd() == 0);

  LinearTerm bad;
  CHECK_THROWS_AS(bad.add(p, 1), Error);
}

TEST_CASE("comparison normalization") {
  CHECK(cmp({{x, 2}, {y, 2}}, Cmp::Le, 3).to_string() == "x + y <= 1");
  CHECK(cmp({{x, 2}}, Cmp::Eq, 3).is_false());
  CHECK(cmp({{x, -1}}, Cmp::Eq, 5).to_string() == "x = -5");
  CHECK(cmp({{x, 1}}, Cmp::Lt, 3).to_string() == "x <= 2");
  CHECK(cmp({{x, 1}}, Cmp::Gt, 3).to_string() == "-x <= -4");
  CHECK(cmp({{x, -2}}, Cmp::Le, -5).to_string() == "-x <= -3");
  CHECK(cmp({{x, 3}}, Cmp::Ge, -7).to_string() == "-x <= 2");

  // Ground comparisons evaluate away.
  CHECK(cmp({}, Cmp::Le, 0).is_true());
  CHECK(cmp({}, Cmp::Le, -1).is_false());
  CHECK(cmp({{x, 1}, {x, -1}}, Cmp::Eq, 0).is_true());

  // Disequality splits into the two strict sides.
  Formula ne = cmp({{x, 1}}, Cmp::Ne, 2);
  REQUIRE(ne.cubes().size() == 2);
  CHECK(ne.evaluate({{x, BigInt(1)}}));
  CHECK_FALSE(ne.evaluate({{x, BigInt(2)}}));
  CHECK(ne.evaluate({{x, BigInt(3)}}));
}

TEST_CASE("cube contradiction pruning and range merging") {
  CHECK((cmp({{x, 1}}, Cmp::Le, 1) && cmp({{x, 1}}, Cmp::Ge, 2)).is_false());
  CHECK((Formula::bool_lit(p) && Formula::bool_lit(p, false)).is_false());
  CHECK((cmp({{x, 1}}, Cmp::Eq, 1) && cmp({{x, 1}}, Cmp::Eq, 2)).is_false());

  CHECK((cmp({{x, 1}}, Cmp::Le, 5) && cmp({{x, 1}}, Cmp::Le, 3)).to_string() ==
        "x <= 3");
  // A closed pair of bounds collapses into an equality.
  CHECK((cmp({{x, 1}}, Cmp::Le, 3) && cmp({{x, 1}}, Cmp::Ge, 3)).to_string() ==
        "x = 3");
}

TEST_CASE("disjunction drops subsumed cubes") {
  Formula wide = cmp({{x, 1}}, Cmp::Le, 3);
  Formula narrow = cmp({{x, 1}}, Cmp::Le, 1);
  Formula both = wide || narrow;
  REQUIRE(both.cubes().size() == 1);
  CHECK(both.to_string() == "x <= 3");
  CHECK((wide || wide) == wide);
  CHECK((wide || Formula::top()).is_true());
  CHECK((wide || Formula::bottom()) == wide);
}

TEST_CASE("subsumption between cubes") {
  auto cube_of = [](const Formula& f) { return f.cubes().at(0); };
  CHECK(cube_of(cmp({{x, 1}}, Cmp::Le, 3))
            .subsumes(cube_of(cmp({{x, 1}}, Cmp::Le, 1))));
  CHECK_FALSE(cube_of(cmp({{x, 1}}, Cmp::Le, 1))
                  .subsumes(cube_of(cmp({{x, 1}}, Cmp::Le, 3))));
  CHECK(cube_of(Formula::bool_lit(p))
            .subsumes(cube_of(Formula::bool_lit(p) && cmp({{x, 1}}, Cmp::Eq, 0))));
  CHECK(Cube{}.subsumes(cube_of(Formula::bool_lit(p))));
}

TEST_CASE("evaluate matches the raw reading") {
  Gen g(20260823);
  const std::vector<VarId> ints = {x, y};
  const std::vector<VarId> bools = {p};
  const std::vector<VarId> all = {x, y, p};
  for (int iter = 0; iter < 300; ++iter) {
    CAPTURE(iter);
    RawFormula raw = gen_raw(g, ints, bools);
    Formula f = to_formula(raw);
    bool ok = for_each_assignment(all, -kGrid, kGrid, [&](const Assignment& a) {
      return f.evaluate(a) == eval_raw(raw, a);
    });
    CHECK(ok);
  }
}

TEST_CASE("negate is the exact complement") {
  CHECK(negate(cmp({{x, 1}}, Cmp::Le, 3)).to_string() == "-x <= -4");
  CHECK(negate(Formula::top()).is_false());
  CHECK(negate(Formula::bottom()).is_true());

  Gen g(7);
  const std::vector<VarId> all = {x, y, p};
  for (int iter = 0; iter < 120; ++iter) {
    CAPTURE(iter);
    RawFormula raw = gen_raw(g, {x, y}, {p});
    Formula nf = negate(to_formula(raw));
    bool ok = for_each_assignment(all, -kGrid, kGrid, [&](const Assignment& a) {
      return nf.evaluate(a) == !eval_raw(raw, a);
    });
    CHECK(ok);
  }
}

TEST_CASE("connectives are pointwise") {
  Gen g(11);
  const std::vector<VarId> all = {x, y, p};
  for (int iter = 0; iter < 100; ++iter) {
    CAPTURE(iter);
    RawFormula ra = gen_raw(g, {x, y}, {p});
    RawFormula rb = gen_raw(g, {x, y}, {p});
    Formula fa = to_formula(ra);
    Formula fb = to_formula(rb);
    Formula fand = fa && fb;
    Formula forr = fa || fb;
    bool ok = for_each_assignment(all, -kGrid, kGrid, [&](const Assignment& a) {
      bool va = eval_raw(ra, a);
      bool vb = eval_raw(rb, a);
      return fand.evaluate(a) == (va && vb) && forr.evaluate(a) == (va || vb);
    });
    CHECK(ok);
  }
}

TEST_CASE("boolean assignment and substitution") {
  Gen g(13);
  const std::vector<VarId> rest = {x, q};
  for (int iter = 0; iter < 100; ++iter) {
    CAPTURE(iter);
    RawFormula raw = gen_raw(g, {x}, {p, q});
    Formula f = to_formula(raw);
    bool value = g.coin();
    Formula fixed = assign_bool(f, p, value);
    CHECK_FALSE(fixed.mentions(p));

    Formula inner = cmp({{x, 1}}, Cmp::Le, g.pick(-3, 3));
    Formula subst = substitute_bools(f, {{p, inner}});
    CHECK_FALSE(subst.mentions(p));

    bool ok = for_each_assignment(rest, -kGrid, kGrid, [&](const Assignment& a) {
      Assignment full = a;
      full[p] = BigInt(value ? 1 : 0);
      if (fixed.evaluate(a) != eval_raw(raw, full)) return false;
      full[p] = BigInt(inner.evaluate(a) ? 1 : 0);
      return subst.evaluate(a) == eval_raw(raw, full);
    });
    CHECK(ok);
  }
}

TEST_CASE("renaming and state shifting") {
  Formula f = cmp({{x, 1}}, Cmp::Le, 3);
  CHECK(rename(f, {{x, y}}).to_string() == "y <= 3");

  // Swaps are injective on the occurring variables.
  Formula diff = cmp({{x, 1}, {y, -2}}, Cmp::Le, 0);
  Formula swapped = rename(diff, {{x, y}, {y, x}});
  CHECK(swapped.to_string() == "-2*x + y <= 0");

  // A target capturing an occurring unmapped variable is rejected, as is a
  // non-injective mapping.
  CHECK_THROWS_AS(rename(diff, {{x, y}}), CollisionError);
  CHECK_THROWS_AS(
      rename(diff, {{x, iv("z")}, {y, iv("z")}}), CollisionError);

  Formula state = cmp({{x, 1}}, Cmp::Le, 3) && Formula::bool_lit(p);
  Formula next = to_next_state(state);
  for (const VarId& v : next.free_vars()) CHECK(v.is_next());
  CHECK(to_current_state(next) == state);
}

TEST_CASE("satisfiable agrees with grid search") {
  Gen g(17);
  const std::vector<VarId> all = {x, y, p};
  for (int iter = 0; iter < 250; ++iter) {
    CAPTURE(iter);
    RawFormula raw = gen_raw(g, {x, y}, {p});
    bool witness = !for_each_assignment(
        all, -kWitness, kWitness,
        [&](const Assignment& a) { return !eval_raw(raw, a); });
    CHECK(satisfiable(to_formula(raw)) == witness);
  }
}

TEST_CASE("entails agrees with grid search") {
  Gen g(19);
  const std::vector<VarId> all = {x, y, p};
  for (int iter = 0; iter < 150; ++iter) {
    CAPTURE(iter);
    RawFormula ra = gen_raw(g, {x, y}, {p});
    RawFormula rb = gen_raw(g, {x, y}, {p});
    bool counterexample = !for_each_assignment(
        all, -kWitness, kWitness,
        [&](const Assignment& a) { return !(eval_raw(ra, a) && !eval_raw(rb, a)); });
    CHECK(entails(to_formula(ra), to_formula(rb)) == !counterexample);
  }
}

TEST_CASE("integer elimination: unit-coefficient inequalities") {
  Gen g(23);
  RawLimits lim;
  lim.coeff = 1;
  lim.ineq_only = true;
  const std::vector<VarId> rest = {x, p};
  for (int iter = 0; iter < 150; ++iter) {
    CAPTURE(iter);
    RawFormula raw = gen_raw(g, {x, y}, {p}, lim);
    Formula elim = eliminate(to_formula(raw), {y});
    CHECK_FALSE(elim.mentions(y));
    CHECK_FALSE(elim.has_divs());
    bool ok = for_each_assignment(rest, -8, 8, [&](const Assignment& a) {
      bool exists = !for_each_assignment({y}, -kWitness, kWitness,
                                         [&](const Assignment& b) {
                                           Assignment full = a;
                                           full[y] = b.at(y);
                                           return !eval_raw(raw, full);
                                         });
      return elim.evaluate(a) == exists;
    });
    CHECK(ok);
  }
}

TEST_CASE("integer elimination: general coefficients under bounds") {
  Gen g(29);
  const std::vector<VarId> rest = {x, p};
  for (int iter = 0; iter < 120; ++iter) {
    CAPTURE(iter);
    RawFormula raw = gen_raw(g, {x, y}, {p});
    // Bounding the surviving integer keeps residual divisibility facts
    // expandable, so elimination stays exact and div-free.
    Formula bounded = to_formula(raw) && cmp({{x, 1}}, Cmp::Ge, -8) &&
                      cmp({{x, 1}}, Cmp::Le, 8);
    Formula elim = eliminate(bounded, {y});
    CHECK_FALSE(elim.mentions(y));
    CHECK_FALSE(elim.has_divs());
    bool ok = for_each_assignment(rest, -8, 8, [&](const Assignment& a) {
      bool exists = !for_each_assignment({y}, -kWitness, kWitness,
                                         [&](const Assignment& b) {
                                           Assignment full = a;
                                           full[y] = b.at(y);
                                           return !eval_raw(raw, full);
                                         });
      return elim.evaluate(a) == exists;
    });
    CHECK(ok);
  }
}

TEST_CASE("boolean elimination by expansion") {
  Gen g(31);
  const std::vector<VarId> rest = {x, y, q};
  for (int iter = 0; iter < 100; ++iter) {
    CAPTURE(iter);
    RawFormula raw = gen_raw(g, {x, y}, {p, q});
    Formula elim = eliminate(to_formula(raw), {p});
    CHECK_FALSE(elim.mentions(p));
    bool ok = for_each_assignment(rest, -kGrid, kGrid, [&](const Assignment& a) {
      Assignment full = a;
      full[p] = BigInt(0);
      bool v0 = eval_raw(raw, full);
      full[p] = BigInt(1);
      bool v1 = eval_raw(raw, full);
      return elim.evaluate(a) == (v0 || v1);
    });
    CHECK(ok);
  }
}

TEST_CASE("elimination frozen cases") {
  // exists y. x = 2y, with x bounded: the even values.
  Formula even = cmp({{x, 1}, {y, -2}}, Cmp::Eq, 0) &&
                 cmp({{x, 1}}, Cmp::Ge, 0) && cmp({{x, 1}}, Cmp::Le, 10);
  Formula elim = eliminate(even, {y});
  CHECK_FALSE(elim.has_divs());
  for (long v = 0; v <= 10; ++v) {
    CHECK(elim.evaluate({{x, BigInt(v)}}) == (v % 2 == 0));
  }

  // Without bounds the divisibility fact survives over an unbounded
  // variable and elimination refuses rather than approximate.
  CHECK_THROWS_AS(
      eliminate(cmp({{x, 1}, {y, -2}}, Cmp::Eq, 0), {y}),
      UnsupportedAtomError);

  // The counter step with both region booleans: only the booleans survive.
  VarId r = iv("r");
  VarId rn = r.primed();
  auto iff = [](const Formula& a, const Formula& b) {
    return (negate(a) || b) && (negate(b) || a);
  };
  Formula step = cmp({{r, 1}}, Cmp::Eq, 0) &&
                 cmp({{rn, 1}, {r, -1}}, Cmp::Eq, 1) &&
                 iff(Formula::bool_lit(p), cmp({{r, 1}}, Cmp::Le, 1)) &&
                 iff(Formula::bool_lit(q), cmp({{rn, 1}}, Cmp::Le, 1));
  Formula out = eliminate(step, {r, rn});
  CHECK(equivalent(out, Formula::bool_lit(p) && Formula::bool_lit(q)));

  // Eliminating nothing or an absent variable is the identity.
  Formula f = cmp({{x, 1}}, Cmp::Le, 3);
  CHECK(eliminate(f, {}) == f);
  CHECK(eliminate(f, {y}) == f);
}

TEST_CASE("arbitrary-precision coefficients") {
  BigInt huge("1000000000000000000000000");
  LinearTerm t;
  t.add(x, huge);
  CHECK(Formula::compare(t, Cmp::Le, huge).to_string() == "x <= 1");

  LinearTerm u;
  u.add(x, 1);
  Formula low = Formula::compare(u, Cmp::Ge, huge);
  Formula high = Formula::compare(u, Cmp::Le, huge - 1);
  CHECK_FALSE(satisfiable(low && high));
  CHECK(satisfiable(low));
}

}  // TEST_SUITE
