#include <doctest.h>

#include <string>
#include <vector>

#include "predkit/compatibility.hpp"
#include "predkit/errors.hpp"
#include "predkit/model.hpp"
#include "support/testutil.hpp"

using namespace predkit;
using namespace testutil;

namespace {

PairOutcome ok(int compatible) {
  PairOutcome o;
  o.compatible = compatible;
  o.verdict = compatible ? VerdictKind::Holds : VerdictKind::NotShown;
  return o;
}

PredicateSet make_ps(const std::vector<LinCon>& atoms) {
  return PredicateSet::create(atoms, {});
}

}  // namespace

TEST_SUITE("compatibility") {

TEST_CASE("pair verdicts on the ticket instance") {
  TransitionSystem ts = instantiate(parse_model_file(fixture_path("ticket.pm")), 2);
  CtlProperty prop = parse_property("AG(z <= 1)", ts.env());
  // Indices: 0 -> z = 0, 1 -> z >= 0, 2 -> z <= 1.
  PredicateSet ps = preds_from_text(ts, {"z = 0", "z >= 0", "z <= 1"});

  CompatibilityMatrix m = compute_compatibility(ts, prop, ps);
  REQUIRE(m.size == 3);
  REQUIRE(m.pairs.size() == 3);

  // z = 0 pins the occupancy exactly, so either companion keeps the bound.
  CHECK(m.compat(0, 1) == 1);
  CHECK(m.compat(0, 2) == 1);
  CHECK(m.outcome(0, 1).verdict == VerdictKind::Holds);
  // z >= 0 with z <= 1 cannot distinguish empty from full, so a second
  // entry into the critical section looks possible.
  CHECK(m.compat(1, 2) == 0);
  CHECK(m.outcome(1, 2).verdict == VerdictKind::NotShown);

  // The pair missing the property atom gets it added (it is candidate 2);
  // pairs already containing it add nothing.
  CHECK(m.outcome(0, 1).prop_preds == std::vector<std::size_t>{2});
  CHECK(m.outcome(0, 2).prop_preds.empty());
  CHECK(m.outcome(1, 2).prop_preds.empty());

  CHECK(m.cohesion({0, 1, 2}) == 2);
  CHECK_THROWS_AS(m.outcome(0, 7), Error);

  CompatSelection sel = choose_predicates_by_compatibility(ps, m, 2);
  CHECK(sel.best.preds == std::vector<std::size_t>{0, 1});
  CHECK(sel.best.score == 1);
  REQUIRE(sel.skipped.size() == 1);
  CHECK(sel.skipped[0].config == std::vector<std::size_t>{1, 2});
  CHECK(sel.skipped[0].incompatible_i == 1);
  CHECK(sel.skipped[0].incompatible_j == 2);
}

TEST_CASE("worker threads do not change the matrix") {
  TransitionSystem ts =
      instantiate(parse_model_file(fixture_path("twophase.pm")), 1);
  CtlProperty prop = parse_property("AG(r <= 1)", ts.env());
  PredicateSet ps = preds_from_text(ts, {"r = 0", "r = 1", "r <= 1"});

  CompatOptions serial;
  CompatOptions threaded;
  threaded.jobs = 4;
  CompatibilityMatrix a = compute_compatibility(ts, prop, ps, serial);
  CompatibilityMatrix b = compute_compatibility(ts, prop, ps, threaded);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (const auto& [key, outcome] : a.pairs) {
    const PairOutcome& other = b.outcome(key.first, key.second);
    CHECK(outcome.compatible == other.compatible);
    CHECK(outcome.verdict == other.verdict);
    CHECK(outcome.prop_preds == other.prop_preds);
  }
  // Each counter step is tracked exactly by every augmented pair here.
  CHECK(a.compat(0, 1) == 1);
  CHECK(a.compat(0, 2) == 1);
  CHECK(a.compat(1, 2) == 1);
}

TEST_CASE("selection maximizes cohesion and prunes isolated bad pairs") {
  PredicateSet ps = make_ps({lin_atom({{iv("x"), 1}}, Cmp::Le, 0),
                             lin_atom({{iv("y"), 1}}, Cmp::Le, 0),
                             lin_atom({{iv("x"), 1}, {iv("y"), 1}}, Cmp::Le, 0),
                             lin_atom({{iv("w"), 1}}, Cmp::Le, 0)});
  CompatibilityMatrix m;
  m.size = 4;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      m.pairs[{i, j}] = ok(1);
    }
  }
  m.pairs[{0, 1}] = ok(0);

  CompatSelection sel = choose_predicates_by_compatibility(ps, m, 3);
  // {0,1,3} is never visited: adding 1 next to 0 with only the unrelated w
  // predicate around would re-create the failing pair on its own.
  REQUIRE(sel.skipped.size() == 2);
  CHECK(sel.skipped[0].config == std::vector<std::size_t>{0, 1});
  CHECK(sel.skipped[1].config == std::vector<std::size_t>{0, 1, 3});
  CHECK(sel.skipped[1].incompatible_i == 0);
  CHECK(sel.skipped[1].incompatible_j == 1);

  // {0,1,2} is visited (the x+y predicate ties the bad pair to the rest),
  // but cohesion 2 loses to the clean triples at 3.
  REQUIRE(sel.per_level.size() == 3);
  CHECK(sel.per_level[2].preds == std::vector<std::size_t>{0, 2, 3});
  CHECK(sel.per_level[2].score == 3);
  CHECK(sel.best.preds == std::vector<std::size_t>{0, 2, 3});
  CHECK(sel.best.num_vars == 3);

  // Level 2 tie on score 1 goes to the pair covering three variables.
  CHECK(sel.per_level[1].preds == std::vector<std::size_t>{2, 3});
  CHECK(sel.per_level[1].num_vars == 3);
}

TEST_CASE("full ties keep the shorter configuration") {
  PredicateSet ps = make_ps({lin_atom({{iv("x"), 1}}, Cmp::Le, 0),
                             lin_atom({{iv("y"), 1}}, Cmp::Le, 0),
                             lin_atom({{iv("x"), 1}, {iv("y"), 1}}, Cmp::Le, 5)});
  CompatibilityMatrix m;
  m.size = 3;
  m.pairs[{0, 1}] = ok(1);
  m.pairs[{0, 2}] = ok(0);
  m.pairs[{1, 2}] = ok(0);

  CompatSelection sel = choose_predicates_by_compatibility(ps, m, 3);
  // {0,1,2} is reachable (each bad pair overlaps the remaining member) and
  // ties {0,1} on score 1 and coverage {x,y}; the pair wins on length.
  REQUIRE(sel.per_level.size() == 3);
  CHECK(sel.per_level[1].preds == std::vector<std::size_t>{0, 1});
  CHECK(sel.per_level[2].preds == std::vector<std::size_t>{0, 1, 2});
  CHECK(sel.per_level[2].score == 1);
  CHECK(sel.per_level[2].num_vars == 2);
  CHECK(sel.best.preds == std::vector<std::size_t>{0, 1});

  CHECK_THROWS_AS(choose_predicates_by_compatibility(ps, m, 0), Error);
  PredicateSet empty = make_ps({});
  CompatibilityMatrix none;
  CHECK_THROWS_AS(choose_predicates_by_compatibility(empty, none, 2),
                  NoFeasibleConfigError);
}

}  // TEST_SUITE
