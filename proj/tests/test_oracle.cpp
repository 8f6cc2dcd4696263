#include <doctest.h>

#include <string>

#include "predkit/checker.hpp"
#include "predkit/errors.hpp"
#include "predkit/model.hpp"
#include "predkit/oracle.hpp"
#include "support/testutil.hpp"

using namespace predkit;
using namespace testutil;

namespace {

TransitionSystem from_text(const std::string& text) {
  return instantiate(parse_model(text), 1);
}

Verdict run(const TransitionSystem& ts, const std::string& prop,
            const Box& box) {
  VarEnv env = ts.env();
  return oracle_check(ts, parse_property(prop, env), box);
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("verdicts on a two-state toggle") {
  TransitionSystem ts = from_text(
      "model m; shared x : int; init x = 0; restrict x >= 0 && x <= 1;"
      " trans go: x = 0 -> x = 1; trans back: x = 1 -> x = 0;");
  Box box;
  box.int_bounds["x"] = {0, 1};

  CHECK(run(ts, "AG(x <= 1)", box).kind == VerdictKind::Holds);
  CHECK(run(ts, "AF(x = 1)", box).kind == VerdictKind::Holds);
  CHECK(run(ts, "AX(x = 1)", box).kind == VerdictKind::Holds);

  Verdict v = run(ts, "AG(x = 0)", box);
  CHECK(v.kind == VerdictKind::NotShown);
  CHECK(v.detail == "1 offending initial state(s)");
  CHECK(equivalent(v.witness, cmp({{iv("x"), 1}}, Cmp::Eq, 0)));
  CHECK(v.iterations == 0);
  CHECK(!v.widened);
}

TEST_CASE("paths that stall satisfy every eventuality") {
  // x climbs to 2 and deadlocks there; an infinite run never materializes.
  TransitionSystem ts = from_text(
      "model m; shared x : int; init x = 0; restrict x >= 0 && x <= 2;"
      " trans up: x <= 1 -> x = x + 1;");
  Box box;
  box.int_bounds["x"] = {0, 2};

  CHECK(run(ts, "AF(x = 5)", box).kind == VerdictKind::Holds);
  CHECK(run(ts, "AG(x <= 1)", box).kind == VerdictKind::NotShown);

  // The symbolic checker agrees on the convention.
  VarEnv env = ts.env();
  CHECK(check(ts, parse_property("AF(x = 5)", env)).kind ==
        VerdictKind::Holds);
}

TEST_CASE("an open system escapes; boxing closes it") {
  TransitionSystem drift =
      instantiate(parse_model_file(fixture_path("drift.pm")), 1);
  Box box;
  box.int_bounds["x"] = {0, 3};

  VarEnv env = drift.env();
  CtlProperty safe = parse_property("AG(x >= 0)", env);
  CHECK_THROWS_AS(oracle_check(drift, safe, box), ClosureViolationError);

  TransitionSystem closed = boxed(drift, box);
  CHECK(entails(closed.restriction, cmp({{iv("x"), 1}}, Cmp::Le, 3)));
  CHECK(oracle_check(closed, safe, box).kind == VerdictKind::Holds);
  CHECK(run(closed, "AG(x <= 2)", box).kind == VerdictKind::NotShown);

  // Boxing is a no-op for variables without bounds.
  Box empty_box;
  CHECK(boxed(drift, empty_box).restriction == drift.restriction);
}

TEST_CASE("guard rails: state caps, bad boxes, loose relations") {
  TransitionSystem drift =
      instantiate(parse_model_file(fixture_path("drift.pm")), 1);
  VarEnv env = drift.env();
  CtlProperty safe = parse_property("AG(x >= 0)", env);

  Box big;
  big.int_bounds["x"] = {0, 100};
  big.max_states = 50;
  CHECK_THROWS_AS(oracle_check(boxed(drift, big), safe, big),
                  StateExplosionError);
  try {
    oracle_check(boxed(drift, big), safe, big);
  } catch (const StateExplosionError& e) {
    CHECK(std::string(e.what()).find("cap") != std::string::npos);
  }

  Box inverted;
  inverted.int_bounds["x"] = {2, 1};
  CHECK_THROWS_AS(oracle_check(drift, safe, inverted), Error);

  Box missing;  // no bounds for x at all
  CHECK_THROWS_AS(oracle_check(drift, safe, missing), Error);

  // Relations that leave a next-state variable unconstrained cannot be
  // enumerated.
  TransitionSystem two =
      instantiate(parse_model_file(fixture_path("twophase.pm")), 1);
  Box rbox;
  rbox.int_bounds["r"] = {0, 2};
  VarEnv tenv = two.env();
  CHECK_THROWS_AS(oracle_check(two, parse_property("AG(r <= 1)", tenv), rbox),
                  Error);
}

TEST_CASE("lock skeleton keeps at most one handle open") {
  ModelTemplate tpl = parse_model_file(fixture_path("chardrv_like.pm"));
  TransitionSystem ts = instantiate(tpl, 2);
  Box box;
  box.int_bounds["count"] = {0, 2};
  box.int_bounds["lock"] = {0, 1};
  TransitionSystem closed = boxed(ts, box);

  CHECK(run(closed, "AG(count <= 1)", box).kind == VerdictKind::Holds);
  CHECK(run(closed, "AF(mode = open)", box).kind == VerdictKind::Holds);

  Verdict v = run(closed, "AG(mode = closed)", box);
  CHECK(v.kind == VerdictKind::NotShown);
  CHECK(v.detail == "1 offending initial state(s)");
  CHECK(pretty_formula(v.witness, closed) ==
        "count = 0 && lock = 0 && mode = closed && pc1 = idle && pc2 = idle");
}

TEST_CASE("ticket algorithm is exclusive inside a box") {
  ModelTemplate tpl = parse_model_file(fixture_path("ticket.pm"));
  TransitionSystem ts = instantiate(tpl, 2);
  Box box;
  for (const char* v : {"s", "t", "a1", "a2"}) box.int_bounds[v] = {0, 3};
  box.int_bounds["z"] = {0, 3};
  TransitionSystem closed = boxed(ts, box);

  CHECK(run(closed, "AG(z <= 1)", box).kind == VerdictKind::Holds);

  Verdict busy = run(closed, "AG(z = 0)", box);
  CHECK(busy.kind == VerdictKind::NotShown);
  // Tickets start anywhere in the box; every start except s = t = 3 can
  // still draw a ticket (t + 1 stays inside) and enter once.
  CHECK(busy.detail == "48 offending initial state(s)");
  CHECK(busy.witness.cubes().size() == 5);
  CHECK(entails(busy.witness, closed.init && closed.restriction));
}

}  // TEST_SUITE
