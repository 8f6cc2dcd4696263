#include <doctest.h>

#include <string>
#include <vector>

#include "predkit/errors.hpp"
#include "predkit/model.hpp"
#include "support/testutil.hpp"

using namespace predkit;
using namespace testutil;

namespace {

Formula eq_diff(const VarId& a, const VarId& b) {
  return cmp({{a, 1}, {b, -1}}, Cmp::Eq, 0);
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("ticket template structure") {
  ModelTemplate tpl = parse_model_file(fixture_path("ticket.pm"));
  CHECK(tpl.name == "ticket");
  CHECK(tpl.default_count == 2);
  REQUIRE(tpl.shared.size() == 3);
  CHECK(tpl.shared[0].id.name == "s");
  CHECK(tpl.shared[2].id.name == "z");
  CHECK(tpl.shared[2].id.kind == Kind::Integer);
  CHECK(tpl.shared_transitions.empty());
  CHECK(equivalent(tpl.shared_init,
                   eq_diff(iv("s"), iv("t")) && cmp({{iv("z"), 1}}, Cmp::Eq, 0)));
  CHECK(equivalent(tpl.shared_restriction, cmp({{iv("z"), 1}}, Cmp::Ge, 0)));

  REQUIRE(tpl.process.has_value());
  CHECK(tpl.process->name == "P");
  REQUIRE(tpl.process->locals.size() == 2);
  CHECK(tpl.process->locals[0].id.name == "a");
  CHECK(tpl.process->locals[1].id.kind == Kind::Enumerated);
  CHECK(tpl.process->locals[1].enum_labels ==
        std::vector<std::string>{"think", "try", "cr"});
  REQUIRE(tpl.process->transitions.size() == 3);
  CHECK(tpl.process->transitions[0].label == "try");
  CHECK(tpl.process->transitions[1].label == "cr");
  CHECK(tpl.process->transitions[2].label == "think");
  for (const auto& t : tpl.process->transitions) CHECK(t.framed);
}

TEST_CASE("instantiation replicates locals and transitions") {
  ModelTemplate tpl = parse_model_file(fixture_path("ticket.pm"));
  TransitionSystem ts = instantiate(tpl, 2);
  CHECK(ts.name == "ticket_2");

  REQUIRE(ts.vars.size() == 7);
  std::vector<std::string> names;
  for (const VarDecl& d : ts.vars) names.push_back(d.id.name);
  CHECK(names == std::vector<std::string>{"s", "t", "z", "a1", "pc1", "a2",
                                          "pc2"});
  CHECK(ts.find_var("pc1")->enum_labels.size() == 3);
  CHECK(ts.find_var("a0") == nullptr);

  std::vector<std::string> labels;
  for (const Transition& t : ts.transitions) labels.push_back(t.label);
  CHECK(labels == std::vector<std::string>{"try1", "cr1", "think1", "try2",
                                           "cr2", "think2"});

  const VarId pc1{"pc1", Kind::Enumerated, Temporality::Current};
  const VarId pc2{"pc2", Kind::Enumerated, Temporality::Current};
  Formula expect_init = eq_diff(iv("s"), iv("t")) &&
                        cmp({{iv("z"), 1}}, Cmp::Eq, 0) &&
                        Formula::compare(term({{pc1, 1}}), Cmp::Eq, 0) &&
                        Formula::compare(term({{pc2, 1}}), Cmp::Eq, 0);
  CHECK(equivalent(ts.init, expect_init));

  auto range = [](const VarId& v) {
    return Formula::compare(term({{v, 1}}), Cmp::Ge, 0) &&
           Formula::compare(term({{v, 1}}), Cmp::Le, 2);
  };
  Formula expect_restriction =
      cmp({{iv("z"), 1}}, Cmp::Ge, 0) && range(pc1) && range(pc2);
  CHECK(equivalent(ts.restriction, expect_restriction));
}

TEST_CASE("guarded transitions get frames for untouched variables") {
  ModelTemplate tpl = parse_model_file(fixture_path("ticket.pm"));
  TransitionSystem ts = instantiate(tpl, 2);
  const Transition* t = ts.find_transition("try1");
  REQUIRE(t != nullptr);
  const VarId pc1{"pc1", Kind::Enumerated, Temporality::Current};
  const VarId pc2{"pc2", Kind::Enumerated, Temporality::Current};

  // Guard and updates.
  CHECK(entails(t->relation, Formula::compare(term({{pc1, 1}}), Cmp::Eq, 0)));
  CHECK(entails(t->relation,
                Formula::compare(term({{pc1.primed(), 1}}), Cmp::Eq, 1)));
  CHECK(entails(t->relation, eq_diff(iv("a1").primed(), iv("t"))));
  CHECK(entails(t->relation,
                cmp({{iv("t").primed(), 1}, {iv("t"), -1}}, Cmp::Eq, 1)));

  // Frames for every variable the updates leave alone.
  CHECK(entails(t->relation, eq_diff(iv("s").primed(), iv("s"))));
  CHECK(entails(t->relation, eq_diff(iv("z").primed(), iv("z"))));
  CHECK(entails(t->relation, eq_diff(iv("a2").primed(), iv("a2"))));
  CHECK(entails(t->relation, eq_diff(pc2.primed(), pc2)));
  CHECK(t->relation.mentions(iv("a2").primed()));

  // The frame does not force the assigned variables.
  CHECK(!entails(t->relation, eq_diff(iv("t").primed(), iv("t"))));
}

TEST_CASE("larger instances extend smaller ones") {
  ModelTemplate tpl = parse_model_file(fixture_path("ticket.pm"));
  TransitionSystem two = instantiate(tpl, 2);
  TransitionSystem three = instantiate(tpl, 3);
  CHECK(three.name == "ticket_3");
  REQUIRE(three.transitions.size() == 9);
  REQUIRE(three.vars.size() == 9);
  for (std::size_t i = 0; i < two.vars.size(); ++i) {
    CHECK(three.vars[i].id == two.vars[i].id);
  }
  for (std::size_t i = 0; i < two.transitions.size(); ++i) {
    CAPTURE(i);
    CHECK(three.transitions[i].label == two.transitions[i].label);
    // Same moves plus frames for the third process's variables.
    CHECK(entails(three.transitions[i].relation, two.transitions[i].relation));
  }
  CHECK(entails(three.init, two.init));
}

TEST_CASE("name collisions are rejected") {
  CHECK_THROWS_AS(
      parse_model("model m; shared x : int; shared x : int;"
                  " trans u: true -> x = x;"),
      ParseError);
  CHECK_THROWS_AS(
      parse_model("model m; shared x : int;"
                  " trans u: true -> x = x; trans u: true -> x = x;"),
      ParseError);

  // A replicated local may not land on an existing shared name.
  ModelTemplate clash = parse_model(
      "model m; shared a1 : int;"
      " process P { local a : int; trans u: true -> a = a; }");
  CHECK_THROWS_AS(instantiate(clash, 1), CollisionError);

  // A shared label may not equal a replicated transition label.
  ModelTemplate label_clash = parse_model(
      "model m; shared x : int; trans u3: true -> x = x;"
      " process P { local a : int; trans u: true -> a = a; }");
  CHECK_THROWS_AS(instantiate(label_clash, 3), CollisionError);
  CHECK(instantiate(label_clash, 2).transitions.size() == 3);

  CHECK_THROWS_AS(parse_model("model m; shared x : int;"), ParseError);
  CHECK_THROWS_AS(instantiate(parse_model_file(fixture_path("ticket.pm")), 0),
                  Error);
}

TEST_CASE("candidate predicates come from guards, bounds, and goals") {
  ModelTemplate tpl = parse_model_file(fixture_path("ticket.pm"));
  TransitionSystem ts = instantiate(tpl, 2);
  CtlProperty prop = parse_property("AG(z <= 1)", ts.env());
  std::vector<LinCon> atoms = extract_candidate_predicates(ts, prop);
  std::vector<std::string> got;
  for (const LinCon& a : atoms) got.push_back(a.to_string());
  CHECK(got == std::vector<std::string>{"s - t = 0", "z = 0", "-z <= 0",
                                        "a1 - s <= 0", "a2 - s <= 0",
                                        "z <= 1"});
}

TEST_CASE("printing an instance reproduces it") {
  ModelTemplate tpl = parse_model_file(fixture_path("ticket.pm"));
  TransitionSystem ts = instantiate(tpl, 2);
  std::string text = to_model_text(ts);
  ModelTemplate back_tpl = parse_model(text);
  CHECK(back_tpl.name == "ticket_2");
  TransitionSystem back = instantiate(back_tpl, 1);
  CHECK(back.vars.size() == ts.vars.size());
  CHECK(equivalent(back.init, ts.init));
  CHECK(equivalent(back.restriction, ts.restriction));
  REQUIRE(back.transitions.size() == ts.transitions.size());
  for (std::size_t i = 0; i < ts.transitions.size(); ++i) {
    CAPTURE(ts.transitions[i].label);
    CHECK(back.transitions[i].label == ts.transitions[i].label);
    CHECK(back.transitions[i].relation == ts.transitions[i].relation);
  }
}

TEST_CASE("pretty printing shows enumerated values by label") {
  ModelTemplate tpl = parse_model_file(fixture_path("ticket.pm"));
  TransitionSystem ts = instantiate(tpl, 2);
  CHECK(pretty_formula(ts.init, ts) ==
        "pc1 = think && pc2 = think && s - t = 0 && z = 0");

  const VarId pc1{"pc1", Kind::Enumerated, Temporality::Current};
  VarEnv env = ts.env();
  CHECK(pretty_formula(parse_state_formula("pc1 <= try", env), ts) ==
        "pc1 <= try");
  CHECK(pretty_formula(parse_state_formula("pc1 >= think", env), ts) ==
        "pc1 >= think");
  // Values outside the label range fall back to numbers.
  CHECK(pretty_formula(Formula::compare(term({{pc1, 1}}), Cmp::Eq, 5), ts) ==
        "pc1 = 5");
  CHECK(pretty_formula(Formula::top(), ts) == "true");
  CHECK(pretty_formula(Formula::bottom(), ts) == "false");
}

TEST_CASE("driver skeleton model parses and instantiates") {
  ModelTemplate tpl = parse_model_file(fixture_path("chardrv_like.pm"));
  CHECK(tpl.name == "chardrv");
  TransitionSystem ts = instantiate(tpl, 2);
  CHECK(ts.vars.size() == 5);
  CHECK(ts.transitions.size() == 6);
  const Transition* acq = ts.find_transition("acquire1");
  REQUIRE(acq != nullptr);
  CHECK(entails(acq->relation, cmp({{iv("lock"), 1}}, Cmp::Eq, 0)));
  CHECK(entails(acq->relation, cmp({{iv("lock").primed(), 1}}, Cmp::Eq, 1)));
  CHECK(entails(acq->relation, eq_diff(iv("count").primed(), iv("count"))));
}

TEST_CASE("raw relation transitions stay verbatim") {
  ModelTemplate tpl = parse_model_file(fixture_path("twophase.pm"));
  TransitionSystem ts = instantiate(tpl, 1);
  CHECK(ts.name == "twophase_1");
  const Transition* t1 = ts.find_transition("t1");
  REQUIRE(t1 != nullptr);
  // No frames: nothing pins pc2' or r' beyond the written relation.
  const VarId pc2{"pc2", Kind::Enumerated, Temporality::Current};
  CHECK(!t1->relation.mentions(pc2.primed()));
  CHECK(entails(t1->relation,
                cmp({{iv("r").primed(), 1}, {iv("r"), -1}}, Cmp::Eq, 1)));
  // Enumerated ranges still land in the restriction.
  CHECK(entails(ts.restriction,
                Formula::compare(term({{pc2, 1}}), Cmp::Le, 1)));
}

}  // TEST_SUITE
