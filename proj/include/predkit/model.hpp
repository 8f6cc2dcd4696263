/*******************************************************************************
 *
 * Transition systems and parametric model templates.
 *
 * A model declares shared variables and (optionally) one process template
 * with local variables and transitions; instantiating the template at n
 * replicates the locals and transitions with index suffixes 1..n.
 * Guarded transitions `guard -> updates` get a frame conjunct v' = v for
 * every variable whose next-state version the transition does not mention;
 * raw-relation transitions (`trans l rel: ...`) are taken verbatim.
 *
 ******************************************************************************/

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "predkit/ctl.hpp"
#include "predkit/formula.hpp"
#include "predkit/parse.hpp"

namespace predkit {

struct Transition {
  std::string label;
  Formula relation;  // over current and next state
};

struct TransitionSystem {
  std::string name;
  std::vector<VarDecl> vars;
  Formula init = Formula::top();
  Formula restriction = Formula::top();
  std::vector<Transition> transitions;

  const VarDecl* find_var(const std::string& name) const;
  const Transition* find_transition(const std::string& label) const;
  std::set<VarId> state_vars() const;  // current-state ids
  VarEnv env() const;
};

struct ModelTemplate {
  struct TemplateTransition {
    std::string label;
    Formula relation;
    bool framed = true;  // guarded form: add v'=v for untouched variables
  };
  struct Process {
    std::string name;
    std::vector<VarDecl> locals;
    Formula init = Formula::top();
    Formula restriction = Formula::top();
    std::vector<TemplateTransition> transitions;
  };

  std::string name;
  std::vector<VarDecl> shared;
  Formula shared_init = Formula::top();
  Formula shared_restriction = Formula::top();
  std::vector<TemplateTransition> shared_transitions;
  std::optional<Process> process;
  std::size_t default_count = 2;
};

// Parse model text; throws ParseError with line/column on syntax errors.
ModelTemplate parse_model(const std::string& text);
ModelTemplate parse_model_file(const std::string& path);

// Replicate the process template n times (locals and labels suffixed with
// the process index) and add frame conjuncts and enumerated-range
// constraints. The transitions of instantiate(n) are a prefix-preserving
// extension of instantiate(n-1)'s.
TransitionSystem instantiate(const ModelTemplate& tpl, std::size_t n);

// Distinct current-state linear constraints appearing in the initial
// condition, the restriction, each transition's current-state guard atoms,
// and the property leaves; first occurrence order, boolean atoms excluded.
std::vector<LinCon> extract_candidate_predicates(const TransitionSystem& ts,
                                                 const CtlProperty& prop);

// Render a transition system in model syntax (raw-relation transitions).
// parse + instantiate of the output reproduces the system.
std::string to_model_text(const TransitionSystem& ts);

// Render one state formula with enumerated values shown by label.
std::string pretty_formula(const Formula& f, const TransitionSystem& ts);

}  // namespace predkit
