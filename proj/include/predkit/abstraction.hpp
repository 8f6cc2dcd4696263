/*******************************************************************************
 *
 * Partial predicate abstraction. Each predicate is a linear constraint
 * over current-state variables paired with a fresh boolean; abstraction
 * eliminates exactly the variables inside predicate scopes and leaves all
 * other state concrete. The consistency constraint forces a predicate's
 * boolean to persist across transitions that do not touch its scope.
 *
 ******************************************************************************/

#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "predkit/ctl.hpp"
#include "predkit/formula.hpp"
#include "predkit/model.hpp"

namespace predkit {

struct Predicate {
  std::size_t index = 0;
  LinCon atom;
  VarId bool_var;           // fresh boolean tracking the atom
  std::set<VarId> scope;    // free variables of the atom (current-state)

  Formula formula() const;  // the atom as a one-cube formula
};

class PredicateSet {
public:
  // Assigns fresh boolean names (b1, b2, ... skipping reserved names) in
  // order. Throws on non-current-state or empty atoms.
  static PredicateSet create(const std::vector<LinCon>& atoms,
                             const std::set<std::string>& reserved_names);

  const std::vector<Predicate>& preds() const { return preds_; }
  std::size_t size() const { return preds_.size(); }
  const Predicate& at(std::size_t i) const { return preds_.at(i); }

  // Union of predicate scopes (current-state variables to eliminate).
  std::set<VarId> scope() const;
  std::set<VarId> scope_of(const std::vector<std::size_t>& indices) const;

  // The sub-abstraction over a subset of predicates (indices and boolean
  // names preserved).
  PredicateSet subset(const std::vector<std::size_t>& indices) const;

private:
  std::vector<Predicate> preds_;
};

// True if the two predicate sets share no scope variable.
bool scopes_disjoint(const PredicateSet& a, const PredicateSet& b);

// Abstraction of a state set: conjoin atom-boolean equivalences, then
// eliminate the scope variables.
Formula abstract_state(const Formula& s, const PredicateSet& ps);

// Concretization: substitute each predicate atom back for its boolean
// (current- and next-state booleans alike).
Formula concretize(const Formula& abstracted, const PredicateSet& ps);

// For every predicate: if no scope variable changes, the boolean keeps its
// value across the step.
Formula consistency_constraint(const PredicateSet& ps);

// Abstraction of a transition relation: conjoin the consistency constraint
// and the equivalences for both states, then eliminate current and next
// scope variables.
Formula abstract_transition(const Formula& r, const PredicateSet& ps);

// Abstract every part of a system; scope variables disappear from the
// variable list and the predicate booleans are appended.
TransitionSystem abstract_system(const TransitionSystem& ts,
                                 const PredicateSet& ps);

// Rewrite property leaves over the abstraction. Atoms disjoint from the
// predicate scopes stay concrete. An atom over scope variables is replaced
// by the disjunction of predicate-boolean regions it covers; if a region
// straddles the atom's boundary (under the restriction), the atom has no
// exact image and UnexpressibleAtomError is thrown.
CtlProperty abstract_property(const CtlProperty& p, const PredicateSet& ps,
                              const Formula& restriction);

// Substitute predicate atoms for booleans in every leaf.
CtlProperty concretize_property(const CtlProperty& p, const PredicateSet& ps);

}  // namespace predkit
