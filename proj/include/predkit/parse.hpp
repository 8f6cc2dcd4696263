/*******************************************************************************
 *
 * Parsing of state formulas, transition relations, branching-time
 * properties, and predicate atoms against a declared vocabulary.
 * All parsers report errors with line and column positions.
 *
 ******************************************************************************/

#pragma once

#include <string>
#include <vector>

#include "predkit/ctl.hpp"
#include "predkit/formula.hpp"

namespace predkit {

// A declared variable; enumerated variables carry their value labels and
// are encoded as integers 0 .. labels-1.
struct VarDecl {
  VarId id;
  std::vector<std::string> enum_labels;
};

class VarEnv {
public:
  // Throws on duplicate names.
  void declare(VarDecl decl);

  const VarDecl* find(const std::string& name) const;
  const std::vector<VarDecl>& decls() const { return decls_; }

private:
  std::vector<VarDecl> decls_;
};

// A state formula: current-state variables only.
Formula parse_state_formula(const std::string& text, const VarEnv& env);

// A transition relation: current- and next-state variables.
Formula parse_relation_formula(const std::string& text, const VarEnv& env);

// A branching-time property; pure boolean subtrees fold into leaves.
CtlProperty parse_property(const std::string& text, const VarEnv& env);

// A single current-state linear constraint (one line of a predicate file).
LinCon parse_predicate_atom(const std::string& text, const VarEnv& env);

}  // namespace predkit
