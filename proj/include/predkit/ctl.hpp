/*******************************************************************************
 *
 * Branching-time properties. Leaves are quantifier-free state formulas;
 * internal nodes are boolean connectives and the usual path quantifiers.
 * Universal properties are checked; existential ones arise by negation.
 *
 ******************************************************************************/

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "predkit/formula.hpp"

namespace predkit {

enum class CtlOp {
  Atom,
  Not,
  And,
  Or,
  AX,
  AG,
  AF,
  AU,
  EX,
  EG,
  EF,
  EU,
};

struct CtlProperty {
  CtlOp op = CtlOp::Atom;
  Formula leaf;  // meaningful when op == Atom
  std::vector<CtlProperty> children;

  static CtlProperty atom(Formula f);
  static CtlProperty unary(CtlOp op, CtlProperty child);
  static CtlProperty binary(CtlOp op, CtlProperty left, CtlProperty right);

  std::string to_string() const;
};

// Which fragment a property falls into once negations sit on leaves only.
enum class CtlFragment { Boolean, Universal, Existential, Mixed };

// Push negations down to the leaves (absorbing them into leaf formulas).
CtlProperty to_nnf(const CtlProperty& p);

// Negation-normal form of the property's negation.
CtlProperty negate_property(const CtlProperty& p);

CtlFragment classify(const CtlProperty& p);

void each_leaf(const CtlProperty& p,
               const std::function<void(const Formula&)>& fn);

// Rebuild the property with every leaf transformed.
CtlProperty map_leaves(const CtlProperty& p,
                       const std::function<Formula(const Formula&)>& fn);

}  // namespace predkit
