/*******************************************************************************
 *
 * Quantifier-free formulas over boolean variables and linear integer
 * constraints, kept in disjunctive normal form (a disjunction of cubes,
 * each cube a conjunction of atoms).
 *
 * Representation invariants:
 *  - FALSE is the empty disjunction; TRUE is the single empty cube.
 *  - Linear atoms are canonical: coefficients divided by their gcd (bounds
 *    floor-divided), equalities sign-normalized, ground atoms evaluated.
 *  - A disequality is split into `<` or `>` cubes when a formula is built,
 *    so stored relations are only `=` and `<=`.
 *  - No cube is syntactically self-contradictory (conflicting boolean
 *    literals, conflicting equalities, or crossed bounds on one term).
 *  - Divisibility atoms may appear transiently inside quantifier
 *    elimination; exported results never contain them.
 *
 ******************************************************************************/

#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "predkit/bigint.hpp"
#include "predkit/errors.hpp"
#include "predkit/var.hpp"

namespace predkit {

// --------------------------------------------------------------------------
// Linear terms: sum of coefficient * variable, no constant part.
// --------------------------------------------------------------------------

class LinearTerm {
public:
  LinearTerm() = default;

  // Throws if a boolean variable is used in arithmetic.
  void add(const VarId& v, const BigInt& coeff);

  const std::map<VarId, BigInt>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }
  BigInt coeff(const VarId& v) const;

  LinearTerm negated() const;
  LinearTerm scaled(const BigInt& factor) const;
  LinearTerm plus(const LinearTerm& other) const;

  // Gcd of coefficient magnitudes (0 for the empty term).
  BigInt gcd() const;

  // True if the lexicographically first variable has positive coefficient.
  bool leading_positive() const;

  friend std::weak_ordering operator<=>(const LinearTerm& a,
                                        const LinearTerm& b) {
    return a.coeffs_ <=> b.coeffs_;
  }
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;

  std::string to_string() const;

private:
  std::map<VarId, BigInt> coeffs_;
};

// --------------------------------------------------------------------------
// Atoms.
// --------------------------------------------------------------------------

struct BoolLit {
  VarId var;
  bool positive = true;

  friend auto operator<=>(const BoolLit&, const BoolLit&) = default;
};

// Stored relations; user-facing comparisons are normalized to these.
enum class Rel { Eq, Le };

struct LinCon {
  LinearTerm term;
  Rel rel = Rel::Le;
  BigInt bound;

  friend std::weak_ordering operator<=>(const LinCon&,
                                        const LinCon&) = default;
  friend bool operator==(const LinCon&, const LinCon&) = default;
  std::string to_string() const;
};

// modulus | (term + offset); internal to quantifier elimination.
struct Divides {
  BigInt modulus;  // >= 2 after normalization
  LinearTerm term;
  BigInt offset;   // in [0, modulus)

  friend std::weak_ordering operator<=>(const Divides&,
                                        const Divides&) = default;
  friend bool operator==(const Divides&, const Divides&) = default;
  std::string to_string() const;
};

// Comparison operators accepted when building formulas.
enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

// --------------------------------------------------------------------------
// Cubes.
// --------------------------------------------------------------------------

// Per canonical (sign-normalized) term, the merged constraints of a cube.
struct TermRange {
  std::optional<BigInt> eq;  // term = eq
  std::optional<BigInt> ub;  // term <= ub
  std::optional<BigInt> lb;  // term >= lb

  friend std::weak_ordering operator<=>(const TermRange&,
                                        const TermRange&) = default;
  friend bool operator==(const TermRange&, const TermRange&) = default;
};

class Cube {
public:
  Cube() = default;  // the empty cube: TRUE

  // Each add returns false if the cube became contradictory; callers then
  // discard the cube. Adding never throws except on kind violations.
  bool add_bool(const VarId& v, bool positive);
  bool add_lin(LinearTerm term, Rel rel, BigInt bound);
  bool add_div(BigInt modulus, LinearTerm term, BigInt offset);
  bool add_atoms_of(const Cube& other);

  bool empty() const {
    return bools_.empty() && ranges_.empty() && divs_.empty();
  }

  const std::map<VarId, bool>& bool_lits() const { return bools_; }
  const std::map<LinearTerm, TermRange>& ranges() const { return ranges_; }
  const std::set<Divides>& div_atoms() const { return divs_; }
  bool has_divs() const { return !divs_.empty(); }

  // Materialized linear atoms (equalities and `<=` in both directions).
  std::vector<LinCon> lin_atoms() const;

  void collect_vars(std::set<VarId>& out) const;
  bool mentions(const VarId& v) const;

  // True if every state satisfying `stronger` also satisfies this cube,
  // detected syntactically with bound awareness.
  bool subsumes(const Cube& stronger) const;

  bool evaluate(const std::map<VarId, BigInt>& assignment) const;

  friend std::weak_ordering operator<=>(const Cube& a, const Cube& b) {
    if (auto c = a.bools_ <=> b.bools_; c != 0) return c;
    if (auto c = a.ranges_ <=> b.ranges_; c != 0) return c;
    return a.divs_ <=> b.divs_;
  }
  friend bool operator==(const Cube&, const Cube&) = default;

  std::string to_string() const;

private:
  std::map<VarId, bool> bools_;
  std::map<LinearTerm, TermRange> ranges_;
  std::set<Divides> divs_;
};

// --------------------------------------------------------------------------
// Formulas.
// --------------------------------------------------------------------------

class Formula {
public:
  Formula() = default;  // FALSE

  static Formula top();
  static Formula bottom();
  static Formula of_cube(Cube c);
  static Formula of_cubes(std::vector<Cube> cs);
  static Formula bool_lit(const VarId& v, bool positive = true);
  // term cmp bound, with != split into two cubes and strict bounds tightened.
  static Formula compare(const LinearTerm& term, Cmp cmp, const BigInt& bound);

  bool is_false() const { return cubes_.empty(); }
  bool is_true() const {
    return cubes_.size() == 1 && cubes_.front().empty();
  }

  const std::vector<Cube>& cubes() const { return cubes_; }

  std::set<VarId> free_vars() const;
  bool mentions(const VarId& v) const;
  bool has_divs() const;

  bool evaluate(const std::map<VarId, BigInt>& assignment) const;

  std::string to_string() const;

  friend Formula operator||(const Formula& a, const Formula& b);
  friend Formula operator&&(const Formula& a, const Formula& b);
  friend bool operator==(const Formula&, const Formula&) = default;

private:
  void normalize();
  std::vector<Cube> cubes_;
};

// Logical negation (exact; disequality splits may grow the result).
Formula negate(const Formula& f);

// f with boolean variable v fixed to `value`.
Formula assign_bool(const Formula& f, const VarId& v, bool value);

// Replace boolean variables by formulas: positive literals become the
// mapped formula, negative literals its negation.
Formula substitute_bools(const Formula& f,
                         const std::map<VarId, Formula>& map);

// Variable renaming. Throws CollisionError if the mapping is not injective
// on the variables that occur, or if a target would capture an occurring
// unmapped variable.
Formula rename(const Formula& f, const std::map<VarId, VarId>& mapping);

// Convenience: prime every current-state variable of f (or the reverse).
Formula to_next_state(const Formula& f);
Formula to_current_state(const Formula& f);

// --------------------------------------------------------------------------
// Decision procedures (exact over the integers; see qe.cpp).
// --------------------------------------------------------------------------

// Exact satisfiability over unbounded integers and free booleans.
bool satisfiable(const Formula& f);

// Exact entailment: every model of f is a model of g.
bool entails(const Formula& f, const Formula& g);

inline bool equivalent(const Formula& f, const Formula& g) {
  return entails(f, g) && entails(g, f);
}

// Existential quantifier elimination: a quantifier-free formula equivalent
// to exists(vars).f. Boolean variables are eliminated by expansion, integer
// variables by exact integer projection. Residual divisibility facts are
// expanded over bounded ranges; if a divisibility fact survives over
// unbounded variables, an UnsupportedAtomError is thrown.
Formula eliminate(const Formula& f, const std::set<VarId>& vars);

}  // namespace predkit
