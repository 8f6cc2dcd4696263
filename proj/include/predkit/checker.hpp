/*******************************************************************************
 *
 * Symbolic branching-time checking by backward fixpoints over formulas.
 * Universal properties are verified by negating into the existential
 * fragment and testing the result against the initial states. Fixpoints
 * are bounded; least fixpoints may optionally be widened per integer
 * variable, which preserves soundness of Holds only.
 *
 ******************************************************************************/

#pragma once

#include <cstddef>
#include <string>

#include "predkit/ctl.hpp"
#include "predkit/model.hpp"

namespace predkit {

struct CheckLimits {
  std::size_t max_iterations = 64;
  std::size_t widen_after = 0;  // 0 disables widening
};

enum class VerdictKind { Holds, NotShown, Nonconvergent };

struct Verdict {
  VerdictKind kind = VerdictKind::Holds;
  Formula witness;              // NotShown: offending initial states
  std::size_t iterations = 0;   // largest fixpoint iteration count used
  bool widened = false;
  std::string detail;
};

const char* verdict_name(VerdictKind k);

// States with a successor through `relation` inside `target`.
Formula pre_image(const Formula& relation, const Formula& target);

// Union of per-transition pre-images.
Formula pre_image(const TransitionSystem& ts, const Formula& target);

// Check a universal property of `ts` restricted to its state-space
// restriction. Throws UnsupportedOperatorError when the property is not
// universal after negation normal form.
Verdict check(const TransitionSystem& ts, const CtlProperty& prop,
              const CheckLimits& limits = {});

}  // namespace predkit
