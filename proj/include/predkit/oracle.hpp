/*******************************************************************************
 *
 * Explicit-state reference checker. Enumerates every state inside a
 * per-variable box, labels it with plain set-based fixpoints, and reports
 * the same verdicts as the symbolic checker (never Nonconvergent).
 * Intended for tests and cross-checks, not for scale.
 *
 ******************************************************************************/

#pragma once

#include <map>
#include <string>
#include <utility>

#include "predkit/checker.hpp"
#include "predkit/model.hpp"

namespace predkit {

struct Box {
  // Integer variables only; booleans and enumerated variables take their
  // natural ranges. Every integer variable of the system needs bounds.
  std::map<std::string, std::pair<BigInt, BigInt>> int_bounds;
  std::size_t max_states = 1000000;
};

// Conjoin the box into the restriction, closing the system for
// enumeration. Use before oracle_check on systems with unbounded drift.
TransitionSystem boxed(const TransitionSystem& ts, const Box& box);

// Explicit-state check over the boxed state graph. Throws
// StateExplosionError over the state cap and ClosureViolationError when a
// restriction-satisfying successor leaves the box.
Verdict oracle_check(const TransitionSystem& ts, const CtlProperty& prop,
                     const Box& box);

}  // namespace predkit
