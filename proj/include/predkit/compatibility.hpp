/*******************************************************************************
 *
 * Pairwise compatibility scoring and predicate selection. Every candidate
 * pair (plus the property predicates over their shared variables) is used
 * to abstract a small instance; the pair is compatible when the abstracted
 * property still holds. Selection maximizes summed compatibility, pruning
 * extensions that would recreate a known-failing pair as an independent
 * sub-abstraction.
 *
 ******************************************************************************/

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "predkit/abstraction.hpp"
#include "predkit/checker.hpp"
#include "predkit/imprecision.hpp"
#include "predkit/model.hpp"

namespace predkit {

struct PairOutcome {
  int compatible = 0;  // 1 iff the abstracted property held
  VerdictKind verdict = VerdictKind::NotShown;
  std::vector<std::size_t> prop_preds;  // indices of added property atoms
  std::string note;                     // reason when a check was not run
};

struct CompatibilityMatrix {
  std::size_t size = 0;
  std::map<std::pair<std::size_t, std::size_t>, PairOutcome> pairs;  // i < j

  int compat(std::size_t i, std::size_t j) const;
  const PairOutcome& outcome(std::size_t i, std::size_t j) const;
  // Cohesion of a configuration: sum of compatibility over internal pairs.
  long cohesion(const std::vector<std::size_t>& config) const;
};

struct CompatOptions {
  CheckLimits limits{64, 8};  // widening on by default: nonterminating
                              // pair checks resolve into honest verdicts
  std::size_t jobs = 1;
};

// Verdict per unordered candidate pair on the small instance. Checks are
// cached by the canonicalized predicate set actually abstracted, so pairs
// sharing it (after property augmentation) verify once.
CompatibilityMatrix compute_compatibility(const TransitionSystem& small_ts,
                                          const CtlProperty& prop,
                                          const PredicateSet& ps,
                                          const CompatOptions& options = {});

struct CompatSelection {
  Config best;
  std::vector<Config> per_level;
  struct Skipped {
    std::vector<std::size_t> config;  // the extension that was not taken
    std::size_t incompatible_i = 0;
    std::size_t incompatible_j = 0;
  };
  std::vector<Skipped> skipped;
};

// Choose up to k predicates maximizing cohesion; ties favor larger
// variable coverage, then fewer predicates, then first in index order.
CompatSelection choose_predicates_by_compatibility(
    const PredicateSet& ps, const CompatibilityMatrix& matrix, std::size_t k);

}  // namespace predkit
