/*******************************************************************************
 *
 * Transition-pair imprecision scoring and predicate selection. For every
 * ordered pair of transitions, the states reachable by the first that
 * enable the second are compared concretely and under single-predicate
 * (and predicate-pair) abstraction; extra satisfiable abstract regions
 * accumulate as imprecision. Selection searches the subsets of
 * individually precise predicates for a minimal pairwise score.
 *
 ******************************************************************************/

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "predkit/abstraction.hpp"
#include "predkit/model.hpp"

namespace predkit {

struct ImprecisionScores {
  // Per predicate index: summed individual imprecision.
  std::vector<long> individual;
  // Per unordered predicate pair (i < j): summed pairwise imprecision.
  std::map<std::pair<std::size_t, std::size_t>, long> pairwise;

  // Raw coverage counts, keyed by execution order: `first` runs, then
  // `second` from the resulting state.
  struct Sample {
    std::string first_label;
    std::string second_label;
    std::size_t pred_a = 0;
    std::size_t pred_b = 0;  // == pred_a for individual samples
    long conc_cov = 0;
    long abs_cov = 0;
    long contribution() const { return abs_cov - conc_cov; }
  };
  std::vector<Sample> samples;

  long pair_score(std::size_t i, std::size_t j) const;
  // Score of a configuration: sum over its internal pairs.
  long config_score(const std::vector<std::size_t>& config) const;
};

ImprecisionScores compute_imprecision_scores(const TransitionSystem& ts,
                                             const PredicateSet& ps);

// Strict-imprecision test for one ordered execution (r1 then r2): true if
// the concrete composition is strictly below the concretized abstract one.
bool transition_pair_imprecise(const Formula& r1, const Formula& r2,
                               const PredicateSet& ps);

// A candidate configuration: predicate indices, covered-variable count,
// and heuristic score (imprecision to minimize, or cohesion to maximize).
struct Config {
  std::vector<std::size_t> preds;
  std::size_t num_vars = 0;
  long score = 0;
};

struct ImprecisionSelectionOptions {
  // When set, predicates whose scope intersects the scope of any
  // individually imprecise predicate are excluded from the search.
  bool scope_exclusion = true;
};

struct ImprecisionSelection {
  Config best;
  std::vector<Config> per_level;  // best found at each size 1..k
};

// Choose up to k predicates minimizing summed pairwise imprecision; ties
// favor larger variable coverage, then fewer predicates, then the first
// configuration in index order. Throws NoFeasibleConfigError when every
// predicate is excluded.
ImprecisionSelection choose_predicates_by_imprecision(
    const PredicateSet& ps, const ImprecisionScores& scores, std::size_t k,
    const ImprecisionSelectionOptions& options = {});

}  // namespace predkit
