#include "predkit/imprecision.hpp"

#include <algorithm>

#include "predkit/checker.hpp"
#include "predkit/errors.hpp"

namespace predkit {

long ImprecisionScores::pair_score(std::size_t i, std::size_t j) const {
  auto key = std::minmax(i, j);
  auto it = pairwise.find({key.first, key.second});
  return it == pairwise.end() ? 0 : it->second;
}

long ImprecisionScores::config_score(
    const std::vector<std::size_t>& config) const {
  long total = 0;
  for (std::size_t a = 0; a < config.size(); ++a) {
    for (std::size_t b = a + 1; b < config.size(); ++b) {
      total += pair_score(config[a], config[b]);
    }
  }
  return total;
}

namespace {

// Number of satisfiable conjunctions of `base` with each region cube; the
// regions are all sign combinations of the given formulas.
long coverage(const Formula& base, const std::vector<Formula>& atoms) {
  long covered = 0;
  std::size_t combos = std::size_t{1} << atoms.size();
  for (std::size_t mask = 0; mask < combos; ++mask) {
    Formula region = base;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      region = region && ((mask >> i) & 1 ? atoms[i] : negate(atoms[i]));
    }
    if (satisfiable(region)) ++covered;
  }
  return covered;
}

}  // namespace

ImprecisionScores compute_imprecision_scores(const TransitionSystem& ts,
                                             const PredicateSet& ps) {
  ImprecisionScores scores;
  scores.individual.assign(ps.size(), 0);

  const std::size_t nt = ts.transitions.size();
  const std::size_t np = ps.size();

  // Transition endpoints live inside the restriction (see abstract_system).
  Formula endpoints = ts.restriction && to_next_state(ts.restriction);
  std::vector<Formula> relation(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    relation[t] = ts.transitions[t].relation && endpoints;
  }

  // Reaching formulas: relation of the first transition conjoined with
  // "the second transition is enabled in the resulting state".
  std::vector<Formula> enabled_next(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    enabled_next[j] = to_next_state(pre_image(relation[j], Formula::top()));
  }
  std::vector<std::vector<Formula>> conc(nt, std::vector<Formula>(nt));
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t j = 0; j < nt; ++j) {
      conc[k][j] = relation[k] && enabled_next[j];
    }
  }

  // Abstractions of each transition under each single predicate and the
  // matching enabledness formulas.
  std::vector<std::vector<Formula>> abs_rel(np, std::vector<Formula>(nt));
  std::vector<std::vector<Formula>> abs_enabled(np, std::vector<Formula>(nt));
  for (std::size_t i = 0; i < np; ++i) {
    PredicateSet single = ps.subset({i});
    for (std::size_t t = 0; t < nt; ++t) {
      abs_rel[i][t] = abstract_transition(relation[t], single);
      abs_enabled[i][t] =
          to_next_state(pre_image(abs_rel[i][t], Formula::top()));
    }
  }

  auto record = [&](std::size_t first, std::size_t second, std::size_t pa,
                    std::size_t pb, long conc_cov, long abs_cov) {
    scores.samples.push_back({ts.transitions[first].label,
                              ts.transitions[second].label, pa, pb, conc_cov,
                              abs_cov});
  };

  // Individual predicates (guard: fewer than 2 of the 2 regions covered).
  for (std::size_t k = 0; k < nt; ++k) {
    for (std::size_t j = 0; j < nt; ++j) {
      for (std::size_t i = 0; i < np; ++i) {
        long conc_cov = coverage(conc[k][j], {ps.at(i).formula()});
        long abs_cov = conc_cov;
        if (conc_cov < 2) {
          Formula abs = abs_rel[i][k] && abs_enabled[i][j];
          abs_cov = coverage(abs, {Formula::bool_lit(ps.at(i).bool_var)});
          scores.individual[i] += abs_cov - conc_cov;
        }
        record(k, j, i, i, conc_cov, abs_cov);
      }
    }
  }

  // Predicate pairs (guard: fewer than 4 of the 4 regions covered).
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t m = i + 1; m < np; ++m) {
      PredicateSet pair = ps.subset({i, m});
      std::vector<Formula> pair_rel(nt);
      std::vector<Formula> pair_enabled(nt);
      for (std::size_t t = 0; t < nt; ++t) {
        pair_rel[t] = abstract_transition(relation[t], pair);
        pair_enabled[t] =
            to_next_state(pre_image(pair_rel[t], Formula::top()));
      }
      long total = 0;
      for (std::size_t k = 0; k < nt; ++k) {
        for (std::size_t j = 0; j < nt; ++j) {
          long conc_cov = coverage(
              conc[k][j], {ps.at(i).formula(), ps.at(m).formula()});
          long abs_cov = conc_cov;
          if (conc_cov < 4) {
            Formula abs = pair_rel[k] && pair_enabled[j];
            abs_cov = coverage(abs, {Formula::bool_lit(pair.at(0).bool_var),
                                     Formula::bool_lit(pair.at(1).bool_var)});
            total += abs_cov - conc_cov;
          }
          record(k, j, i, m, conc_cov, abs_cov);
        }
      }
      scores.pairwise[{i, m}] = total;
    }
  }
  return scores;
}

bool transition_pair_imprecise(const Formula& r1, const Formula& r2,
                               const PredicateSet& ps) {
  Formula conc = r1 && to_next_state(pre_image(r2, Formula::top()));
  Formula abs = abstract_transition(r1, ps) &&
                to_next_state(pre_image(abstract_transition(r2, ps),
                                        Formula::top()));
  Formula conc_abs = concretize(abs, ps);
  return entails(conc, conc_abs) && !entails(conc_abs, conc);
}

// ---------------------------------------------------------------------------
// Selection.
// ---------------------------------------------------------------------------

namespace {

struct Search {
  const PredicateSet& ps;
  const ImprecisionScores& scores;
  std::size_t k;
  std::vector<bool> feasible;
  std::set<std::vector<std::size_t>> visited;
  std::vector<std::optional<Config>> best;  // index 1..k

  Config make_config(const std::vector<std::size_t>& preds) const {
    Config c;
    c.preds = preds;
    c.num_vars = ps.scope_of(preds).size();
    c.score = scores.config_score(preds);
    return c;
  }

  void update_best(const Config& c) {
    std::optional<Config>& slot = best[c.preds.size()];
    if (!slot || c.score < slot->score ||
        (c.score == slot->score && c.num_vars > slot->num_vars)) {
      slot = c;
    }
  }

  void explore(const std::vector<std::size_t>& cur, std::size_t level) {
    if (level > k) return;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (!feasible[i]) continue;
      if (std::find(cur.begin(), cur.end(), i) != cur.end()) continue;
      std::vector<std::size_t> next = cur;
      next.push_back(i);
      std::sort(next.begin(), next.end());
      if (!visited.insert(next).second) continue;
      Config c = make_config(next);
      update_best(c);
      explore(next, level + 1);
    }
  }
};

}  // namespace

ImprecisionSelection choose_predicates_by_imprecision(
    const PredicateSet& ps, const ImprecisionScores& scores, std::size_t k,
    const ImprecisionSelectionOptions& options) {
  if (k == 0) throw Error("selection depth must be at least 1");

  // Exclusion: individually imprecise predicates never enter a
  // configuration; optionally, neither does anything sharing their scope.
  std::set<VarId> exclude_vars;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (scores.individual[i] > 0) {
      const auto& scope = ps.at(i).scope;
      exclude_vars.insert(scope.begin(), scope.end());
    }
  }
  Search search{ps, scores, k, {}, {}, {}};
  search.feasible.assign(ps.size(), false);
  search.best.resize(k + 1);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (scores.individual[i] > 0) continue;
    if (options.scope_exclusion) {
      bool touches = std::any_of(
          ps.at(i).scope.begin(), ps.at(i).scope.end(),
          [&](const VarId& v) { return exclude_vars.count(v) > 0; });
      if (touches) continue;
    }
    search.feasible[i] = true;
  }

  search.explore({}, 1);

  ImprecisionSelection out;
  std::optional<Config> overall;
  for (std::size_t level = 1; level <= k; ++level) {
    if (!search.best[level]) continue;
    out.per_level.push_back(*search.best[level]);
    const Config& c = *search.best[level];
    if (!overall || c.score < overall->score ||
        (c.score == overall->score && c.num_vars > overall->num_vars) ||
        (c.score == overall->score && c.num_vars == overall->num_vars &&
         c.preds.size() < overall->preds.size())) {
      overall = c;
    }
  }
  if (!overall) {
    throw NoFeasibleConfigError(
        "every candidate predicate is individually imprecise or "
        "scope-excluded");
  }
  out.best = *overall;
  return out;
}

}  // namespace predkit
