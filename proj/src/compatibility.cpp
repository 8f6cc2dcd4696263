#include "predkit/compatibility.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <optional>
#include <thread>

#include "predkit/errors.hpp"

namespace predkit {

int CompatibilityMatrix::compat(std::size_t i, std::size_t j) const {
  return outcome(i, j).compatible;
}

const PairOutcome& CompatibilityMatrix::outcome(std::size_t i,
                                                std::size_t j) const {
  auto key = std::minmax(i, j);
  auto it = pairs.find({key.first, key.second});
  if (it == pairs.end()) throw Error("no such predicate pair");
  return it->second;
}

long CompatibilityMatrix::cohesion(
    const std::vector<std::size_t>& config) const {
  long total = 0;
  for (std::size_t a = 0; a < config.size(); ++a) {
    for (std::size_t b = a + 1; b < config.size(); ++b) {
      total += compat(config[a], config[b]);
    }
  }
  return total;
}

namespace {

std::set<VarId> atom_vars(const LinCon& atom) {
  std::set<VarId> out;
  for (const auto& [v, c] : atom.term.coeffs()) out.insert(v);
  return out;
}

// Property atoms in first-occurrence order.
std::vector<LinCon> property_atoms(const CtlProperty& prop) {
  std::vector<LinCon> out;
  each_leaf(prop, [&](const Formula& leaf) {
    for (const Cube& cube : leaf.cubes()) {
      for (const LinCon& atom : cube.lin_atoms()) {
        if (std::find(out.begin(), out.end(), atom) == out.end()) {
          out.push_back(atom);
        }
      }
    }
  });
  return out;
}

struct PairCheck {
  std::vector<LinCon> try_atoms;  // canonical (sorted) key
  PairOutcome outcome;            // verdict filled by the worker
};

}  // namespace

CompatibilityMatrix compute_compatibility(const TransitionSystem& small_ts,
                                          const CtlProperty& prop,
                                          const PredicateSet& ps,
                                          const CompatOptions& options) {
  CompatibilityMatrix matrix;
  matrix.size = ps.size();

  std::set<VarId> prop_vars;
  each_leaf(prop, [&](const Formula& leaf) {
    for (const VarId& v : leaf.free_vars()) prop_vars.insert(v);
  });
  std::vector<LinCon> prop_atoms = property_atoms(prop);

  std::set<std::string> reserved;
  for (const VarDecl& d : small_ts.vars) reserved.insert(d.id.name);

  // Assemble the predicate set tried per pair, plus its canonical cache key.
  std::map<std::pair<std::size_t, std::size_t>, PairCheck> checks;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      PairCheck pc;
      std::set<VarId> pair_scope = ps.at(i).scope;
      pair_scope.insert(ps.at(j).scope.begin(), ps.at(j).scope.end());
      std::set<VarId> common;
      for (const VarId& v : pair_scope) {
        if (prop_vars.count(v)) common.insert(v);
      }
      std::vector<LinCon> atoms = {ps.at(i).atom, ps.at(j).atom};
      for (std::size_t a = 0; a < prop_atoms.size(); ++a) {
        std::set<VarId> vars = atom_vars(prop_atoms[a]);
        bool inside = !vars.empty() &&
                      std::all_of(vars.begin(), vars.end(), [&](const VarId& v) {
                        return common.count(v) > 0;
                      });
        if (!inside) continue;
        if (std::find(atoms.begin(), atoms.end(), prop_atoms[a]) !=
            atoms.end()) {
          continue;
        }
        atoms.push_back(prop_atoms[a]);
        // Remember which candidates the added atoms correspond to.
        for (std::size_t x = 0; x < ps.size(); ++x) {
          if (ps.at(x).atom == prop_atoms[a]) {
            pc.outcome.prop_preds.push_back(x);
            break;
          }
        }
      }
      std::sort(atoms.begin(), atoms.end());
      atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
      pc.try_atoms = std::move(atoms);
      checks.emplace(std::make_pair(i, j), std::move(pc));
    }
  }

  // One verification per distinct predicate set.
  std::map<std::vector<LinCon>, std::size_t> key_slot;
  std::vector<const std::vector<LinCon>*> keys;
  for (const auto& [pair, pc] : checks) {
    if (key_slot.emplace(pc.try_atoms, keys.size()).second) {
      keys.push_back(&key_slot.find(pc.try_atoms)->first);
    }
  }

  struct SlotResult {
    int compatible = 0;
    VerdictKind verdict = VerdictKind::NotShown;
    std::string note;
  };
  std::vector<SlotResult> results(keys.size());

  auto run_one = [&](std::size_t slot) {
    const std::vector<LinCon>& atoms = *keys[slot];
    SlotResult& r = results[slot];
    PredicateSet try_ps = PredicateSet::create(atoms, reserved);
    CtlProperty abs_prop;
    try {
      abs_prop = abstract_property(prop, try_ps, small_ts.restriction);
    } catch (const UnexpressibleAtomError& e) {
      r.compatible = 0;
      r.verdict = VerdictKind::NotShown;
      r.note = e.what();
      return;
    }
    TransitionSystem abs_ts = abstract_system(small_ts, try_ps);
    Verdict v = check(abs_ts, abs_prop, options.limits);
    r.verdict = v.kind;
    r.compatible = v.kind == VerdictKind::Holds ? 1 : 0;
  };

  std::size_t jobs = std::max<std::size_t>(1, options.jobs);
  if (jobs == 1 || keys.size() <= 1) {
    for (std::size_t s = 0; s < keys.size(); ++s) run_one(s);
  } else {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < std::min(jobs, keys.size()); ++w) {
      workers.emplace_back([&] {
        for (;;) {
          std::size_t s = next.fetch_add(1);
          if (s >= keys.size()) return;
          try {
            run_one(s);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    }
    for (std::thread& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (auto& [pair, pc] : checks) {
    const SlotResult& r = results[key_slot.at(pc.try_atoms)];
    pc.outcome.compatible = r.compatible;
    pc.outcome.verdict = r.verdict;
    if (!r.note.empty()) pc.outcome.note = r.note;
    matrix.pairs.emplace(pair, std::move(pc.outcome));
  }
  return matrix;
}

// ---------------------------------------------------------------------------
// Selection.
// ---------------------------------------------------------------------------

namespace {

struct CompatSearch {
  const PredicateSet& ps;
  const CompatibilityMatrix& matrix;
  std::size_t k;
  std::set<std::vector<std::size_t>> visited;
  std::set<std::vector<std::size_t>> skipped_seen;
  std::vector<std::optional<Config>> best;
  std::vector<CompatSelection::Skipped> skipped;

  Config make_config(const std::vector<std::size_t>& preds) const {
    Config c;
    c.preds = preds;
    c.num_vars = ps.scope_of(preds).size();
    c.score = matrix.cohesion(preds);
    return c;
  }

  void update_best(const Config& c) {
    std::optional<Config>& slot = best[c.preds.size()];
    if (!slot || c.score > slot->score ||
        (c.score == slot->score && c.num_vars > slot->num_vars)) {
      slot = c;
    }
  }

  // The extension of cur by `cand` recreates a failing pair as an
  // independent sub-abstraction when some member is incompatible with cand
  // and the rest of the configuration shares no variable with the pair.
  std::optional<std::size_t> blocking_member(
      const std::vector<std::size_t>& cur, std::size_t cand) const {
    for (std::size_t member : cur) {
      if (matrix.compat(cand, member) != 0) continue;
      std::vector<std::size_t> rest;
      for (std::size_t m : cur) {
        if (m != member) rest.push_back(m);
      }
      std::set<VarId> rest_scope = ps.scope_of(rest);
      std::set<VarId> pair_scope = ps.at(cand).scope;
      pair_scope.insert(ps.at(member).scope.begin(),
                        ps.at(member).scope.end());
      bool overlap = std::any_of(
          pair_scope.begin(), pair_scope.end(),
          [&](const VarId& v) { return rest_scope.count(v) > 0; });
      if (!overlap) return member;
    }
    return std::nullopt;
  }

  void explore(const std::vector<std::size_t>& cur, std::size_t level) {
    if (level > k) return;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (std::find(cur.begin(), cur.end(), i) != cur.end()) continue;
      std::vector<std::size_t> next = cur;
      next.push_back(i);
      std::sort(next.begin(), next.end());
      if (visited.count(next)) continue;
      if (std::optional<std::size_t> blocker = blocking_member(cur, i)) {
        if (skipped_seen.insert(next).second) {
          auto key = std::minmax(i, *blocker);
          skipped.push_back({next, key.first, key.second});
        }
        continue;
      }
      visited.insert(next);
      update_best(make_config(next));
      explore(next, level + 1);
    }
  }
};

}  // namespace

CompatSelection choose_predicates_by_compatibility(
    const PredicateSet& ps, const CompatibilityMatrix& matrix, std::size_t k) {
  if (k == 0) throw Error("selection depth must be at least 1");

  CompatSearch search{ps, matrix, k, {}, {}, {}, {}};
  search.best.resize(k + 1);
  search.explore({}, 1);

  CompatSelection out;
  out.skipped = std::move(search.skipped);
  std::optional<Config> overall;
  for (std::size_t level = 1; level <= k; ++level) {
    if (!search.best[level]) continue;
    out.per_level.push_back(*search.best[level]);
    const Config& c = *search.best[level];
    if (!overall || c.score > overall->score ||
        (c.score == overall->score && c.num_vars > overall->num_vars)) {
      overall = c;
    }
  }
  if (!overall) {
    throw NoFeasibleConfigError("no configuration could be formed");
  }
  out.best = *overall;
  return out;
}

}  // namespace predkit
