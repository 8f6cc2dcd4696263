#include "predkit/abstraction.hpp"

#include <algorithm>

#include "predkit/errors.hpp"

namespace predkit {

Formula Predicate::formula() const {
  Cube c;
  if (!c.add_lin(atom.term, atom.rel, atom.bound)) return Formula::bottom();
  return Formula::of_cube(c);
}

PredicateSet PredicateSet::create(const std::vector<LinCon>& atoms,
                                  const std::set<std::string>& reserved_names) {
  PredicateSet ps;
  std::set<std::string> used = reserved_names;
  std::size_t counter = 0;
  for (const LinCon& atom : atoms) {
    if (atom.term.empty()) throw Error("predicate atom has no variables");
    Predicate p;
    p.index = ps.preds_.size();
    p.atom = atom;
    for (const auto& [v, c] : atom.term.coeffs()) {
      if (v.is_next()) {
        throw Error("predicate atom mentions next-state variable " +
                    v.to_string());
      }
      p.scope.insert(v);
    }
    std::string name;
    do {
      name = "b" + std::to_string(++counter);
    } while (used.count(name));
    used.insert(name);
    p.bool_var = VarId{name, Kind::Boolean, Temporality::Current};
    ps.preds_.push_back(std::move(p));
  }
  return ps;
}

std::set<VarId> PredicateSet::scope() const {
  std::set<VarId> out;
  for (const Predicate& p : preds_) out.insert(p.scope.begin(), p.scope.end());
  return out;
}

std::set<VarId> PredicateSet::scope_of(
    const std::vector<std::size_t>& indices) const {
  std::set<VarId> out;
  for (std::size_t i : indices) {
    const Predicate& p = preds_.at(i);
    out.insert(p.scope.begin(), p.scope.end());
  }
  return out;
}

PredicateSet PredicateSet::subset(
    const std::vector<std::size_t>& indices) const {
  PredicateSet out;
  for (std::size_t i : indices) out.preds_.push_back(preds_.at(i));
  return out;
}

bool scopes_disjoint(const PredicateSet& a, const PredicateSet& b) {
  std::set<VarId> sa = a.scope();
  for (const VarId& v : b.scope()) {
    if (sa.count(v)) return false;
  }
  return true;
}

namespace {

// atom ⟺ bool as a two-cube formula.
Formula iff(const Formula& atom, const VarId& b) {
  return (atom && Formula::bool_lit(b, true)) ||
         (negate(atom) && Formula::bool_lit(b, false));
}

Formula bool_iff(const VarId& a, const VarId& b) {
  return (Formula::bool_lit(a, true) && Formula::bool_lit(b, true)) ||
         (Formula::bool_lit(a, false) && Formula::bool_lit(b, false));
}

std::set<VarId> primed_all(const std::set<VarId>& vars) {
  std::set<VarId> out;
  for (const VarId& v : vars) out.insert(v.primed());
  return out;
}

std::map<VarId, Formula> concretization_map(const PredicateSet& ps) {
  std::map<VarId, Formula> map;
  for (const Predicate& p : ps.preds()) {
    Formula atom = p.formula();
    map[p.bool_var] = atom;
    map[p.bool_var.primed()] = to_next_state(atom);
  }
  return map;
}

}  // namespace

Formula abstract_state(const Formula& s, const PredicateSet& ps) {
  Formula f = s;
  for (const Predicate& p : ps.preds()) {
    f = f && iff(p.formula(), p.bool_var);
  }
  return eliminate(f, ps.scope());
}

Formula concretize(const Formula& abstracted, const PredicateSet& ps) {
  return substitute_bools(abstracted, concretization_map(ps));
}

Formula consistency_constraint(const PredicateSet& ps) {
  Formula cs = Formula::top();
  for (const Predicate& p : ps.preds()) {
    // (all scope vars unchanged) implies b' iff b, written as
    // (some scope var changed) or (b' iff b).
    Formula changed = Formula::bottom();
    for (const VarId& v : p.scope) {
      LinearTerm diff;
      diff.add(v.primed(), 1);
      diff.add(v, -1);
      changed = changed || Formula::compare(diff, Cmp::Ne, 0);
    }
    cs = cs && (changed || bool_iff(p.bool_var, p.bool_var.primed()));
  }
  return cs;
}

Formula abstract_transition(const Formula& r, const PredicateSet& ps) {
  Formula f = r && consistency_constraint(ps);
  for (const Predicate& p : ps.preds()) {
    Formula atom = p.formula();
    f = f && iff(atom, p.bool_var);
    f = f && iff(to_next_state(atom), p.bool_var.primed());
  }
  std::set<VarId> scope = ps.scope();
  std::set<VarId> primed = primed_all(scope);
  scope.insert(primed.begin(), primed.end());
  return eliminate(f, scope);
}

TransitionSystem abstract_system(const TransitionSystem& ts,
                                 const PredicateSet& ps) {
  TransitionSystem out;
  out.name = ts.name + "_abstract";
  std::set<VarId> scope = ps.scope();
  for (const VarDecl& d : ts.vars) {
    if (!scope.count(d.id)) out.vars.push_back(d);
  }
  for (const Predicate& p : ps.preds()) {
    out.vars.push_back(VarDecl{p.bool_var, {}});
  }
  // States and transition endpoints live inside the restriction; folding it
  // in before quantification keeps facts the restriction contributes about
  // abstracted variables (e.g. a nonnegative counter) from being lost.
  out.init = abstract_state(ts.init && ts.restriction, ps);
  out.restriction = abstract_state(ts.restriction, ps);
  Formula endpoints = ts.restriction && to_next_state(ts.restriction);
  for (const Transition& t : ts.transitions) {
    out.transitions.push_back(
        {t.label, abstract_transition(t.relation && endpoints, ps)});
  }
  return out;
}

namespace {

// Predicates whose scope intersects the given variable set.
std::vector<const Predicate*> relevant_preds(const PredicateSet& ps,
                                             const std::set<VarId>& vars) {
  std::vector<const Predicate*> out;
  for (const Predicate& p : ps.preds()) {
    if (std::any_of(p.scope.begin(), p.scope.end(),
                    [&](const VarId& v) { return vars.count(v) > 0; })) {
      out.push_back(&p);
    }
  }
  return out;
}

// Rewrite one linear atom over predicate booleans: the disjunction of all
// satisfiable sign regions of the relevant predicates that entail the atom.
// Exact when every satisfiable region decides the atom; throws otherwise.
Formula abstract_atom(const Formula& atom_f, const std::set<VarId>& atom_vars,
                      const PredicateSet& ps, const Formula& restriction) {
  std::vector<const Predicate*> rel = relevant_preds(ps, atom_vars);
  for (const VarId& v : atom_vars) {
    bool covered = false;
    for (const Predicate* p : rel) covered = covered || p->scope.count(v) > 0;
    if (!covered) {
      throw UnexpressibleAtomError("atom " + atom_f.to_string() +
                                   " mixes abstracted and concrete variables");
    }
  }
  if (rel.size() > 16) {
    throw Error("too many predicates over one property atom");
  }
  Formula result = Formula::bottom();
  Formula not_atom = negate(atom_f);
  for (std::size_t mask = 0; mask < (std::size_t{1} << rel.size()); ++mask) {
    Formula region = restriction;
    Cube bools;
    for (std::size_t i = 0; i < rel.size(); ++i) {
      bool sign = (mask >> i) & 1;
      Formula pf = rel[i]->formula();
      region = region && (sign ? pf : negate(pf));
      bools.add_bool(rel[i]->bool_var, sign);
    }
    if (!satisfiable(region)) continue;
    if (entails(region, atom_f)) {
      result = result || Formula::of_cube(bools);
    } else if (!entails(region, not_atom)) {
      throw UnexpressibleAtomError("atom " + atom_f.to_string() +
                                   " straddles a predicate region");
    }
  }
  return result;
}

}  // namespace

CtlProperty abstract_property(const CtlProperty& p, const PredicateSet& ps,
                              const Formula& restriction) {
  std::set<VarId> scope = ps.scope();
  return map_leaves(p, [&](const Formula& leaf) {
    Formula out = Formula::bottom();
    for (const Cube& cube : leaf.cubes()) {
      Formula conj = Formula::top();
      for (const auto& [v, pos] : cube.bool_lits()) {
        conj = conj && Formula::bool_lit(v, pos);
      }
      for (const LinCon& atom : cube.lin_atoms()) {
        std::set<VarId> vars;
        for (const auto& [v, c] : atom.term.coeffs()) vars.insert(v);
        bool touches = std::any_of(
            vars.begin(), vars.end(),
            [&](const VarId& v) { return scope.count(v) > 0; });
        Cube single;
        single.add_lin(atom.term, atom.rel, atom.bound);
        Formula atom_f = Formula::of_cube(single);
        conj = conj && (touches
                            ? abstract_atom(atom_f, vars, ps, restriction)
                            : atom_f);
      }
      out = out || conj;
    }
    return out;
  });
}

CtlProperty concretize_property(const CtlProperty& p, const PredicateSet& ps) {
  std::map<VarId, Formula> map = concretization_map(ps);
  return map_leaves(p, [&](const Formula& leaf) {
    return substitute_bools(leaf, map);
  });
}

}  // namespace predkit
