#include "predkit/oracle.hpp"

#include <algorithm>
#include <vector>

#include "predkit/errors.hpp"

namespace predkit {

namespace {

struct Domain {
  VarId id;
  BigInt lo;
  BigInt hi;
};

std::vector<Domain> build_domains(const TransitionSystem& ts, const Box& box) {
  std::vector<Domain> domains;
  for (const VarDecl& d : ts.vars) {
    Domain dom;
    dom.id = d.id;
    switch (d.id.kind) {
      case Kind::Boolean:
        dom.lo = 0;
        dom.hi = 1;
        break;
      case Kind::Enumerated:
        dom.lo = 0;
        dom.hi = BigInt(d.enum_labels.size()) - 1;
        break;
      case Kind::Integer: {
        auto it = box.int_bounds.find(d.id.name);
        if (it == box.int_bounds.end()) {
          throw Error("no box bounds for integer variable '" + d.id.name +
                      "'");
        }
        dom.lo = it->second.first;
        dom.hi = it->second.second;
        if (dom.lo > dom.hi) {
          throw Error("empty box for variable '" + d.id.name + "'");
        }
        break;
      }
    }
    domains.push_back(std::move(dom));
  }
  return domains;
}

using State = std::vector<BigInt>;

std::map<VarId, BigInt> current_assignment(const std::vector<Domain>& domains,
                                           const State& s) {
  std::map<VarId, BigInt> out;
  for (std::size_t i = 0; i < domains.size(); ++i) out[domains[i].id] = s[i];
  return out;
}

bool in_box(const std::vector<Domain>& domains, const State& s) {
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (s[i] < domains[i].lo || s[i] > domains[i].hi) return false;
  }
  return true;
}

std::size_t state_index(const std::vector<Domain>& domains, const State& s) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    std::size_t width = static_cast<std::size_t>(domains[i].hi -
                                                 domains[i].lo + 1);
    idx = idx * width + static_cast<std::size_t>(s[i] - domains[i].lo);
  }
  return idx;
}

// Successor states of s through one cube of a relation. Equalities with a
// single unknown next-state variable are solved by propagation; remaining
// next-state variables are enumerated over their domain extended by one on
// each side, so a one-step escape from the box is observable.
class CubeStepper {
public:
  CubeStepper(const std::vector<Domain>& domains, const Cube& cube)
      : domains_(domains), cube_(cube) {
    for (const auto& [v, pos] : cube.bool_lits()) {
      if (v.is_next()) forced_[v] = pos ? 1 : 0;
    }
    std::set<VarId> mentioned;
    cube.collect_vars(mentioned);
    for (const Domain& d : domains) {
      VarId next = d.id.primed();
      if (mentioned.count(next) && !forced_.count(next)) {
        open_.push_back(next);
      }
    }
  }

  // Appends every next state consistent with the cube, split into in-box
  // states and one-step escapes.
  void successors(const std::map<VarId, BigInt>& cur,
                  std::vector<State>& out_states,
                  std::vector<State>& out_escapes) const {
    std::map<VarId, BigInt> known = cur;
    for (const auto& [v, val] : forced_) known[v] = val;

    // Solve equalities that pin a single remaining next-state variable.
    std::vector<VarId> open = open_;
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& [term, range] : cube_.ranges()) {
        if (!range.eq) continue;
        VarId unknown;
        BigInt coeff = 0;
        BigInt rest = 0;
        int unknown_count = 0;
        for (const auto& [v, c] : term.coeffs()) {
          auto it = known.find(v);
          if (it != known.end()) {
            rest += c * it->second;
          } else {
            ++unknown_count;
            unknown = v;
            coeff = c;
          }
        }
        if (unknown_count != 1) continue;
        BigInt num = *range.eq - rest;
        if (num % coeff != 0) return;  // no integer solution: dead cube
        known[unknown] = num / coeff;
        open.erase(std::remove(open.begin(), open.end(), unknown), open.end());
        progress = true;
      }
    }

    // Enumerate what is left over slightly widened domains.
    enumerate(open, 0, known, out_states, out_escapes);
  }

private:
  void enumerate(const std::vector<VarId>& open, std::size_t at,
                 std::map<VarId, BigInt>& known,
                 std::vector<State>& out_states,
                 std::vector<State>& out_escapes) const {
    if (at == open.size()) {
      if (!cube_.evaluate(known)) return;
      State next(domains_.size());
      for (std::size_t i = 0; i < domains_.size(); ++i) {
        auto it = known.find(domains_[i].id.primed());
        // Unmentioned next-state variables are unconstrained; enumerating
        // them would blow up, so relations are expected to mention every
        // next variable (guarded transitions always do, via frames).
        if (it == known.end()) {
          throw Error("relation leaves next state of '" + domains_[i].id.name +
                      "' unconstrained; add a frame or an update");
        }
        next[i] = it->second;
      }
      (in_box(domains_, next) ? out_states : out_escapes)
          .push_back(std::move(next));
      return;
    }
    const VarId& v = open[at];
    const Domain* dom = nullptr;
    for (const Domain& d : domains_) {
      if (d.id == v.unprimed()) dom = &d;
    }
    for (BigInt val = dom->lo - 1; val <= dom->hi + 1; ++val) {
      known[v] = val;
      enumerate(open, at + 1, known, out_states, out_escapes);
    }
    known.erase(v);
  }

  const std::vector<Domain>& domains_;
  const Cube& cube_;
  std::map<VarId, BigInt> forced_;
  std::vector<VarId> open_;
};

}  // namespace

TransitionSystem boxed(const TransitionSystem& ts, const Box& box) {
  TransitionSystem out = ts;
  for (const VarDecl& d : ts.vars) {
    if (d.id.kind != Kind::Integer) continue;
    auto it = box.int_bounds.find(d.id.name);
    if (it == box.int_bounds.end()) continue;
    LinearTerm t;
    t.add(d.id, 1);
    out.restriction = out.restriction &&
                      Formula::compare(t, Cmp::Ge, it->second.first) &&
                      Formula::compare(t, Cmp::Le, it->second.second);
  }
  return out;
}

Verdict oracle_check(const TransitionSystem& ts, const CtlProperty& prop,
                     const Box& box) {
  std::vector<Domain> domains = build_domains(ts, box);

  BigInt total = 1;
  for (const Domain& d : domains) total *= d.hi - d.lo + 1;
  if (total > BigInt(box.max_states)) {
    throw StateExplosionError("box holds " + total.str() +
                              " states, cap is " +
                              std::to_string(box.max_states));
  }
  std::size_t n_states = static_cast<std::size_t>(total);

  // Enumerate all box states and their restriction membership.
  std::vector<State> states;
  states.reserve(n_states);
  {
    State s;
    for (const Domain& d : domains) s.push_back(d.lo);
    for (std::size_t count = 0; count < n_states; ++count) {
      states.push_back(s);
      for (std::size_t i = domains.size(); i-- > 0;) {
        if (s[i] < domains[i].hi) {
          ++s[i];
          break;
        }
        s[i] = domains[i].lo;
      }
    }
  }

  std::vector<char> member(n_states, 0);
  std::vector<std::map<VarId, BigInt>> assignments;
  assignments.reserve(n_states);
  for (std::size_t i = 0; i < n_states; ++i) {
    assignments.push_back(current_assignment(domains, states[i]));
    member[i] = ts.restriction.evaluate(assignments[i]) ? 1 : 0;
  }

  // Successor lists over the restricted graph; escapes that satisfy the
  // restriction mean the box is not closed.
  std::vector<std::vector<std::size_t>> succ(n_states);
  for (std::size_t i = 0; i < n_states; ++i) {
    if (!member[i]) continue;
    std::set<std::size_t> targets;
    for (const Transition& t : ts.transitions) {
      for (const Cube& cube : t.relation.cubes()) {
        CubeStepper stepper(domains, cube);
        std::vector<State> nexts;
        std::vector<State> escapes;
        stepper.successors(assignments[i], nexts, escapes);
        for (const State& e : escapes) {
          if (ts.restriction.evaluate(current_assignment(domains, e))) {
            throw ClosureViolationError(
                "transition '" + t.label +
                "' leaves the box into a restriction state");
          }
        }
        for (const State& nx : nexts) {
          std::size_t j = state_index(domains, nx);
          if (member[j]) targets.insert(j);
        }
      }
    }
    succ[i].assign(targets.begin(), targets.end());
  }

  // Explicit set-based labeling of the negated property.
  CtlProperty neg = negate_property(prop);
  CtlFragment frag = classify(neg);
  if (frag == CtlFragment::Universal || frag == CtlFragment::Mixed) {
    throw UnsupportedOperatorError(
        "property is not universal after negation normal form");
  }

  auto has_succ_in = [&](std::size_t i, const std::vector<char>& set) {
    for (std::size_t j : succ[i]) {
      if (set[j]) return true;
    }
    return false;
  };

  std::function<std::vector<char>(const CtlProperty&)> label =
      [&](const CtlProperty& p) -> std::vector<char> {
    std::vector<char> out(n_states, 0);
    switch (p.op) {
      case CtlOp::Atom: {
        for (std::size_t i = 0; i < n_states; ++i) {
          out[i] = member[i] && p.leaf.evaluate(assignments[i]);
        }
        return out;
      }
      case CtlOp::And: {
        std::vector<char> a = label(p.children[0]);
        std::vector<char> b = label(p.children[1]);
        for (std::size_t i = 0; i < n_states; ++i) out[i] = a[i] && b[i];
        return out;
      }
      case CtlOp::Or: {
        std::vector<char> a = label(p.children[0]);
        std::vector<char> b = label(p.children[1]);
        for (std::size_t i = 0; i < n_states; ++i) out[i] = a[i] || b[i];
        return out;
      }
      case CtlOp::EX: {
        std::vector<char> a = label(p.children[0]);
        for (std::size_t i = 0; i < n_states; ++i) {
          out[i] = member[i] && has_succ_in(i, a);
        }
        return out;
      }
      case CtlOp::EF:
      case CtlOp::EU: {
        std::vector<char> trigger(n_states, 1);
        std::vector<char> base;
        if (p.op == CtlOp::EU) {
          trigger = label(p.children[0]);
          base = label(p.children[1]);
        } else {
          base = label(p.children[0]);
        }
        out = base;
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t i = 0; i < n_states; ++i) {
            if (out[i] || !member[i] || !trigger[i]) continue;
            if (has_succ_in(i, out)) {
              out[i] = 1;
              changed = true;
            }
          }
        }
        return out;
      }
      case CtlOp::EG: {
        out = label(p.children[0]);
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t i = 0; i < n_states; ++i) {
            if (!out[i]) continue;
            if (!has_succ_in(i, out)) {
              out[i] = 0;
              changed = true;
            }
          }
        }
        return out;
      }
      default:
        throw UnsupportedOperatorError(
            "property is not universal: negation contains " + p.to_string());
    }
  };

  std::vector<char> bad = label(neg);

  Verdict v;
  std::size_t offenders = 0;
  Formula witness = Formula::bottom();
  for (std::size_t i = 0; i < n_states; ++i) {
    if (!bad[i] || !member[i]) continue;
    if (!ts.init.evaluate(assignments[i])) continue;
    ++offenders;
    if (offenders <= 5) {
      Cube c;
      for (std::size_t d = 0; d < domains.size(); ++d) {
        if (domains[d].id.kind == Kind::Boolean) {
          c.add_bool(domains[d].id, states[i][d] != 0);
        } else {
          LinearTerm t;
          t.add(domains[d].id, 1);
          c.add_lin(t, Rel::Eq, states[i][d]);
        }
      }
      witness = witness || Formula::of_cube(c);
    }
  }
  if (offenders > 0) {
    v.kind = VerdictKind::NotShown;
    v.witness = witness;
    v.detail = std::to_string(offenders) + " offending initial state(s)";
  } else {
    v.kind = VerdictKind::Holds;
  }
  return v;
}

}  // namespace predkit
