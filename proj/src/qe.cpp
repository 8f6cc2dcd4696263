/*******************************************************************************
 *
 * Exact decision procedures over linear integer arithmetic: existential
 * projection of integer variables (with divisibility facts carried
 * internally), satisfiability, and entailment.
 *
 ******************************************************************************/

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "predkit/formula.hpp"

namespace predkit {

namespace {

// An affine bound: the value `term + k`.
struct Affine {
  LinearTerm term;
  BigInt k;
};

// Atoms of one cube that mention the projection variable, with the
// variable's coefficient pulled out.
struct SplitCube {
  struct Lin {
    BigInt c;  // != 0
    LinearTerm rest;
    Rel rel;
    BigInt bound;
  };
  struct Div {
    BigInt modulus;
    BigInt c;  // may be 0 only transiently
    LinearTerm rest;
    BigInt offset;
  };
  std::vector<Lin> lins;
  std::vector<Div> divs;
  Cube others;
  bool others_ok = true;
};

SplitCube split_on(const Cube& cube, const VarId& x) {
  SplitCube s;
  for (const auto& [v, p] : cube.bool_lits()) {
    if (!s.others.add_bool(v, p)) s.others_ok = false;
  }
  auto strip = [&](const LinearTerm& t, BigInt& c_out) {
    LinearTerm rest;
    c_out = 0;
    for (const auto& [v, c] : t.coeffs()) {
      if (v == x) {
        c_out = c;
      } else {
        rest.add(v, c);
      }
    }
    return rest;
  };
  for (const auto& a : cube.lin_atoms()) {
    BigInt c;
    LinearTerm rest = strip(a.term, c);
    if (c == 0) {
      if (!s.others.add_lin(a.term, a.rel, a.bound)) s.others_ok = false;
    } else {
      s.lins.push_back({c, std::move(rest), a.rel, a.bound});
    }
  }
  for (const auto& d : cube.div_atoms()) {
    BigInt c;
    LinearTerm rest = strip(d.term, c);
    if (c == 0) {
      if (!s.others.add_div(d.modulus, d.term, d.offset)) s.others_ok = false;
    } else {
      s.divs.push_back({d.modulus, c, std::move(rest), d.offset});
    }
  }
  return s;
}

// Substitute x := value (affine) into the x-atoms and merge with `others`.
// c*x + rest rel bound becomes c*value + rest rel bound.
bool substitute_into(Cube& out, const SplitCube& s, const Affine& value) {
  for (const auto& a : s.lins) {
    LinearTerm t = value.term.scaled(a.c).plus(a.rest);
    if (!out.add_lin(t, a.rel, a.bound - a.c * value.k)) return false;
  }
  for (const auto& d : s.divs) {
    LinearTerm t = value.term.scaled(d.c).plus(d.rest);
    if (!out.add_div(d.modulus, t, d.offset + d.c * value.k)) return false;
  }
  return true;
}

constexpr long kMaxProjectionPeriod = 4096;

// Exact projection of one integer variable out of one cube.
std::vector<Cube> project_var(const Cube& cube, const VarId& x) {
  SplitCube s = split_on(cube, x);
  if (!s.others_ok) return {};
  if (s.lins.empty() && s.divs.empty()) return {cube};

  // Fast path: an equality with unit coefficient pins x to an affine term.
  for (std::size_t i = 0; i < s.lins.size(); ++i) {
    const auto& a = s.lins[i];
    if (a.rel != Rel::Eq || (a.c != 1 && a.c != -1)) continue;
    // c*x + rest = bound  =>  x = c*(bound - rest)
    Affine value{a.rest.scaled(-a.c), a.c * a.bound};
    SplitCube rest = s;
    rest.lins.erase(rest.lins.begin() + static_cast<long>(i));
    Cube out = s.others;
    if (!substitute_into(out, rest, value)) return {};
    return {std::move(out)};
  }

  // Scale all coefficients of x to a common magnitude m, switch to z = m*x
  // (coefficient +-1), and remember that z must be divisible by m.
  BigInt m = 1;
  for (const auto& a : s.lins) m = big_lcm(m, a.c < 0 ? -a.c : a.c);
  for (const auto& d : s.divs) m = big_lcm(m, d.c < 0 ? -d.c : d.c);

  // z-atoms after scaling, as bounds/equalities/divisibilities on z.
  std::vector<Affine> uppers;  // z <= value
  std::vector<Affine> lowers;  // z >= value
  std::vector<Affine> eqs;     // z = value
  struct ZDiv {
    BigInt modulus;
    LinearTerm rest;
    BigInt offset;
  };  // modulus | (z + rest + offset)
  std::vector<ZDiv> zdivs;

  for (const auto& a : s.lins) {
    BigInt mag = a.c < 0 ? -a.c : a.c;
    BigInt scale = m / mag;
    // After scaling: sign*z + scale*rest rel scale*bound, sign = sgn(c).
    LinearTerm rest = a.rest.scaled(scale);
    BigInt bound = a.bound * scale;
    bool pos = a.c > 0;
    if (a.rel == Rel::Eq) {
      // z = +-(bound - rest)
      eqs.push_back(pos ? Affine{rest.negated(), bound}
                        : Affine{rest, -bound});
    } else if (pos) {
      uppers.push_back({rest.negated(), bound});
    } else {
      lowers.push_back({rest, -bound});
    }
  }
  for (const auto& d : s.divs) {
    BigInt mag = d.c < 0 ? -d.c : d.c;
    BigInt scale = m / mag;
    BigInt modulus = d.modulus * scale;
    LinearTerm rest = d.rest.scaled(scale);
    BigInt offset = d.offset * scale;
    if (d.c < 0) {
      // modulus | (-z + rest + offset)  <=>  modulus | (z - rest - offset)
      rest = rest.negated();
      offset = -offset;
    }
    zdivs.push_back({modulus, std::move(rest), offset});
  }
  if (m > 1) zdivs.push_back({m, LinearTerm{}, 0});

  auto apply_z = [&](const Affine& z, const std::vector<Affine>& skip_eq,
                     bool include_bounds) -> std::optional<Cube> {
    Cube out = s.others;
    if (include_bounds) {
      for (const auto& u : uppers) {
        // z <= u: z.term - u.term <= u.k - z.k
        if (!out.add_lin(z.term.plus(u.term.negated()), Rel::Le, u.k - z.k)) {
          return std::nullopt;
        }
      }
      for (const auto& l : lowers) {
        if (!out.add_lin(l.term.plus(z.term.negated()), Rel::Le, z.k - l.k)) {
          return std::nullopt;
        }
      }
      for (const auto& e : skip_eq) {
        if (!out.add_lin(z.term.plus(e.term.negated()), Rel::Eq, e.k - z.k)) {
          return std::nullopt;
        }
      }
    }
    for (const auto& d : zdivs) {
      if (!out.add_div(d.modulus, z.term.plus(d.rest), z.k + d.offset)) {
        return std::nullopt;
      }
    }
    return out;
  };

  if (!eqs.empty()) {
    // Pin z to the first equality; impose the others as constraints.
    Affine z = eqs.front();
    std::vector<Affine> other_eqs(eqs.begin() + 1, eqs.end());
    // Reuse apply_z with bounds; fold remaining equalities in as well.
    Cube out = s.others;
    bool ok = true;
    for (const auto& u : uppers) {
      ok = ok && out.add_lin(z.term.plus(u.term.negated()), Rel::Le, u.k - z.k);
    }
    for (const auto& l : lowers) {
      ok = ok && out.add_lin(l.term.plus(z.term.negated()), Rel::Le, z.k - l.k);
    }
    for (const auto& e : other_eqs) {
      ok = ok && out.add_lin(z.term.plus(e.term.negated()), Rel::Eq, e.k - z.k);
    }
    for (const auto& d : zdivs) {
      ok = ok && out.add_div(d.modulus, z.term.plus(d.rest), z.k + d.offset);
    }
    if (!ok) return {};
    return {std::move(out)};
  }

  BigInt period = 1;
  for (const auto& d : zdivs) period = big_lcm(period, d.modulus);
  if (period > kMaxProjectionPeriod) {
    throw UnsupportedAtomError(
        "integer projection period exceeds the supported limit");
  }

  std::vector<Cube> results;
  if (lowers.empty()) {
    // No lower bounds: arbitrarily small witnesses satisfy every upper
    // bound; only the divisibility pattern matters.
    for (BigInt j = 1; j <= period; ++j) {
      Cube out = s.others;
      bool ok = true;
      for (const auto& d : zdivs) {
        ok = ok && out.add_div(d.modulus, d.rest, j + d.offset);
      }
      if (ok) results.push_back(std::move(out));
    }
  } else {
    for (const auto& l : lowers) {
      for (BigInt j = 0; j < period; ++j) {
        Affine z{l.term, l.k + j};
        auto out = apply_z(z, {}, true);
        if (out) results.push_back(std::move(*out));
      }
    }
  }
  return results;
}

bool is_arith(const VarId& v) { return v.kind != Kind::Boolean; }

// Project out every integer variable in `vars` from one cube; returns the
// resulting cubes (still possibly carrying divisibility facts).
std::vector<Cube> project_all(const Cube& cube, const std::set<VarId>& vars) {
  std::vector<Cube> work{cube};
  std::vector<Cube> done;
  while (!work.empty()) {
    Cube c = std::move(work.back());
    work.pop_back();
    // Choose the next variable to project: prefer one pinned by a
    // unit-coefficient equality (pure substitution), else fewest atoms.
    const VarId* best = nullptr;
    bool best_subst = false;
    std::size_t best_count = 0;
    std::set<VarId> present;
    c.collect_vars(present);
    for (const VarId& v : present) {
      if (!vars.count(v) || !is_arith(v)) continue;
      bool subst = false;
      std::size_t count = 0;
      for (const auto& a : c.lin_atoms()) {
        BigInt coef = a.term.coeff(v);
        if (coef == 0) continue;
        ++count;
        if (a.rel == Rel::Eq && (coef == 1 || coef == -1)) subst = true;
      }
      for (const auto& d : c.div_atoms()) {
        if (d.term.coeff(v) != 0) ++count;
      }
      if (!best || (subst && !best_subst) ||
          (subst == best_subst && count < best_count)) {
        best = &v;
        best_subst = subst;
        best_count = count;
      }
    }
    if (!best) {
      done.push_back(std::move(c));
      continue;
    }
    for (Cube& r : project_var(c, *best)) work.push_back(std::move(r));
  }
  return done;
}

constexpr long kMaxDivExpansion = 8192;

// Range of a variable implied by the cube's own single-variable atoms.
std::optional<std::pair<BigInt, BigInt>> single_var_range(const Cube& c,
                                                          const VarId& v) {
  LinearTerm key;
  key.add(v, 1);
  auto it = c.ranges().find(key);
  if (it == c.ranges().end()) return std::nullopt;
  const TermRange& r = it->second;
  if (r.eq) return std::make_pair(*r.eq, *r.eq);
  if (r.lb && r.ub) return std::make_pair(*r.lb, *r.ub);
  return std::nullopt;
}

// Remove divisibility facts from a cube by case-splitting variables that
// the cube itself bounds to a finite range.
void expand_divs(const Cube& cube, std::vector<Cube>& out, long& budget) {
  if (!cube.has_divs()) {
    out.push_back(cube);
    return;
  }
  const Divides& d = *cube.div_atoms().begin();
  for (const auto& [v, c] : d.term.coeffs()) {
    auto range = single_var_range(cube, v);
    if (!range) continue;
    BigInt width = range->second - range->first + 1;
    if (width > 128) continue;
    budget -= static_cast<long>(width);
    if (budget < 0) {
      throw UnsupportedAtomError(
          "divisibility expansion exceeds the supported budget");
    }
    for (BigInt val = range->first; val <= range->second; ++val) {
      // Fix v = val and fold the value into every divisibility fact.
      Cube fixed;
      bool ok = true;
      for (const auto& [bv, p] : cube.bool_lits()) {
        ok = ok && fixed.add_bool(bv, p);
      }
      for (const auto& a : cube.lin_atoms()) {
        ok = ok && fixed.add_lin(a.term, a.rel, a.bound);
      }
      if (!ok) continue;
      LinearTerm vt;
      vt.add(v, 1);
      if (!fixed.add_lin(vt, Rel::Eq, val)) continue;
      for (const auto& dd : cube.div_atoms()) {
        BigInt coef = dd.term.coeff(v);
        LinearTerm rest;
        for (const auto& [tv, tc] : dd.term.coeffs()) {
          if (!(tv == v)) rest.add(tv, tc);
        }
        if (!fixed.add_div(dd.modulus, rest, dd.offset + coef * val)) {
          ok = false;
          break;
        }
      }
      if (ok) expand_divs(fixed, out, budget);
    }
    return;
  }
  throw UnsupportedAtomError(
      "cannot express a divisibility constraint over unbounded variables in "
      "the result");
}

// Cached exact satisfiability of a single cube.
class CubeSatCache {
public:
  std::optional<bool> lookup(const std::string& key) {
    std::shared_lock lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }
  void store(const std::string& key, bool value) {
    std::unique_lock lock(mutex_);
    if (map_.size() > 200000) map_.clear();
    map_.emplace(key, value);
  }

private:
  std::shared_mutex mutex_;
  std::unordered_map<std::string, bool> map_;
};

CubeSatCache& sat_cache() {
  static CubeSatCache cache;
  return cache;
}

bool cube_satisfiable(const Cube& c) {
  // Boolean literals are internally consistent by construction; only the
  // arithmetic part decides satisfiability.
  if (c.ranges().empty() && c.div_atoms().empty()) return true;
  std::string key = c.to_string();
  if (auto hit = sat_cache().lookup(key)) return *hit;
  std::set<VarId> vars;
  c.collect_vars(vars);
  std::set<VarId> arith;
  for (const VarId& v : vars) {
    if (is_arith(v)) arith.insert(v);
  }
  bool sat = !project_all(c, arith).empty();
  sat_cache().store(key, sat);
  return sat;
}

}  // namespace

bool satisfiable(const Formula& f) {
  for (const Cube& c : f.cubes()) {
    if (cube_satisfiable(c)) return true;
  }
  return false;
}

namespace {

constexpr std::size_t kMaxEntailsBranches = 50000;
constexpr std::size_t kSatFilterThreshold = 48;

std::size_t atom_weight(const Cube& c) {
  return c.bool_lits().size() + c.lin_atoms().size() + c.div_atoms().size();
}

// Does a single cube entail g? Checked as unsatisfiability of c && !g,
// distributing the negation one disjunct of g at a time. Branches are the
// remaining proof obligations (each must turn out unsatisfiable), so a
// branch may be dropped whenever it implies another kept branch.
bool cube_entails(const Cube& c, const Formula& g) {
  for (const Cube& d : g.cubes()) {
    if (d.subsumes(c)) return true;
  }
  // Distribute small disjuncts first: they fan out less and their
  // contradictions kill branches early.
  std::vector<const Cube*> order;
  order.reserve(g.cubes().size());
  for (const Cube& d : g.cubes()) order.push_back(&d);
  std::stable_sort(order.begin(), order.end(),
                   [](const Cube* a, const Cube* b) {
                     return atom_weight(*a) < atom_weight(*b);
                   });
  std::vector<Cube> branches{c};
  for (const Cube* dp : order) {
    const Cube& d = *dp;
    std::vector<Cube> next;
    auto push = [&](Cube&& nc) {
      next.push_back(std::move(nc));
      if (next.size() > kMaxEntailsBranches) {
        throw Error("entailment check exceeded its branch budget");
      }
    };
    for (const Cube& b : branches) {
      for (const auto& [v, p] : d.bool_lits()) {
        Cube nb = b;
        if (nb.add_bool(v, !p)) push(std::move(nb));
      }
      for (const auto& a : d.lin_atoms()) {
        if (a.rel == Rel::Eq) {
          Cube low = b;
          if (low.add_lin(a.term, Rel::Le, a.bound - 1)) push(std::move(low));
          Cube high = b;
          if (high.add_lin(a.term.negated(), Rel::Le, -a.bound - 1)) {
            push(std::move(high));
          }
        } else {
          Cube nb = b;
          if (nb.add_lin(a.term.negated(), Rel::Le, -a.bound - 1)) {
            push(std::move(nb));
          }
        }
      }
      for (const auto& dv : d.div_atoms()) {
        for (BigInt r = 1; r < dv.modulus; ++r) {
          Cube nb = b;
          if (nb.add_div(dv.modulus, dv.term, dv.offset - r)) {
            push(std::move(nb));
          }
        }
      }
    }
    if (next.size() > 1) {
      // Keep only the weakest branches (normalization also dedups).
      next = Formula::of_cubes(std::move(next)).cubes();
    }
    if (next.size() > kSatFilterThreshold) {
      std::vector<Cube> kept;
      kept.reserve(next.size());
      for (Cube& b : next) {
        if (cube_satisfiable(b)) kept.push_back(std::move(b));
      }
      next = std::move(kept);
    }
    branches = std::move(next);
    if (branches.empty()) return true;
  }
  for (const Cube& b : branches) {
    if (cube_satisfiable(b)) return false;
  }
  return true;
}

}  // namespace

bool entails(const Formula& f, const Formula& g) {
  for (const Cube& c : f.cubes()) {
    if (!cube_entails(c, g)) return false;
  }
  return true;
}

Formula eliminate(const Formula& f, const std::set<VarId>& vars) {
  Formula current = f;
  for (const VarId& v : vars) {
    if (v.kind == Kind::Boolean) {
      current = assign_bool(current, v, true) || assign_bool(current, v, false);
    }
  }
  std::vector<Cube> projected;
  for (const Cube& c : current.cubes()) {
    for (Cube& r : project_all(c, vars)) projected.push_back(std::move(r));
  }
  std::vector<Cube> clean;
  long budget = kMaxDivExpansion;
  for (const Cube& c : projected) {
    expand_divs(c, clean, budget);
  }
  return Formula::of_cubes(std::move(clean));
}

}  // namespace predkit
