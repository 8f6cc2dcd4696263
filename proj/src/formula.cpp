#include "predkit/formula.hpp"

#include <algorithm>
#include <sstream>

namespace predkit {

// --------------------------------------------------------------------------
// LinearTerm
// --------------------------------------------------------------------------

void LinearTerm::add(const VarId& v, const BigInt& coeff) {
  if (v.kind == Kind::Boolean) {
    throw UnsupportedAtomError("boolean variable '" + v.to_string() +
                               "' used in a linear term");
  }
  if (coeff == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(v, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) coeffs_.erase(it);
  }
}

BigInt LinearTerm::coeff(const VarId& v) const {
  auto it = coeffs_.find(v);
  return it == coeffs_.end() ? BigInt(0) : it->second;
}

LinearTerm LinearTerm::negated() const {
  LinearTerm r;
  for (const auto& [v, c] : coeffs_) r.coeffs_.emplace(v, -c);
  return r;
}

LinearTerm LinearTerm::scaled(const BigInt& factor) const {
  LinearTerm r;
  if (factor == 0) return r;
  for (const auto& [v, c] : coeffs_) r.coeffs_.emplace(v, c * factor);
  return r;
}

LinearTerm LinearTerm::plus(const LinearTerm& other) const {
  LinearTerm r = *this;
  for (const auto& [v, c] : other.coeffs_) r.add(v, c);
  return r;
}

BigInt LinearTerm::gcd() const {
  BigInt g = 0;
  for (const auto& [v, c] : coeffs_) g = big_gcd(g, c < 0 ? -c : c);
  return g;
}

bool LinearTerm::leading_positive() const {
  if (coeffs_.empty()) return true;
  return coeffs_.begin()->second > 0;
}

std::string LinearTerm::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [v, c] : coeffs_) {
    BigInt mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) out << "-";
      first = false;
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    if (mag != 1) out << mag << "*";
    out << v.to_string();
  }
  return out.str();
}

namespace {

LinearTerm divided(const LinearTerm& t, const BigInt& g) {
  LinearTerm r;
  for (const auto& [v, c] : t.coeffs()) r.add(v, c / g);
  return r;
}

}  // namespace

// --------------------------------------------------------------------------
// Atom printing
// --------------------------------------------------------------------------

std::string LinCon::to_string() const {
  return term.to_string() + (rel == Rel::Eq ? " = " : " <= ") + bound.str();
}

std::string Divides::to_string() const {
  std::string inner = term.to_string();
  if (offset != 0) inner += " + " + offset.str();
  return "mod(" + inner + ", " + modulus.str() + ") = 0";
}

// --------------------------------------------------------------------------
// Cube
// --------------------------------------------------------------------------

bool Cube::add_bool(const VarId& v, bool positive) {
  if (v.kind != Kind::Boolean) {
    throw UnsupportedAtomError("non-boolean variable '" + v.to_string() +
                               "' used as a boolean literal");
  }
  auto [it, inserted] = bools_.try_emplace(v, positive);
  return inserted || it->second == positive;
}

namespace {

// After merging, keep each term entry canonical: a closed pair of bounds
// becomes an equality, and an equality supersedes its bounds.
bool fixup_range(TermRange& r) {
  if (r.lb && r.ub) {
    if (*r.lb > *r.ub) return false;
    if (*r.lb == *r.ub) {
      if (r.eq && *r.eq != *r.lb) return false;
      r.eq = *r.lb;
    }
  }
  if (r.eq) {
    if (r.lb && *r.lb > *r.eq) return false;
    if (r.ub && *r.ub < *r.eq) return false;
    r.lb.reset();
    r.ub.reset();
  }
  return true;
}

}  // namespace

bool Cube::add_lin(LinearTerm term, Rel rel, BigInt bound) {
  if (term.empty()) {
    return rel == Rel::Eq ? bound == 0 : bound >= 0;
  }
  BigInt g = term.gcd();
  if (rel == Rel::Eq) {
    if (bound % g != 0) return false;
    term = divided(term, g);
    bound /= g;
    if (!term.leading_positive()) {
      term = term.negated();
      bound = -bound;
    }
    TermRange& r = ranges_[term];
    if (r.eq && *r.eq != bound) return false;
    r.eq = bound;
    if (!fixup_range(r)) return false;
  } else {
    term = divided(term, g);
    bound = floor_div(bound, g);
    if (term.leading_positive()) {
      TermRange& r = ranges_[term];
      if (!r.ub || *r.ub > bound) r.ub = bound;
      if (!fixup_range(r)) return false;
    } else {
      LinearTerm canon = term.negated();
      BigInt lb = -bound;
      TermRange& r = ranges_[canon];
      if (!r.lb || *r.lb < lb) r.lb = lb;
      if (!fixup_range(r)) return false;
    }
  }
  return true;
}

bool Cube::add_div(BigInt modulus, LinearTerm term, BigInt offset) {
  if (modulus < 0) modulus = -modulus;
  if (modulus == 0) {
    // 0 | e is e = 0.
    return add_lin(term, Rel::Eq, -offset);
  }
  if (modulus == 1) return true;
  LinearTerm reduced;
  for (const auto& [v, c] : term.coeffs()) reduced.add(v, floor_mod(c, modulus));
  offset = floor_mod(offset, modulus);
  if (reduced.empty()) return offset == 0;
  BigInt g = big_gcd(reduced.gcd(), modulus);
  if (g > 1) {
    if (offset % g != 0) return false;
    reduced = divided(reduced, g);
    offset /= g;
    modulus /= g;
    if (modulus == 1) return true;
  }
  if (!reduced.leading_positive()) {
    reduced = reduced.negated();
    offset = -offset;
  }
  offset = floor_mod(offset, modulus);
  divs_.insert(Divides{modulus, reduced, offset});
  return true;
}

bool Cube::add_atoms_of(const Cube& other) {
  for (const auto& [v, p] : other.bools_) {
    if (!add_bool(v, p)) return false;
  }
  for (const auto& [t, r] : other.ranges_) {
    if (r.eq && !add_lin(t, Rel::Eq, *r.eq)) return false;
    if (r.ub && !add_lin(t, Rel::Le, *r.ub)) return false;
    if (r.lb && !add_lin(t.negated(), Rel::Le, -*r.lb)) return false;
  }
  for (const auto& d : other.divs_) {
    if (!add_div(d.modulus, d.term, d.offset)) return false;
  }
  return true;
}

std::vector<LinCon> Cube::lin_atoms() const {
  std::vector<LinCon> out;
  for (const auto& [t, r] : ranges_) {
    if (r.eq) out.push_back(LinCon{t, Rel::Eq, *r.eq});
    if (r.ub) out.push_back(LinCon{t, Rel::Le, *r.ub});
    if (r.lb) out.push_back(LinCon{t.negated(), Rel::Le, -*r.lb});
  }
  return out;
}

void Cube::collect_vars(std::set<VarId>& out) const {
  for (const auto& [v, p] : bools_) out.insert(v);
  for (const auto& [t, r] : ranges_) {
    for (const auto& [v, c] : t.coeffs()) out.insert(v);
  }
  for (const auto& d : divs_) {
    for (const auto& [v, c] : d.term.coeffs()) out.insert(v);
  }
}

bool Cube::mentions(const VarId& v) const {
  if (bools_.count(v)) return true;
  for (const auto& [t, r] : ranges_) {
    if (t.coeff(v) != 0) return true;
  }
  for (const auto& d : divs_) {
    if (d.term.coeff(v) != 0) return true;
  }
  return false;
}

bool Cube::subsumes(const Cube& stronger) const {
  for (const auto& [v, p] : bools_) {
    auto it = stronger.bools_.find(v);
    if (it == stronger.bools_.end() || it->second != p) return false;
  }
  for (const auto& [t, r] : ranges_) {
    auto it = stronger.ranges_.find(t);
    if (it == stronger.ranges_.end()) return false;
    const TermRange& s = it->second;
    if (r.eq && !(s.eq && *s.eq == *r.eq)) return false;
    if (r.ub && !((s.eq && *s.eq <= *r.ub) || (s.ub && *s.ub <= *r.ub))) {
      return false;
    }
    if (r.lb && !((s.eq && *s.eq >= *r.lb) || (s.lb && *s.lb >= *r.lb))) {
      return false;
    }
  }
  for (const auto& d : divs_) {
    if (!stronger.divs_.count(d)) return false;
  }
  return true;
}

namespace {

BigInt term_value(const LinearTerm& t,
                  const std::map<VarId, BigInt>& assignment) {
  BigInt sum = 0;
  for (const auto& [v, c] : t.coeffs()) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      throw Error("evaluate: no value for variable '" + v.to_string() + "'");
    }
    sum += c * it->second;
  }
  return sum;
}

}  // namespace

bool Cube::evaluate(const std::map<VarId, BigInt>& assignment) const {
  for (const auto& [v, p] : bools_) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      throw Error("evaluate: no value for variable '" + v.to_string() + "'");
    }
    if ((it->second != 0) != p) return false;
  }
  for (const auto& [t, r] : ranges_) {
    BigInt val = term_value(t, assignment);
    if (r.eq && val != *r.eq) return false;
    if (r.ub && val > *r.ub) return false;
    if (r.lb && val < *r.lb) return false;
  }
  for (const auto& d : divs_) {
    if (floor_mod(term_value(d.term, assignment) + d.offset, d.modulus) != 0) {
      return false;
    }
  }
  return true;
}

std::string Cube::to_string() const {
  if (empty()) return "true";
  std::vector<std::string> parts;
  for (const auto& [v, p] : bools_) {
    parts.push_back((p ? "" : "!") + v.to_string());
  }
  for (const auto& a : lin_atoms()) parts.push_back(a.to_string());
  for (const auto& d : divs_) parts.push_back(d.to_string());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " && ";
    out += parts[i];
  }
  return out;
}

// --------------------------------------------------------------------------
// Formula
// --------------------------------------------------------------------------

Formula Formula::top() {
  Formula f;
  f.cubes_.emplace_back();
  return f;
}

Formula Formula::bottom() { return Formula(); }

Formula Formula::of_cube(Cube c) {
  Formula f;
  f.cubes_.push_back(std::move(c));
  f.normalize();
  return f;
}

Formula Formula::of_cubes(std::vector<Cube> cs) {
  Formula f;
  f.cubes_ = std::move(cs);
  f.normalize();
  return f;
}

Formula Formula::bool_lit(const VarId& v, bool positive) {
  Cube c;
  if (!c.add_bool(v, positive)) return bottom();
  return of_cube(std::move(c));
}

Formula Formula::compare(const LinearTerm& term, Cmp cmp, const BigInt& bound) {
  auto single = [&](Rel rel, const LinearTerm& t, const BigInt& b) {
    Cube c;
    if (!c.add_lin(t, rel, b)) return bottom();
    return of_cube(std::move(c));
  };
  switch (cmp) {
    case Cmp::Eq:
      return single(Rel::Eq, term, bound);
    case Cmp::Le:
      return single(Rel::Le, term, bound);
    case Cmp::Lt:
      return single(Rel::Le, term, bound - 1);
    case Cmp::Ge:
      return single(Rel::Le, term.negated(), -bound);
    case Cmp::Gt:
      return single(Rel::Le, term.negated(), -bound - 1);
    case Cmp::Ne:
      return single(Rel::Le, term, bound - 1) ||
             single(Rel::Le, term.negated(), -bound - 1);
  }
  throw Error("compare: bad comparison operator");
}

void Formula::normalize() {
  for (const Cube& c : cubes_) {
    if (c.empty()) {
      cubes_.clear();
      cubes_.emplace_back();
      return;
    }
  }
  std::sort(cubes_.begin(), cubes_.end());
  cubes_.erase(std::unique(cubes_.begin(), cubes_.end()), cubes_.end());
  std::vector<bool> dead(cubes_.size(), false);
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    if (dead[i]) continue;
    for (std::size_t j = 0; j < cubes_.size(); ++j) {
      if (i == j || dead[j]) continue;
      if (cubes_[i].subsumes(cubes_[j])) dead[j] = true;
    }
  }
  std::vector<Cube> kept;
  kept.reserve(cubes_.size());
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    if (!dead[i]) kept.push_back(std::move(cubes_[i]));
  }
  cubes_ = std::move(kept);
}

std::set<VarId> Formula::free_vars() const {
  std::set<VarId> out;
  for (const Cube& c : cubes_) c.collect_vars(out);
  return out;
}

bool Formula::mentions(const VarId& v) const {
  for (const Cube& c : cubes_) {
    if (c.mentions(v)) return true;
  }
  return false;
}

bool Formula::has_divs() const {
  for (const Cube& c : cubes_) {
    if (c.has_divs()) return true;
  }
  return false;
}

bool Formula::evaluate(const std::map<VarId, BigInt>& assignment) const {
  for (const Cube& c : cubes_) {
    if (c.evaluate(assignment)) return true;
  }
  return false;
}

std::string Formula::to_string() const {
  if (is_false()) return "false";
  if (is_true()) return "true";
  std::string out;
  bool wrap = cubes_.size() > 1;
  for (std::size_t i = 0; i < cubes_.size(); ++i) {
    if (i) out += " || ";
    if (wrap) out += "(";
    out += cubes_[i].to_string();
    if (wrap) out += ")";
  }
  return out;
}

Formula operator||(const Formula& a, const Formula& b) {
  Formula r;
  r.cubes_ = a.cubes_;
  r.cubes_.insert(r.cubes_.end(), b.cubes_.begin(), b.cubes_.end());
  r.normalize();
  return r;
}

Formula operator&&(const Formula& a, const Formula& b) {
  Formula r;
  for (const Cube& ca : a.cubes_) {
    for (const Cube& cb : b.cubes_) {
      Cube merged = ca;
      if (merged.add_atoms_of(cb)) r.cubes_.push_back(std::move(merged));
    }
  }
  r.normalize();
  return r;
}

Formula negate(const Formula& f) {
  Formula result = Formula::top();
  for (const Cube& c : f.cubes()) {
    Formula clause = Formula::bottom();
    for (const auto& [v, p] : c.bool_lits()) {
      clause = clause || Formula::bool_lit(v, !p);
    }
    for (const auto& a : c.lin_atoms()) {
      if (a.rel == Rel::Eq) {
        clause = clause || Formula::compare(a.term, Cmp::Ne, a.bound);
      } else {
        clause = clause || Formula::compare(a.term, Cmp::Gt, a.bound);
      }
    }
    for (const auto& d : c.div_atoms()) {
      for (BigInt r = 1; r < d.modulus; ++r) {
        Cube shifted;
        if (shifted.add_div(d.modulus, d.term, d.offset - r)) {
          clause = clause || Formula::of_cube(std::move(shifted));
        }
      }
    }
    result = result && clause;
    if (result.is_false()) break;
  }
  return result;
}

namespace {

// Rebuild a cube without the boolean literals present in `strip`.
Cube strip_bools(const Cube& c, const std::map<VarId, Formula>& strip,
                 bool& ok) {
  Cube out;
  ok = true;
  for (const auto& [v, p] : c.bool_lits()) {
    if (strip.count(v)) continue;
    if (!out.add_bool(v, p)) ok = false;
  }
  for (const auto& [t, r] : c.ranges()) {
    if (r.eq && !out.add_lin(t, Rel::Eq, *r.eq)) ok = false;
    if (r.ub && !out.add_lin(t, Rel::Le, *r.ub)) ok = false;
    if (r.lb && !out.add_lin(t.negated(), Rel::Le, -*r.lb)) ok = false;
  }
  for (const auto& d : c.div_atoms()) {
    if (!out.add_div(d.modulus, d.term, d.offset)) ok = false;
  }
  return out;
}

}  // namespace

Formula substitute_bools(const Formula& f,
                         const std::map<VarId, Formula>& map) {
  Formula result = Formula::bottom();
  for (const Cube& c : f.cubes()) {
    bool ok = true;
    Formula part = Formula::of_cube(strip_bools(c, map, ok));
    if (!ok) continue;
    for (const auto& [v, p] : c.bool_lits()) {
      auto it = map.find(v);
      if (it == map.end()) continue;
      part = part && (p ? it->second : negate(it->second));
      if (part.is_false()) break;
    }
    result = result || part;
  }
  return result;
}

Formula assign_bool(const Formula& f, const VarId& v, bool value) {
  std::map<VarId, Formula> m;
  m.emplace(v, value ? Formula::top() : Formula::bottom());
  return substitute_bools(f, m);
}

Formula rename(const Formula& f, const std::map<VarId, VarId>& mapping) {
  std::set<VarId> occurring = f.free_vars();
  std::map<VarId, VarId> used;
  std::set<VarId> targets;
  for (const VarId& v : occurring) {
    auto it = mapping.find(v);
    if (it == mapping.end()) continue;
    used.emplace(v, it->second);
    if (!targets.insert(it->second).second) {
      throw CollisionError("rename: two variables map to '" +
                           it->second.to_string() + "'");
    }
  }
  for (const VarId& t : targets) {
    if (occurring.count(t) && !used.count(t)) {
      throw CollisionError("rename: target '" + t.to_string() +
                           "' captures an existing variable");
    }
  }
  auto map_var = [&](const VarId& v) {
    auto it = used.find(v);
    return it == used.end() ? v : it->second;
  };
  std::vector<Cube> out;
  for (const Cube& c : f.cubes()) {
    Cube nc;
    bool ok = true;
    for (const auto& [v, p] : c.bool_lits()) {
      VarId t = map_var(v);
      if (t.kind != Kind::Boolean) {
        throw CollisionError("rename: boolean '" + v.to_string() +
                             "' mapped to non-boolean '" + t.to_string() + "'");
      }
      if (!nc.add_bool(t, p)) ok = false;
    }
    auto map_term = [&](const LinearTerm& t) {
      LinearTerm nt;
      for (const auto& [v, coef] : t.coeffs()) nt.add(map_var(v), coef);
      return nt;
    };
    for (const auto& [t, r] : c.ranges()) {
      LinearTerm nt = map_term(t);
      if (r.eq && !nc.add_lin(nt, Rel::Eq, *r.eq)) ok = false;
      if (r.ub && !nc.add_lin(nt, Rel::Le, *r.ub)) ok = false;
      if (r.lb && !nc.add_lin(nt.negated(), Rel::Le, -*r.lb)) ok = false;
    }
    for (const auto& d : c.div_atoms()) {
      if (!nc.add_div(d.modulus, map_term(d.term), d.offset)) ok = false;
    }
    if (ok) out.push_back(std::move(nc));
  }
  return Formula::of_cubes(std::move(out));
}

Formula to_next_state(const Formula& f) {
  std::map<VarId, VarId> m;
  for (const VarId& v : f.free_vars()) {
    if (!v.is_next()) m.emplace(v, v.primed());
  }
  return rename(f, m);
}

Formula to_current_state(const Formula& f) {
  std::map<VarId, VarId> m;
  for (const VarId& v : f.free_vars()) {
    if (v.is_next()) m.emplace(v, v.unprimed());
  }
  return rename(f, m);
}

}  // namespace predkit
