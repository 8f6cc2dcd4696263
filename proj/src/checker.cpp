#include "predkit/checker.hpp"

#include <algorithm>

#include "predkit/errors.hpp"

namespace predkit {

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Holds: return "Holds";
    case VerdictKind::NotShown: return "NotShown";
    case VerdictKind::Nonconvergent: return "Nonconvergent";
  }
  return "?";
}

Formula pre_image(const Formula& relation, const Formula& target) {
  Formula stepped = relation && to_next_state(target);
  std::set<VarId> next_vars;
  for (const VarId& v : stepped.free_vars()) {
    if (v.is_next()) next_vars.insert(v);
  }
  return eliminate(stepped, next_vars);
}

Formula pre_image(const TransitionSystem& ts, const Formula& target) {
  Formula out = Formula::bottom();
  for (const Transition& t : ts.transitions) {
    out = out || pre_image(t.relation, target);
  }
  return out;
}

namespace {

// Drops from `cur` every single-term bound that grew past the matching
// extremal bound of `prev`; equalities and stable bounds are kept. The
// result contains cur, so increasing chains only get larger.
class Widener {
public:
  explicit Widener(bool enabled) : enabled_(enabled) {}

  Formula widen(const Formula& prev, const Formula& cur) {
    if (!enabled_) return cur;
    // Extremal bounds per term over the previous iterate.
    std::map<LinearTerm, std::optional<BigInt>> max_ub;
    std::map<LinearTerm, std::optional<BigInt>> min_lb;
    std::set<LinearTerm> prev_terms;
    for (const Cube& c : prev.cubes()) {
      for (const auto& [term, range] : c.ranges()) {
        prev_terms.insert(term);
        std::optional<BigInt> ub = range.eq ? range.eq : range.ub;
        std::optional<BigInt> lb = range.eq ? range.eq : range.lb;
        auto& mu = max_ub[term];
        if (ub && (!mu || *ub > *mu)) mu = ub;
        auto& ml = min_lb[term];
        if (lb && (!ml || *lb < *ml)) ml = lb;
      }
    }
    std::vector<Cube> widened;
    for (const Cube& c : cur.cubes()) {
      Cube w;
      for (const auto& [v, pos] : c.bool_lits()) w.add_bool(v, pos);
      for (const Divides& d : c.div_atoms()) {
        w.add_div(d.modulus, d.term, d.offset);
      }
      for (const auto& [term, range] : c.ranges()) {
        if (range.eq) {
          w.add_lin(term, Rel::Eq, *range.eq);
          continue;
        }
        bool seen = prev_terms.count(term) > 0;
        if (range.ub) {
          const auto& mu = max_ub[term];
          if (seen && mu && *range.ub > *mu) {
            fired_ = true;  // growing upper bound: drop it
          } else {
            w.add_lin(term, Rel::Le, *range.ub);
          }
        }
        if (range.lb) {
          const auto& ml = min_lb[term];
          if (seen && ml && *range.lb < *ml) {
            fired_ = true;  // sinking lower bound: drop it
          } else {
            w.add_lin(term.negated(), Rel::Le, -*range.lb);
          }
        }
      }
      widened.push_back(std::move(w));
    }
    return Formula::of_cubes(std::move(widened));
  }

  bool fired() const { return fired_; }

private:
  bool enabled_;
  bool fired_ = false;
};

struct EvalContext {
  const TransitionSystem& ts;
  CheckLimits limits;
  std::size_t max_iterations_seen = 0;
  bool widened = false;
  bool nonconvergent = false;
  std::string detail;

  void note_cap(const std::string& what) {
    if (!nonconvergent) {
      detail = what + " did not stabilize within " +
               std::to_string(limits.max_iterations) + " iterations";
    }
    nonconvergent = true;
  }
};

Formula eval(const CtlProperty& p, EvalContext& ctx);

// Least fixpoint of Y = base || trigger && pre(Y) (trigger TRUE for EF).
Formula least_fixpoint(const Formula& base, const Formula& trigger,
                       EvalContext& ctx, const char* what) {
  Formula y = base;
  Widener widener(ctx.limits.widen_after > 0);
  for (std::size_t iter = 1;; ++iter) {
    Formula next = y || (trigger && ctx.ts.restriction && pre_image(ctx.ts, y));
    if (entails(next, y)) {
      ctx.max_iterations_seen = std::max(ctx.max_iterations_seen, iter);
      break;
    }
    if (iter >= ctx.limits.max_iterations) {
      ctx.max_iterations_seen = std::max(ctx.max_iterations_seen, iter);
      ctx.note_cap(what);
      y = next;
      break;
    }
    if (ctx.limits.widen_after > 0 && iter >= ctx.limits.widen_after) {
      next = widener.widen(y, next);
    }
    y = next;
  }
  if (widener.fired()) ctx.widened = true;
  return y;
}

// Greatest fixpoint of Y = Y && pre(Y), from base.
Formula greatest_fixpoint(const Formula& base, EvalContext& ctx,
                          const char* what) {
  Formula y = base;
  for (std::size_t iter = 1;; ++iter) {
    Formula next = y && pre_image(ctx.ts, y);
    if (entails(y, next)) {
      ctx.max_iterations_seen = std::max(ctx.max_iterations_seen, iter);
      break;
    }
    if (iter >= ctx.limits.max_iterations) {
      ctx.max_iterations_seen = std::max(ctx.max_iterations_seen, iter);
      ctx.note_cap(what);
      y = next;
      break;
    }
    y = next;
  }
  return y;
}

Formula eval(const CtlProperty& p, EvalContext& ctx) {
  const Formula& s = ctx.ts.restriction;
  switch (p.op) {
    case CtlOp::Atom:
      return p.leaf && s;
    case CtlOp::And:
      return eval(p.children[0], ctx) && eval(p.children[1], ctx);
    case CtlOp::Or:
      return eval(p.children[0], ctx) || eval(p.children[1], ctx);
    case CtlOp::EX:
      return s && pre_image(ctx.ts, eval(p.children[0], ctx));
    case CtlOp::EF:
      return least_fixpoint(eval(p.children[0], ctx), Formula::top(), ctx,
                            "EF fixpoint");
    case CtlOp::EU: {
      Formula f = eval(p.children[0], ctx);
      Formula g = eval(p.children[1], ctx);
      return least_fixpoint(g, f, ctx, "EU fixpoint");
    }
    case CtlOp::EG:
      return greatest_fixpoint(eval(p.children[0], ctx), ctx, "EG fixpoint");
    default:
      throw UnsupportedOperatorError(
          "property is not universal: negation contains " + p.to_string());
  }
}

}  // namespace

Verdict check(const TransitionSystem& ts, const CtlProperty& prop,
              const CheckLimits& limits) {
  CtlProperty neg = negate_property(prop);
  CtlFragment frag = classify(neg);
  if (frag == CtlFragment::Universal || frag == CtlFragment::Mixed) {
    throw UnsupportedOperatorError(
        "property is not universal after negation normal form");
  }

  EvalContext ctx{ts, limits};
  Formula bad = eval(neg, ctx);
  Formula offending = bad && ts.init && ts.restriction;

  Verdict v;
  v.iterations = ctx.max_iterations_seen;
  v.widened = ctx.widened;
  if (ctx.nonconvergent) {
    v.kind = VerdictKind::Nonconvergent;
    v.detail = ctx.detail;
    return v;
  }
  if (satisfiable(offending)) {
    v.kind = VerdictKind::NotShown;
    v.witness = offending;
    v.detail = "initial states can reach the negated property";
    return v;
  }
  v.kind = VerdictKind::Holds;
  return v;
}

}  // namespace predkit
