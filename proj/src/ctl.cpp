#include "predkit/ctl.hpp"

#include "predkit/errors.hpp"

namespace predkit {

CtlProperty CtlProperty::atom(Formula f) {
  CtlProperty p;
  p.op = CtlOp::Atom;
  p.leaf = std::move(f);
  return p;
}

CtlProperty CtlProperty::unary(CtlOp op, CtlProperty child) {
  CtlProperty p;
  p.op = op;
  p.children.push_back(std::move(child));
  return p;
}

CtlProperty CtlProperty::binary(CtlOp op, CtlProperty left, CtlProperty right) {
  CtlProperty p;
  p.op = op;
  p.children.push_back(std::move(left));
  p.children.push_back(std::move(right));
  return p;
}

namespace {

const char* op_name(CtlOp op) {
  switch (op) {
    case CtlOp::AX: return "AX";
    case CtlOp::AG: return "AG";
    case CtlOp::AF: return "AF";
    case CtlOp::EX: return "EX";
    case CtlOp::EG: return "EG";
    case CtlOp::EF: return "EF";
    default: return "";
  }
}

}  // namespace

std::string CtlProperty::to_string() const {
  switch (op) {
    case CtlOp::Atom:
      return leaf.to_string();
    case CtlOp::Not:
      return "!(" + children[0].to_string() + ")";
    case CtlOp::And:
      return "(" + children[0].to_string() + " && " +
             children[1].to_string() + ")";
    case CtlOp::Or:
      return "(" + children[0].to_string() + " || " +
             children[1].to_string() + ")";
    case CtlOp::AU:
      return "A[" + children[0].to_string() + " U " +
             children[1].to_string() + "]";
    case CtlOp::EU:
      return "E[" + children[0].to_string() + " U " +
             children[1].to_string() + "]";
    default:
      return std::string(op_name(op)) + "(" + children[0].to_string() + ")";
  }
}

namespace {

CtlProperty nnf(const CtlProperty& p, bool negated);

CtlProperty nnf_children_unary(CtlOp op, const CtlProperty& p, bool negated) {
  return CtlProperty::unary(op, nnf(p.children[0], negated));
}

CtlProperty nnf(const CtlProperty& p, bool negated) {
  switch (p.op) {
    case CtlOp::Atom:
      return CtlProperty::atom(negated ? negate(p.leaf) : p.leaf);
    case CtlOp::Not:
      return nnf(p.children[0], !negated);
    case CtlOp::And:
      return CtlProperty::binary(negated ? CtlOp::Or : CtlOp::And,
                                 nnf(p.children[0], negated),
                                 nnf(p.children[1], negated));
    case CtlOp::Or:
      return CtlProperty::binary(negated ? CtlOp::And : CtlOp::Or,
                                 nnf(p.children[0], negated),
                                 nnf(p.children[1], negated));
    case CtlOp::AX:
      return nnf_children_unary(negated ? CtlOp::EX : CtlOp::AX, p, negated);
    case CtlOp::EX:
      return nnf_children_unary(negated ? CtlOp::AX : CtlOp::EX, p, negated);
    case CtlOp::AG:
      return nnf_children_unary(negated ? CtlOp::EF : CtlOp::AG, p, negated);
    case CtlOp::EF:
      return nnf_children_unary(negated ? CtlOp::AG : CtlOp::EF, p, negated);
    case CtlOp::AF:
      return nnf_children_unary(negated ? CtlOp::EG : CtlOp::AF, p, negated);
    case CtlOp::EG:
      return nnf_children_unary(negated ? CtlOp::AF : CtlOp::EG, p, negated);
    case CtlOp::AU: {
      CtlProperty f = nnf(p.children[0], negated);
      CtlProperty g = nnf(p.children[1], negated);
      if (!negated) return CtlProperty::binary(CtlOp::AU, f, g);
      // !A[f U g] = E[!g U (!f && !g)] || EG !g, with f,g already negated.
      CtlProperty both = CtlProperty::binary(CtlOp::And, f, g);
      return CtlProperty::binary(
          CtlOp::Or, CtlProperty::binary(CtlOp::EU, g, both),
          CtlProperty::unary(CtlOp::EG, g));
    }
    case CtlOp::EU: {
      CtlProperty f = nnf(p.children[0], negated);
      CtlProperty g = nnf(p.children[1], negated);
      if (!negated) return CtlProperty::binary(CtlOp::EU, f, g);
      CtlProperty both = CtlProperty::binary(CtlOp::And, f, g);
      return CtlProperty::binary(
          CtlOp::Or, CtlProperty::binary(CtlOp::AU, g, both),
          CtlProperty::unary(CtlOp::AG, g));
    }
  }
  throw Error("to_nnf: bad property node");
}

}  // namespace

CtlProperty to_nnf(const CtlProperty& p) { return nnf(p, false); }

CtlProperty negate_property(const CtlProperty& p) { return nnf(p, true); }

CtlFragment classify(const CtlProperty& p) {
  bool has_a = false;
  bool has_e = false;
  std::function<void(const CtlProperty&)> walk = [&](const CtlProperty& n) {
    switch (n.op) {
      case CtlOp::AX:
      case CtlOp::AG:
      case CtlOp::AF:
      case CtlOp::AU:
        has_a = true;
        break;
      case CtlOp::EX:
      case CtlOp::EG:
      case CtlOp::EF:
      case CtlOp::EU:
        has_e = true;
        break;
      default:
        break;
    }
    for (const CtlProperty& c : n.children) walk(c);
  };
  walk(p);
  if (has_a && has_e) return CtlFragment::Mixed;
  if (has_a) return CtlFragment::Universal;
  if (has_e) return CtlFragment::Existential;
  return CtlFragment::Boolean;
}

void each_leaf(const CtlProperty& p,
               const std::function<void(const Formula&)>& fn) {
  if (p.op == CtlOp::Atom) {
    fn(p.leaf);
    return;
  }
  for (const CtlProperty& c : p.children) each_leaf(c, fn);
}

CtlProperty map_leaves(const CtlProperty& p,
                       const std::function<Formula(const Formula&)>& fn) {
  if (p.op == CtlOp::Atom) return CtlProperty::atom(fn(p.leaf));
  CtlProperty out;
  out.op = p.op;
  for (const CtlProperty& c : p.children) {
    out.children.push_back(map_leaves(c, fn));
  }
  return out;
}

}  // namespace predkit
