#include "predkit/parse.hpp"

#include "predkit/errors.hpp"

#include "formula_parser.hpp"
#include "lexer.hpp"

namespace predkit {

using detail::FormulaParser;
using detail::Lexer;
using detail::TokKind;
using detail::Token;

void VarEnv::declare(VarDecl decl) {
  for (const VarDecl& d : decls_) {
    if (d.id.name == decl.id.name) {
      throw CollisionError("duplicate variable '" + decl.id.name + "'");
    }
    for (const std::string& l : d.enum_labels) {
      if (l == decl.id.name) {
        throw CollisionError("variable '" + decl.id.name +
                             "' collides with an enumeration label");
      }
    }
    for (const std::string& l : decl.enum_labels) {
      if (l == d.id.name) {
        throw CollisionError("label '" + l + "' collides with variable '" +
                             d.id.name + "'");
      }
    }
  }
  for (const std::string& l : decl.enum_labels) {
    if (l == decl.id.name) {
      throw CollisionError("variable '" + decl.id.name +
                           "' used as its own label");
    }
  }
  decls_.push_back(std::move(decl));
}

const VarDecl* VarEnv::find(const std::string& name) const {
  for (const VarDecl& d : decls_) {
    if (d.id.name == name) return &d;
  }
  return nullptr;
}

namespace {

void expect_end(Lexer& lex) {
  if (!lex.at_end()) lex.fail("unexpected trailing input");
}

Formula parse_formula_text(const std::string& text, const VarEnv& env,
                           bool allow_primes) {
  Lexer lex(text);
  FormulaParser parser(lex, env, allow_primes);
  Formula f = parser.parse_formula();
  expect_end(lex);
  return f;
}

// ---------------------------------------------------------------------------
// Properties. Temporal operators bind like unary operators; A[f U g] and
// E[f U g] use explicit brackets. Purely boolean subtrees collapse into
// single formula leaves, so temporal operators apply to whole state
// formulas rather than to atoms one by one.
// ---------------------------------------------------------------------------

class PropertyParser {
public:
  PropertyParser(Lexer& lex, const VarEnv& env)
      : lex_(lex), formulas_(lex, env, /*allow_primes=*/false) {}

  CtlProperty parse() {
    CtlProperty p = parse_conj();
    while (lex_.accept_punct("||")) p = make_or(p, parse_conj());
    return p;
  }

private:
  CtlProperty parse_conj() {
    CtlProperty p = parse_unary();
    while (lex_.accept_punct("&&")) p = make_and(p, parse_unary());
    return p;
  }

  CtlProperty parse_unary() {
    if (lex_.accept_punct("!")) return make_not(parse_unary());
    static const std::pair<const char*, CtlOp> prefixes[] = {
        {"AG", CtlOp::AG}, {"AF", CtlOp::AF}, {"AX", CtlOp::AX},
        {"EG", CtlOp::EG}, {"EF", CtlOp::EF}, {"EX", CtlOp::EX}};
    for (const auto& [name, op] : prefixes) {
      if (lex_.accept_ident(name)) {
        return CtlProperty::unary(op, parse_unary());
      }
    }
    if ((lex_.is_ident("A") || lex_.is_ident("E")) && lex_.is_punct("[", 1)) {
      bool universal = lex_.next().text == "A";
      lex_.expect_punct("[");
      CtlProperty f = parse();
      if (!lex_.accept_ident("U")) lex_.fail("expected 'U'");
      CtlProperty g = parse();
      lex_.expect_punct("]");
      return CtlProperty::binary(universal ? CtlOp::AU : CtlOp::EU, f, g);
    }
    if (lex_.is_punct("(") && !paren_is_arithmetic()) {
      lex_.next();
      CtlProperty p = parse();
      lex_.expect_punct(")");
      return p;
    }
    return CtlProperty::atom(formulas_.parse_atom());
  }

  bool paren_is_arithmetic() const {
    const Token& after = lex_.token_at(lex_.after_matching_paren());
    if (after.kind != TokKind::Punct) return false;
    static const std::set<std::string> cont = {"+",  "-", "*",  "<", "<=",
                                              ">",  ">=", "==", "=", "!="};
    return cont.count(after.text) > 0;
  }

  static CtlProperty make_and(CtlProperty l, CtlProperty r) {
    if (l.op == CtlOp::Atom && r.op == CtlOp::Atom) {
      return CtlProperty::atom(l.leaf && r.leaf);
    }
    return CtlProperty::binary(CtlOp::And, std::move(l), std::move(r));
  }
  static CtlProperty make_or(CtlProperty l, CtlProperty r) {
    if (l.op == CtlOp::Atom && r.op == CtlOp::Atom) {
      return CtlProperty::atom(l.leaf || r.leaf);
    }
    return CtlProperty::binary(CtlOp::Or, std::move(l), std::move(r));
  }
  static CtlProperty make_not(CtlProperty c) {
    if (c.op == CtlOp::Atom) return CtlProperty::atom(negate(c.leaf));
    return CtlProperty::unary(CtlOp::Not, std::move(c));
  }

  Lexer& lex_;
  FormulaParser formulas_;
};

}  // namespace

Formula parse_state_formula(const std::string& text, const VarEnv& env) {
  return parse_formula_text(text, env, /*allow_primes=*/false);
}

Formula parse_relation_formula(const std::string& text, const VarEnv& env) {
  return parse_formula_text(text, env, /*allow_primes=*/true);
}

CtlProperty parse_property(const std::string& text, const VarEnv& env) {
  Lexer lex(text);
  PropertyParser parser(lex, env);
  CtlProperty p = parser.parse();
  expect_end(lex);
  return p;
}

LinCon parse_predicate_atom(const std::string& text, const VarEnv& env) {
  Lexer lex(text);
  FormulaParser parser(lex, env, /*allow_primes=*/false);
  Formula f = parser.parse_atom();
  expect_end(lex);
  if (f.cubes().size() != 1) {
    throw ParseError(
        "predicate must be a single linear constraint "
        "(a disequality needs two predicates)",
        1, 1);
  }
  const Cube& cube = f.cubes().front();
  std::vector<LinCon> atoms = cube.lin_atoms();
  if (!cube.bool_lits().empty() || atoms.size() != 1 || cube.has_divs()) {
    throw ParseError("predicate must be a single non-trivial linear constraint",
                     1, 1);
  }
  return atoms.front();
}

}  // namespace predkit
