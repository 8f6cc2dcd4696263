/*******************************************************************************
 *
 * Recursive-descent parser for quantifier-free formulas over a declared
 * vocabulary, shared by the standalone parse entry points and the model
 * reader. Grammar (looser `=` accepted alongside `==`):
 *
 *   formula := conj ('||' conj)*
 *   conj    := unary ('&&' unary)*
 *   unary   := '!' unary | '(' formula ')' | atom
 *   atom    := 'true' | 'false' | BOOLVAR | sum CMP sum
 *   sum     := term (('+'|'-') term)*
 *   term    := factor ('*' factor)*          (one side must be constant)
 *   factor  := INT | VAR | LABEL | '-' factor | '(' sum ')'
 *
 * A '(' is read as an arithmetic group when the token after its matching
 * ')' continues an arithmetic expression or comparison, and as a formula
 * group otherwise. Enumeration labels denote their index; a label used by
 * several variables must denote the same index in all of them.
 *
 ******************************************************************************/

#pragma once

#include <optional>
#include <set>
#include <string>

#include "predkit/formula.hpp"
#include "predkit/parse.hpp"

#include "lexer.hpp"

namespace predkit::detail {

struct LinExpr {
  LinearTerm term;
  BigInt constant = 0;
};

class FormulaParser {
public:
  FormulaParser(Lexer& lex, const VarEnv& env, bool allow_primes)
      : lex_(lex), env_(env), allow_primes_(allow_primes) {}

  Formula parse_formula() {
    Formula f = parse_conj();
    while (lex_.accept_punct("||")) f = f || parse_conj();
    return f;
  }

  // One linear expression (used for assignment right-hand sides).
  LinExpr parse_linexpr() { return parse_sum(); }

  // One comparison, boolean variable, or constant; no connectives.
  Formula parse_atom() {
    const Token& t = lex_.peek();
    if (t.kind == TokKind::Ident) {
      if (lex_.accept_ident("true")) return Formula::top();
      if (lex_.accept_ident("false")) return Formula::bottom();
      const VarDecl* d = env_.find(t.text);
      if (d && d->id.kind == Kind::Boolean) {
        VarId v = var_ref(lex_.next());
        return Formula::bool_lit(v);
      }
    }
    LinExpr lhs = parse_sum();
    Cmp cmp = parse_cmp();
    LinExpr rhs = parse_sum();
    LinearTerm diff = lhs.term.plus(rhs.term.negated());
    return Formula::compare(diff, cmp, rhs.constant - lhs.constant);
  }

private:
  Formula parse_conj() {
    Formula f = parse_unary();
    while (lex_.accept_punct("&&")) f = f && parse_unary();
    return f;
  }

  Formula parse_unary() {
    if (lex_.accept_punct("!")) return negate(parse_unary());
    if (lex_.is_punct("(") && !paren_is_arithmetic()) {
      lex_.next();
      Formula f = parse_formula();
      lex_.expect_punct(")");
      return f;
    }
    return parse_atom();
  }

  bool paren_is_arithmetic() const {
    const Token& after = lex_.token_at(lex_.after_matching_paren());
    if (after.kind != TokKind::Punct) return false;
    static const std::set<std::string> cont = {"+",  "-", "*",  "<", "<=",
                                              ">",  ">=", "==", "=", "!="};
    return cont.count(after.text) > 0;
  }

  Cmp parse_cmp() {
    if (lex_.accept_punct("==") || lex_.accept_punct("=")) return Cmp::Eq;
    if (lex_.accept_punct("!=")) return Cmp::Ne;
    if (lex_.accept_punct("<=")) return Cmp::Le;
    if (lex_.accept_punct("<")) return Cmp::Lt;
    if (lex_.accept_punct(">=")) return Cmp::Ge;
    if (lex_.accept_punct(">")) return Cmp::Gt;
    lex_.fail("expected comparison operator");
  }

  LinExpr parse_sum() {
    LinExpr e = parse_term();
    for (;;) {
      if (lex_.accept_punct("+")) {
        LinExpr r = parse_term();
        e.term = e.term.plus(r.term);
        e.constant += r.constant;
      } else if (lex_.accept_punct("-")) {
        LinExpr r = parse_term();
        e.term = e.term.plus(r.term.negated());
        e.constant -= r.constant;
      } else {
        return e;
      }
    }
  }

  LinExpr parse_term() {
    LinExpr e = parse_factor();
    while (lex_.accept_punct("*")) {
      const Token& at = lex_.peek();
      LinExpr r = parse_factor();
      if (!e.term.empty() && !r.term.empty()) {
        throw ParseError("nonlinear term", at.line, at.col);
      }
      if (e.term.empty()) {
        LinExpr out;
        out.term = r.term.scaled(e.constant);
        out.constant = e.constant * r.constant;
        e = std::move(out);
      } else {
        e.term = e.term.scaled(r.constant);
        e.constant *= r.constant;
      }
    }
    return e;
  }

  LinExpr parse_factor() {
    const Token& t = lex_.peek();
    LinExpr e;
    if (t.kind == TokKind::Int) {
      e.constant = BigInt(lex_.next().text);
      return e;
    }
    if (lex_.accept_punct("-")) {
      LinExpr r = parse_factor();
      r.term = r.term.negated();
      r.constant = -r.constant;
      return r;
    }
    if (lex_.accept_punct("(")) {
      e = parse_sum();
      lex_.expect_punct(")");
      return e;
    }
    if (t.kind == TokKind::Ident) {
      const VarDecl* d = env_.find(t.text);
      if (!d) {
        lex_.next();
        e.constant = label_value(t);
        return e;
      }
      if (d->id.kind == Kind::Boolean) {
        throw ParseError("boolean variable '" + t.text + "' in arithmetic",
                         t.line, t.col);
      }
      VarId v = var_ref(lex_.next());
      e.term.add(v, 1);
      return e;
    }
    lex_.fail("expected expression");
  }

  VarId var_ref(const Token& t) {
    const VarDecl* d = env_.find(t.text);
    if (t.primed && !allow_primes_) {
      throw ParseError("next-state variable '" + t.text + "'' not allowed here",
                       t.line, t.col);
    }
    return t.primed ? d->id.primed() : d->id;
  }

  BigInt label_value(const Token& t) const {
    std::optional<BigInt> found;
    for (const VarDecl& d : env_.decls()) {
      for (std::size_t i = 0; i < d.enum_labels.size(); ++i) {
        if (d.enum_labels[i] != t.text) continue;
        if (found && *found != BigInt(i)) {
          throw ParseError("label '" + t.text +
                               "' has different values in different "
                               "enumerations",
                           t.line, t.col);
        }
        found = BigInt(i);
      }
    }
    if (!found) {
      throw ParseError("unknown variable or label '" + t.text + "'", t.line,
                       t.col);
    }
    return *found;
  }

  Lexer& lex_;
  const VarEnv& env_;
  bool allow_primes_;
};

}  // namespace predkit::detail
