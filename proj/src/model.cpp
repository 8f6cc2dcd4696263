#include "predkit/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "predkit/errors.hpp"

#include "formula_parser.hpp"
#include "lexer.hpp"

namespace predkit {

using detail::FormulaParser;
using detail::Lexer;
using detail::LinExpr;
using detail::TokKind;
using detail::Token;

// ---------------------------------------------------------------------------
// TransitionSystem accessors.
// ---------------------------------------------------------------------------

const VarDecl* TransitionSystem::find_var(const std::string& name) const {
  for (const VarDecl& d : vars) {
    if (d.id.name == name) return &d;
  }
  return nullptr;
}

const Transition* TransitionSystem::find_transition(
    const std::string& label) const {
  for (const Transition& t : transitions) {
    if (t.label == label) return &t;
  }
  return nullptr;
}

std::set<VarId> TransitionSystem::state_vars() const {
  std::set<VarId> out;
  for (const VarDecl& d : vars) out.insert(d.id);
  return out;
}

VarEnv TransitionSystem::env() const {
  VarEnv env;
  for (const VarDecl& d : vars) env.declare(d);
  return env;
}

// ---------------------------------------------------------------------------
// Parsing.
// ---------------------------------------------------------------------------

namespace {

VarDecl parse_decl(Lexer& lex) {
  std::string name = lex.expect_ident("variable name");
  lex.expect_punct(":");
  VarDecl decl;
  if (lex.accept_ident("int")) {
    decl.id = VarId{name, Kind::Integer, Temporality::Current};
  } else if (lex.accept_ident("bool")) {
    decl.id = VarId{name, Kind::Boolean, Temporality::Current};
  } else if (lex.accept_punct("{")) {
    decl.id = VarId{name, Kind::Enumerated, Temporality::Current};
    do {
      decl.enum_labels.push_back(lex.expect_ident("enumeration label"));
    } while (lex.accept_punct(","));
    lex.expect_punct("}");
  } else {
    lex.fail("expected 'int', 'bool', or '{label, ...}'");
  }
  lex.expect_punct(";");
  return decl;
}

// guard -> v1 = e1, v2 = e2   becomes   guard && v1' = e1 && v2' = e2.
// The frame conjuncts for unassigned variables are added at instantiation,
// when the full variable set is known.
Formula parse_guarded(Lexer& lex, const VarEnv& env) {
  FormulaParser parser(lex, env, /*allow_primes=*/false);
  Formula relation = parser.parse_formula();
  lex.expect_punct("->");
  std::set<std::string> assigned;
  do {
    const Token lhs_tok = lex.peek();
    std::string lhs = lex.expect_ident("assigned variable");
    const VarDecl* d = env.find(lhs);
    if (!d) {
      throw ParseError("unknown variable '" + lhs + "'", lhs_tok.line,
                       lhs_tok.col);
    }
    if (d->id.kind == Kind::Boolean) {
      throw ParseError("boolean variable '" + lhs +
                           "' needs a raw-relation transition",
                       lhs_tok.line, lhs_tok.col);
    }
    if (!assigned.insert(lhs).second) {
      throw ParseError("variable '" + lhs + "' assigned twice", lhs_tok.line,
                       lhs_tok.col);
    }
    lex.expect_punct("=");
    LinExpr rhs = parser.parse_linexpr();
    LinearTerm diff = rhs.term.negated();
    diff.add(d->id.primed(), 1);
    relation = relation && Formula::compare(diff, Cmp::Eq, rhs.constant);
  } while (lex.accept_punct(","));
  return relation;
}

ModelTemplate::TemplateTransition parse_transition(Lexer& lex,
                                                   const VarEnv& env) {
  ModelTemplate::TemplateTransition t;
  t.label = lex.expect_ident("transition label");
  if (lex.accept_ident("rel")) {
    lex.expect_punct(":");
    FormulaParser parser(lex, env, /*allow_primes=*/true);
    t.relation = parser.parse_formula();
    t.framed = false;
  } else {
    lex.expect_punct(":");
    t.relation = parse_guarded(lex, env);
    t.framed = true;
  }
  lex.expect_punct(";");
  return t;
}

Formula parse_block_formula(Lexer& lex, const VarEnv& env) {
  FormulaParser parser(lex, env, /*allow_primes=*/false);
  Formula f = parser.parse_formula();
  lex.expect_punct(";");
  return f;
}

void check_unique_label(const std::vector<ModelTemplate::TemplateTransition>& a,
                        const std::string& label, const Token& at) {
  for (const auto& t : a) {
    if (t.label == label) {
      throw ParseError("duplicate transition label '" + label + "'", at.line,
                       at.col);
    }
  }
}

}  // namespace

ModelTemplate parse_model(const std::string& text) {
  Lexer lex(text);
  ModelTemplate tpl;
  tpl.name = "model";
  VarEnv shared_env;

  while (!lex.at_end()) {
    const Token at = lex.peek();
    if (lex.accept_ident("model")) {
      tpl.name = lex.expect_ident("model name");
      lex.expect_punct(";");
    } else if (lex.accept_ident("shared")) {
      VarDecl d = parse_decl(lex);
      try {
        shared_env.declare(d);
      } catch (const CollisionError& e) {
        throw ParseError(e.what(), at.line, at.col);
      }
      tpl.shared.push_back(std::move(d));
    } else if (lex.accept_ident("init")) {
      tpl.shared_init = tpl.shared_init && parse_block_formula(lex, shared_env);
    } else if (lex.accept_ident("restrict")) {
      tpl.shared_restriction =
          tpl.shared_restriction && parse_block_formula(lex, shared_env);
    } else if (lex.accept_ident("trans")) {
      auto t = parse_transition(lex, shared_env);
      check_unique_label(tpl.shared_transitions, t.label, at);
      tpl.shared_transitions.push_back(std::move(t));
    } else if (lex.accept_ident("default")) {
      const Token count = lex.peek();
      if (count.kind != TokKind::Int) lex.fail("expected process count");
      lex.next();
      tpl.default_count = std::stoul(count.text);
      if (tpl.default_count == 0) {
        throw ParseError("process count must be at least 1", count.line,
                         count.col);
      }
      lex.expect_punct(";");
    } else if (lex.accept_ident("process")) {
      if (tpl.process) {
        throw ParseError("only one process template is supported", at.line,
                         at.col);
      }
      ModelTemplate::Process proc;
      proc.name = lex.expect_ident("process name");
      lex.expect_punct("{");
      VarEnv proc_env = shared_env;
      while (!lex.accept_punct("}")) {
        const Token pat = lex.peek();
        if (lex.accept_ident("local")) {
          VarDecl d = parse_decl(lex);
          try {
            proc_env.declare(d);
          } catch (const CollisionError& e) {
            throw ParseError(e.what(), pat.line, pat.col);
          }
          proc.locals.push_back(std::move(d));
        } else if (lex.accept_ident("init")) {
          proc.init = proc.init && parse_block_formula(lex, proc_env);
        } else if (lex.accept_ident("restrict")) {
          proc.restriction =
              proc.restriction && parse_block_formula(lex, proc_env);
        } else if (lex.accept_ident("trans")) {
          auto t = parse_transition(lex, proc_env);
          check_unique_label(proc.transitions, t.label, pat);
          proc.transitions.push_back(std::move(t));
        } else {
          lex.fail("expected 'local', 'init', 'restrict', 'trans', or '}'");
        }
      }
      tpl.process = std::move(proc);
    } else {
      lex.fail(
          "expected 'model', 'shared', 'init', 'restrict', 'trans', "
          "'default', or 'process'");
    }
  }

  if (tpl.shared_transitions.empty() &&
      (!tpl.process || tpl.process->transitions.empty())) {
    throw ParseError("no transitions", lex.peek().line, lex.peek().col);
  }
  return tpl;
}

ModelTemplate parse_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

// ---------------------------------------------------------------------------
// Instantiation.
// ---------------------------------------------------------------------------

namespace {

// v' = v, with booleans expanded to the two-cube iff.
Formula frame_conjunct(const VarId& v) {
  if (v.kind == Kind::Boolean) {
    Cube both_true;
    both_true.add_bool(v, true);
    both_true.add_bool(v.primed(), true);
    Cube both_false;
    both_false.add_bool(v, false);
    both_false.add_bool(v.primed(), false);
    return Formula::of_cubes({both_true, both_false});
  }
  LinearTerm diff;
  diff.add(v.primed(), 1);
  diff.add(v, -1);
  return Formula::compare(diff, Cmp::Eq, 0);
}

Formula enum_range(const VarDecl& d) {
  LinearTerm t;
  t.add(d.id, 1);
  Formula lo = Formula::compare(t, Cmp::Ge, 0);
  Formula hi =
      Formula::compare(t, Cmp::Le, BigInt(d.enum_labels.size()) - 1);
  return lo && hi;
}

}  // namespace

TransitionSystem instantiate(const ModelTemplate& tpl, std::size_t n) {
  if (n == 0) throw Error("instance count must be at least 1");

  TransitionSystem ts;
  // Underscore keeps the composed name a single identifier token, so the
  // instance can be printed with to_model_text and parsed back.
  ts.name = tpl.name + "_" + std::to_string(n);

  VarEnv env;  // detects collisions between shared and suffixed locals
  for (const VarDecl& d : tpl.shared) {
    env.declare(d);
    ts.vars.push_back(d);
  }

  // Per-process variable renamings local -> local<i>.
  std::vector<std::map<VarId, VarId>> renamings;
  if (tpl.process) {
    for (std::size_t i = 1; i <= n; ++i) {
      std::map<VarId, VarId> ren;
      for (const VarDecl& d : tpl.process->locals) {
        VarDecl inst = d;
        inst.id.name = d.id.name + std::to_string(i);
        env.declare(inst);
        ts.vars.push_back(inst);
        ren[d.id] = inst.id;
        ren[d.id.primed()] = inst.id.primed();
      }
      renamings.push_back(std::move(ren));
    }
  }

  ts.init = tpl.shared_init;
  ts.restriction = tpl.shared_restriction;
  if (tpl.process) {
    for (std::size_t i = 0; i < n; ++i) {
      ts.init = ts.init && rename(tpl.process->init, renamings[i]);
      ts.restriction =
          ts.restriction && rename(tpl.process->restriction, renamings[i]);
    }
  }
  for (const VarDecl& d : ts.vars) {
    if (d.id.kind == Kind::Enumerated) {
      ts.restriction = ts.restriction && enum_range(d);
    }
  }

  struct Pending {
    std::string label;
    Formula relation;
    bool framed;
  };
  std::vector<Pending> pending;
  for (const auto& t : tpl.shared_transitions) {
    pending.push_back({t.label, t.relation, t.framed});
  }
  if (tpl.process) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& t : tpl.process->transitions) {
        pending.push_back({t.label + std::to_string(i + 1),
                           rename(t.relation, renamings[i]), t.framed});
      }
    }
  }

  std::set<std::string> labels;
  for (Pending& p : pending) {
    if (!labels.insert(p.label).second) {
      throw CollisionError("duplicate transition label '" + p.label + "'");
    }
    if (p.framed) {
      for (const VarDecl& d : ts.vars) {
        if (!p.relation.mentions(d.id.primed())) {
          p.relation = p.relation && frame_conjunct(d.id);
        }
      }
    }
    ts.transitions.push_back({std::move(p.label), std::move(p.relation)});
  }
  return ts;
}

// ---------------------------------------------------------------------------
// Candidate predicates.
// ---------------------------------------------------------------------------

namespace {

bool current_integer_only(const LinCon& atom) {
  for (const auto& [v, c] : atom.term.coeffs()) {
    if (v.is_next() || v.kind != Kind::Integer) return false;
  }
  return true;
}

// Collects current-state atoms over integer variables. On a transition
// relation this keeps the guards and drops update and frame atoms (which
// mention next-state vars). Atoms over enumerated variables are skipped:
// like booleans, they range over a fixed finite domain and gain nothing
// from abstraction.
void add_atoms(const Formula& f, std::vector<LinCon>& out) {
  for (const Cube& cube : f.cubes()) {
    for (const LinCon& atom : cube.lin_atoms()) {
      if (!current_integer_only(atom)) continue;
      if (std::find(out.begin(), out.end(), atom) == out.end()) {
        out.push_back(atom);
      }
    }
  }
}

}  // namespace

std::vector<LinCon> extract_candidate_predicates(const TransitionSystem& ts,
                                                 const CtlProperty& prop) {
  std::vector<LinCon> out;
  add_atoms(ts.init, out);
  add_atoms(ts.restriction, out);
  for (const Transition& t : ts.transitions) {
    add_atoms(t.relation, out);
  }
  each_leaf(prop, [&](const Formula& leaf) { add_atoms(leaf, out); });
  return out;
}

// ---------------------------------------------------------------------------
// Printing.
// ---------------------------------------------------------------------------

std::string to_model_text(const TransitionSystem& ts) {
  std::ostringstream out;
  out << "model " << (ts.name.empty() ? "model" : ts.name) << ";\n";
  for (const VarDecl& d : ts.vars) {
    out << "shared " << d.id.name << " : ";
    switch (d.id.kind) {
      case Kind::Integer:
        out << "int";
        break;
      case Kind::Boolean:
        out << "bool";
        break;
      case Kind::Enumerated: {
        out << "{";
        for (std::size_t i = 0; i < d.enum_labels.size(); ++i) {
          out << (i ? ", " : "") << d.enum_labels[i];
        }
        out << "}";
        break;
      }
    }
    out << ";\n";
  }
  out << "init " << ts.init.to_string() << ";\n";
  out << "restrict " << ts.restriction.to_string() << ";\n";
  for (const Transition& t : ts.transitions) {
    out << "trans " << t.label << " rel: " << t.relation.to_string() << ";\n";
  }
  return out.str();
}

std::string pretty_formula(const Formula& f, const TransitionSystem& ts) {
  if (f.is_false()) return "false";
  if (f.is_true()) return "true";

  auto label_for = [&](const VarId& v, const BigInt& value) -> std::string {
    const VarDecl* d = ts.find_var(v.name);
    if (!d || d->id.kind != Kind::Enumerated) return value.str();
    if (value < 0 || value >= BigInt(d->enum_labels.size())) {
      return value.str();
    }
    return d->enum_labels[static_cast<std::size_t>(value)];
  };

  std::string out;
  bool first_cube = true;
  for (const Cube& cube : f.cubes()) {
    if (!first_cube) out += " || ";
    first_cube = false;
    std::string body;
    auto emit = [&](const std::string& s) {
      if (!body.empty()) body += " && ";
      body += s;
    };
    for (const auto& [v, pos] : cube.bool_lits()) {
      emit((pos ? "" : "!") + v.to_string());
    }
    for (const LinCon& atom : cube.lin_atoms()) {
      // pc = k and pc <= k with one enumerated variable show the label.
      const auto& coeffs = atom.term.coeffs();
      if (coeffs.size() == 1) {
        const auto& [v, c] = *coeffs.begin();
        const VarDecl* d = ts.find_var(v.name);
        if (d && d->id.kind == Kind::Enumerated && (c == 1 || c == -1)) {
          BigInt value = atom.bound / c;
          if (value * c == atom.bound) {
            std::string op = atom.rel == Rel::Eq ? " = "
                             : c == 1            ? " <= "
                                                 : " >= ";
            emit(v.to_string() + op + label_for(v, value));
            continue;
          }
        }
      }
      emit(atom.to_string());
    }
    if (body.empty()) body = "true";
    out += f.cubes().size() > 1 ? "(" + body + ")" : body;
  }
  return out;
}

}  // namespace predkit
