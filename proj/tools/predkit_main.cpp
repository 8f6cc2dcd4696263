/*******************************************************************************
 *
 * Command-line front end: parsing, abstraction, checking, and the two
 * predicate-selection heuristics, with JSON reports. Exit codes: 0 the
 * property holds, 1 not shown, 2 fixpoints did not converge, 64 usage.
 *
 ******************************************************************************/

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "predkit/abstraction.hpp"
#include "predkit/checker.hpp"
#include "predkit/compatibility.hpp"
#include "predkit/errors.hpp"
#include "predkit/imprecision.hpp"
#include "predkit/model.hpp"
#include "predkit/oracle.hpp"
#include "predkit/parse.hpp"
#include "predkit/report.hpp"

namespace {

using namespace predkit;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t env_max_iterations() {
  if (const char* s = std::getenv("PREDKIT_MAX_ITER")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(s, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    throw Error("PREDKIT_MAX_ITER must be a positive integer");
  }
  return CheckLimits{}.max_iterations;
}

struct ModelInput {
  ModelTemplate tpl;
  std::string hash;
};

ModelInput load_model(const std::string& path) {
  std::string bytes = read_file(path);
  return {parse_model(bytes), content_hash(bytes)};
}

TransitionSystem make_instance(const ModelTemplate& tpl, std::size_t n) {
  return instantiate(tpl, n == 0 ? tpl.default_count : n);
}

CtlProperty parse_prop(const std::string& text, const TransitionSystem& ts) {
  VarEnv env = ts.env();
  return parse_property(text, env);
}

// "auto" extracts candidates from the system and property; otherwise the
// argument names a file with one linear constraint per line.
std::vector<LinCon> load_atoms(const std::string& preds_arg,
                               const TransitionSystem& ts,
                               const CtlProperty& prop) {
  if (preds_arg == "auto") return extract_candidate_predicates(ts, prop);
  VarEnv env = ts.env();
  std::vector<LinCon> atoms;
  std::istringstream in(read_file(preds_arg));
  std::string line;
  while (std::getline(in, line)) {
    std::size_t text_start = line.find_first_not_of(" \t\r");
    if (text_start == std::string::npos) continue;
    if (line.compare(text_start, 2, "//") == 0) continue;
    atoms.push_back(parse_predicate_atom(line, env));
  }
  if (atoms.empty()) throw Error("no predicates in '" + preds_arg + "'");
  return atoms;
}

std::set<std::string> reserved_names(const TransitionSystem& ts) {
  std::set<std::string> out;
  for (const VarDecl& d : ts.vars) out.insert(d.id.name);
  return out;
}

int verdict_exit(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Holds: return 0;
    case VerdictKind::NotShown: return 1;
    case VerdictKind::Nonconvergent: return 2;
  }
  return 2;
}

void emit_report(const std::string& path, const Json& report) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << report.dump(2) << "\n";
}

std::string command_echo(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += " ";
    out += argv[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand options.
// ---------------------------------------------------------------------------

struct CheckOpts {
  std::string model;
  std::size_t n = 0;
  std::string prop;
  std::string preds;  // empty: concrete check
  std::size_t max_iter = 0;
  std::size_t widen_after = 8;  // widened verdicts are sound for Holds
  std::string emit;
};

struct AbstractOpts {
  std::string model;
  std::size_t n = 0;
  std::string prop = "true";
  std::string preds = "auto";
};

struct TrlimpOpts {
  std::string model;
  std::size_t n = 0;
  std::string prop = "true";
  std::string preds = "auto";
  std::size_t k = 2;
  bool no_scope_exclusion = false;
  std::string emit;
};

struct CompatOpts_ {
  std::string model;
  std::size_t small_n = 0;
  std::string prop;
  std::string preds = "auto";
  std::size_t k = 2;
  std::size_t jobs = 1;
  std::string emit;
};

struct ChooseOpts {
  std::string heuristic = "compat";
  std::string model;
  std::size_t small_n = 0;
  std::size_t n = 0;
  std::string prop;
  std::string preds = "auto";
  std::size_t k = 2;
  std::size_t jobs = 1;
  bool no_scope_exclusion = false;
  std::string emit;
};

struct ReportOpts {
  std::string file;
};

int run_check(const CheckOpts& o, const std::string& echo) {
  Timer total;
  ModelInput input = load_model(o.model);
  TransitionSystem ts = make_instance(input.tpl, o.n);
  CtlProperty prop = parse_prop(o.prop, ts);

  CheckLimits limits;
  limits.max_iterations = o.max_iter ? o.max_iter : env_max_iterations();
  limits.widen_after = o.widen_after;

  Json report;
  report["command"] = echo;
  report["model_hash"] = input.hash;
  report["instance"] = ts.name;

  Verdict v;
  if (o.preds.empty()) {
    v = check(ts, prop, limits);
  } else {
    PredicateSet ps =
        PredicateSet::create(load_atoms(o.preds, ts, prop), reserved_names(ts));
    report["predicates"] = predicates_to_json(ps);
    TransitionSystem abs_ts = abstract_system(ts, ps);
    CtlProperty abs_prop = abstract_property(prop, ps, ts.restriction);
    v = check(abs_ts, abs_prop, limits);
  }
  report["result"] = verdict_to_json(v);
  report["timing_ms"] = Json{{"total", total.ms()}};
  emit_report(o.emit, report);
  std::cout << verdict_name(v.kind) << "\n";
  if (!v.detail.empty()) std::cout << v.detail << "\n";
  return verdict_exit(v);
}

int run_abstract(const AbstractOpts& o) {
  ModelInput input = load_model(o.model);
  TransitionSystem ts = make_instance(input.tpl, o.n);
  CtlProperty prop = parse_prop(o.prop, ts);
  PredicateSet ps =
      PredicateSet::create(load_atoms(o.preds, ts, prop), reserved_names(ts));
  std::cout << to_model_text(abstract_system(ts, ps));
  return 0;
}

int run_trlimp(const TrlimpOpts& o, const std::string& echo) {
  Timer total;
  ModelInput input = load_model(o.model);
  TransitionSystem ts = make_instance(input.tpl, o.n);
  CtlProperty prop = parse_prop(o.prop, ts);
  PredicateSet ps =
      PredicateSet::create(load_atoms(o.preds, ts, prop), reserved_names(ts));

  Timer scoring;
  ImprecisionScores scores = compute_imprecision_scores(ts, ps);
  long long scoring_ms = scoring.ms();

  ImprecisionSelectionOptions options;
  options.scope_exclusion = !o.no_scope_exclusion;
  Timer selection;
  ImprecisionSelection sel =
      choose_predicates_by_imprecision(ps, scores, o.k, options);
  long long selection_ms = selection.ms();

  Json report;
  report["command"] = echo;
  report["model_hash"] = input.hash;
  report["instance"] = ts.name;
  report["predicates"] = predicates_to_json(ps);
  Json score_json = scores_to_json(scores, ps);
  report["individual"] = score_json["individual"];
  report["pairwise"] = score_json["pairwise"];
  report["chosen"] = config_to_json(sel.best);
  Json levels = Json::array();
  for (const Config& c : sel.per_level) levels.push_back(config_to_json(c));
  report["per_level"] = levels;
  report["timing_ms"] = Json{{"scores", scoring_ms},
                             {"selection", selection_ms},
                             {"total", total.ms()}};
  emit_report(o.emit, report);

  std::cout << render_grid(report);
  std::cout << "chosen:";
  for (std::size_t i : sel.best.preds) {
    std::cout << " " << ps.at(i).atom.to_string();
  }
  std::cout << "  (score " << sel.best.score << ", vars "
            << sel.best.num_vars << ")\n";
  return 0;
}

int run_compat(const CompatOpts_& o, const std::string& echo) {
  Timer total;
  ModelInput input = load_model(o.model);
  TransitionSystem small_ts = make_instance(input.tpl, o.small_n);
  CtlProperty prop = parse_prop(o.prop, small_ts);
  PredicateSet ps = PredicateSet::create(load_atoms(o.preds, small_ts, prop),
                                         reserved_names(small_ts));

  CompatOptions options;
  options.limits.max_iterations = env_max_iterations();
  options.jobs = o.jobs;
  Timer matrix_timer;
  CompatibilityMatrix matrix =
      compute_compatibility(small_ts, prop, ps, options);
  long long matrix_ms = matrix_timer.ms();

  Timer selection;
  CompatSelection sel = choose_predicates_by_compatibility(ps, matrix, o.k);
  long long selection_ms = selection.ms();

  Json report = matrix_to_json(matrix, ps);
  report["command"] = echo;
  report["model_hash"] = input.hash;
  report["instance"] = small_ts.name;
  report["chosen"] = config_to_json(sel.best);
  Json levels = Json::array();
  for (const Config& c : sel.per_level) levels.push_back(config_to_json(c));
  report["per_level"] = levels;
  report["timing_ms"] = Json{{"matrix", matrix_ms},
                             {"selection", selection_ms},
                             {"total", total.ms()}};
  emit_report(o.emit, report);

  std::cout << render_grid(report);
  std::cout << "chosen:";
  for (std::size_t i : sel.best.preds) {
    std::cout << " " << ps.at(i).atom.to_string();
  }
  std::cout << "  (cohesion " << sel.best.score << ", vars "
            << sel.best.num_vars << ")\n";
  return 0;
}

int run_choose(const ChooseOpts& o, const std::string& echo) {
  Timer total;
  ModelInput input = load_model(o.model);
  TransitionSystem small_ts = make_instance(input.tpl, o.small_n);
  TransitionSystem large_ts = make_instance(input.tpl, o.n);
  CtlProperty small_prop = parse_prop(o.prop, small_ts);
  CtlProperty large_prop = parse_prop(o.prop, large_ts);
  PredicateSet ps = PredicateSet::create(
      load_atoms(o.preds, small_ts, small_prop), reserved_names(small_ts));

  Json report;
  report["command"] = echo;
  report["model_hash"] = input.hash;
  report["small_instance"] = small_ts.name;
  report["instance"] = large_ts.name;
  report["predicates"] = predicates_to_json(ps);

  Config chosen;
  long long heuristic_ms = 0;
  if (o.heuristic == "compat") {
    CompatOptions options;
    options.limits.max_iterations = env_max_iterations();
    options.jobs = o.jobs;
    Timer heuristic;
    CompatibilityMatrix matrix =
        compute_compatibility(small_ts, small_prop, ps, options);
    CompatSelection sel = choose_predicates_by_compatibility(ps, matrix, o.k);
    heuristic_ms = heuristic.ms();
    chosen = sel.best;
    report["matrix"] = matrix_to_json(matrix, ps)["pairs"];
  } else if (o.heuristic == "trlimp") {
    ImprecisionSelectionOptions options;
    options.scope_exclusion = !o.no_scope_exclusion;
    Timer heuristic;
    ImprecisionScores scores = compute_imprecision_scores(small_ts, ps);
    ImprecisionSelection sel =
        choose_predicates_by_imprecision(ps, scores, o.k, options);
    heuristic_ms = heuristic.ms();
    chosen = sel.best;
    Json score_json = scores_to_json(scores, ps);
    report["individual"] = score_json["individual"];
    report["pairwise"] = score_json["pairwise"];
  } else {
    throw Error("unknown heuristic '" + o.heuristic + "'");
  }
  report["chosen"] = config_to_json(chosen);

  // Abstract with the chosen atoms plus the property atoms over their
  // variables: the same augmentation the pair measurements used, and what
  // keeps the property expressible over the abstraction.
  std::vector<LinCon> final_atoms;
  for (std::size_t i : chosen.preds) final_atoms.push_back(ps.at(i).atom);
  std::set<VarId> chosen_scope = ps.scope_of(chosen.preds);
  each_leaf(large_prop, [&](const Formula& leaf) {
    for (const Cube& cube : leaf.cubes()) {
      for (const LinCon& atom : cube.lin_atoms()) {
        bool in_scope = true;
        for (const auto& [v, c] : atom.term.coeffs()) {
          in_scope = in_scope && chosen_scope.count(v) > 0;
        }
        if (in_scope && std::find(final_atoms.begin(), final_atoms.end(),
                                  atom) == final_atoms.end()) {
          final_atoms.push_back(atom);
        }
      }
    }
  });
  PredicateSet chosen_ps =
      PredicateSet::create(final_atoms, reserved_names(large_ts));
  report["final_predicates"] = predicates_to_json(chosen_ps);
  Timer check_timer;
  TransitionSystem abs_ts = abstract_system(large_ts, chosen_ps);
  CtlProperty abs_prop =
      abstract_property(large_prop, chosen_ps, large_ts.restriction);
  CheckLimits limits;
  limits.max_iterations = env_max_iterations();
  limits.widen_after = 8;  // unbounded counters stabilize via widening
  Verdict v = check(abs_ts, abs_prop, limits);
  long long check_ms = check_timer.ms();

  report["result"] = verdict_to_json(v);
  report["timing_ms"] = Json{{"heuristic", heuristic_ms},
                             {"check", check_ms},
                             {"total", total.ms()}};
  emit_report(o.emit, report);

  std::cout << "chosen:";
  for (std::size_t i : chosen.preds) {
    std::cout << " " << ps.at(i).atom.to_string();
  }
  std::cout << "\nabstracted with:";
  for (const Predicate& p : chosen_ps.preds()) {
    std::cout << " " << p.atom.to_string();
  }
  std::cout << "\n" << verdict_name(v.kind) << "\n";
  return verdict_exit(v);
}

int run_report(const ReportOpts& o) {
  Json report = Json::parse(read_file(o.file));
  std::cout << render_grid(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial predicate abstraction with predicate selection"};
  app.require_subcommand(1);

  CheckOpts check_opts;
  CLI::App* check_cmd =
      app.add_subcommand("check", "Verify a property of a model instance");
  check_cmd->add_option("--model", check_opts.model, "model file")->required();
  check_cmd->add_option("--n", check_opts.n, "instance size (0: default)");
  check_cmd->add_option("--prop", check_opts.prop, "property")->required();
  check_cmd->add_option("--preds", check_opts.preds,
                        "abstract first: 'auto' or predicate file");
  check_cmd->add_option("--max-iter", check_opts.max_iter, "fixpoint cap");
  check_cmd->add_option("--widen-after", check_opts.widen_after,
                        "widen least fixpoints after this many iterations "
                        "(0 disables)");
  check_cmd->add_option("--emit", check_opts.emit, "write JSON report");

  AbstractOpts abstract_opts;
  CLI::App* abstract_cmd = app.add_subcommand(
      "abstract", "Print the abstracted instance in model syntax");
  abstract_cmd->add_option("--model", abstract_opts.model, "model file")
      ->required();
  abstract_cmd->add_option("--n", abstract_opts.n, "instance size");
  abstract_cmd->add_option("--prop", abstract_opts.prop,
                           "property (for 'auto' extraction)");
  abstract_cmd->add_option("--preds", abstract_opts.preds,
                           "'auto' or predicate file");

  TrlimpOpts trlimp_opts;
  CLI::App* trlimp_cmd = app.add_subcommand(
      "trlimp", "Score predicates by transition-level imprecision");
  trlimp_cmd->add_option("--model", trlimp_opts.model, "model file")
      ->required();
  trlimp_cmd->add_option("--n", trlimp_opts.n, "instance size");
  trlimp_cmd->add_option("--prop", trlimp_opts.prop,
                         "property (for 'auto' extraction)");
  trlimp_cmd->add_option("--preds", trlimp_opts.preds,
                         "'auto' or predicate file");
  trlimp_cmd->add_option("-k", trlimp_opts.k, "maximum predicates chosen");
  trlimp_cmd->add_flag("--no-scope-exclusion",
                       trlimp_opts.no_scope_exclusion,
                       "do not exclude predicates sharing variables with "
                       "imprecise ones");
  trlimp_cmd->add_option("--emit", trlimp_opts.emit, "write JSON report");

  CompatOpts_ compat_opts;
  CLI::App* compat_cmd = app.add_subcommand(
      "compat", "Score predicate pairs by small-instance verification");
  compat_cmd->add_option("--model", compat_opts.model, "model file")
      ->required();
  compat_cmd->add_option("--small-n", compat_opts.small_n,
                         "small instance size");
  compat_cmd->add_option("--prop", compat_opts.prop, "property")->required();
  compat_cmd->add_option("--preds", compat_opts.preds,
                         "'auto' or predicate file");
  compat_cmd->add_option("-k", compat_opts.k, "maximum predicates chosen");
  compat_cmd->add_option("--jobs", compat_opts.jobs,
                         "parallel pair verifications");
  compat_cmd->add_option("--emit", compat_opts.emit, "write JSON report");

  ChooseOpts choose_opts;
  CLI::App* choose_cmd = app.add_subcommand(
      "choose", "Select predicates and verify the large instance");
  choose_cmd->add_option("--heuristic", choose_opts.heuristic,
                         "'compat' or 'trlimp'");
  choose_cmd->add_option("--model", choose_opts.model, "model file")
      ->required();
  choose_cmd->add_option("--small-n", choose_opts.small_n,
                         "measurement instance size");
  choose_cmd->add_option("--n", choose_opts.n, "verification instance size");
  choose_cmd->add_option("--prop", choose_opts.prop, "property")->required();
  choose_cmd->add_option("--preds", choose_opts.preds,
                         "'auto' or predicate file");
  choose_cmd->add_option("-k", choose_opts.k, "maximum predicates chosen");
  choose_cmd->add_option("--jobs", choose_opts.jobs,
                         "parallel pair verifications");
  choose_cmd->add_flag("--no-scope-exclusion",
                       choose_opts.no_scope_exclusion,
                       "trlimp: keep predicates sharing variables with "
                       "imprecise ones");
  choose_cmd->add_option("--emit", choose_opts.emit, "write JSON report");

  ReportOpts report_opts;
  CLI::App* report_cmd =
      app.add_subcommand("report", "Render a JSON report as a text grid");
  report_cmd->add_option("file", report_opts.file, "report file")->required();

  std::size_t seed = 0;
  app.add_option("--seed", seed,
                 "reserved; all algorithms are currently deterministic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  std::string echo = command_echo(argc, argv);
  try {
    if (*check_cmd) return run_check(check_opts, echo);
    if (*abstract_cmd) return run_abstract(abstract_opts);
    if (*trlimp_cmd) return run_trlimp(trlimp_opts, echo);
    if (*compat_cmd) return run_compat(compat_opts, echo);
    if (*choose_cmd) return run_choose(choose_opts, echo);
    if (*report_cmd) return run_report(report_opts);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
  return 64;
}
