#include "paralab/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "paralab/experiments.hpp"
#include "paralab/tptp.hpp"

namespace paralab {

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string theory = "c1";
  std::string goal;
  std::string model_path;
  std::string proof_path;
  std::string experiment;
  std::vector<std::string> constraints;
  int min_size = 1;
  int max_size = 4;
  double max_seconds = 600;
  std::size_t max_generated = 1'000'000;
  int workers = 1;
  std::uint64_t seed = ExperimentConfig{}.seed;
  bool enumerate_all = false;
  bool negate = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Global cap from the environment.
double capped_seconds(double requested) {
  if (const char* env = std::getenv("PARALAB_MAX_SECONDS")) {
    char* end = nullptr;
    double cap = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(cap > 0)) throw UsageError("PARALAB_MAX_SECONDS must be a positive number");
    return std::min(requested, cap);
  }
  return requested;
}

Theory load_theory(const std::string& name) {
  try {
    return theory_by_name(name);
  } catch (const TheoryError& e) {
    throw UsageError(e.what());
  }
}

Formula load_formula(const std::string& text) {
  try {
    return parse(text);
  } catch (const SyntaxError& e) {
    throw UsageError("bad formula '" + text + "': " + e.what());
  }
}

std::vector<Constraint> load_constraints(const std::vector<std::string>& texts) {
  std::vector<Constraint> out;
  for (const auto& t : texts) {
    try {
      out.push_back(parse_constraint(t));
    } catch (const TemplateError& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

FiniteModel load_model(const std::string& path) {
  try {
    return model_from_json(read_file(path));
  } catch (const ModelFormatError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

SearchConfig search_config(const Options& o) {
  SearchConfig c;
  c.min_size = o.min_size;
  c.max_size = o.max_size;
  c.max_seconds = capped_seconds(o.max_seconds);
  c.workers = o.workers;
  c.enumerate_all = o.enumerate_all;
  c.iso_filter = !o.enumerate_all;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

ProverConfig prover_config(const Options& o) {
  ProverConfig c;
  c.max_generated = o.max_generated;
  c.max_seconds = capped_seconds(o.max_seconds);
  if (c.max_generated == 0) throw UsageError("--max-generated must be positive");
  return c;
}

int cmd_prove(const Options& o, std::ostream& out) {
  Theory t = load_theory(o.theory);
  Formula goal = load_formula(o.goal);
  auto result = derive(t, goal, prover_config(o));
  if (auto* p = std::get_if<Proof>(&result)) {
    out << to_transcript(*p);
    return kExitSuccess;
  }
  const auto& ex = std::get<Exhausted>(result);
  out << "exhausted " << to_string(ex.budget) << " after " << ex.stats.generated << " generated, "
      << ex.stats.retained << " retained\n";
  return kExitUnknown;
}

int cmd_check_proof(const Options& o, std::ostream& out) {
  Theory t = load_theory(o.theory);
  std::optional<Formula> goal;
  if (!o.goal.empty()) goal = load_formula(o.goal);
  Proof p;
  try {
    p = proof_from_transcript(read_file(o.proof_path));
  } catch (const ProofFormatError& e) {
    out << "invalid: " << e.what() << "\n";
    return kExitNegative;
  }
  auto check = check_proof(t, p);
  if (!check.valid) {
    out << "invalid at line " << check.line << ": " << check.reason << "\n";
    return kExitNegative;
  }
  if (goal && !proves(p, *goal)) {
    out << "invalid: conclusion " << print(p.conclusion()) << " does not subsume " << print(*goal) << "\n";
    return kExitNegative;
  }
  out << "valid\n";
  return kExitSuccess;
}

int cmd_find_model(const Options& o, std::ostream& out) {
  Theory t = load_theory(o.theory);
  auto cs = load_constraints(o.constraints);
  auto result = find_model(t, cs, search_config(o));
  if (auto* m = std::get_if<FiniteModel>(&result)) {
    out << to_json(*m) << "\n";
    return kExitSuccess;
  }
  const auto& stats = std::get<SearchExhausted>(result).stats;
  out << to_json(stats) << "\n";
  return stats.timed_out ? kExitUnknown : kExitNegative;
}

int cmd_check_model(const Options& o, std::ostream& out) {
  Theory t = load_theory(o.theory);
  FiniteModel m = load_model(o.model_path);
  auto cs = load_constraints(o.constraints);
  auto check = check_model(m, t);
  for (const auto& v : check.violations) {
    out << "violated " << v.clause_id << ": " << v.clause << " at";
    for (const auto& [var, e] : v.assignment) out << ' ' << var << '=' << e;
    out << "\n";
  }
  bool ok = check.ok();
  if (!ok) out << check.total_violations << " violated clause instances\n";
  for (const auto& c : cs)
    if (!satisfies(m, c)) {
      out << "violated constraint " << print(c) << "\n";
      ok = false;
    }
  if (ok) out << "ok\n";
  return ok ? kExitSuccess : kExitNegative;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  Theory t = load_theory(o.theory);
  auto cs = load_constraints(o.constraints);
  auto stats = enumerate_models(
      t, search_config(o),
      [&](const FiniteModel& m) {
        out << to_json(m) << "\n";
        return true;
      },
      cs);
  out << to_json(stats) << "\n";
  return stats.timed_out ? kExitUnknown : kExitSuccess;
}

int cmd_experiment(const Options& o, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.search = search_config(o);
  cfg.prover = prover_config(o);
  cfg.seed = o.seed;
  load_theory(o.theory);
  static const std::vector<std::string> ids = {"0", "1", "2", "3", "imminent"};
  if (std::find(ids.begin(), ids.end(), o.experiment) == ids.end())
    throw UsageError("unknown experiment '" + o.experiment + "' (expected 0, 1, 2, 3 or imminent)");
  auto report = run_experiment(o.experiment, cfg, o.theory);
  out << render(report) << "\n";
  switch (report.verdict) {
    case Verdict::Established:
    case Verdict::Evidence: return kExitSuccess;
    case Verdict::Refuted: return kExitNegative;
    case Verdict::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

int cmd_export(const Options& o, std::ostream& out) {
  Theory t = load_theory(o.theory);
  auto cs = load_constraints(o.constraints);
  std::optional<Formula> goal;
  if (!o.goal.empty()) goal = load_formula(o.goal);
  if (!cs.empty() && goal) throw UsageError("export-tptp takes either --goal or constraints, not both");
  out << (cs.empty() ? export_tptp(t, goal, o.negate) : export_tptp(t, cs));
  return kExitSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Paraconsistency workbench: condensed-detachment prover and finite model finder for C1",
               args.empty() ? "paralab" : args[0]};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto theory = [&](CLI::App* c) {
    c->add_option("--theory", o.theory, "c1 with any of +explosion, +bottom, +structural, +atoms, -<schema id>")
        ->capture_default_str();
  };
  auto sizes = [&](CLI::App* c) {
    c->add_option("--min-size", o.min_size, "Smallest domain size")->capture_default_str();
    c->add_option("--max-size", o.max_size, "Largest domain size")->capture_default_str();
    c->add_option("--workers", o.workers, "Parallel search workers")->capture_default_str();
  };
  auto seconds = [&](CLI::App* c) {
    c->add_option("--max-seconds", o.max_seconds, "Wall-clock limit (capped by PARALAB_MAX_SECONDS)")
        ->capture_default_str();
  };
  auto constraints = [&](CLI::App* c) {
    c->add_option("constraints", o.constraints,
                  "Constraints such as \"require ?[X,Y]: ~p(i(a(X,n(X)),Y))\", \"forbid ...\" or \"refute A9 o(X,n(X))\"");
  };

  auto* prove = app.add_subcommand("prove", "Derive a goal by condensed detachment");
  theory(prove);
  prove->add_option("--goal", o.goal, "Formula to derive")->required();
  prove->add_option("--max-generated", o.max_generated, "Generated-formula budget")->capture_default_str();
  seconds(prove);

  auto* check_proof_cmd = app.add_subcommand("check-proof", "Check a proof transcript");
  theory(check_proof_cmd);
  check_proof_cmd->add_option("proof", o.proof_path, "Transcript file")->required();
  check_proof_cmd->add_option("--goal", o.goal, "Also require the conclusion to subsume this formula");

  auto* find = app.add_subcommand("find-model", "Find the smallest model satisfying the constraints");
  theory(find);
  sizes(find);
  seconds(find);
  constraints(find);

  auto* check_model_cmd = app.add_subcommand("check-model", "Check a model against a theory and constraints");
  theory(check_model_cmd);
  check_model_cmd->add_option("--model", o.model_path, "Model file")->required();
  constraints(check_model_cmd);

  auto* enumerate = app.add_subcommand("enumerate", "List models, one per isomorphism class by default");
  theory(enumerate);
  sizes(enumerate);
  seconds(enumerate);
  enumerate->add_flag("--enumerate-all", o.enumerate_all, "List every labelled model");
  constraints(enumerate);

  auto* experiment = app.add_subcommand("experiment", "Run experiment 0, 1, 2, 3 or imminent");
  experiment->add_option("id", o.experiment, "Experiment id")->required();
  theory(experiment);
  sizes(experiment);
  seconds(experiment);
  experiment->add_option("--max-generated", o.max_generated, "Prover budget per derivation")->capture_default_str();
  experiment->add_option("--seed", o.seed, "Random corpus seed")->capture_default_str();

  auto* exp = app.add_subcommand("export-tptp", "Write the theory in TPTP FOF");
  theory(exp);
  exp->add_option("--goal", o.goal, "Conjecture");
  exp->add_flag("--negate-conjecture", o.negate, "Emit the conjecture negated, as an axiom");
  constraints(exp);

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*prove) return cmd_prove(o, out);
    if (*check_proof_cmd) return cmd_check_proof(o, out);
    if (*find) return cmd_find_model(o, out);
    if (*check_model_cmd) return cmd_check_model(o, out);
    if (*enumerate) return cmd_enumerate(o, out);
    if (*experiment) return cmd_experiment(o, out);
    if (*exp) return cmd_export(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace paralab
