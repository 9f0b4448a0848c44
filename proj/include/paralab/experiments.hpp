#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "paralab/constraint.hpp"
#include "paralab/independence.hpp"
#include "paralab/models.hpp"
#include "paralab/prover.hpp"
#include "paralab/search.hpp"
#include "paralab/theories.hpp"

namespace paralab {

enum class Verdict { Established, Refuted, Evidence, Unknown };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// What an experiment part asks: a theory (by name, so it can be rebuilt
/// and exported) plus model constraints, or a goal to derive.
struct Statement {
  std::string theory;
  std::vector<Constraint> constraints;
  std::optional<Formula> goal;
};

/// A model or proof backing a verdict. Models must satisfy the theory and
/// constraints of `statement`; proofs must check against its theory and
/// prove its goal.
struct Witness {
  std::string role;
  Statement statement;
  std::optional<FiniteModel> model;
  std::optional<Proof> proof;
};

struct ExperimentPart {
  std::string id;
  std::string description;
  Statement statement;
  Verdict verdict = Verdict::Unknown;
  /// Largest size covered by an exhaustive search, for Evidence and Refuted.
  int bound = 0;
  std::string detail;
  std::vector<Witness> witnesses;
};

struct ExperimentReport {
  std::string experiment_id;
  std::string theory_name;
  Verdict verdict = Verdict::Unknown;
  int bound = 0;
  std::vector<ExperimentPart> parts;
  std::optional<std::uint64_t> seed;
  /// Limits the run was given, as name/value pairs.
  std::vector<std::pair<std::string, double>> budgets;
  double wall_time = 0.0;
};

struct ExperimentConfig {
  SearchConfig search;
  ProverConfig prover;
  std::uint64_t seed = 20240229;
  int corpus_count = 1000;
  int corpus_max_size = 5;
  /// Experiment 3 enumerates labelled models only up to this size; the
  /// constraint route covers min_size..max_size.
  int enumeration_max_size = 2;
  IndependenceOptions independence;
};

/// A C1 model with a contradiction a(x, n(x)) that does not imply some y.
/// `theory_name` selects the variant (e.g. "c1+explosion").
ExperimentReport experiment0(const ExperimentConfig& cfg, const std::string& theory_name = "c1");
/// (a) conditionally explosive elements exist in every random structure;
/// (b) a C1 model with a conditionally explosive element that is not
/// bottom-like.
ExperimentReport experiment1(const ExperimentConfig& cfg);
/// (a) c1+explosion has a model; (b) A11-A14 are derivable without
/// themselves under explosion; (c) A9 is independent.
ExperimentReport experiment2(const ExperimentConfig& cfg);
/// Every small C1 model has a bottom-like element.
ExperimentReport experiment3(const ExperimentConfig& cfg);
/// Imminent explosion x, n(x) |- (y -> z) for some y, over the experiment 3
/// corpus and by search.
ExperimentReport probe_imminent_explosion(const ExperimentConfig& cfg);

/// Runs "0".."3" or "imminent".
ExperimentReport run_experiment(const std::string& id, const ExperimentConfig& cfg,
                                const std::string& theory_name = "c1");

/// Re-runs the independent checker on every witness; throws
/// std::logic_error naming the first failure.
void verify_witnesses(const ExperimentReport& r);

/// JSON document; witnesses are verified first.
std::string render(const ExperimentReport& r);
ExperimentReport report_from_json(const std::string& text);

/// Sentences used by the experiments.
namespace sentences {
/// ?[X,Y]: ~p(i(a(X,n(X)),Y))
Template nonexplosive_contradiction();
/// ?[X,Y]: (~p(X) & ~p(i(X,Y))): X is conditionally explosive (vacuously)
/// and not bottom-like.
Template explosive_not_bottom_like();
/// ?[D]: ![Y]: p(i(D,Y))
Template bottom_like_exists();
/// ?[X]: ![Y]: ?[Z]: ~p(i(X,i(n(X),i(Y,Z))))
Template imminent_explosion_fails();
}  // namespace sentences

}  // namespace paralab
