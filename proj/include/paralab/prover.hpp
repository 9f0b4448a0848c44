#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "paralab/syntax.hpp"
#include "paralab/theories.hpp"

namespace paralab {

/// One line of a condensed-detachment proof. Line numbers are 1-based.
struct ProofLine {
  enum class Kind { Axiom, Detach };
  Kind kind = Kind::Axiom;
  std::string schema_id;     // Axiom lines
  std::size_t major = 0;     // Detach lines
  std::size_t minor = 0;
  Formula formula = Formula::var("X");
};

struct Proof {
  std::vector<ProofLine> lines;
  std::size_t goal_line = 0;

  const Formula& conclusion() const { return lines.at(goal_line - 1).formula; }
};

class ProofFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// `<n> AX <schema_id> <formula>` or `<n> CD <major>,<minor> <formula>`,
/// one line each; the last line is the goal line.
std::string to_transcript(const Proof& p);
Proof proof_from_transcript(const std::string& text);

struct ProofCheck {
  bool valid = true;
  std::size_t line = 0;  // first offending line when invalid
  std::string reason;
};

/// Verifies every line against the schemata of `t` using only the syntax
/// module: axiom lines must be instances of the named schema, detachment
/// lines must cite earlier lines and agree with condensed_detach up to
/// renaming.
ProofCheck check_proof(const Theory& t, const Proof& p);
/// The conclusion subsumes `goal` (goal metavariables are rigid).
bool proves(const Proof& p, const Formula& goal);

struct ProverConfig {
  std::size_t max_generated = 1'000'000;
  std::size_t max_formula_size = 31;
  double max_seconds = 600.0;
  /// After this many lightest-first picks the oldest unselected formula is
  /// picked once; 0 selects by weight only.
  std::size_t age_ratio = 4;
  /// Derived formulas with more distinct metavariables are dropped; 0 means
  /// no limit.
  std::size_t max_distinct_vars = 0;
  /// Extra selection weight per connective absent from the goal.
  std::size_t foreign_penalty = 3;
};

enum class BudgetKind { MaxGenerated, MaxSeconds, Saturated };
std::string to_string(BudgetKind k);

struct ProverStats {
  std::size_t generated = 0;
  std::size_t retained = 0;
  std::size_t given = 0;
  std::size_t subsumed = 0;
  std::size_t oversize = 0;
  double seconds = 0.0;
};

struct Exhausted {
  BudgetKind budget;
  ProverStats stats;
};

using DeriveResult = std::variant<Proof, Exhausted>;

/// Given-clause condensed-detachment saturation. Selection takes the
/// lightest retained formula (symbol count plus the foreign-connective
/// penalty), ties by insertion order, with an oldest-first pick every
/// age_ratio + 1 turns. New formulas are dropped when subsumed by a
/// retained one. The run can be
/// advanced in slices with step().
class ProverSession {
public:
  ProverSession(const Theory& t, const Formula& goal, ProverConfig cfg);
  ~ProverSession();
  ProverSession(ProverSession&&) noexcept;
  ProverSession& operator=(ProverSession&&) noexcept;

  enum class Status { Running, Proved, Exhausted };

  /// Continues until `generated_quantum` more formulas have been generated
  /// or the search ends.
  Status step(std::size_t generated_quantum);
  Status status() const;

  /// Valid once status() == Proved.
  Proof proof() const;
  /// Valid once status() == Exhausted.
  Exhausted exhausted() const;
  const ProverStats& stats() const;

private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

DeriveResult derive(const Theory& t, const Formula& goal, const ProverConfig& cfg = {});

}  // namespace paralab
