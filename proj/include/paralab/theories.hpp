#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "paralab/syntax.hpp"

namespace paralab {

struct AxiomSchema {
  std::string id;
  Formula body;
  /// Set for axioms that mention no metavariable (e.g. over a constant).
  bool constant_axiom = false;
};

/// A literal over the domain of propositions: either P(term) or
/// lhs = rhs, possibly negated. Metavariables are domain variables.
struct Literal {
  bool positive = true;
  Formula lhs;
  std::optional<Formula> rhs;  // set for equality literals

  static Literal provable(Formula term, bool positive = true);
  static Literal equal(Formula lhs, Formula rhs, bool positive = true);

  bool is_equality() const { return rhs.has_value(); }
  Literal negated() const;
};

/// Disjunction of literals, universally closed over its metavariables.
struct Clause {
  std::string id;
  std::vector<Literal> literals;

  std::vector<std::string> variables() const;
  bool is_unit_provable() const { return literals.size() == 1 && literals[0].positive && !literals[0].is_equality(); }
};

/// P(term), ~P(term), term = term, term != term.
std::string print(const Literal& lit);
/// Literals joined by " | ".
std::string print(const Clause& c);

struct Theory {
  std::string name;
  std::vector<AxiomSchema> schemata;
  std::vector<Clause> rule_clauses;
  std::vector<Clause> structural_clauses;
  std::vector<std::string> constants;

  const AxiomSchema* find_schema(std::string_view id) const;
  bool has_schema(std::string_view id) const { return find_schema(id) != nullptr; }
};

class TheoryError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class TooManyAssumptions : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// ~P(i(X,Y)) | ~P(X) | P(Y)
Clause modus_ponens_clause();

/// da Costa's C1: A1-A14 over {i,n,a,o} with the consistency operator
/// defined, plus modus ponens.
Theory c1();

/// Adds EXP: i(X, i(n(X), Y)). Idempotent.
Theory with_explosion(Theory t);
/// Adds the constant `bot` and BOT: i(bot, X). Idempotent.
Theory with_bottom(Theory t);
/// Removes one schema by id; throws TheoryError if absent.
Theory without_schema(Theory t, std::string_view id);
/// Enables the three structural clauses below. Idempotent.
Theory with_structural_infinity(Theory t);
/// Adds a constant `atom0` lying outside the range of every connective.
Theory with_atom_existence(Theory t);

/// i(x,y) != n(z); n(x) != x; n(x) = n(y) -> x = y. Jointly they have no
/// finite model.
std::vector<Clause> structural_infinity_clauses();
std::vector<Clause> atom_existence_clauses();

/// Deduction-theorem encoding of consequence from assumptions:
/// [] -> goal, [a] -> i(a,goal), [a,b] -> i(a,i(b,goal)). More than two
/// assumptions throw TooManyAssumptions unless `extended` is set, in which
/// case the nesting continues left to right.
Formula entails(const std::vector<Formula>& assumptions, const Formula& goal, bool extended = false);

/// One unit clause +P(body) per schema, then rule clauses, then
/// structural clauses.
std::vector<Clause> compile(const Theory& t);

/// Accepts `c1` followed by any sequence of `+explosion`, `+bottom`,
/// `+structural`, `+atoms` and `-<schema id>` (deletion).
Theory theory_by_name(std::string_view name);

}  // namespace paralab
