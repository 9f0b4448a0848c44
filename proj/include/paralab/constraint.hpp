#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "paralab/models.hpp"
#include "paralab/syntax.hpp"
#include "paralab/theories.hpp"

namespace paralab {

/// A closed first-order sentence over the domain of a finite model:
/// a quantifier prefix followed by a flat conjunction or disjunction of
/// literals. Metavariables in the literals are the bound variables.
///
/// Text form, e.g. `?[X,Y]: ~p(i(a(X,n(X)),Y))` or
/// `![D]: ?[Y]: ~p(i(D,Y))` or `?[X]: (p(X) & ~p(n(X)))`.
struct Template {
  enum class Quantifier { Exists, Forall };
  enum class Junction { All, Any };

  struct Binder {
    Quantifier quantifier;
    std::string var;
  };

  std::vector<Binder> prefix;
  Junction junction = Junction::All;
  std::vector<Literal> literals;

  /// Dual sentence: quantifiers flipped, literals negated, junction swapped.
  Template negated() const;
};

class TemplateError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

Template parse_template(std::string_view text);
std::string print(const Template& t);

/// Truth of the sentence in m by direct evaluation.
bool holds(const FiniteModel& m, const Template& t);

struct Constraint {
  enum class Kind { RequireExists, Forbid, RefuteSchema };

  Kind kind = Kind::RequireExists;
  Template body;
  /// RefuteSchema only: the schema that some instance must falsify.
  std::string schema_id;
  Formula schema = Formula::var("X");

  static Constraint require(Template t);
  static Constraint forbid(Template t);
  static Constraint refute(const AxiomSchema& s);

  /// The sentence a model must satisfy: the template itself, its dual, or
  /// `?[vars]: ~p(schema)`.
  Template sentence() const;
};

/// `require <template>`, `forbid <template>` or `refute <id> <schema>`.
std::string print(const Constraint& c);
Constraint parse_constraint(std::string_view text);

bool satisfies(const FiniteModel& m, const Constraint& c);
bool satisfies(const FiniteModel& m, const std::vector<Constraint>& cs);

}  // namespace paralab
