#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paralab/constraint.hpp"
#include "paralab/syntax.hpp"
#include "paralab/theories.hpp"

namespace paralab {

/// FOF document for t: one `fof(<id>, axiom, ![Vars]: p(<term>)).` per
/// unit clause, the remaining clauses as universally closed disjunctions
/// (modus ponens in implication form), and the conjecture, which becomes
/// a negated axiom when `negate` is set.
std::string export_tptp(const Theory& t, const std::optional<Formula>& conjecture = std::nullopt,
                        bool negate = false);

/// Theory axioms followed by each constraint's sentence as an axiom, for
/// model finders.
std::string export_tptp(const Theory& t, const std::vector<Constraint>& cs);

/// One `fof(...)` line for a clause.
std::string fof_axiom(const Clause& c);
/// `?[X]: (p(X) => ![Y]: p(Y))` as a conjecture.
std::string answer4_tptp();

/// The term under `p(...)` of a unit-clause axiom line, or nullopt for
/// lines of any other shape.
std::optional<Formula> axiom_term(std::string_view fof_line);

}  // namespace paralab
