#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "paralab/syntax.hpp"
#include "paralab/theories.hpp"

namespace paralab {

using Element = int;

/// A finite provability structure: a domain {0..size-1} of propositions,
/// total operation tables for n, i, a, o, and the set of provable elements.
/// Constants (e.g. `bot`) are interpreted by `constants`.
struct FiniteModel {
  int size = 1;
  std::vector<Element> neg;   // size
  std::vector<Element> impl;  // size*size, row-major
  std::vector<Element> conj;
  std::vector<Element> disj;
  std::vector<bool> provable;  // membership, size entries
  std::map<std::string, Element> constants;

  /// All tables zero, nothing provable.
  static FiniteModel blank(int size);

  Element n(Element x) const { return neg[static_cast<std::size_t>(x)]; }
  Element i(Element x, Element y) const { return impl[index(x, y)]; }
  Element a(Element x, Element y) const { return conj[index(x, y)]; }
  Element o(Element x, Element y) const { return disj[index(x, y)]; }
  bool is_provable(Element x) const { return provable[static_cast<std::size_t>(x)]; }
  std::vector<Element> provable_elements() const;
  bool everything_provable() const;

  std::size_t index(Element x, Element y) const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(size) + static_cast<std::size_t>(y);
  }

  /// Throws ModelFormatError unless every table is total and in range.
  void validate() const;

  friend bool operator==(const FiniteModel&, const FiniteModel&) = default;
};

class ModelFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Interchange format, e.g. the classical model:
/// {"size":2,"neg":[1,0],"impl":[[1,1],[0,1]],"conj":[[0,0],[0,1]],"disj":[[0,1],[1,1]],"provable":[1]}
/// A "constants" object follows only when the model interprets constants.
std::string to_json(const FiniteModel& m);
FiniteModel model_from_json(const std::string& text);

/// n = 1, every table 0, provable = {0}.
FiniteModel trivial_model();
/// Two-valued Boolean tables with provable = {1}.
FiniteModel classical_model();
/// Direct product; element (x, y) is encoded as x * b.size + y.
FiniteModel product(const FiniteModel& a, const FiniteModel& b);
/// Transports m along the bijection x -> perm[x].
FiniteModel permute(const FiniteModel& m, const std::vector<Element>& perm);
/// Uniformly random tables and provable set; constants untouched.
FiniteModel random_structure(std::mt19937_64& rng, int size);

/// Value of a formula with metavariables read through `env`; atoms are
/// looked up in m.constants. Throws ModelFormatError for unbound leaves.
Element evaluate(const FiniteModel& m, const Formula& f, const std::map<std::string, Element>& env);
bool holds(const FiniteModel& m, const Literal& lit, const std::map<std::string, Element>& env);

struct Violation {
  std::string clause_id;
  std::string clause;
  std::vector<std::pair<std::string, Element>> assignment;
};

struct ModelCheck {
  static constexpr std::size_t kReportCap = 100;
  std::size_t total_violations = 0;
  /// At most kReportCap entries, in clause order then lexicographic
  /// assignment order.
  std::vector<Violation> violations;

  bool ok() const { return total_violations == 0; }
};

ModelCheck check_model(const FiniteModel& m, const Theory& t);
ModelCheck check_clauses(const FiniteModel& m, const std::vector<Clause>& clauses);

/// { d : i(d, y) provable for every y }
std::vector<Element> bottom_like(const FiniteModel& m);
/// { d : d provable implies everything provable }
std::vector<Element> conditionally_explosive(const FiniteModel& m);
/// Some (x, y) with i(a(x, n(x)), y) not provable.
std::optional<std::pair<Element, Element>> nonexplosive_contradiction_witness(const FiniteModel& m);
/// { x : i(x, i(n(x), y)) provable for every y }, the pair form {x, n x} |= y.
std::vector<Element> explosive_elements(const FiniteModel& m);
/// Elements outside the range of every operation.
std::vector<Element> atoms(const FiniteModel& m);
/// An x such that no y makes i(x, i(n(x), i(y, z))) provable for all z.
std::optional<Element> imminent_explosion_counterexample(const FiniteModel& m);
inline bool imminent_explosion_holds(const FiniteModel& m) { return !imminent_explosion_counterexample(m); }

}  // namespace paralab
