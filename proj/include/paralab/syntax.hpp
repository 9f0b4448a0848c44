#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace paralab {

/// Immutable propositional formula over the signature {i, n, a, o}.
///
/// Leaves are either atoms (rigid, lowercase names) or metavariables
/// (unifiable, uppercase names). Copies share structure.
class Formula {
public:
  enum class Kind { Atom, MetaVar, Neg, Impl, Conj, Disj };

  static Formula atom(std::string name);
  static Formula var(std::string name);
  static Formula neg(Formula arg);
  static Formula impl(Formula lhs, Formula rhs);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula binary(Kind kind, Formula lhs, Formula rhs);

  Kind kind() const;
  bool is_leaf() const { return kind() == Kind::Atom || kind() == Kind::MetaVar; }
  bool is_var() const { return kind() == Kind::MetaVar; }
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_binary() const { return kind() == Kind::Impl || kind() == Kind::Conj || kind() == Kind::Disj; }

  /// Leaf name; empty for compound formulas.
  const std::string& name() const;
  /// Sole argument of a negation, left argument of a binary connective.
  const Formula& lhs() const;
  const Formula& rhs() const;

  /// Number of symbols (leaves plus connectives).
  std::size_t size() const;
  bool ground() const;
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  /// Total order used for deterministic containers; not a logical order.
  friend bool operator<(const Formula& a, const Formula& b);

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Thrown on malformed formula text. `position` is the 1-based column of
/// the offending character (one past the end for truncated input).
class SyntaxError : public std::runtime_error {
public:
  SyntaxError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

using Substitution = std::map<std::string, Formula>;

Formula parse(std::string_view text);
std::string print(const Formula& f);

bool is_atom_name(std::string_view s);
bool is_var_name(std::string_view s);

/// Simultaneous replacement of metavariables; atoms are untouched.
Formula substitute(const Formula& f, const Substitution& s);

/// Most general unifier, or nullopt when none exists (including
/// occurs-check failures). The result is idempotent.
std::optional<Substitution> unify(const Formula& f, const Formula& g);

/// One-way matching: a substitution s with substitute(pattern, s) == instance.
/// Metavariables of `instance` are treated as rigid.
std::optional<Substitution> match(const Formula& pattern, const Formula& instance);

bool is_instance_of(const Formula& instance, const Formula& pattern);
/// Equal up to a bijective renaming of metavariables.
bool is_variant(const Formula& a, const Formula& b);

/// Metavariable names in first-occurrence (left-to-right prefix) order.
std::vector<std::string> variables(const Formula& f);

/// Canonical name of the k-th metavariable in first-occurrence order.
std::string canonical_var_name(std::size_t k);
/// Renames metavariables to canonical names in first-occurrence order.
Formula canonicalize(const Formula& f);
/// Appends `suffix` to every metavariable name.
Formula rename_with_suffix(const Formula& f, std::string_view suffix);

enum class DetachError { NotImplication, UnifyFailure };

/// Condensed detachment: if major = i(A,B) and minor unifies with A under
/// most general unifier t, yields canonicalize(B t). The premises are
/// renamed apart internally.
std::variant<Formula, DetachError> condensed_detach(const Formula& major, const Formula& minor);

/// n(a(f, n(f))): the defined consistency operator.
Formula consistency_op(const Formula& f);

}  // namespace paralab
