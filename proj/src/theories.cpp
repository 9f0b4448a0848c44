#include "paralab/theories.hpp"

#include <algorithm>

namespace paralab {

Literal Literal::provable(Formula term, bool positive) { return Literal{positive, std::move(term), std::nullopt}; }

Literal Literal::equal(Formula lhs, Formula rhs, bool positive) {
  return Literal{positive, std::move(lhs), std::move(rhs)};
}

Literal Literal::negated() const { return Literal{!positive, lhs, rhs}; }

std::vector<std::string> Clause::variables() const {
  std::vector<std::string> out;
  auto add = [&](const Formula& f) {
    for (auto& v : paralab::variables(f))
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const auto& lit : literals) {
    add(lit.lhs);
    if (lit.rhs) add(*lit.rhs);
  }
  return out;
}

std::string print(const Literal& lit) {
  if (lit.is_equality()) return print(lit.lhs) + (lit.positive ? " = " : " != ") + print(*lit.rhs);
  return std::string(lit.positive ? "" : "~") + "p(" + print(lit.lhs) + ")";
}

std::string print(const Clause& c) {
  std::string out;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += " | ";
    out += print(c.literals[i]);
  }
  return out;
}

const AxiomSchema* Theory::find_schema(std::string_view id) const {
  for (const auto& s : schemata)
    if (s.id == id) return &s;
  return nullptr;
}

Clause modus_ponens_clause() {
  Formula x = Formula::var("X"), y = Formula::var("Y");
  return Clause{"mp",
                {Literal::provable(Formula::impl(x, y), false), Literal::provable(x, false), Literal::provable(y)}};
}

Theory c1() {
  Formula X = Formula::var("X"), Y = Formula::var("Y"), Z = Formula::var("Z");
  auto i = Formula::impl;
  auto a = Formula::conj;
  auto o = Formula::disj;
  auto n = Formula::neg;
  auto c = consistency_op;

  Theory t;
  t.name = "c1";
  t.schemata = {
      {"A1", i(X, i(Y, X))},
      {"A2", i(i(X, Y), i(i(X, i(Y, Z)), i(X, Z)))},
      {"A3", i(a(X, Y), X)},
      {"A4", i(a(X, Y), Y)},
      {"A5", i(X, i(Y, a(X, Y)))},
      {"A6", i(X, o(X, Y))},
      {"A7", i(Y, o(X, Y))},
      {"A8", i(i(X, Z), i(i(Y, Z), i(o(X, Y), Z)))},
      {"A9", o(X, n(X))},
      {"A10", i(n(n(X)), X)},
      {"A11", i(c(X), i(i(Y, X), i(i(Y, n(X)), n(Y))))},
      {"A12", i(a(c(X), c(Y)), c(a(X, Y)))},
      {"A13", i(a(c(X), c(Y)), c(o(X, Y)))},
      {"A14", i(a(c(X), c(Y)), c(i(X, Y)))},
  };
  t.rule_clauses = {modus_ponens_clause()};
  return t;
}

Theory with_explosion(Theory t) {
  if (t.has_schema("EXP")) return t;
  Formula X = Formula::var("X"), Y = Formula::var("Y");
  t.schemata.push_back({"EXP", Formula::impl(X, Formula::impl(Formula::neg(X), Y))});
  t.name += "+explosion";
  return t;
}

Theory with_bottom(Theory t) {
  if (t.has_schema("BOT")) return t;
  if (std::find(t.constants.begin(), t.constants.end(), "bot") == t.constants.end()) t.constants.push_back("bot");
  t.schemata.push_back({"BOT", Formula::impl(Formula::atom("bot"), Formula::var("X"))});
  t.name += "+bottom";
  return t;
}

Theory without_schema(Theory t, std::string_view id) {
  auto it = std::find_if(t.schemata.begin(), t.schemata.end(), [&](const AxiomSchema& s) { return s.id == id; });
  if (it == t.schemata.end()) throw TheoryError("theory '" + t.name + "' has no schema '" + std::string(id) + "'");
  t.schemata.erase(it);
  t.name += "-" + std::string(id);
  return t;
}

std::vector<Clause> structural_infinity_clauses() {
  Formula X = Formula::var("X"), Y = Formula::var("Y"), Z = Formula::var("Z");
  return {
      Clause{"impl_not_neg", {Literal::equal(Formula::impl(X, Y), Formula::neg(Z), false)}},
      Clause{"neg_no_fixpoint", {Literal::equal(Formula::neg(X), X, false)}},
      Clause{"neg_injective", {Literal::equal(Formula::neg(X), Formula::neg(Y), false), Literal::equal(X, Y)}},
  };
}

Theory with_structural_infinity(Theory t) {
  for (auto& c : structural_infinity_clauses()) {
    bool present = std::any_of(t.structural_clauses.begin(), t.structural_clauses.end(),
                               [&](const Clause& d) { return d.id == c.id; });
    if (!present) t.structural_clauses.push_back(std::move(c));
  }
  if (t.name.find("+structural") == std::string::npos) t.name += "+structural";
  return t;
}

std::vector<Clause> atom_existence_clauses() {
  Formula X = Formula::var("X"), Y = Formula::var("Y"), c = Formula::atom("atom0");
  return {
      Clause{"atom_not_neg", {Literal::equal(Formula::neg(X), c, false)}},
      Clause{"atom_not_impl", {Literal::equal(Formula::impl(X, Y), c, false)}},
      Clause{"atom_not_conj", {Literal::equal(Formula::conj(X, Y), c, false)}},
      Clause{"atom_not_disj", {Literal::equal(Formula::disj(X, Y), c, false)}},
  };
}

Theory with_atom_existence(Theory t) {
  if (std::find(t.constants.begin(), t.constants.end(), "atom0") != t.constants.end()) return t;
  t.constants.push_back("atom0");
  for (auto& c : atom_existence_clauses()) t.structural_clauses.push_back(std::move(c));
  t.name += "+atoms";
  return t;
}

Formula entails(const std::vector<Formula>& assumptions, const Formula& goal, bool extended) {
  if (assumptions.size() > 2 && !extended)
    throw TooManyAssumptions("entails: " + std::to_string(assumptions.size()) +
                             " assumptions given, at most 2 without extended nesting");
  Formula out = goal;
  for (auto it = assumptions.rbegin(); it != assumptions.rend(); ++it) out = Formula::impl(*it, out);
  return out;
}

std::vector<Clause> compile(const Theory& t) {
  std::vector<Clause> out;
  out.reserve(t.schemata.size() + t.rule_clauses.size() + t.structural_clauses.size());
  for (const auto& s : t.schemata) out.push_back(Clause{s.id, {Literal::provable(s.body)}});
  out.insert(out.end(), t.rule_clauses.begin(), t.rule_clauses.end());
  out.insert(out.end(), t.structural_clauses.begin(), t.structural_clauses.end());
  return out;
}

Theory theory_by_name(std::string_view name) {
  if (name.substr(0, 2) != "c1") throw TheoryError("unknown theory '" + std::string(name) + "'");
  Theory t = c1();
  std::string_view rest = name.substr(2);
  while (!rest.empty()) {
    char op = rest[0];
    if (op != '+' && op != '-') throw TheoryError("malformed theory name '" + std::string(name) + "'");
    std::size_t end = rest.find_first_of("+-", 1);
    std::string_view word = rest.substr(1, end == std::string_view::npos ? std::string_view::npos : end - 1);
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
    if (word.empty()) throw TheoryError("malformed theory name '" + std::string(name) + "'");
    if (op == '-') {
      t = without_schema(std::move(t), word);
    } else if (word == "explosion") {
      t = with_explosion(std::move(t));
    } else if (word == "bottom") {
      t = with_bottom(std::move(t));
    } else if (word == "structural") {
      t = with_structural_infinity(std::move(t));
    } else if (word == "atoms") {
      t = with_atom_existence(std::move(t));
    } else {
      throw TheoryError("unknown theory extension '" + std::string(word) + "'");
    }
  }
  return t;
}

}  // namespace paralab
