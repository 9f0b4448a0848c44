#include "paralab/tptp.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace paralab {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Variables in canonical-name order (X, Y, Z, U, V, W, X6, ...).
std::string binder(std::vector<std::string> vars) {
  if (vars.empty()) return "";
  auto rank = [](const std::string& v) {
    static const std::string first = "XYZUVW";
    if (v.size() == 1 && first.find(v[0]) != std::string::npos) return std::make_pair(first.find(v[0]), v);
    return std::make_pair(first.size(), v);
  };
  std::sort(vars.begin(), vars.end(), [&](const std::string& a, const std::string& b) { return rank(a) < rank(b); });
  std::string out = "![";
  for (std::size_t k = 0; k < vars.size(); ++k) out += (k ? "," : "") + vars[k];
  return out + "]: ";
}

std::string fof(const std::string& name, const std::string& role, const std::string& body) {
  return "fof(" + name + ", " + role + ", " + body + ").\n";
}

bool is_modus_ponens(const Clause& c) {
  const Clause mp = modus_ponens_clause();
  if (c.literals.size() != mp.literals.size()) return false;
  for (std::size_t k = 0; k < c.literals.size(); ++k) {
    const Literal &a = c.literals[k], &b = mp.literals[k];
    if (a.positive != b.positive || a.is_equality() || a.lhs != b.lhs) return false;
  }
  return true;
}

}  // namespace

std::string fof_axiom(const Clause& c) {
  std::string name = lower(c.id);
  if (is_modus_ponens(c)) return fof(name, "axiom", "![X,Y]: ((p(i(X,Y)) & p(X)) => p(Y))");
  std::string body = print(c);
  if (c.literals.size() > 1) body = "(" + body + ")";
  return fof(name, "axiom", binder(c.variables()) + body);
}

std::string export_tptp(const Theory& t, const std::optional<Formula>& conjecture, bool negate) {
  std::string out = "% theory " + t.name + "\n";
  for (const Clause& c : compile(t)) out += fof_axiom(c);
  if (conjecture) {
    std::string body = binder(variables(*conjecture)) + "p(" + print(*conjecture) + ")";
    out += negate ? fof("goal", "axiom", "~(" + body + ")") : fof("goal", "conjecture", body);
  }
  return out;
}

std::string export_tptp(const Theory& t, const std::vector<Constraint>& cs) {
  std::string out = export_tptp(t);
  for (std::size_t k = 0; k < cs.size(); ++k) {
    out += "% " + print(cs[k]) + "\n";
    out += fof("constraint" + std::to_string(k + 1), "axiom", print(cs[k].sentence()));
  }
  return out;
}

std::string answer4_tptp() { return fof("answer4", "conjecture", "?[X]: (p(X) => ![Y]: p(Y))"); }

std::optional<Formula> axiom_term(std::string_view line) {
  auto open = line.find(": p(");
  std::size_t start;
  if (open != std::string_view::npos) {
    start = open + 4;
  } else {
    auto comma = line.find(", axiom, p(");
    if (comma == std::string_view::npos) return std::nullopt;
    start = comma + 11;
  }
  auto end = line.rfind(")).");
  if (end == std::string_view::npos || end < start) return std::nullopt;
  try {
    return parse(line.substr(start, end - start));
  } catch (const SyntaxError&) {
    return std::nullopt;
  }
}

}  // namespace paralab
