#include "paralab/models.hpp"

#include <algorithm>
#include "json.hpp"

namespace paralab {

using ordered_json = nlohmann::ordered_json;

FiniteModel FiniteModel::blank(int size) {
  if (size < 1) throw ModelFormatError("model size must be at least 1");
  FiniteModel m;
  m.size = size;
  auto n = static_cast<std::size_t>(size);
  m.neg.assign(n, 0);
  m.impl.assign(n * n, 0);
  m.conj.assign(n * n, 0);
  m.disj.assign(n * n, 0);
  m.provable.assign(n, false);
  return m;
}

std::vector<Element> FiniteModel::provable_elements() const {
  std::vector<Element> out;
  for (Element x = 0; x < size; ++x)
    if (is_provable(x)) out.push_back(x);
  return out;
}

bool FiniteModel::everything_provable() const {
  return std::all_of(provable.begin(), provable.end(), [](bool b) { return b; });
}

void FiniteModel::validate() const {
  if (size < 1) throw ModelFormatError("model size must be at least 1");
  auto n = static_cast<std::size_t>(size);
  auto check = [&](const std::vector<Element>& table, std::size_t expected, const char* what) {
    if (table.size() != expected)
      throw ModelFormatError(std::string("table '") + what + "' has " + std::to_string(table.size()) +
                             " entries, expected " + std::to_string(expected));
    for (Element v : table)
      if (v < 0 || v >= size)
        throw ModelFormatError(std::string("table '") + what + "' entry " + std::to_string(v) + " out of range");
  };
  check(neg, n, "neg");
  check(impl, n * n, "impl");
  check(conj, n * n, "conj");
  check(disj, n * n, "disj");
  if (provable.size() != n) throw ModelFormatError("provable membership has wrong length");
  for (const auto& [name, v] : constants)
    if (v < 0 || v >= size) throw ModelFormatError("constant '" + name + "' out of range");
}

namespace {

ordered_json table_json(const FiniteModel& m, const std::vector<Element>& t) {
  ordered_json rows = ordered_json::array();
  for (Element x = 0; x < m.size; ++x) {
    ordered_json row = ordered_json::array();
    for (Element y = 0; y < m.size; ++y) row.push_back(t[m.index(x, y)]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Element> read_table(const ordered_json& j, const char* key, int n) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != static_cast<std::size_t>(n))
    throw ModelFormatError(std::string("field '") + key + "' must be an array of " + std::to_string(n) + " rows");
  std::vector<Element> out;
  for (const auto& row : j[key]) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
      throw ModelFormatError(std::string("field '") + key + "' has a malformed row");
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw ModelFormatError(std::string("field '") + key + "' has a non-integer entry");
      out.push_back(v.get<Element>());
    }
  }
  return out;
}

}  // namespace

std::string to_json(const FiniteModel& m) {
  ordered_json j;
  j["size"] = m.size;
  j["neg"] = m.neg;
  j["impl"] = table_json(m, m.impl);
  j["conj"] = table_json(m, m.conj);
  j["disj"] = table_json(m, m.disj);
  j["provable"] = m.provable_elements();
  if (!m.constants.empty()) {
    ordered_json c = ordered_json::object();
    for (const auto& [name, v] : m.constants) c[name] = v;
    j["constants"] = std::move(c);
  }
  return j.dump();
}

FiniteModel model_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFormatError(std::string("model is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("size") || !j["size"].is_number_integer())
    throw ModelFormatError("model must be an object with an integer 'size'");
  int n = j["size"].get<int>();
  FiniteModel m = FiniteModel::blank(n);
  if (!j.contains("neg") || !j["neg"].is_array()) throw ModelFormatError("field 'neg' missing");
  m.neg.clear();
  for (const auto& v : j["neg"]) {
    if (!v.is_number_integer()) throw ModelFormatError("field 'neg' has a non-integer entry");
    m.neg.push_back(v.get<Element>());
  }
  m.impl = read_table(j, "impl", n);
  m.conj = read_table(j, "conj", n);
  m.disj = read_table(j, "disj", n);
  if (!j.contains("provable") || !j["provable"].is_array()) throw ModelFormatError("field 'provable' missing");
  Element last = -1;
  for (const auto& v : j["provable"]) {
    if (!v.is_number_integer()) throw ModelFormatError("field 'provable' has a non-integer entry");
    Element x = v.get<Element>();
    if (x < 0 || x >= n) throw ModelFormatError("provable element out of range");
    if (x <= last) throw ModelFormatError("field 'provable' must be sorted without duplicates");
    m.provable[static_cast<std::size_t>(x)] = true;
    last = x;
  }
  if (j.contains("constants")) {
    if (!j["constants"].is_object()) throw ModelFormatError("field 'constants' must be an object");
    for (const auto& [name, v] : j["constants"].items()) {
      if (!v.is_number_integer()) throw ModelFormatError("constant '" + name + "' must be an integer");
      m.constants[name] = v.get<Element>();
    }
  }
  m.validate();
  return m;
}

FiniteModel trivial_model() {
  FiniteModel m = FiniteModel::blank(1);
  m.provable[0] = true;
  return m;
}

FiniteModel classical_model() {
  FiniteModel m = FiniteModel::blank(2);
  m.neg = {1, 0};
  m.impl = {1, 1, 0, 1};
  m.conj = {0, 0, 0, 1};
  m.disj = {0, 1, 1, 1};
  m.provable = {false, true};
  return m;
}

FiniteModel product(const FiniteModel& a, const FiniteModel& b) {
  FiniteModel m = FiniteModel::blank(a.size * b.size);
  auto enc = [&](Element x, Element y) { return x * b.size + y; };
  for (Element x = 0; x < a.size; ++x)
    for (Element y = 0; y < b.size; ++y) {
      Element p = enc(x, y);
      m.neg[static_cast<std::size_t>(p)] = enc(a.n(x), b.n(y));
      m.provable[static_cast<std::size_t>(p)] = a.is_provable(x) && b.is_provable(y);
      for (Element u = 0; u < a.size; ++u)
        for (Element v = 0; v < b.size; ++v) {
          Element q = enc(u, v);
          m.impl[m.index(p, q)] = enc(a.i(x, u), b.i(y, v));
          m.conj[m.index(p, q)] = enc(a.a(x, u), b.a(y, v));
          m.disj[m.index(p, q)] = enc(a.o(x, u), b.o(y, v));
        }
    }
  for (const auto& [name, x] : a.constants) {
    auto it = b.constants.find(name);
    if (it != b.constants.end()) m.constants[name] = enc(x, it->second);
  }
  return m;
}

FiniteModel permute(const FiniteModel& m, const std::vector<Element>& perm) {
  if (perm.size() != static_cast<std::size_t>(m.size)) throw std::invalid_argument("permute: wrong length");
  FiniteModel out = FiniteModel::blank(m.size);
  auto p = [&](Element x) { return perm[static_cast<std::size_t>(x)]; };
  for (Element x = 0; x < m.size; ++x) {
    out.neg[static_cast<std::size_t>(p(x))] = p(m.n(x));
    out.provable[static_cast<std::size_t>(p(x))] = m.is_provable(x);
    for (Element y = 0; y < m.size; ++y) {
      out.impl[out.index(p(x), p(y))] = p(m.i(x, y));
      out.conj[out.index(p(x), p(y))] = p(m.a(x, y));
      out.disj[out.index(p(x), p(y))] = p(m.o(x, y));
    }
  }
  for (const auto& [name, x] : m.constants) out.constants[name] = p(x);
  return out;
}

FiniteModel random_structure(std::mt19937_64& rng, int size) {
  FiniteModel m = FiniteModel::blank(size);
  // Raw engine output keeps the stream identical across standard libraries.
  auto elem = [&] { return static_cast<Element>(rng() % static_cast<std::uint64_t>(size)); };
  for (auto& v : m.neg) v = elem();
  for (auto* t : {&m.impl, &m.conj, &m.disj})
    for (auto& v : *t) v = elem();
  for (std::size_t x = 0; x < m.provable.size(); ++x) m.provable[x] = (rng() >> 63) != 0;
  return m;
}

Element evaluate(const FiniteModel& m, const Formula& f, const std::map<std::string, Element>& env) {
  switch (f.kind()) {
    case Formula::Kind::MetaVar: {
      auto it = env.find(f.name());
      if (it == env.end()) throw ModelFormatError("unbound variable " + f.name());
      return it->second;
    }
    case Formula::Kind::Atom: {
      auto it = m.constants.find(f.name());
      if (it == m.constants.end()) throw ModelFormatError("model does not interpret constant '" + f.name() + "'");
      return it->second;
    }
    case Formula::Kind::Neg: return m.n(evaluate(m, f.lhs(), env));
    case Formula::Kind::Impl: return m.i(evaluate(m, f.lhs(), env), evaluate(m, f.rhs(), env));
    case Formula::Kind::Conj: return m.a(evaluate(m, f.lhs(), env), evaluate(m, f.rhs(), env));
    case Formula::Kind::Disj: return m.o(evaluate(m, f.lhs(), env), evaluate(m, f.rhs(), env));
  }
  throw std::logic_error("evaluate: unknown formula kind");
}

bool holds(const FiniteModel& m, const Literal& lit, const std::map<std::string, Element>& env) {
  bool value = lit.is_equality() ? evaluate(m, lit.lhs, env) == evaluate(m, *lit.rhs, env)
                                 : m.is_provable(evaluate(m, lit.lhs, env));
  return value == lit.positive;
}

namespace {

// Postfix program for one term with variables resolved to slots.
struct Program {
  enum Op : int { kVar = -1, kConst = -2, kNeg = -3, kImpl = -4, kConj = -5, kDisj = -6 };
  std::vector<std::pair<int, int>> code;  // (op, operand)

  Element run(const FiniteModel& m, const std::vector<Element>& slots, std::vector<Element>& stack) const {
    stack.clear();
    for (auto [op, arg] : code) {
      switch (op) {
        case kVar: stack.push_back(slots[static_cast<std::size_t>(arg)]); break;
        case kConst: stack.push_back(arg); break;
        case kNeg: stack.back() = m.n(stack.back()); break;
        default: {
          Element r = stack.back();
          stack.pop_back();
          Element l = stack.back();
          stack.back() = op == kImpl ? m.i(l, r) : op == kConj ? m.a(l, r) : m.o(l, r);
        }
      }
    }
    return stack.back();
  }
};

Program compile_term(const FiniteModel& m, const Formula& f, const std::vector<std::string>& vars) {
  Program p;
  auto go = [&](auto& self, const Formula& t) -> void {
    switch (t.kind()) {
      case Formula::Kind::MetaVar: {
        auto it = std::find(vars.begin(), vars.end(), t.name());
        p.code.emplace_back(Program::kVar, static_cast<int>(it - vars.begin()));
        return;
      }
      case Formula::Kind::Atom: {
        auto it = m.constants.find(t.name());
        if (it == m.constants.end()) throw ModelFormatError("model does not interpret constant '" + t.name() + "'");
        p.code.emplace_back(Program::kConst, it->second);
        return;
      }
      case Formula::Kind::Neg:
        self(self, t.lhs());
        p.code.emplace_back(Program::kNeg, 0);
        return;
      default:
        self(self, t.lhs());
        self(self, t.rhs());
        p.code.emplace_back(t.kind() == Formula::Kind::Impl   ? Program::kImpl
                            : t.kind() == Formula::Kind::Conj ? Program::kConj
                                                              : Program::kDisj,
                            0);
    }
  };
  go(go, f);
  return p;
}

}  // namespace

ModelCheck check_clauses(const FiniteModel& m, const std::vector<Clause>& clauses) {
  ModelCheck result;
  std::vector<Element> stack;
  for (const auto& clause : clauses) {
    auto vars = clause.variables();
    struct CompiledLiteral {
      bool positive;
      Program lhs;
      std::optional<Program> rhs;
    };
    std::vector<CompiledLiteral> lits;
    for (const auto& lit : clause.literals)
      lits.push_back({lit.positive, compile_term(m, lit.lhs, vars),
                      lit.rhs ? std::optional<Program>(compile_term(m, *lit.rhs, vars)) : std::nullopt});

    std::vector<Element> slots(vars.size(), 0);
    while (true) {
      bool satisfied = false;
      for (const auto& lit : lits) {
        Element l = lit.lhs.run(m, slots, stack);
        bool value = lit.rhs ? l == lit.rhs->run(m, slots, stack) : m.is_provable(l);
        if (value == lit.positive) {
          satisfied = true;
          break;
        }
      }
      if (!satisfied) {
        ++result.total_violations;
        if (result.violations.size() < ModelCheck::kReportCap) {
          Violation v{clause.id, print(clause), {}};
          for (std::size_t k = 0; k < vars.size(); ++k) v.assignment.emplace_back(vars[k], slots[k]);
          result.violations.push_back(std::move(v));
        }
      }
      // Odometer, last variable fastest.
      std::size_t k = slots.size();
      while (k > 0 && slots[k - 1] == m.size - 1) slots[--k] = 0;
      if (k == 0) break;
      ++slots[k - 1];
    }
  }
  return result;
}

ModelCheck check_model(const FiniteModel& m, const Theory& t) { return check_clauses(m, compile(t)); }

std::vector<Element> bottom_like(const FiniteModel& m) {
  std::vector<Element> out;
  for (Element d = 0; d < m.size; ++d) {
    bool all = true;
    for (Element y = 0; y < m.size && all; ++y) all = m.is_provable(m.i(d, y));
    if (all) out.push_back(d);
  }
  return out;
}

std::vector<Element> conditionally_explosive(const FiniteModel& m) {
  bool full = m.everything_provable();
  std::vector<Element> out;
  for (Element d = 0; d < m.size; ++d)
    if (!m.is_provable(d) || full) out.push_back(d);
  return out;
}

std::optional<std::pair<Element, Element>> nonexplosive_contradiction_witness(const FiniteModel& m) {
  for (Element x = 0; x < m.size; ++x) {
    Element contradiction = m.a(x, m.n(x));
    for (Element y = 0; y < m.size; ++y)
      if (!m.is_provable(m.i(contradiction, y))) return std::pair{x, y};
  }
  return std::nullopt;
}

std::vector<Element> explosive_elements(const FiniteModel& m) {
  std::vector<Element> out;
  for (Element x = 0; x < m.size; ++x) {
    bool all = true;
    for (Element y = 0; y < m.size && all; ++y) all = m.is_provable(m.i(x, m.i(m.n(x), y)));
    if (all) out.push_back(x);
  }
  return out;
}

std::vector<Element> atoms(const FiniteModel& m) {
  std::vector<bool> hit(static_cast<std::size_t>(m.size), false);
  for (Element v : m.neg) hit[static_cast<std::size_t>(v)] = true;
  for (const auto* t : {&m.impl, &m.conj, &m.disj})
    for (Element v : *t) hit[static_cast<std::size_t>(v)] = true;
  std::vector<Element> out;
  for (Element x = 0; x < m.size; ++x)
    if (!hit[static_cast<std::size_t>(x)]) out.push_back(x);
  return out;
}

std::optional<Element> imminent_explosion_counterexample(const FiniteModel& m) {
  for (Element x = 0; x < m.size; ++x) {
    bool witnessed = false;
    for (Element y = 0; y < m.size && !witnessed; ++y) {
      bool all = true;
      for (Element z = 0; z < m.size && all; ++z) all = m.is_provable(m.i(x, m.i(m.n(x), m.i(y, z))));
      witnessed = all;
    }
    if (!witnessed) return x;
  }
  return std::nullopt;
}

}  // namespace paralab
