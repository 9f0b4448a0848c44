#pragma once

// Independent oracles shared by the unit and acceptance suites. Nothing
// here calls the search engine or the model analyzers.

#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "paralab/models.hpp"
#include "paralab/prover.hpp"
#include "paralab/syntax.hpp"
#include "paralab/theories.hpp"

namespace paralab::testing {

/// Random formula over atoms p, q, r and metavariables X, Y, Z.
inline Formula random_formula(std::mt19937_64& rng, int depth) {
  auto pick = [&](std::uint64_t n) { return rng() % n; };
  if (depth == 0 || pick(4) == 0) {
    static const char* leaves[] = {"p", "q", "r", "X", "Y", "Z"};
    std::string name = leaves[pick(6)];
    return std::isupper(static_cast<unsigned char>(name[0])) ? Formula::var(name) : Formula::atom(name);
  }
  switch (pick(4)) {
    case 0: return Formula::neg(random_formula(rng, depth - 1));
    case 1: return Formula::impl(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 2: return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default: return Formula::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

/// Tree-walking evaluation with its own recursion.
inline int eval(const FiniteModel& m, const Formula& f, const std::map<std::string, int>& env) {
  switch (f.kind()) {
    case Formula::Kind::MetaVar: return env.at(f.name());
    case Formula::Kind::Atom: return m.constants.at(f.name());
    case Formula::Kind::Neg: return m.neg[static_cast<std::size_t>(eval(m, f.lhs(), env))];
    case Formula::Kind::Impl:
      return m.impl[static_cast<std::size_t>(eval(m, f.lhs(), env) * m.size + eval(m, f.rhs(), env))];
    case Formula::Kind::Conj:
      return m.conj[static_cast<std::size_t>(eval(m, f.lhs(), env) * m.size + eval(m, f.rhs(), env))];
    case Formula::Kind::Disj:
      return m.disj[static_cast<std::size_t>(eval(m, f.lhs(), env) * m.size + eval(m, f.rhs(), env))];
  }
  return -1;
}

/// Calls fn for every assignment of domain elements to vars.
inline void for_each_assignment(int size, const std::vector<std::string>& vars,
                                const std::function<bool(const std::map<std::string, int>&)>& fn) {
  std::map<std::string, int> env;
  for (const auto& v : vars) env[v] = 0;
  while (true) {
    if (!fn(env)) return;
    std::size_t k = 0;
    for (; k < vars.size(); ++k) {
      if (++env[vars[k]] < size) break;
      env[vars[k]] = 0;
    }
    if (k == vars.size()) return;
  }
}

/// Every instance of every schema is provable and P is closed under MP,
/// checked without the compiled clauses.
inline bool naive_is_model(const FiniteModel& m, const Theory& t) {
  for (const auto& s : t.schemata) {
    bool ok = true;
    for_each_assignment(m.size, variables(s.body), [&](const auto& env) {
      ok = m.provable[static_cast<std::size_t>(eval(m, s.body, env))];
      return ok;
    });
    if (!ok) return false;
  }
  for (int x = 0; x < m.size; ++x)
    for (int y = 0; y < m.size; ++y)
      if (m.provable[static_cast<std::size_t>(m.impl[static_cast<std::size_t>(x * m.size + y)])] &&
          m.provable[static_cast<std::size_t>(x)] && !m.provable[static_cast<std::size_t>(y)])
        return false;
  return true;
}

/// Every labelled structure of the given size, in odometer order over
/// (provable, neg, impl, conj, disj).
inline void for_each_structure(int size, const std::function<void(const FiniteModel&)>& fn) {
  FiniteModel m = FiniteModel::blank(size);
  std::vector<int*> cells;
  const int n = size;
  std::vector<int> pbits(static_cast<std::size_t>(n), 0);
  for (auto& b : pbits) cells.push_back(&b);
  for (auto& v : m.neg) cells.push_back(&v);
  for (auto& v : m.impl) cells.push_back(&v);
  for (auto& v : m.conj) cells.push_back(&v);
  for (auto& v : m.disj) cells.push_back(&v);
  while (true) {
    for (int k = 0; k < n; ++k) m.provable[static_cast<std::size_t>(k)] = pbits[static_cast<std::size_t>(k)] != 0;
    fn(m);
    std::size_t k = 0;
    for (; k < cells.size(); ++k) {
      int limit = k < static_cast<std::size_t>(n) ? 2 : n;
      if (++*cells[k] < limit) break;
      *cells[k] = 0;
    }
    if (k == cells.size()) return;
  }
}

inline std::vector<int> naive_bottom_like(const FiniteModel& m) {
  std::vector<int> out;
  for (int d = 0; d < m.size; ++d) {
    bool all = true;
    for (int y = 0; y < m.size; ++y)
      if (!m.provable[static_cast<std::size_t>(m.impl[static_cast<std::size_t>(d * m.size + y)])]) all = false;
    if (all) out.push_back(d);
  }
  return out;
}

inline std::vector<int> naive_conditionally_explosive(const FiniteModel& m) {
  bool full = true;
  for (int y = 0; y < m.size; ++y) full = full && m.provable[static_cast<std::size_t>(y)];
  std::vector<int> out;
  for (int d = 0; d < m.size; ++d)
    if (!m.provable[static_cast<std::size_t>(d)] || full) out.push_back(d);
  return out;
}

inline std::vector<int> naive_atoms(const FiniteModel& m) {
  std::vector<bool> hit(static_cast<std::size_t>(m.size), false);
  for (int v : m.neg) hit[static_cast<std::size_t>(v)] = true;
  for (int v : m.impl) hit[static_cast<std::size_t>(v)] = true;
  for (int v : m.conj) hit[static_cast<std::size_t>(v)] = true;
  for (int v : m.disj) hit[static_cast<std::size_t>(v)] = true;
  std::vector<int> out;
  for (int d = 0; d < m.size; ++d)
    if (!hit[static_cast<std::size_t>(d)]) out.push_back(d);
  return out;
}

inline bool naive_imminent(const FiniteModel& m) {
  auto I = [&](int x, int y) { return m.impl[static_cast<std::size_t>(x * m.size + y)]; };
  for (int x = 0; x < m.size; ++x) {
    bool some_y = false;
    for (int y = 0; y < m.size && !some_y; ++y) {
      bool all_z = true;
      for (int z = 0; z < m.size; ++z)
        if (!m.provable[static_cast<std::size_t>(I(x, I(m.neg[static_cast<std::size_t>(x)], I(y, z))))]) all_z = false;
      some_y = all_z;
    }
    if (!some_y) return false;
  }
  return true;
}

/// Every instance of a proved schema lands in the provable set.
inline std::size_t semantic_violations(const FiniteModel& m, const Formula& theorem) {
  std::size_t bad = 0;
  for_each_assignment(m.size, variables(theorem), [&](const auto& env) {
    if (!m.provable[static_cast<std::size_t>(eval(m, theorem, env))]) ++bad;
    return true;
  });
  return bad;
}

}  // namespace paralab::testing
