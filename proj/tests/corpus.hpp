#pragma once

// Proof and model corpora for the cross-module soundness property.

#include <string>
#include <vector>

#include "paralab/experiments.hpp"
#include "support.hpp"

namespace paralab::testing {

struct ProvedTheorem {
  std::string theory;
  Proof proof;
};

inline const std::vector<std::pair<std::string, std::string>>& theorem_goals() {
  static const std::vector<std::pair<std::string, std::string>> goals = {
      {"c1", "i(X,X)"},
      {"c1", "i(X,i(Y,Y))"},
      {"c1", "i(i(X,Y),i(i(Y,Z),i(X,Z)))"},
      {"c1", "i(a(X,Y),a(Y,X))"},
      {"c1", "i(n(n(X)),o(X,Y))"},
      {"c1", "i(X,o(Y,o(Z,X)))"},
      {"c1+explosion", "i(a(X,n(X)),Y)"},
  };
  return goals;
}

inline std::vector<ProvedTheorem> proof_corpus() {
  std::vector<ProvedTheorem> out;
  for (const auto& [theory, goal] : theorem_goals()) {
    auto r = derive(theory_by_name(theory), parse(goal));
    if (auto* p = std::get_if<Proof>(&r)) out.push_back({theory, *p});
  }
  return out;
}

/// Models gathered from fixtures, every labelled size-2 model of each
/// theory, and the experiment witnesses.
inline std::vector<FiniteModel> model_corpus(const Theory& t) {
  std::vector<FiniteModel> out;
  for (const FiniteModel& m : {trivial_model(), classical_model(), product(classical_model(), classical_model())})
    if (naive_is_model(m, t)) out.push_back(m);
  for_each_structure(2, [&](const FiniteModel& m) {
    if (naive_is_model(m, t)) out.push_back(m);
  });
  ExperimentConfig cfg;
  cfg.search.max_size = 3;
  for (const auto& r : {experiment0(cfg), experiment1(cfg), experiment3(cfg)})
    for (const auto& p : r.parts)
      for (const auto& w : p.witnesses)
        if (w.model && naive_is_model(*w.model, t)) out.push_back(*w.model);
  return out;
}

}  // namespace paralab::testing
