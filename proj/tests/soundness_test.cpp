#include <map>

#include "corpus.hpp"
#include "doctest.h"

using namespace paralab;

TEST_CASE("every corpus proof checks") {
  auto proofs = testing::proof_corpus();
  CHECK(proofs.size() == testing::theorem_goals().size());
  for (const auto& p : proofs) {
    CAPTURE(p.theory);
    CHECK(check_proof(theory_by_name(p.theory), p.proof).valid);
  }
}

TEST_CASE("proved schemata hold in every model of the same theory") {
  std::map<std::string, std::vector<FiniteModel>> models;
  std::size_t pairs = 0, violations = 0;
  for (const auto& p : testing::proof_corpus()) {
    auto& ms = models[p.theory];
    if (ms.empty()) ms = testing::model_corpus(theory_by_name(p.theory));
    for (const auto& m : ms) {
      ++pairs;
      violations += testing::semantic_violations(m, p.proof.conclusion());
    }
  }
  CHECK(pairs > 10000);
  CHECK(violations == 0);
}
