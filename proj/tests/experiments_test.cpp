#include "doctest.h"
#include "paralab/experiments.hpp"
#include "support.hpp"

using namespace paralab;

namespace {

ExperimentConfig small(int max_size) {
  ExperimentConfig cfg;
  cfg.search.max_size = max_size;
  cfg.search.max_seconds = 120;
  cfg.prover.max_seconds = 120;
  return cfg;
}

// Deserializes, re-verifies every witness and checks it still backs the
// part's verdict.
void check_closure(const ExperimentReport& r) {
  std::string text = render(r);
  ExperimentReport back = report_from_json(text);
  CHECK(render(back) == text);
  CHECK_NOTHROW(verify_witnesses(back));
  CHECK(back.verdict == r.verdict);
  REQUIRE(back.parts.size() == r.parts.size());
  for (std::size_t k = 0; k < r.parts.size(); ++k) {
    CHECK(back.parts[k].verdict == r.parts[k].verdict);
    CHECK(back.parts[k].witnesses.size() == r.parts[k].witnesses.size());
  }
}

}  // namespace

TEST_CASE("experiment 0 finds a non-explosive contradiction") {
  auto r = experiment0(small(4));
  CHECK(r.verdict == Verdict::Established);
  REQUIRE(r.parts.size() == 1);
  REQUIRE(r.parts[0].witnesses.size() == 1);
  const FiniteModel& m = *r.parts[0].witnesses[0].model;
  CHECK(m.size <= 6);
  CHECK(check_model(m, c1()).ok());
  auto xy = nonexplosive_contradiction_witness(m);
  REQUIRE(xy);
  CHECK_FALSE(m.is_provable(m.i(m.a(xy->first, m.n(xy->first)), xy->second)));
  check_closure(r);
}

TEST_CASE("experiment 0 under explosion is refuted up to size 3") {
  auto r = experiment0(small(3), "c1+explosion");
  CHECK(r.verdict == Verdict::Refuted);
  CHECK(r.bound == 3);
  check_closure(r);
}

TEST_CASE("experiment 1") {
  auto r = experiment1(small(4));
  CHECK(r.verdict == Verdict::Established);
  REQUIRE(r.seed);
  CHECK(*r.seed == ExperimentConfig{}.seed);
  REQUIRE(r.parts.size() == 2);
  CHECK(r.parts[0].verdict == Verdict::Established);
  CHECK(r.parts[1].verdict == Verdict::Established);
  bool product_seen = false;
  for (const auto& w : r.parts[1].witnesses)
    if (w.model && w.model->size == 4 && *w.model == product(classical_model(), classical_model())) product_seen = true;
  CHECK(product_seen);
  check_closure(r);
  // Same seed, same corpus.
  CHECK(experiment1(small(4)).parts[0].detail == r.parts[0].detail);
}

TEST_CASE("experiment 3 at sizes 1-2") {
  auto r = experiment3(small(2));
  CHECK(r.verdict == Verdict::Evidence);
  CHECK(r.bound == 2);
  for (const auto& p : r.parts) CHECK(p.verdict != Verdict::Refuted);
  check_closure(r);
}

TEST_CASE("imminent explosion probe") {
  auto r = probe_imminent_explosion(small(2));
  CHECK(r.verdict != Verdict::Refuted);
  check_closure(r);
}

TEST_CASE("run_experiment dispatch") {
  CHECK(run_experiment("3", small(2)).experiment_id == "3");
  CHECK_THROWS(run_experiment("9", small(2)));
}

TEST_CASE("verify_witnesses rejects a tampered witness") {
  auto r = experiment0(small(4));
  r.parts[0].witnesses[0].model->provable.assign(static_cast<std::size_t>(r.parts[0].witnesses[0].model->size), false);
  CHECK_THROWS_AS(verify_witnesses(r), std::logic_error);
}

TEST_CASE("independence: A9 is independent under explosion") {
  auto r = independence_check(with_explosion(c1()), "A9", {}, 4);
  REQUIRE(std::holds_alternative<Independent>(r));
  const auto& ind = std::get<Independent>(r);
  Theory rest = without_schema(with_explosion(c1()), "A9");
  CHECK(ind.model.size <= 6);
  CHECK(check_model(ind.model, rest).ok());
  CHECK(testing::naive_is_model(ind.model, rest));
  CHECK_FALSE(check_model(ind.model, with_explosion(c1())).ok());
  CHECK(ind.report.answered_by == "model finder");
}

TEST_CASE("independence: A13 is derivable under explosion") {
  auto r = independence_check(with_explosion(c1()), "A13", {}, 3);
  REQUIRE(std::holds_alternative<Derivable>(r));
  const auto& d = std::get<Derivable>(r);
  Theory rest = without_schema(with_explosion(c1()), "A13");
  CHECK(check_proof(rest, d.proof).valid);
  CHECK(proves(d.proof, c1().find_schema("A13")->body));
  CHECK(d.report.answered_by == "prover");
}

TEST_CASE("independence: tiny budgets give Unknown") {
  ProverConfig cfg;
  cfg.max_generated = 50;
  auto r = independence_check(c1(), "A1", cfg, 1);
  CHECK(std::holds_alternative<Unknown>(r));
  CHECK(report_of(r).answered_by.empty());
}

TEST_CASE("verdict strings") {
  for (Verdict v : {Verdict::Established, Verdict::Refuted, Verdict::Evidence, Verdict::Unknown})
    CHECK(verdict_from_string(to_string(v)) == v);
  CHECK_THROWS(verdict_from_string("Maybe"));
}
