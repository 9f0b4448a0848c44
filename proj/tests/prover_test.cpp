#include "doctest.h"
#include "paralab/prover.hpp"

using namespace paralab;

namespace {

Proof prove_identity() {
  auto r = derive(c1(), parse("i(X,X)"));
  REQUIRE(std::holds_alternative<Proof>(r));
  return std::get<Proof>(r);
}

}  // namespace

TEST_CASE("derive i(X,X)") {
  Proof p = prove_identity();
  CHECK(p.lines.size() <= 5);
  CHECK(check_proof(c1(), p).valid);
  CHECK(proves(p, parse("i(X,X)")));
  CHECK(proves(p, parse("i(p,p)")));
  CHECK_FALSE(proves(p, parse("i(p,q)")));
}

TEST_CASE("transcript round trip and determinism") {
  Proof p = prove_identity();
  std::string text = to_transcript(p);
  CHECK(to_transcript(proof_from_transcript(text)) == text);
  CHECK(to_transcript(prove_identity()) == text);
  CHECK_THROWS_AS(proof_from_transcript("1 XX A1 p"), ProofFormatError);
  CHECK_THROWS_AS(proof_from_transcript(""), ProofFormatError);
}

TEST_CASE("derive exhausts on an underivable atom") {
  Theory t;
  t.name = "a1";
  t.schemata.push_back(c1().schemata[0]);
  t.rule_clauses.push_back(modus_ponens_clause());
  ProverConfig cfg;
  cfg.max_generated = 2000;
  cfg.max_formula_size = 9;
  auto r = derive(t, parse("p"), cfg);
  REQUIRE(std::holds_alternative<Exhausted>(r));
  CHECK(std::get<Exhausted>(r).budget != BudgetKind::MaxSeconds);
}

TEST_CASE("check_proof rejects bad lines") {
  Proof bad_axiom;
  bad_axiom.lines.push_back({ProofLine::Kind::Axiom, "A1", 0, 0, parse("i(p,p)")});
  bad_axiom.goal_line = 1;
  auto c = check_proof(c1(), bad_axiom);
  CHECK_FALSE(c.valid);
  CHECK(c.line == 1);

  Proof forward = prove_identity();
  auto& last = forward.lines.back();
  last.major = forward.lines.size();
  CHECK_FALSE(check_proof(c1(), forward).valid);

  Proof unknown_schema;
  unknown_schema.lines.push_back({ProofLine::Kind::Axiom, "EXP", 0, 0, parse("i(X,i(n(X),Y))")});
  unknown_schema.goal_line = 1;
  CHECK_FALSE(check_proof(c1(), unknown_schema).valid);
  CHECK(check_proof(with_explosion(c1()), unknown_schema).valid);

  Proof wrong_cd = prove_identity();
  wrong_cd.lines.back().formula = parse("i(X,Y)");
  CHECK_FALSE(check_proof(c1(), wrong_cd).valid);
}

TEST_CASE("session slices reach the same proof") {
  ProverSession s(c1(), parse("i(X,X)"), {});
  while (s.step(10) == ProverSession::Status::Running) {
  }
  REQUIRE(s.status() == ProverSession::Status::Proved);
  CHECK(to_transcript(s.proof()) == to_transcript(prove_identity()));
}

TEST_CASE("derived formulas are never instances of earlier retained ones") {
  Proof p = prove_identity();
  for (std::size_t k = 0; k < p.lines.size(); ++k)
    for (std::size_t j = 0; j < k; ++j)
      if (p.lines[k].kind == ProofLine::Kind::Detach) CHECK_FALSE(is_instance_of(p.lines[k].formula, p.lines[j].formula));
}
