#include "doctest.h"
#include "paralab/models.hpp"
#include "paralab/theories.hpp"

using namespace paralab;

TEST_CASE("c1 schemata") {
  Theory t = c1();
  REQUIRE(t.find_schema("A1"));
  CHECK(t.find_schema("A1")->body == parse("i(X,i(Y,X))"));
  REQUIRE(t.find_schema("A9"));
  CHECK(t.find_schema("A9")->body == parse("o(X,n(X))"));
  CHECK(t.schemata.size() == 14);
  REQUIRE(t.rule_clauses.size() == 1);
  CHECK(print(t.rule_clauses[0]) == print(modus_ponens_clause()));
  CHECK(t.structural_clauses.empty());
  CHECK(t.constants.empty());
}

TEST_CASE("with_explosion") {
  Theory t = with_explosion(c1());
  REQUIRE(t.find_schema("EXP"));
  CHECK(t.find_schema("EXP")->body == parse("i(X,i(n(X),Y))"));
  for (const auto& s : c1().schemata) CHECK(t.has_schema(s.id));
  CHECK(with_explosion(t).schemata.size() == t.schemata.size());
}

TEST_CASE("with_bottom") {
  Theory t = with_bottom(c1());
  CHECK(t.constants == std::vector<std::string>{"bot"});
  CHECK(print(t.find_schema("BOT")->body) == "i(bot,X)");
  FiniteModel m = trivial_model();
  m.constants["bot"] = 0;
  CHECK(check_model(m, t).ok());
  CHECK(with_bottom(t).constants.size() == 1);
}

TEST_CASE("structural infinity clauses") {
  CHECK(structural_infinity_clauses().size() == 3);
  Theory t = with_structural_infinity(c1());
  CHECK_FALSE(check_model(trivial_model(), t).ok());
  CHECK(check_clauses(trivial_model(), {structural_infinity_clauses()[1]}).total_violations == 1);
}

TEST_CASE("entails") {
  Formula p = parse("p"), q = parse("q"), r = parse("r");
  CHECK(entails({p}, q) == parse("i(p,q)"));
  CHECK(entails({p, q}, r) == parse("i(p,i(q,r))"));
  CHECK(entails({}, p) == p);
  CHECK_THROWS_AS(entails({p, q, r}, p), TooManyAssumptions);
  CHECK(entails({p, q, r}, p, true) == parse("i(p,i(q,i(r,p)))"));
}

TEST_CASE("compile") {
  auto clauses = compile(c1());
  CHECK(clauses.size() == 15);
  CHECK(clauses.front().is_unit_provable());
  CHECK(print(clauses.front()) == "p(i(X,i(Y,X)))");
  CHECK(compile(with_explosion(c1())).size() == 16);
  std::size_t mp = 0;
  for (const auto& c : compile(with_bottom(with_explosion(c1()))))
    if (print(c) == print(modus_ponens_clause())) ++mp;
  CHECK(mp == 1);
}

TEST_CASE("theory names") {
  CHECK(theory_by_name("c1").schemata.size() == 14);
  CHECK(theory_by_name("c1+explosion").has_schema("EXP"));
  CHECK_FALSE(theory_by_name("c1+explosion-A9").has_schema("A9"));
  CHECK(theory_by_name("c1+bottom").constants.size() == 1);
  CHECK_THROWS_AS(theory_by_name("c2"), TheoryError);
  CHECK_THROWS_AS(theory_by_name("c1-A99"), TheoryError);
  CHECK_THROWS_AS(without_schema(c1(), "EXP"), TheoryError);
}
