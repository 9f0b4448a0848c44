#include "doctest.h"
#include "paralab/constraint.hpp"

using namespace paralab;

TEST_CASE("template round trip") {
  for (const char* text : {"?[X,Y]: ~p(i(a(X,n(X)),Y))", "![D]: ?[Y]: ~p(i(D,Y))", "?[X]: (p(X) & ~p(n(X)))",
                           "?[X,Y]: (X != Y | p(i(X,Y)))", "![X]: n(X) = X"}) {
    CHECK(print(parse_template(text)) == text);
  }
}

TEST_CASE("template errors") {
  CHECK_THROWS_AS(parse_template("?[X]: p(Y)"), TemplateError);
  CHECK_THROWS_AS(parse_template("?[X]: (p(X) & p(X) | p(X))"), TemplateError);
  CHECK_THROWS_AS(parse_template("?[X,X]: p(X)"), TemplateError);
  CHECK_THROWS_AS(parse_template("?[X]: p(i(X)"), TemplateError);
  CHECK_THROWS_AS(parse_constraint("want ?[X]: p(X)"), TemplateError);
}

TEST_CASE("constraint evaluation") {
  FiniteModel c = classical_model();
  auto bottom = parse_template("?[D]: ![Y]: p(i(D,Y))");
  CHECK(holds(c, bottom));
  CHECK(satisfies(c, Constraint::require(bottom)));
  CHECK_FALSE(satisfies(c, Constraint::forbid(bottom)));
  CHECK(print(Constraint::forbid(bottom).sentence()) == "![D]: ?[Y]: ~p(i(D,Y))");

  Constraint r = Constraint::refute(*c1().find_schema("A9"));
  CHECK(print(r) == "refute A9 o(X,n(X))");
  CHECK_FALSE(satisfies(c, r));
  CHECK(print(parse_constraint(print(r))) == print(r));
  CHECK(print(r.sentence()) == "?[X]: ~p(o(X,n(X)))");
}
