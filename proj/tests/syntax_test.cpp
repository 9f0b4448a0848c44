#include <random>

#include "doctest.h"
#include "paralab/syntax.hpp"
#include "support.hpp"

using namespace paralab;

namespace {

Formula P(const char* s) { return parse(s); }

}  // namespace

TEST_CASE("parse builds the expected tree") {
  Formula f = P("i(p,n(p))");
  CHECK(f == Formula::impl(Formula::atom("p"), Formula::neg(Formula::atom("p"))));
  CHECK(P("o(X,n(X))") == Formula::disj(Formula::var("X"), Formula::neg(Formula::var("X"))));
  CHECK(P(" a ( X , q ) ") == Formula::conj(Formula::var("X"), Formula::atom("q")));
}

TEST_CASE("parse reports the column of malformed input") {
  try {
    parse("i(p,q");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 6);
  }
  CHECK_THROWS_AS(parse("i(p)"), SyntaxError);
  CHECK_THROWS_AS(parse("x(p,q)"), SyntaxError);
  CHECK_THROWS_AS(parse("i(p,q))"), SyntaxError);
  CHECK_THROWS_AS(parse(""), SyntaxError);
}

TEST_CASE("print") {
  CHECK(print(Formula::impl(Formula::atom("p"), Formula::atom("p"))) == "i(p,p)");
  CHECK(print(Formula::neg(Formula::conj(Formula::atom("p"), Formula::neg(Formula::atom("p"))))) == "n(a(p,n(p)))");
  CHECK(print(Formula::var("X")) == "X");
}

TEST_CASE("substitute") {
  CHECK(substitute(P("i(X,X)"), {{"X", P("p")}}) == P("i(p,p)"));
  CHECK(substitute(P("i(X,Y)"), {{"X", P("n(Z)")}}) == P("i(n(Z),Y)"));
  CHECK(substitute(P("p"), {{"X", P("q")}}) == P("p"));
}

TEST_CASE("unify") {
  auto s = unify(P("X"), P("i(p,q)"));
  REQUIRE(s);
  CHECK(s->at("X") == P("i(p,q)"));
  CHECK_FALSE(unify(P("X"), P("n(X)")));
  CHECK_FALSE(unify(P("i(p,X)"), P("i(q,Y)")));

  Formula f = P("i(X,i(Y,X))"), g = P("i(n(Z),W)");
  auto u = unify(f, g);
  REQUIRE(u);
  CHECK(u->at("X") == P("n(Z)"));
  CHECK(u->at("W") == P("i(Y,n(Z))"));
  CHECK(substitute(f, *u) == substitute(g, *u));
}

TEST_CASE("condensed detachment") {
  auto r = condensed_detach(P("i(X,i(Y,X))"), P("i(p,p)"));
  REQUIRE(std::holds_alternative<Formula>(r));
  CHECK(std::get<Formula>(r) == P("i(X,i(p,p))"));
  CHECK(is_variant(std::get<Formula>(r), P("i(Y,i(p,p))")));
  CHECK(std::get<Formula>(condensed_detach(P("i(X,X)"), P("q"))) == P("q"));
  CHECK(std::get<DetachError>(condensed_detach(P("n(X)"), P("p"))) == DetachError::NotImplication);
  CHECK(std::get<DetachError>(condensed_detach(P("i(p,X)"), P("q"))) == DetachError::UnifyFailure);
}

TEST_CASE("consistency operator") {
  CHECK(consistency_op(P("p")) == P("n(a(p,n(p)))"));
  CHECK(consistency_op(P("i(p,q)")) == P("n(a(i(p,q),n(i(p,q))))"));
  CHECK(print(consistency_op(P("X"))) == "n(a(X,n(X)))");
}

TEST_CASE("canonical renaming") {
  CHECK(canonicalize(P("i(W,i(V,W))")) == P("i(X,i(Y,X))"));
  CHECK(variables(P("i(Z,a(X,Z))")) == std::vector<std::string>{"Z", "X"});
  CHECK(is_instance_of(P("i(p,i(q,p))"), P("i(X,i(Y,X))")));
  CHECK_FALSE(is_instance_of(P("i(p,i(q,q))"), P("i(X,i(Y,X))")));
}

TEST_CASE("property: parse(print(f)) == f") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 5000; ++k) {
    Formula f = testing::random_formula(rng, 6);
    REQUIRE(parse(print(f)) == f);
  }
}

TEST_CASE("property: substitution is a homomorphism") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 2000; ++k) {
    Formula a = testing::random_formula(rng, 3), b = testing::random_formula(rng, 3);
    Substitution s{{"X", testing::random_formula(rng, 2)}, {"Y", testing::random_formula(rng, 2)}};
    CHECK(substitute(Formula::neg(a), s) == Formula::neg(substitute(a, s)));
    CHECK(substitute(Formula::impl(a, b), s) == Formula::impl(substitute(a, s), substitute(b, s)));
    CHECK(substitute(Formula::conj(a, b), s) == Formula::conj(substitute(a, s), substitute(b, s)));
    CHECK(substitute(Formula::disj(a, b), s) == Formula::disj(substitute(a, s), substitute(b, s)));
  }
}

TEST_CASE("property: MGU soundness and idempotence") {
  std::mt19937_64 rng(13);
  int unified = 0;
  for (int k = 0; k < 20000; ++k) {
    Formula f = testing::random_formula(rng, 3), g = testing::random_formula(rng, 3);
    auto s = unify(f, g);
    if (!s) continue;
    ++unified;
    CHECK(substitute(f, *s) == substitute(g, *s));
    CHECK(substitute(substitute(f, *s), *s) == substitute(f, *s));
  }
  CHECK(unified > 1000);
}

TEST_CASE("property: MGU generality on a corpus") {
  // Each entry: two formulas and a hand-made unifier sigma; sigma must
  // factor as theta followed by some delta.
  struct Entry {
    const char *f, *g;
    Substitution sigma;
  };
  std::vector<Entry> corpus = {
      {"i(X,Y)", "i(Y,p)", {{"X", P("p")}, {"Y", P("p")}}},
      {"i(X,i(Y,X))", "i(n(Z),W)", {{"X", P("n(q)")}, {"Z", P("q")}, {"Y", P("r")}, {"W", P("i(r,n(q))")}}},
      {"a(X,Y)", "a(Z,Z)", {{"X", P("n(p)")}, {"Y", P("n(p)")}, {"Z", P("n(p)")}}},
      {"o(X,n(X))", "o(i(Y,Z),W)", {{"X", P("i(p,q)")}, {"Y", P("p")}, {"Z", P("q")}, {"W", P("n(i(p,q))")}}},
      {"X", "Y", {{"X", P("i(q,q)")}, {"Y", P("i(q,q)")}}},
  };
  for (const auto& e : corpus) {
    Formula f = P(e.f), g = P(e.g);
    REQUIRE(substitute(f, e.sigma) == substitute(g, e.sigma));
    auto theta = unify(f, g);
    REQUIRE(theta);
    // Factor: delta matches theta-images onto sigma-images variable by variable.
    Formula lhs = Formula::conj(substitute(f, *theta), substitute(g, *theta));
    Formula rhs = Formula::conj(substitute(f, e.sigma), substitute(g, e.sigma));
    auto delta = match(lhs, rhs);
    REQUIRE(delta);
    CHECK(substitute(lhs, *delta) == rhs);
  }
}

TEST_CASE("property: CD result is invariant under renaming apart") {
  std::mt19937_64 rng(17);
  int detached = 0;
  for (int k = 0; k < 20000; ++k) {
    Formula major = Formula::impl(testing::random_formula(rng, 2), testing::random_formula(rng, 3));
    Formula minor = testing::random_formula(rng, 3);
    auto r = condensed_detach(major, minor);
    if (!std::holds_alternative<Formula>(r)) continue;
    ++detached;
    auto r2 = condensed_detach(rename_with_suffix(major, "_a"), rename_with_suffix(minor, "_b"));
    REQUIRE(std::holds_alternative<Formula>(r2));
    CHECK(is_variant(std::get<Formula>(r), std::get<Formula>(r2)));
    CHECK(std::get<Formula>(r) == canonicalize(std::get<Formula>(r)));
  }
  CHECK(detached > 500);
}
