#include "cobble/formula.hpp"

#include <random>

#include "cobble/errors.hpp"
#include "doctest.h"

using namespace cobble;

TEST_CASE("precedence mirrors the usual Coq levels") {
  // -> loosest and right-associative
  Formula f = parse_formula("A -> B -> C");
  CHECK(f == f_impl(f_atom("A"), f_impl(f_atom("B"), f_atom("C"))));
  // /\ binds tighter than \/
  CHECK(parse_formula("A /\\ B \\/ C") ==
        f_or(f_and(f_atom("A"), f_atom("B")), f_atom("C")));
  // ~ tightest
  CHECK(parse_formula("~A \\/ B") == f_or(f_not(f_atom("A")), f_atom("B")));
  // <-> between -> and \/
  CHECK(parse_formula("A -> B <-> C") ==
        f_impl(f_atom("A"), f_iff(f_atom("B"), f_atom("C"))));
  CHECK(parse_formula("(A -> B) -> C") ==
        f_impl(f_impl(f_atom("A"), f_atom("B")), f_atom("C")));
}

TEST_CASE("equality and constants") {
  Formula f = parse_formula("x = x");
  CHECK(f == f_eq("x", "x"));
  CHECK(constants_of(f) == std::set<std::string>{"x"});
  CHECK(atoms_of(f).empty());
  CHECK(eval_formula(f, {}));
  CHECK_FALSE(eval_formula(parse_formula("x = y"), {}));
}

TEST_CASE("True and False literals") {
  CHECK(parse_formula("True") == f_true());
  CHECK(parse_formula("False") == f_false());
  CHECK(eval_formula(parse_formula("True"), {}));
  CHECK_FALSE(eval_formula(parse_formula("False"), {}));
}

TEST_CASE("bad syntax raises") {
  CHECK_THROWS_AS(parse_formula(""), EnvironmentError);
  CHECK_THROWS_AS(parse_formula("A ->"), EnvironmentError);
  CHECK_THROWS_AS(parse_formula("(A"), EnvironmentError);
  CHECK_THROWS_AS(parse_formula("A B"), EnvironmentError);
  CHECK_THROWS_AS(parse_formula("/\\ A"), EnvironmentError);
  CHECK_THROWS_AS(parse_formula("A = "), EnvironmentError);
}

TEST_CASE("eval follows classical truth tables") {
  auto f = parse_formula("(A -> B) <-> (~A \\/ B)");
  for (bool a : {false, true}) {
    for (bool b : {false, true}) {
      CHECK(eval_formula(f, {{"A", a}, {"B", b}}));
    }
  }
  auto g = parse_formula("A /\\ ~A");
  CHECK_FALSE(eval_formula(g, {{"A", true}}));
  CHECK_FALSE(eval_formula(g, {{"A", false}}));
}

namespace {

Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 8 : 3);
  static const char* atoms[] = {"A", "B", "C", "D"};
  switch (pick(rng)) {
    case 0: return f_true();
    case 1: return f_false();
    case 2:
    case 3: {
      std::uniform_int_distribution<int> ai(0, 3);
      return f_atom(atoms[ai(rng)]);
    }
    case 4: return f_not(random_formula(rng, depth - 1));
    case 5: return f_and(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 6: return f_or(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 7: return f_impl(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default: return f_iff(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("print and parse round-trip on random formulas") {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 4);
    Formula back = parse_formula(print_formula(f));
    CHECK(back == f);
  }
}
