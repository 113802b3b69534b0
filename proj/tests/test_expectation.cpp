#include <doctest.h>

#include "errors.hpp"
#include "support.hpp"

using namespace rltest;

namespace {
State at(std::initializer_list<std::pair<std::string, ExtReal>> v) { return State(Valuation(v), Valuation{}); }
}  // namespace

TEST_CASE("evaluation") {
  auto x = parse_expr("[not (done = 1)] * 2");
  CHECK(evaluate(x, at({{"done", ExtReal(0)}})) == ExtReal(2));
  CHECK(evaluate(x, at({{"done", ExtReal(1)}})) == ExtReal(0));
  CHECK(evaluate(parse_expr("[not (done = 1)] * (4 * tau + 6)"), at({{"done", ExtReal(0)}, {"tau", ExtReal(3)}})) ==
        ExtReal(18));
  CHECK_THROWS_AS(evaluate(parse_expr("x + 1"), at({})), rewlab::EvalError);
  CHECK(evaluate(parse_expr("min(x, 2) + max(x, 2)"), at({{"x", ExtReal(5)}})) == ExtReal(7));
  CHECK(evaluate(parse_expr("x - 7"), at({{"x", ExtReal(5)}})) == ExtReal(0));
}

TEST_CASE("substitution") {
  auto x = parse_expr("[not (done = 1)] * 2");
  CHECK(to_string(simplify(substitute(x, "done", ex::num(1)))) == "0");
  CHECK(to_string(simplify(substitute(x, "done", ex::num(0)))) == "2");
  auto y = parse_expr("x * y + [x > 2]");
  CHECK(equal(substitute(y, "x", ex::var("x")), y));
  auto p = parse_expr("N + x", {"N"});
  CHECK(equal(substitute(p, "N", ex::num(3)), p));
  CHECK(to_string(bind_params(p, Valuation{{"N", ExtReal(3)}})) == "3 + x");
}

TEST_CASE("grid order") {
  StateGrid g = StateGrid::parse("done=0..1", "", {});
  CHECK(leq_on_grid(parse_expr("[not (done = 1)] * 2"), parse_expr("[not (done = 1)] * 3"), g).holds);
  StateGrid t = StateGrid::parse("tau=0..5", "", {});
  auto rep = leq_on_grid(parse_expr("tau"), parse_expr("tau - 1"), t);
  CHECK_FALSE(rep.holds);
  CHECK(rep.violations == 5);
  REQUIRE(rep.counterexamples.size() == 5);
  CHECK(rep.counterexamples[0].lhs == ExtReal(1));
  CHECK(rep.counterexamples[0].rhs == ExtReal(0));
}

TEST_CASE("grid syntax") {
  StateGrid g = StateGrid::parse("x=0..2, tau=0..1:1/2, p={1/4,1/2}", "N=3,y=1", {"p", "N"});
  CHECK(g.size() == 3 * 3 * 2);
  std::size_t n = 0;
  g.for_each([&](const State& s) {
    CHECK(s.params->at("N") == ExtReal(3));
    CHECK(s.vars.at("y") == ExtReal(1));
    CHECK_FALSE(s.vars.contains("p"));
    ++n;
    return true;
  });
  CHECK(n == 18);
  CHECK(g.str() == "x=0..2,tau={0,1/2,1},p={1/4,1/2},y=1,N=3");
  CHECK_THROWS_AS(StateGrid::parse("x", "", {}), rewlab::UsageError);
  CHECK_THROWS_AS(StateGrid::parse("x=0..3:0", "", {}), rewlab::UsageError);
}

TEST_CASE("simplification rules") {
  CHECK(to_string(simplify(parse_expr("[true] * (x + 1)"))) == "x + 1");
  SimplifyContext ints{{"tau", "N"}};
  auto excess = parse_expr("(tau + 1 - N) - (tau - N)", {"N"});
  CHECK(to_string(simplify(excess, ints)) == "[tau >= N]");
  auto cdf = parse_expr("[tau + 1 >= N] - [tau >= N]", {"N"});
  CHECK(to_string(simplify(cdf, ints)) == "[tau + 1 = N]");
  CHECK(to_string(simplify(parse_expr("(tau + 1)^2 - tau^2"), ints)) == "2 * tau + 1");
  CHECK(to_string(simplify(parse_expr("[x > 1] * [x < 4]"))) == "[x > 1 and x < 4]");
  CHECK(to_string(simplify(parse_expr("2 * 3 + 1/2"))) == "13/2");
}

TEST_CASE("integer names") {
  Program p = parse_program("param N : 0..inf\nparam p : [0, 1]\nx := 0; y := 1/2; while x < N { x := x + 1; z := y }");
  auto ints = integer_names(p);
  CHECK(ints.count("x"));
  CHECK(ints.count("N"));
  CHECK_FALSE(ints.count("y"));
  CHECK_FALSE(ints.count("z"));
  CHECK_FALSE(ints.count("p"));
}

namespace {
ExprPtr random_expr(Gen& g, int depth) {
  if (depth == 0) return g.pick(2) ? g.constant() : g.var();
  switch (g.pick(8)) {
    case 0: return ex::add(random_expr(g, depth - 1), random_expr(g, depth - 1));
    case 1: return ex::sub(random_expr(g, depth - 1), random_expr(g, depth - 1));
    case 2: return ex::mul(random_expr(g, depth - 1), random_expr(g, depth - 1));
    case 3: return ex::pow(random_expr(g, depth - 1), g.pick(3));
    case 4: return ex::iv(g.guard());
    case 5: return ex::min(random_expr(g, depth - 1), random_expr(g, depth - 1));
    case 6: return ex::mul(ex::iv(g.guard()), random_expr(g, depth - 1));
    default: return ex::add(ex::sub(random_expr(g, depth - 1), g.constant()), g.var());
  }
}
}  // namespace

TEST_CASE("property: simplify preserves values") {
  Gen g(11);
  SimplifyContext ints{{"x", "y"}};
  std::size_t checked = 0;
  for (int i = 0; i < 100; ++i) {
    ExprPtr e = random_expr(g, 3);
    ExprPtr s = simplify(e, ints);
    for (int k = 0; k < 10; ++k) {
      State st = g.state();
      std::string msg = to_string(e) + "  ~>  " + to_string(s);
      CHECK_MESSAGE(evaluate(s, st) == evaluate(e, st), msg);
      ++checked;
    }
  }
  CHECK(checked == 1000);
}

TEST_CASE("property: simplify with exp stays within tolerance") {
  Gen g(12);
  for (int i = 0; i < 100; ++i) {
    ExprPtr e = ex::sub(ex::exp(ex::mul(g.constant(), ex::add(g.var(), g.constant()))), ex::exp(g.var()));
    ExprPtr s = simplify(e);
    State st = g.state();
    CHECK(approx_equal(evaluate(s, st), evaluate(e, st), 1e-12));
  }
}

TEST_CASE("property: substitution composes") {
  Gen g(13);
  for (int i = 0; i < 200; ++i) {
    ExprPtr x = random_expr(g, 3);
    ExprPtr a = random_expr(g, 1);
    ExprPtr b = g.pick(2) ? g.constant() : ex::add(ex::var("c"), g.constant());  // x, y not free in b
    auto lhs = substitute(substitute(x, "x", a), "y", b);
    auto rhs = substitute(substitute(x, "y", b), "x", substitute(a, "y", b));
    State st = g.state();
    CHECK(evaluate(lhs, st) == evaluate(rhs, st));
  }
}

TEST_CASE("property: grid order is reflexive and transitive") {
  Gen g(14);
  StateGrid grid = StateGrid::parse("x=0..4,y=0..4", "", {});
  for (int i = 0; i < 50; ++i) {
    ExprPtr a = g.expectation();
    ExprPtr b = ex::add(a, g.expectation());
    ExprPtr c = ex::add(b, g.constant());
    CHECK(leq_on_grid(a, a, grid).holds);
    CHECK(leq_on_grid(a, a, grid).equal_everywhere);
    REQUIRE(leq_on_grid(a, b, grid).holds);
    REQUIRE(leq_on_grid(b, c, grid).holds);
    CHECK(leq_on_grid(a, c, grid).holds);
  }
}

TEST_CASE("program simplification folds the straight-line prefix") {
  Program t = simplify_program(transform(fixture("webserver_b.pgcl"), TransformSpec::moment(2)).program);
  auto items = stmts_of(t.body);
  REQUIRE(items.size() >= 3);
  CHECK(to_string(items[0]) == "tau := 0");
  CHECK(to_string(items[1]) == "reward(1/4)");
  CHECK(to_string(items[2]) == "tau := 1/2");
}
