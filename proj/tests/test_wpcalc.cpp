#include <doctest.h>

#include "errors.hpp"
#include "support.hpp"

using namespace rltest;

namespace {
State at(std::initializer_list<std::pair<std::string, ExtReal>> v) { return State(Valuation(v), Valuation{}); }
ExprPtr wp(const std::string& prog, const std::string& post) {
  return simplify(wp_symbolic(parse_program(prog).body, parse_expr(post)));
}
}  // namespace

TEST_CASE("wp rules") {
  CHECK(to_string(wp("skip", "x + 1")) == "x + 1");
  CHECK(to_string(wp("reward(2)", "x")) == "2 + x");
  CHECK(to_string(wp("x := y + 1", "x * 2")) == to_string(simplify(parse_expr("(y + 1) * 2"))));
  auto pr = wp_symbolic(parse_program("{ x := 1 } [1/4] { x := 3 }").body, parse_expr("x"));
  CHECK(evaluate(pr, at({})) == q(5, 2));
  auto ite = wp_symbolic(parse_program("if x > 1 { reward(5) } else { skip }").body, parse_expr("0"));
  CHECK(evaluate(ite, at({{"x", ExtReal(2)}})) == ExtReal(5));
  CHECK(evaluate(ite, at({{"x", ExtReal(1)}})) == ExtReal(0));
  // reward statement of the transformed program: f(tau + a) - f(tau) + X[tau/tau + a]
  auto t = transform_body(parse_program("reward(a)").body, TransformSpec::moment(2), {"tau"});
  auto w = wp_symbolic(t, parse_expr("tau"));
  for (long tau = 0; tau < 4; ++tau)
    for (long a = 0; a < 4; ++a) {
      State s = at({{"a", ExtReal(a)}, {"tau", ExtReal(tau)}});
      CHECK(evaluate(w, s) == ExtReal((tau + a) * (tau + a) - tau * tau + tau + a));
    }
}

TEST_CASE("unannotated loops are rejected symbolically") {
  CHECK_THROWS_AS(wp_symbolic(parse_program("while x > 0 { x := x - 1 }").body, ex::num(0)), rewlab::UsageError);
}

TEST_CASE("numeric wp") {
  CHECK(wp_numeric(fixture("webserver_a.pgcl").body, ex::num(0), State(), 200).lower.to_double() ==
        doctest::Approx(2).epsilon(1e-12));
  CHECK(wp_numeric(fixture("webserver_b.pgcl").body, ex::num(0), State(), 200).lower.to_double() ==
        doctest::Approx(2).epsilon(1e-12));
  CHECK(wp_numeric(parse_program("reward(3); x := 2").body, parse_expr("x"), State(), 1).lower == ExtReal(5));
}

TEST_CASE("invariants of the second-moment programs") {
  for (const char* f : {"invariants/webserver_a_moment2.pgcl", "invariants/webserver_b_moment2.pgcl"}) {
    Program p = fixture(f);
    StateGrid g = StateGrid::parse("done=0..1,tau=0..50:1/2", "", {});
    ProgramCheck c = check_program(p, g);
    CHECK(c.verdict == Verdict::Verified);
    REQUIRE(c.loops.size() == 1);
    CHECK(c.loops[0].line > 0);
  }
  Program a = fixture("invariants/webserver_a_moment2.pgcl");
  StateGrid g = StateGrid::parse("done=0..1,tau=0..50", "", {});
  ProgramCheck c = check_program(a, g);
  CHECK(c.loops[0].grid_report.equal_everywhere);
}

TEST_CASE("random walk bound") {
  Program p = fixture("invariants/random_walk_moment2.pgcl");
  StateGrid g = StateGrid::parse("x=0..100,tau=0..100", "", {});
  ProgramCheck c = check_program(p, g, parse_expr("x^2 + 3 * x"));
  CHECK(c.verdict == Verdict::Verified);
  REQUIRE(c.bound_check.has_value());
  CHECK(c.bound_check->verdict == Verdict::Verified);
  ProgramCheck too_low = check_program(p, g, parse_expr("x^2 + 2 * x"));
  CHECK(too_low.verdict == Verdict::Violated);
}

TEST_CASE("first-moment invariants") {
  Program w = fixture("random_walk.pgcl");
  CHECK(check_program(w, StateGrid::parse("x=0..200", "", {})).verdict == Verdict::Verified);
  for (long x0 : {0, 1, 2, 5, 8}) {
    Bracket b = wp_numeric(w.body, ex::num(0), at({{"x", ExtReal(x0)}}), 300);
    CHECK(b.lower.to_double() == doctest::Approx(static_cast<double>(x0 - x0 % 2)).epsilon(1e-9));
  }
}

TEST_CASE("loop-free programs are inconclusive without a bound") {
  ProgramCheck c = check_program(parse_program("x := 1"), StateGrid());
  CHECK(c.verdict == Verdict::Inconclusive);
}

TEST_CASE("kleene iterates") {
  Program p = fixture("invariants/webserver_a_moment2.pgcl");
  const Stmt* loop = nullptr;
  for (const auto& s : stmts_of(p.body))
    if (s->kind == StmtKind::While) loop = s.get();
  REQUIRE(loop);
  auto it = kleene_iterates(*loop, ex::num(0), at({{"done", ExtReal(0)}, {"tau", ExtReal(0)}}), 4);
  REQUIRE(it.size() == 5);
  CHECK(it[0] == ExtReal(0));
  CHECK(it[1] == ExtReal(1));
  CHECK(it[2] == q(5, 2));
  CHECK(it[3] == q(15, 4));
  CHECK(it[4] == q(37, 8));
  auto off = kleene_iterates(*loop, parse_expr("7"), at({{"done", ExtReal(1)}, {"tau", ExtReal(2)}}), 4);
  for (std::size_t k = 1; k < off.size(); ++k) CHECK(off[k] == ExtReal(7));
}

TEST_CASE("property: iterates are monotone") {
  Gen g(21);
  for (int i = 0; i < 100; ++i) {
    auto loop = st::loop(g.guard(), st::seq(g.loop_free(2), st::assign("x", ex::add(ex::var("x"), ex::num(1)))));
    auto it = kleene_iterates(*loop, g.expectation(), g.state(), 8);
    for (std::size_t k = 1; k < it.size(); ++k) CHECK(it[k - 1] <= it[k]);
  }
}

TEST_CASE("expected runtime agrees with wp of the instrumented loop") {
  Program p = fixture("webserver_a.pgcl");
  const Stmt* loop = nullptr;
  for (const auto& s : stmts_of(p.body))
    if (s->kind == StmtKind::While) loop = s.get();
  REQUIRE(loop);
  auto body = stmts_of(loop->s1);
  auto bare = st::loop(loop->guard, body[1]);  // drop reward(1)
  CHECK(ert_equivalence_check(*bare, ex::num(0), StateGrid::parse("done=0..1", "", {}), 40).holds);
  auto spin = st::loop(ex::btrue(), st::skip());
  auto e = ert_iterates(*spin, ex::num(0), State(), 10);
  for (std::size_t k = 0; k < e.size(); ++k) CHECK(e[k] == ExtReal(static_cast<long>(k)));
  CHECK(ert_equivalence_check(*spin, ex::num(0), StateGrid(), 10).holds);
  auto never = st::loop(ex::bfalse(), st::skip());
  auto n = ert_iterates(*never, parse_expr("3"), State(), 4);
  for (std::size_t k = 1; k < n.size(); ++k) CHECK(n[k] == ExtReal(3));
}

TEST_CASE("runtime encodings on a diverging loop") {
  UnsoundDemo d = unsound_counter_demo({1, 10, 100});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(d.counter_linear[i].is_zero());
    CHECK(d.counter_squared[i].is_zero());
  }
  CHECK(d.incremental[0] < d.incremental[1]);
  CHECK(d.incremental[1] < d.incremental[2]);
  CHECK(d.incremental[2] >= ExtReal(100));
}

TEST_CASE("property: symbolic and numeric wp agree on loop-free programs") {
  Gen g(31);
  for (int i = 0; i < 200; ++i) {
    Program p = g.loop_free_program(6);
    ExprPtr x = g.expectation();
    ExprPtr w = wp_symbolic(p.body, x);
    for (int k = 0; k < 3; ++k) {
      State s = g.state();
      CHECK(evaluate(w, s) == wp_numeric(p.body, x, s, 4).lower);
    }
  }
}

TEST_CASE("property: healthiness") {
  Gen g(32);
  StateGrid grid = StateGrid::parse("x=0..4,y=0..4", "", {});
  for (int i = 0; i < 100; ++i) {
    Program p = g.loop_free_program(4);
    ExprPtr x = g.expectation();
    ExprPtr y = ex::add(x, g.expectation());
    CHECK(leq_on_grid(wp_symbolic(p.body, x), wp_symbolic(p.body, y), grid).holds);
    Program r = g.loop_free_program(4, false);
    ExprPtr a = g.constant();
    auto lhs = wp_symbolic(r.body, ex::add(ex::mul(a, x), y));
    auto rhs = ex::add(ex::mul(a, wp_symbolic(r.body, x)), wp_symbolic(r.body, y));
    CHECK(leq_on_grid(lhs, rhs, grid).equal_everywhere);
  }
}

TEST_CASE("tolerance only with exponentials") {
  CHECK(tolerance_for(parse_expr("x"), parse_expr("x + 1")) == 0.0);
  CHECK(tolerance_for(parse_expr("exp(x)"), parse_expr("x")) > 0.0);
}
