#include <doctest.h>

#include "errors.hpp"
#include "support.hpp"

using namespace rltest;

namespace {
Program simplified(const std::string& file, const std::string& spec) {
  return simplify_program(transform(fixture(file), TransformSpec::parse(spec)).program);
}
}  // namespace

TEST_CASE("spec parsing") {
  CHECK(TransformSpec::parse("moment:2").kind() == TransformSpec::Kind::Moment);
  CHECK(TransformSpec::parse("cdf:N").params() == std::set<std::string>{"N"});
  CHECK(TransformSpec::parse("mgf:0.5").uses_exp());
  CHECK(TransformSpec::parse("linear:2,3").eval({ExtReal(4)}) == ExtReal(11));
  CHECK(TransformSpec::parse("excess:3").eval({ExtReal(2)}) == ExtReal(0));
  CHECK(TransformSpec::parse("product").with_arity(2).eval({ExtReal(3), ExtReal(5)}) == ExtReal(15));
  CHECK_THROWS_AS(TransformSpec::parse("pgf:0.5"), rewlab::UsageError);
  CHECK_THROWS_AS(TransformSpec::parse("moment"), rewlab::UsageError);
  CHECK_THROWS_AS(TransformSpec::parse("bogus:1"), rewlab::UsageError);
}

TEST_CASE("property: symbolic and numeric forms agree") {
  Valuation ps{{"N", ExtReal(3)}, {"t", q(1, 2)}};
  std::vector<TransformSpec> specs = {TransformSpec::moment(2), TransformSpec::moment(3), TransformSpec::parse("cdf:N"),
                                      TransformSpec::parse("excess:N"), TransformSpec::parse("mgf:t"),
                                      TransformSpec::parse("linear:2,1"),
                                      TransformSpec::compose(TransformSpec::moment(2), TransformSpec::parse("linear:1,1"))};
  for (const auto& f : specs)
    for (long n = 0; n < 8; ++n)
      for (long d : {1, 2}) {
        ExtReal x = q(n, d);
        ExtReal sym = evaluate(bind_params(f.apply({ex::num(x)}), ps), State());
        CHECK_MESSAGE(approx_equal(sym, f.eval({x}, ps), 1e-12), f.name());
      }
}

TEST_CASE("second moment programs") {
  Program a = simplified("webserver_a.pgcl", "moment:2");
  auto items = stmts_of(a.body);
  CHECK(to_string(items[0]) == "tau := 0");
  CHECK(to_string(items[1]) == "reward(0)");
  Program b = simplified("webserver_b.pgcl", "moment:2");
  CHECK(pretty_print(b) ==
        "tau := 0;\n"
        "reward(1/4);\n"
        "tau := 1/2;\n"
        "done := 0;\n"
        "while not (done = 1) {\n"
        "  reward(2 * tau + 1);\n"
        "  tau := tau + 1;\n"
        "  { done := 1 } [2/3] { skip }\n"
        "}\n");
}

TEST_CASE("cdf and excess programs") {
  Program c = simplified("webserver_a.pgcl", "cdf:N");
  CHECK(pretty_print(c).find("reward([tau + 1 = N]);") != std::string::npos);
  CHECK(pretty_print(c).find("reward([0 >= N]);") != std::string::npos);
  REQUIRE(c.find_param("N"));
  CHECK(c.find_param("N")->range->integer);
  Program e = simplified("excess_webserver.pgcl", "excess:N");
  CHECK(pretty_print(e).find("reward([tau >= N]);") != std::string::npos);
}

TEST_CASE("skip keeps its shape") {
  Program t = transform(parse_program("skip"), TransformSpec::moment(2)).program;
  auto items = stmts_of(t.body);
  REQUIRE(items.size() == 3);
  CHECK(to_string(items[0]) == "tau := 0");
  CHECK(items[1]->kind == StmtKind::Reward);
  CHECK(evaluate(items[1]->args[0], State()) == ExtReal(0));
  CHECK(items[2]->kind == StmtKind::Skip);
}

TEST_CASE("fresh ghost names and reparsing") {
  Program p = parse_program("tau := 3; reward(tau)");
  auto r = transform(p, TransformSpec::moment(2));
  REQUIRE(r.ghosts.size() == 1);
  CHECK(r.ghosts[0] == "tau'");
  CHECK(equal(parse_program(pretty_print(r.program)), r.program));
  Bracket b = wp_numeric(r.program.body, ex::num(0), State(), 1);
  CHECK(b.lower == ExtReal(9));
  Gen g(5);
  for (int i = 0; i < 50; ++i) {
    Program rp = g.program();
    for (int k = 0; k < 5; ++k) {
      Program t = transform(rp, catalog_spec(k)).program;
      CHECK(equal(parse_program(pretty_print(t)), t));
    }
  }
}

TEST_CASE("invariants are dropped by the transformation") {
  Program t = transform(fixture("webserver_a.pgcl"), TransformSpec::moment(2)).program;
  for (const auto& s : stmts_of(t.body))
    if (s->kind == StmtKind::While) CHECK(s->e == nullptr);
}

TEST_CASE("ghost busting") {
  Program p = fixture("webserver_a.pgcl");
  Program same = ghost_bust(p, ex::num(1), ex::num(0));
  CHECK(wp_numeric(same.body, ex::num(0), State(), 30).lower == wp_numeric(p.body, ex::num(0), State(), 30).lower);
  Program lin = ghost_bust(p, ex::num(2), ex::num(3));
  CHECK(pretty_print(lin).find("reward(3)") != std::string::npos);
  CHECK(pretty_print(lin).find("reward(2)") != std::string::npos);
  CHECK(wp_numeric(lin.body, ex::num(0), State(), 200).lower.to_double() == doctest::Approx(7).epsilon(1e-12));
}

TEST_CASE("property: ghost busting matches the linear transformation") {
  Gen g(8);
  for (int i = 0; i < 60; ++i) {
    Program p = g.program();
    State s = g.state();
    ExprPtr a = g.constant(), b = g.constant();
    Program gb = ghost_bust(p, a, b);
    Program tr = transform(p, TransformSpec::linear(a, b)).program;
    for (std::size_t d = 0; d <= 8; ++d)
      CHECK(wp_numeric(gb.body, ex::num(0), s, d).lower == wp_numeric(tr.body, ex::num(0), s, d).lower);
  }
}

TEST_CASE("composition") {
  Program p = fixture("webserver_a.pgcl");
  State s;
  auto same = compose_check(p, TransformSpec::identity(), TransformSpec::identity(), 20, s);
  CHECK(same.holds);
  auto sq = compose_check(p, TransformSpec::moment(2), TransformSpec::identity(), 20, s);
  CHECK(sq.holds);
  auto lin = compose_check(p, TransformSpec::parse("linear:1,1"), TransformSpec::moment(2), 20, s);
  CHECK(lin.holds);
  // the transformed program collects h(Rew) - h(0)
  ProgramChain mc(p, State());
  RewardFn h = [](const RewardVec& r) { return monus((r[0] + ExtReal(1)) * (r[0] + ExtReal(1)), ExtReal(1)); };
  CHECK(lin.rhs.back() == expected_reward(mc, 20, &h).lower);
}

TEST_CASE("monotonicity") {
  Program p = fixture("webserver_a.pgcl");
  CHECK(monotonicity_check(p, TransformSpec::identity(), TransformSpec::moment(2), 30, State()).holds);
  CHECK(monotonicity_check(p, TransformSpec::moment(2), TransformSpec::moment(2), 30, State()).holds);
  auto ex3 = TransformSpec::excess(ex::num(3));
  auto r = monotonicity_check(p, ex3, TransformSpec::identity(), 30, State());
  CHECK(r.holds);
  for (std::size_t d = 0; d < r.lhs.size(); ++d) CHECK(r.lhs[d] <= r.rhs[d]);
  CHECK_FALSE(r.note.empty());
  CHECK_FALSE(monotonicity_check(p, TransformSpec::moment(2), TransformSpec::identity(), 30, State()).holds);
}

TEST_CASE("property: soundness on random programs") {
  Gen g(17);
  for (int i = 0; i < 40; ++i) {
    Program p = g.program();
    State s = g.state();
    for (int k = 0; k < 5; ++k) {
      std::string det;
      CHECK_MESSAGE(soundness_mismatch(p, catalog_spec(k), {}, s.vars, 10, &det) < 0, det);
    }
  }
}

TEST_CASE("the oracle notices a wrong transformation") {
  Program p = fixture("webserver_a.pgcl");
  Program t = transform(p, TransformSpec::moment(3)).program;
  ProgramChain orig(p, State()), tr(t, State());
  RewardFn sq = TransformSpec::moment(2).bind({});
  CHECK_FALSE(expected_reward(orig, 5, &sq).lower == expected_reward(tr, 5).lower);
}

TEST_CASE("property: telescoping on fixtures") {
  for (const auto& fc : shipped_fixtures()) {
    Program p = fixture(fc.file);
    std::size_t checked = 0;
    TransformSpec f = reward_arity(p.body) > 1 ? TransformSpec::product(0) : TransformSpec::moment(2);
    CHECK_MESSAGE(telescoping_failures(p, f, fc.params, fc.init, 6, &checked) == 0, fc.file);
    CHECK(checked > 0);
  }
}

TEST_CASE("telescoping with infinite rewards") {
  Program p = parse_program("reward(1); { reward(inf) } [1/2] { skip }; reward(2)");
  std::size_t checked = 0;
  CHECK(telescoping_failures(p, TransformSpec::moment(2), {}, {}, 3, &checked) == 0);
  CHECK(checked > 0);
}
