#pragma once
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expectation.hpp"
#include "gadgets.hpp"
#include "lang.hpp"
#include "opsem.hpp"
#include "transform.hpp"
#include "wpcalc.hpp"

namespace rltest {

using namespace rewlab;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program fixture(const std::string& rel) { return parse_program(read_file(std::string(REWLAB_FIXTURES) + "/" + rel)); }

inline ExtReal q(long n, long d = 1) { return ExtReal::rational(n, d); }

inline Valuation vals(std::initializer_list<std::pair<std::string, ExtReal>> init) { return Valuation(init); }

// The seven shipped programs with parameter bindings that make them closed.
struct FixtureCase {
  std::string file;
  Valuation params;
  Valuation init;
};

inline std::vector<FixtureCase> shipped_fixtures() {
  return {
      {"webserver_a.pgcl", {}, {}},
      {"webserver_b.pgcl", {}, {}},
      {"random_walk.pgcl", {}, vals({{"x", ExtReal(7)}})},
      {"excess_webserver.pgcl", vals({{"p", q(1, 3)}}), {}},
      {"mgf_coin.pgcl", vals({{"p", q(1, 4)}}), {}},
      {"multi_reward_cost.pgcl", vals({{"p", q(1, 2)}, {"q", q(1, 3)}}), {}},
      {"fdr_evt.pgcl", vals({{"query_done", ExtReal(0)}, {"query_s", ExtReal(3)}}), {}},
  };
}

// Small random pGCL programs over naturals x, y (and a loop flag c).
class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  ExprPtr constant() {
    static const long nums[][2] = {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {1, 2}, {3, 2}};
    auto& c = nums[pick(6)];
    return ex::num(ExtReal::rational(c[0], c[1]));
  }
  ExprPtr var() { return ex::var(pick(2) ? "x" : "y"); }

  // Natural-valued update, keeps variables integral.
  ExprPtr update() {
    switch (pick(5)) {
      case 0: return ex::num(pick(4));
      case 1: return ex::add(var(), ex::num(1 + pick(2)));
      case 2: return ex::sub(var(), ex::num(1));
      case 3: return ex::add(ex::var("x"), ex::var("y"));
      default: return var();
    }
  }

  BExprPtr guard() {
    static const CmpOp ops[] = {CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ne, CmpOp::Ge, CmpOp::Gt};
    auto b = ex::cmp(ops[pick(6)], var(), ex::num(pick(4)));
    if (pick(4) == 0) b = ex::band(b, ex::cmp(CmpOp::Le, var(), ex::num(3)));
    if (pick(5) == 0) b = ex::bnot(b);
    return b;
  }

  ExprPtr prob() {
    static const long ps[][2] = {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}, {1, 1}, {0, 1}};
    auto& p = ps[pick(7)];
    return ex::num(ExtReal::rational(p[0], p[1]));
  }

  ExprPtr reward_arg() {
    switch (pick(4)) {
      case 0: return var();
      case 1: return ex::add(var(), constant());
      default: return constant();
    }
  }

  // Nonnegative expectation over x, y.
  ExprPtr expectation() {
    switch (pick(6)) {
      case 0: return constant();
      case 1: return var();
      case 2: return ex::mul(ex::iv(guard()), ex::add(var(), constant()));
      case 3: return ex::mul(var(), var());
      case 4: return ex::add(ex::mul(constant(), var()), constant());
      default: return ex::iv(guard());
    }
  }

  StmtPtr loop_free(int depth, bool rewards = true) {
    int choices = depth <= 0 ? 3 : 6;
    switch (pick(choices)) {
      case 0: return st::assign(pick(2) ? "x" : "y", update());
      case 1: return rewards ? st::reward(reward_arg()) : st::assign("y", update());
      case 2: return pick(3) == 0 ? st::skip() : st::assign("x", update());
      case 3: return st::seq(loop_free(depth - 1, rewards), loop_free(depth - 1, rewards));
      case 4: return st::prob(prob(), loop_free(depth - 1, rewards), loop_free(depth - 1, rewards));
      default: return st::ite(guard(), loop_free(depth - 1, rewards), loop_free(depth - 1, rewards));
    }
  }

  // Either a counting loop or a loop with a probabilistic exit through flag c.
  StmtPtr loop(bool rewards = true) {
    StmtPtr body = loop_free(2, rewards);
    if (pick(2)) {
      auto g = ex::cmp(CmpOp::Lt, ex::var("x"), ex::num(2 + pick(3)));
      return st::loop(g, st::seq(body, st::assign("x", ex::add(ex::var("x"), ex::num(1)))));
    }
    auto g = ex::cmp(CmpOp::Eq, ex::var("c"), ex::num(0));
    auto exit = st::prob(prob(), st::assign("c", ex::num(1)), st::skip());
    return st::seq(st::assign("c", ex::num(0)), st::loop(g, st::seq(body, exit)));
  }

  Program program(bool rewards = true) {
    std::vector<StmtPtr> items;
    items.push_back(st::assign("x", ex::num(pick(3))));
    items.push_back(st::assign("y", ex::num(pick(3))));
    int n = 1 + pick(3);
    for (int i = 0; i < n; ++i) items.push_back(pick(3) == 0 ? loop(rewards) : loop_free(2, rewards));
    Program p;
    p.body = st::seq(std::move(items));
    return p;
  }

  Program loop_free_program(int depth, bool rewards = true) {
    Program p;
    p.body = loop_free(depth, rewards);
    return p;
  }

  State state() {
    return State(Valuation{{"x", ExtReal(pick(5))}, {"y", ExtReal(pick(5))}, {"c", ExtReal(0)}}, Valuation{});
  }

 private:
  std::mt19937 rng_;
};

inline TransformSpec catalog_spec(int i) {
  switch (i) {
    case 0: return TransformSpec::moment(2);
    case 1: return TransformSpec::moment(3);
    case 2: return TransformSpec::cdf(ex::num(3));
    case 3: return TransformSpec::excess(ex::num(2));
    default: return TransformSpec::linear(ex::num(2), ex::num(1));
  }
}

// First depth at which E over the transformed program differs from E(f(Rew)) over
// the original, or -1 when they agree up to `depth`.
inline long soundness_mismatch(const Program& p, TransformSpec f, const Valuation& params, const Valuation& init,
                               std::size_t depth, std::string* detail = nullptr) {
  if (f.kind() == TransformSpec::Kind::Product) f = f.with_arity(reward_arity(p.body));
  Program t = transform(p, f).program;
  ProgramChain orig(p, State(init, params));
  ProgramChain tr(t, State(init, params));
  RewardFn fn = f.bind(params);
  for (std::size_t d = 0; d <= depth; ++d) {
    ExtReal a = expected_reward(orig, d, &fn).lower;
    ExtReal b = expected_reward(tr, d).lower;
    if (!(a == b)) {
      if (detail) *detail = "depth " + std::to_string(d) + ": E(f(Rew)) = " + a.str() + ", transformed = " + b.str();
      return static_cast<long>(d);
    }
  }
  return -1;
}

// Number of enumerated transformed paths violating f(0) + sum of increments = f(Rew);
// checks the program-level chain (terminated paths, via the final tau) and the
// Definition-2 chain (all paths).
inline std::size_t telescoping_failures(const Program& p, TransformSpec f, const Valuation& params,
                                        const Valuation& init, std::size_t depth, std::size_t* checked = nullptr) {
  if (f.kind() == TransformSpec::Kind::Product) f = f.with_arity(reward_arity(p.body));
  auto res = transform(p, f);
  std::size_t bad = 0, n = 0;
  ProgramChain tr(res.program, State(init, params));
  enumerate_paths(tr, depth, [&](const PathSummary& ps, const std::vector<NodeId>& nodes) {
    if (!ps.terminated || nodes.size() < 2) return;
    const Configuration& last = tr.config(nodes[nodes.size() - 2]);
    if (last.kind != ConfigKind::Done) return;
    RewardVec tau;
    for (const auto& g : res.ghosts) tau.push_back(last.state.vars.at(g));
    ++n;
    if (!(ps.reward[0] == f.eval(tau, params))) ++bad;
  });
  ProgramChain base(p, State(init, params));
  TransformedChain mt(base, f.bind(params));
  enumerate_paths(mt, depth, [&](const PathSummary& ps, const std::vector<NodeId>& nodes) {
    RewardVec rew(base.arity(), ExtReal());
    for (NodeId id : nodes)
      if (!mt.is_prelude(id)) rew = reward_add(rew, base.reward(mt.base_of(id)));
    ++n;
    if (!(ps.reward[0] == f.eval(rew, params))) ++bad;
  });
  if (checked) *checked += n;
  return bad;
}

}  // namespace rltest
