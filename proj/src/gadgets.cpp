#include "gadgets.hpp"

#include "errors.hpp"
#include "expectation.hpp"

namespace rewlab {

GadgetSpec GadgetSpec::on_termination(ExprPtr x) {
  GadgetSpec g;
  g.kind = Kind::OnTermination;
  g.x = std::move(x);
  return g;
}

GadgetSpec GadgetSpec::discount(ExprPtr gamma) {
  GadgetSpec g;
  g.kind = Kind::Discount;
  g.x = std::move(gamma);
  return g;
}

GadgetSpec GadgetSpec::step_indexed(ExprPtr n, bool upto) {
  GadgetSpec g;
  g.kind = Kind::StepIndexed;
  g.x = std::move(n);
  g.upto = upto;
  return g;
}

GadgetSpec GadgetSpec::evt(BExprPtr b) {
  GadgetSpec g;
  g.kind = Kind::Evt;
  g.cond = std::move(b);
  return g;
}

GadgetSpec GadgetSpec::first_visit(BExprPtr b) {
  GadgetSpec g;
  g.kind = Kind::FirstVisit;
  g.cond = std::move(b);
  return g;
}

GadgetSpec GadgetSpec::first_return(BExprPtr b) {
  GadgetSpec g;
  g.kind = Kind::FirstReturn;
  g.cond = std::move(b);
  return g;
}


GadgetSpec GadgetSpec::parse(const std::string& kind, const std::string& arg, const Program& p) {
  auto need = [&] {
    if (arg.empty()) throw UsageError("gadget '" + kind + "' needs an argument (--cond)");
  };
  if (kind == "on-termination") return need(), on_termination(parse_expr_in(p, arg));
  if (kind == "discount") return need(), discount(parse_expr_in(p, arg));
  if (kind == "step-indexed" || kind == "step-indexed-at")
    return need(), step_indexed(parse_expr_in(p, arg), false);
  if (kind == "step-indexed-upto") return need(), step_indexed(parse_expr_in(p, arg), true);
  if (kind == "evt") return need(), evt(parse_bexpr_in(p, arg));
  if (kind == "first-visit") return need(), first_visit(parse_bexpr_in(p, arg));
  if (kind == "first-return") return need(), first_return(parse_bexpr_in(p, arg));
  throw UsageError("unknown gadget kind '" + kind +
                   "' (expected on-termination, discount, step-indexed[-upto], evt, first-visit, first-return)");
}

namespace {

using RewardRewrite = std::function<StmtPtr(const Stmt&)>;

StmtPtr map_rewards(const StmtPtr& s, const RewardRewrite& fn) {
  switch (s->kind) {
    case StmtKind::Skip:
    case StmtKind::Assign:
      return s;
    case StmtKind::Reward:
      return fn(*s);
    case StmtKind::Seq: {
      std::vector<StmtPtr> items;
      for (const auto& i : s->items) items.push_back(map_rewards(i, fn));
      return st::seq(std::move(items));
    }
    case StmtKind::Prob:
      return st::prob(s->e, map_rewards(s->s1, fn), map_rewards(s->s2, fn));
    case StmtKind::If:
      return st::ite(s->guard, map_rewards(s->s1, fn), map_rewards(s->s2, fn));
    case StmtKind::While: {
      auto w = st::loop(s->guard, map_rewards(s->s1, fn), s->e);
      std::const_pointer_cast<Stmt>(w)->line = s->line;
      return w;
    }
  }
  return s;
}

StmtPtr drop_invariants(const StmtPtr& s) {
  switch (s->kind) {
    case StmtKind::Seq: {
      std::vector<StmtPtr> items;
      for (const auto& i : s->items) items.push_back(drop_invariants(i));
      return st::seq(std::move(items));
    }
    case StmtKind::Prob:
      return st::prob(s->e, drop_invariants(s->s1), drop_invariants(s->s2));
    case StmtKind::If:
      return st::ite(s->guard, drop_invariants(s->s1), drop_invariants(s->s2));
    case StmtKind::While: {
      auto w = st::loop(s->guard, drop_invariants(s->s1));
      std::const_pointer_cast<Stmt>(w)->line = s->line;
      return w;
    }
    default:
      return s;
  }
}

// Puts `probe` at the head of every loop body.
StmtPtr instrument_loops(const StmtPtr& s, const StmtPtr& probe) {
  switch (s->kind) {
    case StmtKind::Seq: {
      std::vector<StmtPtr> items;
      for (const auto& i : s->items) items.push_back(instrument_loops(i, probe));
      return st::seq(std::move(items));
    }
    case StmtKind::Prob:
      return st::prob(s->e, instrument_loops(s->s1, probe), instrument_loops(s->s2, probe));
    case StmtKind::If:
      return st::ite(s->guard, instrument_loops(s->s1, probe), instrument_loops(s->s2, probe));
    case StmtKind::While: {
      auto w = st::loop(s->guard, st::seq(probe, instrument_loops(s->s1, probe)), s->e);
      std::const_pointer_cast<Stmt>(w)->line = s->line;
      return w;
    }
    default:
      return s;
  }
}

void declare(Program& p, const std::set<std::string>& names, const std::optional<ParamRange>& range) {
  for (const auto& n : names)
    if (!p.is_param(n)) p.params.push_back({n, range});
}

std::set<std::string> params_of(const ExprPtr& e) {
  std::set<std::string> v, ps;
  collect_vars(e, v, &ps);
  return ps;
}

std::set<std::string> params_of(const BExprPtr& b) {
  std::set<std::string> v, ps;
  collect_vars(b, v, &ps);
  return ps;
}

}  // namespace

Program apply_gadget(const Program& p, const GadgetSpec& g) {
  using K = GadgetSpec::Kind;
  Program out = p;
  // rewritten rewards invalidate loop annotations, except when only appending a final reward
  if (g.kind != K::OnTermination) out.body = drop_invariants(p.body);
  switch (g.kind) {
    case K::OnTermination: {
      if (!g.x) throw UsageError("on-termination gadget needs an expectation");
      std::size_t n = reward_arity(p.body);
      std::vector<ExprPtr> args(n, ex::num(0));
      args[0] = g.x;
      out.body = st::seq(p.body, st::reward(args));
      declare(out, params_of(g.x), std::nullopt);
      return out;
    }
    case K::Discount: {
      if (!g.x) throw UsageError("discount gadget needs a factor");
      if (contains_var(g.x)) throw UsageError("discount factor must not mention program variables");
      auto ps = params_of(g.x);
      if (ps.empty()) {
        ExtReal gv = evaluate(g.x, State());
        if (gv > ExtReal(1)) throw UsageError("discount factor " + gv.str() + " is outside [0, 1]");
      }
      for (const auto& n : ps) {
        const ParamDecl* d = p.find_param(n);
        if (d && d->range && d->range->hi > ExtReal(1))
          throw UsageError("discount factor parameter '" + n + "' may exceed 1");
      }
      ParamRange unit{false, ExtReal(0), ExtReal(1)};
      declare(out, ps, unit);
      for (auto& d : out.params)
        if (ps.count(d.name) && !d.range) d.range = unit;
      std::string tau = fresh_var(p, g.hint.empty() ? "tau" : g.hint);
      auto t = ex::var(tau);
      auto body = map_rewards(out.body, [&](const Stmt& r) {
        std::vector<ExprPtr> args;
        for (const auto& a : r.args)
          args.push_back(a->kind == ExprKind::Const && a->value.is_one() ? ex::pow(g.x, t) : ex::mul(ex::pow(g.x, t), a));
        return st::seq(st::reward(std::move(args)), st::assign(tau, ex::add(t, ex::num(1))));
      });
      out.body = st::seq(st::assign(tau, ex::num(0)), body);
      return out;
    }
    case K::StepIndexed: {
      if (!g.x) throw UsageError("step-indexed gadget needs an index");
      if (contains_var(g.x)) throw UsageError("step index must not mention program variables");
      declare(out, params_of(g.x), ParamRange{true, ExtReal(0), ExtReal::infinity()});
      std::string tau = fresh_var(p, g.hint.empty() ? "tau" : g.hint);
      auto t = ex::var(tau);
      auto guard = ex::cmp(g.upto ? CmpOp::Le : CmpOp::Eq, t, g.x);
      auto body = map_rewards(out.body, [&](const Stmt& r) {
        return st::seq(st::ite(guard, st::reward(r.args), st::skip()),
                       st::assign(tau, ex::add(t, ex::num(1))));
      });
      out.body = st::seq(st::assign(tau, ex::num(0)), body);
      return out;
    }
    case K::Evt:
    case K::FirstVisit:
    case K::FirstReturn: {
      if (!g.cond) throw UsageError("gadget needs a condition");
      if (contains_reward(p.body))
        throw UsageError("visit gadgets require a reward-free program");
      declare(out, params_of(g.cond), std::nullopt);
      StmtPtr probe;
      std::string phi;
      if (g.kind == K::Evt) {
        probe = st::ite(g.cond, st::reward(ex::num(1)), st::skip());
      } else {
        phi = fresh_var(p, g.hint.empty() ? "phi" : g.hint);
        auto f = ex::var(phi);
        if (g.kind == K::FirstVisit)
          probe = st::ite(g.cond,
                          st::seq(st::reward(ex::iv(ex::cmp(CmpOp::Eq, f, ex::num(0)))),
                                  st::assign(phi, ex::num(1))),
                          st::skip());
        else
          probe = st::ite(g.cond,
                          st::seq(st::reward(ex::iv(ex::cmp(CmpOp::Eq, f, ex::num(1)))),
                                  st::assign(phi, ex::min(ex::add(f, ex::num(1)), ex::num(2)))),
                          st::skip());
      }
      std::vector<StmtPtr> items;
      if (!phi.empty()) items.push_back(st::assign(phi, ex::num(0)));
      items.push_back(instrument_loops(out.body, probe));
      items.push_back(probe);
      out.body = st::seq(std::move(items));
      return out;
    }
  }
  return out;
}

const std::string& fdr_source() {
  static const std::string src = R"(// Fast dice roller as a seven-state chain; s3, s4, s6 roll a face.
param query_s : 0..6
param query_done : 0..1

s := 0;
done := 0;
res := 0;
while not (done = 1)
  invariant [done = 1] * [query_s = s and query_done = 1]
    + [not (done = 1)] * ([query_done = 0] * ([query_s = 0] * [s = 0]
        + [query_s = 1] * (2/3 * [s = 0] + [s = 1] + 1/3 * [s = 2] + 2/3 * [s = 5])
        + [query_s = 2] * (2/3 * [s = 0] + 4/3 * [s = 2] + 2/3 * [s = 5])
        + [query_s = 5] * (1/3 * [s = 0] + 2/3 * [s = 2] + 4/3 * [s = 5]))
      + [query_s = 3] * (1/3 * [s = 0] + 1/2 * [s = 1] + 1/6 * [s = 2] + [s = 3] + 1/3 * [s = 5])
      + [query_s = 4] * (1/3 * [s = 0] + 1/2 * [s = 1] + 1/6 * [s = 2] + [s = 4] + 1/3 * [s = 5])
      + [query_s = 6] * (1/3 * [s = 0] + 2/3 * [s = 2] + [s = 6] + 1/3 * [s = 5]))
{
  reward([query_s = s and query_done = done]);
  if s = 5 {
    { s := 1 } [1/2] { s := 2 }
  } else {
    if s = 3 {
      { res := 1 } [1/2] { res := 2 };
      done := 1
    } else {
      if s = 4 {
        { res := 3 } [1/2] { res := 4 };
        done := 1
      } else {
        if s = 6 {
          { res := 5 } [1/2] { res := 6 };
          done := 1
        } else {
          { s := 2 * s + 1 } [1/2] { s := 2 * s + 2 }
        }
      }
    }
  }
}
reward([query_s = s and query_done = done])
)";
  return src;
}

Program fdr_fixture() { return parse_program(fdr_source()); }

}  // namespace rewlab
