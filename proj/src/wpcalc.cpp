#include "wpcalc.hpp"

#include <unordered_map>

#include "errors.hpp"

namespace rewlab {

ExprPtr wp_symbolic(const StmtPtr& s, const ExprPtr& post) {
  switch (s->kind) {
    case StmtKind::Skip: return post;
    case StmtKind::Assign: return substitute(post, s->var, s->e);
    case StmtKind::Reward:
      if (s->args.size() != 1) throw Error(ErrorKind::Arity, "symbolic wp needs single rewards; transform multi-reward programs first");
      return ex::add(s->args[0], post);
    case StmtKind::Seq: {
      ExprPtr x = post;
      for (auto it = s->items.rbegin(); it != s->items.rend(); ++it) x = wp_symbolic(*it, x);
      return x;
    }
    case StmtKind::Prob:
      return ex::add(ex::mul(s->e, wp_symbolic(s->s1, post)), ex::mul(ex::sub(ex::num(1), s->e), wp_symbolic(s->s2, post)));
    case StmtKind::If:
      return ex::add(ex::mul(ex::iv(s->guard), wp_symbolic(s->s1, post)),
                     ex::mul(ex::iv(ex::bnot(s->guard)), wp_symbolic(s->s2, post)));
    case StmtKind::While:
      if (!s->e) throw UsageError("loop without invariant (line " + std::to_string(s->line) + ")");
      return s->e;
  }
  return post;
}

ExprPtr characteristic(const Stmt& loop, const ExprPtr& post, const ExprPtr& y) {
  return ex::add(ex::mul(ex::iv(loop.guard), wp_symbolic(loop.s1, y)), ex::mul(ex::iv(ex::bnot(loop.guard)), post));
}

Bracket wp_numeric(const StmtPtr& s, const ExprPtr& post, const State& st, std::size_t depth, std::size_t budget) {
  ProgramChain mc(s, st, post, budget);
  return expected_reward(mc, depth);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified (on grid)";
    case Verdict::Violated: return "violated";
    default: return "inconclusive";
  }
}

double tolerance_for(const ExprPtr& a, const ExprPtr& b) { return contains_exp(a) || contains_exp(b) ? 1e-9 : 0.0; }

InvariantReport check_invariant(const Stmt& loop, const ExprPtr& post, const StateGrid& grid) {
  if (loop.kind != StmtKind::While) throw UsageError("check_invariant expects a loop");
  if (!loop.e) throw UsageError("loop at line " + std::to_string(loop.line) + " has no invariant");
  InvariantReport r;
  r.line = loop.line;
  r.invariant = loop.e;
  r.post = post;
  r.phi = characteristic(loop, post, loop.e);
  r.grid = grid.str();
  r.grid_report = leq_on_grid(r.phi, loop.e, grid, tolerance_for(r.phi, loop.e));
  r.verdict = r.grid_report.holds ? Verdict::Verified : Verdict::Violated;
  return r;
}

namespace {
struct Obligation {
  const Stmt* loop;
  ExprPtr post;
};

void preorder(const StmtPtr& s, std::vector<const Stmt*>& loops) {
  if (s->kind == StmtKind::While) loops.push_back(s.get());
  for (const auto& c : s->items) preorder(c, loops);
  if (s->s1) preorder(s->s1, loops);
  if (s->s2) preorder(s->s2, loops);
}

ExprPtr collect(const StmtPtr& s, const ExprPtr& post, std::vector<Obligation>& out) {
  switch (s->kind) {
    case StmtKind::Seq: {
      ExprPtr x = post;
      for (auto it = s->items.rbegin(); it != s->items.rend(); ++it) x = collect(*it, x, out);
      return x;
    }
    case StmtKind::Prob:
    case StmtKind::If:
      collect(s->s1, post, out);
      collect(s->s2, post, out);
      return wp_symbolic(s, post);
    case StmtKind::While:
      if (!s->e) throw UsageError("loop at line " + std::to_string(s->line) + " has no invariant");
      out.push_back({s.get(), post});
      collect(s->s1, s->e, out);
      return s->e;
    default: return wp_symbolic(s, post);
  }
}
}  // namespace

ProgramCheck check_program(const Program& p, const StateGrid& grid, const ExprPtr& bound) {
  ProgramCheck pc;
  std::vector<Obligation> obs;
  pc.program_bound = collect(p.body, ex::num(0), obs);
  std::vector<const Stmt*> order;
  preorder(p.body, order);
  bool ok = true;
  for (const Stmt* l : order)
    for (const auto& o : obs)
      if (o.loop == l) {
        pc.loops.push_back(check_invariant(*l, o.post, grid));
        ok = ok && pc.loops.back().verdict == Verdict::Verified;
      }
  if (bound) {
    InvariantReport r;
    r.invariant = bound;
    r.phi = pc.program_bound;
    r.grid = grid.str();
    r.grid_report = leq_on_grid(pc.program_bound, bound, grid, tolerance_for(pc.program_bound, bound));
    r.verdict = r.grid_report.holds ? Verdict::Verified : Verdict::Violated;
    ok = ok && r.grid_report.holds;
    pc.bound_check = r;
  }
  if (pc.loops.empty() && !bound)
    pc.verdict = Verdict::Inconclusive;
  else
    pc.verdict = ok ? Verdict::Verified : Verdict::Violated;
  return pc;
}

namespace {
using PostFn = std::function<ExtReal(const State&)>;

// wp of loop-free code with a functional post; `ticks` adds nothing here, rewards are
// counted unless ignore_rewards.
ExtReal wp_eval(const std::vector<StmtPtr>& items, std::size_t i, const State& s, const PostFn& post, bool ignore_rewards) {
  if (i == items.size()) return post(s);
  const Stmt& st = *items[i];
  auto rest = [&](const State& t) { return wp_eval(items, i + 1, t, post, ignore_rewards); };
  switch (st.kind) {
    case StmtKind::Skip: return rest(s);
    case StmtKind::Assign: {
      State t = s;
      t.vars.set(st.var, evaluate(st.e, s));
      return rest(t);
    }
    case StmtKind::Reward:
      if (ignore_rewards) return rest(s);
      if (st.args.size() != 1) throw Error(ErrorKind::Arity, "single rewards expected");
      return evaluate(st.args[0], s) + rest(s);
    case StmtKind::Seq: {
      std::vector<StmtPtr> flat(st.items.begin(), st.items.end());
      flat.insert(flat.end(), items.begin() + static_cast<long>(i) + 1, items.end());
      return wp_eval(flat, 0, s, post, ignore_rewards);
    }
    case StmtKind::Prob: {
      ExtReal p = evaluate(st.e, s);
      std::vector<StmtPtr> a{st.s1}, b{st.s2};
      a.insert(a.end(), items.begin() + static_cast<long>(i) + 1, items.end());
      b.insert(b.end(), items.begin() + static_cast<long>(i) + 1, items.end());
      ExtReal va = p.is_zero() ? ExtReal() : p * wp_eval(a, 0, s, post, ignore_rewards);
      ExtReal q = monus(ExtReal(1), p);
      ExtReal vb = q.is_zero() ? ExtReal() : q * wp_eval(b, 0, s, post, ignore_rewards);
      return va + vb;
    }
    case StmtKind::If: {
      std::vector<StmtPtr> a{evaluate(st.guard, s) ? st.s1 : st.s2};
      a.insert(a.end(), items.begin() + static_cast<long>(i) + 1, items.end());
      return wp_eval(a, 0, s, post, ignore_rewards);
    }
    case StmtKind::While: throw UsageError("Kleene iteration needs a loop-free body");
  }
  return ExtReal();
}

std::vector<ExtReal> iterates(const Stmt& loop, const ExprPtr& post, const State& s0, std::size_t n, bool ert) {
  if (loop.kind != StmtKind::While) throw UsageError("expected a loop");
  if (contains_loop(loop.s1)) throw UsageError("Kleene iteration needs a loop-free body");
  std::vector<std::unordered_map<std::size_t, std::vector<std::pair<Valuation, ExtReal>>>> memo(n + 1);
  std::function<ExtReal(std::size_t, const State&)> value = [&](std::size_t k, const State& s) -> ExtReal {
    if (k == 0) return ExtReal();
    if (!evaluate(loop.guard, s)) return evaluate(post, s);
    auto& bucket = memo[k][s.vars.hash()];
    for (const auto& [v, x] : bucket)
      if (v == s.vars) return x;
    ExtReal r = wp_eval({loop.s1}, 0, s, [&](const State& t) { return value(k - 1, t); }, ert);
    if (ert) r = ExtReal(1) + r;
    bucket.emplace_back(s.vars, r);
    return r;
  };
  std::vector<ExtReal> out;
  for (std::size_t k = 0; k <= n; ++k) out.push_back(value(k, s0));
  return out;
}
}  // namespace

std::vector<ExtReal> kleene_iterates(const Stmt& loop, const ExprPtr& post, const State& s, std::size_t n) {
  return iterates(loop, post, s, n, false);
}

std::vector<ExtReal> ert_iterates(const Stmt& loop, const ExprPtr& post, const State& s, std::size_t n) {
  if (contains_reward(loop.s1)) throw UsageError("ert expects a reward-free loop body");
  return iterates(loop, post, s, n, true);
}

ErtReport ert_equivalence_check(const Stmt& loop, const ExprPtr& post, const StateGrid& grid, std::size_t depth) {
  ErtReport r;
  StmtPtr inst = st::loop(loop.guard, st::seq(st::reward(ex::num(1)), loop.s1));
  bool zero_post = post->kind == ExprKind::Const && post->value.is_zero();
  grid.for_each([&](const State& s) {
    ++r.points;
    auto e = ert_iterates(loop, post, s, depth);
    auto w = kleene_iterates(*inst, post, s, depth);
    for (std::size_t k = 0; k <= depth; ++k)
      if (!(e[k] == w[k])) {
        r.holds = false;
        r.mismatches.push_back({s, w[k], e[k]});
        return true;
      }
    if (zero_post) {
      ProgramChain mc(inst, s);
      ExtReal op = expected_reward(mc, depth).lower;
      if (!(op == e[depth])) {
        r.holds = false;
        r.mismatches.push_back({s, op, e[depth]});
      }
    }
    return true;
  });
  return r;
}

UnsoundDemo unsound_counter_demo(const std::vector<std::size_t>& depths) {
  Program a = parse_program("tau := 0; while true { tau := tau + 1; skip }; reward(tau)");
  Program b = parse_program("tau := 0; while true { tau := tau + 1; skip }; reward(tau^2)");
  Program c = parse_program("while true { reward(1); skip }");
  UnsoundDemo d;
  d.depths = depths;
  for (std::size_t n : depths) {
    ProgramChain ma(a, State()), mb(b, State()), mc(c, State());
    d.counter_linear.push_back(expected_reward(ma, n).lower);
    d.counter_squared.push_back(expected_reward(mb, n).lower);
    d.incremental.push_back(expected_reward(mc, n).lower);
  }
  return d;
}

}  // namespace rewlab
