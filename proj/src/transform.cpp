#include "transform.hpp"

#include <sstream>

#include "errors.hpp"
#include "expectation.hpp"

namespace rewlab {

TransformSpec TransformSpec::identity() { return TransformSpec(); }

TransformSpec TransformSpec::moment(unsigned k) {
  if (k < 1) throw UsageError("moment order must be at least 1");
  TransformSpec s;
  s.kind_ = Kind::Moment;
  s.k_ = k;
  return s;
}

TransformSpec TransformSpec::cdf(ExprPtr n) {
  TransformSpec s;
  s.kind_ = Kind::Cdf;
  s.a_ = std::move(n);
  return s;
}

TransformSpec TransformSpec::excess(ExprPtr n) {
  TransformSpec s;
  s.kind_ = Kind::Excess;
  s.a_ = std::move(n);
  return s;
}

TransformSpec TransformSpec::mgf(ExprPtr t) {
  TransformSpec s;
  s.kind_ = Kind::Mgf;
  s.a_ = std::move(t);
  return s;
}

TransformSpec TransformSpec::linear(ExprPtr alpha, ExprPtr beta) {
  TransformSpec s;
  s.kind_ = Kind::Linear;
  s.a_ = std::move(alpha);
  s.b_ = std::move(beta);
  return s;
}

TransformSpec TransformSpec::product(std::size_t arity) {
  TransformSpec s;
  s.kind_ = Kind::Product;
  s.arity_ = arity;
  return s;
}

TransformSpec TransformSpec::compose(const TransformSpec& outer, const TransformSpec& inner) {
  if (outer.arity() != 1) throw UsageError("outer function of a composition must be unary");
  TransformSpec s;
  s.kind_ = Kind::Composed;
  s.arity_ = inner.arity();
  s.outer_ = std::make_shared<TransformSpec>(outer);
  s.inner_ = std::make_shared<TransformSpec>(inner);
  return s;
}

TransformSpec TransformSpec::custom(std::string name, std::function<ExprPtr(const ExprPtr&)> symb) {
  TransformSpec s;
  s.kind_ = Kind::Custom;
  s.custom_ = std::move(symb);
  s.custom_name_ = std::move(name);
  return s;
}

namespace {
ExprPtr spec_arg(const std::string& text) {
  std::string t = text;
  t.erase(0, t.find_first_not_of(" \t"));
  t.erase(t.find_last_not_of(" \t") + 1);
  if (t.empty()) throw UsageError("missing transform argument");
  if (std::isalpha(static_cast<unsigned char>(t[0])) && t != "inf") {
    for (char c : t)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') throw UsageError("bad parameter name '" + t + "'");
    return ex::param(t);
  }
  try {
    return ex::num(ExtReal::parse(t));
  } catch (const EvalError& e) {
    throw UsageError(std::string("transform argument: ") + e.what());
  }
}
}  // namespace

TransformSpec TransformSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  std::vector<std::string> args;
  if (!rest.empty()) {
    std::stringstream ss(rest);
    std::string a;
    while (std::getline(ss, a, ',')) args.push_back(a);
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw UsageError("transform '" + head + "' expects " + std::to_string(n) + " argument(s), got " + std::to_string(args.size()));
  };
  if (head == "identity" || head == "id") {
    need(0);
    return identity();
  }
  if (head == "moment") {
    need(1);
    ExprPtr k = spec_arg(args[0]);
    if (k->kind != ExprKind::Const || !k->value.is_natural() || k->value.is_zero())
      throw UsageError("moment order must be a positive integer");
    return moment(static_cast<unsigned>(k->value.to_ulong()));
  }
  if (head == "cdf") {
    need(1);
    return cdf(spec_arg(args[0]));
  }
  if (head == "excess") {
    need(1);
    return excess(spec_arg(args[0]));
  }
  if (head == "mgf") {
    need(1);
    return mgf(spec_arg(args[0]));
  }
  if (head == "linear") {
    need(2);
    return linear(spec_arg(args[0]), spec_arg(args[1]));
  }
  if (head == "product") {
    if (args.empty()) return product(0);
    need(1);
    ExprPtr n = spec_arg(args[0]);
    if (n->kind != ExprKind::Const || !n->value.is_natural() || n->value.is_zero()) throw UsageError("product arity must be a positive integer");
    return product(n->value.to_ulong());
  }
  if (head == "pgf")
    throw UsageError("probability generating functions f(x) = X^x are not monotone for X < 1, so the transformation is not applicable");
  throw UsageError("unknown transform '" + head + "' (expected moment, cdf, excess, mgf, linear, product or identity)");
}

TransformSpec TransformSpec::with_arity(std::size_t n) const {
  TransformSpec s = *this;
  if (kind_ == Kind::Product)
    s.arity_ = n;
  else if (n != arity_)
    throw Error(ErrorKind::Arity, "transform " + name() + " has arity " + std::to_string(arity_) + " but the program has reward arity " + std::to_string(n));
  return s;
}

std::string TransformSpec::name() const {
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Moment: return "moment:" + std::to_string(k_);
    case Kind::Cdf: return "cdf:" + to_string(a_);
    case Kind::Excess: return "excess:" + to_string(a_);
    case Kind::Mgf: return "mgf:" + to_string(a_);
    case Kind::Linear: return "linear:" + to_string(a_) + "," + to_string(b_);
    case Kind::Product: return arity_ ? "product:" + std::to_string(arity_) : "product";
    case Kind::Composed: return outer_->name() + " o " + inner_->name();
    case Kind::Custom: return custom_name_;
  }
  return "?";
}

ExprPtr TransformSpec::apply(const std::vector<ExprPtr>& args) const {
  if (args.size() != arity_) throw Error(ErrorKind::Arity, "transform " + name() + " applied to " + std::to_string(args.size()) + " argument(s)");
  const ExprPtr& x = args[0];
  switch (kind_) {
    case Kind::Identity: return x;
    case Kind::Moment: return k_ == 1 ? x : ex::pow(x, static_cast<long>(k_));
    case Kind::Cdf: return ex::iv(ex::cmp(CmpOp::Ge, x, a_));
    case Kind::Excess: return ex::sub(x, a_);
    case Kind::Mgf:
      if (a_->kind == ExprKind::Const && a_->value.is_one()) return ex::exp(x);
      return ex::exp(ex::mul(a_, x));
    case Kind::Linear: {
      bool unit = a_->kind == ExprKind::Const && a_->value.is_one();
      bool zero = b_->kind == ExprKind::Const && b_->value.is_zero();
      ExprPtr ax = unit ? x : ex::mul(a_, x);
      return zero ? ax : ex::add(ax, b_);
    }
    case Kind::Product: {
      ExprPtr r = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) r = ex::mul(r, args[i]);
      return r;
    }
    case Kind::Composed: return outer_->apply({inner_->apply(args)});
    case Kind::Custom: return custom_(x);
  }
  return x;
}

ExtReal TransformSpec::eval(const RewardVec& x, const Valuation& params) const {
  if (x.size() != arity_) throw Error(ErrorKind::Arity, "transform " + name() + " evaluated on " + std::to_string(x.size()) + " value(s)");
  State env(Valuation{}, params);
  auto arg = [&](const ExprPtr& e) { return evaluate(e, env); };
  switch (kind_) {
    case Kind::Identity: return x[0];
    case Kind::Moment: return pow(x[0], static_cast<unsigned long>(k_));
    case Kind::Cdf: return ExtReal(x[0] >= arg(a_) ? 1 : 0);
    case Kind::Excess: return monus(x[0], arg(a_));
    case Kind::Mgf: return exp_scaled(arg(a_), x[0]);
    case Kind::Linear: return arg(a_) * x[0] + arg(b_);
    case Kind::Product: {
      ExtReal r(1);
      for (const auto& v : x) r = r * v;
      return r;
    }
    case Kind::Composed: return outer_->eval({inner_->eval(x, params)}, params);
    case Kind::Custom: return evaluate(custom_(ex::num(x[0])), env);
  }
  return x[0];
}

RewardFn TransformSpec::bind(const Valuation& params) const {
  TransformSpec self = *this;
  return [self, params](const RewardVec& x) { return self.eval(x, params); };
}

std::set<std::string> TransformSpec::params() const {
  std::set<std::string> vars, ps;
  collect_vars(a_, vars, &ps);
  collect_vars(b_, vars, &ps);
  if (outer_)
    for (const auto& n : outer_->params()) ps.insert(n);
  if (inner_)
    for (const auto& n : inner_->params()) ps.insert(n);
  if (kind_ == Kind::Custom) collect_vars(custom_(ex::var("x")), vars, &ps);
  return ps;
}

bool TransformSpec::uses_exp() const {
  if (kind_ == Kind::Mgf) return true;
  if (kind_ == Kind::Composed) return outer_->uses_exp() || inner_->uses_exp();
  if (kind_ == Kind::Custom) return contains_exp(custom_(ex::var("x")));
  return false;
}

// ---- program transformation

StmtPtr transform_body(const StmtPtr& s, const TransformSpec& f, const std::vector<std::string>& ghosts) {
  switch (s->kind) {
    case StmtKind::Skip:
    case StmtKind::Assign: return s;
    case StmtKind::Reward: {
      if (s->args.size() != ghosts.size()) throw Error(ErrorKind::Arity, "reward arity does not match the transform");
      std::vector<ExprPtr> now, after;
      for (std::size_t i = 0; i < ghosts.size(); ++i) {
        now.push_back(ex::var(ghosts[i]));
        after.push_back(ex::add(ex::var(ghosts[i]), s->args[i]));
      }
      std::vector<StmtPtr> out{st::reward(ex::sub(f.apply(after), f.apply(now)))};
      for (std::size_t i = 0; i < ghosts.size(); ++i) out.push_back(st::assign(ghosts[i], after[i]));
      return st::seq(out);
    }
    case StmtKind::Seq: {
      std::vector<StmtPtr> items;
      for (const auto& c : s->items) items.push_back(transform_body(c, f, ghosts));
      return st::seq(items);
    }
    case StmtKind::Prob: return st::prob(s->e, transform_body(s->s1, f, ghosts), transform_body(s->s2, f, ghosts));
    case StmtKind::If: return st::ite(s->guard, transform_body(s->s1, f, ghosts), transform_body(s->s2, f, ghosts));
    case StmtKind::While: return st::loop(s->guard, transform_body(s->s1, f, ghosts));
  }
  return s;
}

namespace {
void declare_params(Program& p, const std::set<std::string>& names, bool integer) {
  for (const auto& n : names) {
    if (p.is_param(n)) continue;
    ParamDecl d{n, std::nullopt};
    if (integer) d.range = ParamRange{true, ExtReal(0), ExtReal::infinity()};
    p.params.push_back(d);
  }
}

ExprPtr fold_if_constant(const ExprPtr& e) {
  try {
    State empty;
    ExtReal v = evaluate(e, empty);
    if (v.is_exact() || v.is_inf()) return ex::num(v);
  } catch (const EvalError&) {
  }
  return e;
}

std::vector<std::string> fresh_ghosts(const Program& p, std::size_t n, const std::string& hint) {
  std::vector<std::string> names;
  Program probe = p;
  for (std::size_t i = 0; i < n; ++i) {
    std::string h = n == 1 ? hint : hint + std::to_string(i + 1);
    std::string g = fresh_var(probe, h);
    names.push_back(g);
    probe.body = st::seq(probe.body, st::assign(g, ex::num(0)));
  }
  return names;
}
}  // namespace

TransformResult transform(const Program& p, const TransformSpec& spec) {
  std::size_t n = reward_arity(p.body);
  TransformSpec f = spec.with_arity(n);
  TransformResult r;
  r.ghosts = fresh_ghosts(p, n, "tau");
  std::vector<StmtPtr> pro;
  std::vector<ExprPtr> zeros;
  for (const auto& g : r.ghosts) {
    pro.push_back(st::assign(g, ex::num(0)));
    zeros.push_back(ex::num(0));
  }
  pro.push_back(st::reward(fold_if_constant(f.apply(zeros))));
  pro.push_back(transform_body(p.body, f, r.ghosts));
  r.program = p;
  r.program.body = st::seq(pro);
  bool integer = f.kind() == TransformSpec::Kind::Cdf || f.kind() == TransformSpec::Kind::Excess;
  declare_params(r.program, f.params(), integer);
  return r;
}

namespace {
StmtPtr bust(const StmtPtr& s, const ExprPtr& alpha) {
  switch (s->kind) {
    case StmtKind::Reward: {
      const ExprPtr& a = s->args[0];
      if (a->kind == ExprKind::Const && a->value.is_one()) return st::reward(alpha);
      return st::reward(ex::mul(alpha, a));
    }
    case StmtKind::Seq: {
      std::vector<StmtPtr> items;
      for (const auto& c : s->items) items.push_back(bust(c, alpha));
      return st::seq(items);
    }
    case StmtKind::Prob: return st::prob(s->e, bust(s->s1, alpha), bust(s->s2, alpha));
    case StmtKind::If: return st::ite(s->guard, bust(s->s1, alpha), bust(s->s2, alpha));
    case StmtKind::While: return st::loop(s->guard, bust(s->s1, alpha));
    default: return s;
  }
}
}  // namespace

Program ghost_bust(const Program& p, const ExprPtr& alpha, const ExprPtr& beta) {
  if (reward_arity(p.body) != 1) throw Error(ErrorKind::Arity, "ghost busting needs a single-reward program");
  bool unit = alpha->kind == ExprKind::Const && alpha->value.is_one();
  Program r = p;
  StmtPtr body = unit ? p.body : bust(p.body, alpha);
  bool zero = beta->kind == ExprKind::Const && beta->value.is_zero();
  r.body = zero ? body : st::seq(st::reward(beta), body);
  return r;
}

namespace {
bool same(const ExtReal& a, const ExtReal& b, bool tol) { return tol ? approx_equal(a, b, 1e-9) : a == b; }
}  // namespace

DepthComparison compose_check(const Program& p, const TransformSpec& f, const TransformSpec& g, std::size_t depth,
                              const State& s) {
  if (f.arity() != 1 || g.arity() != 1) throw UsageError("compose_check needs unary functions");
  if (reward_arity(p.body) != 1) throw Error(ErrorKind::Arity, "compose_check needs a single-reward program");
  auto ghosts = fresh_ghosts(p, 2, "tau");
  // fresh_ghosts with n=2 yields tau1, tau2
  const std::string &tau = ghosts[0], &tau2 = ghosts[1];
  StmtPtr set_outer = st::assign(tau2, f.apply({ex::var(tau)}));
  StmtPtr lhs = st::seq(set_outer, transform_body(transform_body(p.body, f, {tau}), g, {tau2}));
  StmtPtr rhs = st::seq(transform_body(p.body, TransformSpec::compose(g, f), {tau}), set_outer);
  State init = s;
  for (const auto& t : ghosts)
    if (!init.vars.contains(t)) init.vars.set(t, ExtReal());
  bool tol = f.uses_exp() || g.uses_exp();
  DepthComparison r;
  for (std::size_t d = 0; d <= depth; ++d) {
    ProgramChain a(lhs, init), b(rhs, init);
    r.lhs.push_back(expected_reward(a, d).lower);
    r.rhs.push_back(expected_reward(b, d).lower);
    if (!same(r.lhs.back(), r.rhs.back(), tol)) r.holds = false;
  }
  r.note = tol ? "compared with tolerance 1e-9" : "compared exactly";
  return r;
}

DepthComparison monotonicity_check(const Program& p, const TransformSpec& f, const TransformSpec& g,
                                   std::size_t depth, const State& s) {
  DepthComparison r;
  std::size_t n = reward_arity(p.body);
  RewardFn ff = f.with_arity(n).bind(*s.params), gg = g.with_arity(n).bind(*s.params);
  for (std::size_t d = 0; d <= depth; ++d) {
    ProgramChain mc(p, s);
    ExtReal lf = expected_reward(mc, d, &ff).lower, lg = expected_reward(mc, d, &gg).lower;
    r.lhs.push_back(lf);
    r.rhs.push_back(lg);
    if (lg < lf) r.holds = false;
  }
  ProgramChain mc(p, s);
  std::size_t paths = 0, bad = 0;
  enumerate_paths(mc, depth, [&](const PathSummary& ps, const std::vector<NodeId>&) {
    ++paths;
    if (gg(ps.reward) < ff(ps.reward)) ++bad;
  });
  if (bad) r.holds = false;
  r.note = "f <= g checked on " + std::to_string(paths) + " realized path rewards only (" + std::to_string(bad) + " violations)";
  return r;
}

}  // namespace rewlab
