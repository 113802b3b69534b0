#include <map>
#include <optional>

#include "errors.hpp"
#include "expectation.hpp"

namespace rewlab {
namespace {

// Monomial: sorted (name, is_param) -> exponent
using Mono = std::map<std::pair<std::string, bool>, unsigned long>;
using Poly = std::map<Mono, mpq_class>;

void poly_clean(Poly& p) {
  for (auto it = p.begin(); it != p.end();) it = sgn(it->second) == 0 ? p.erase(it) : std::next(it);
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mono m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      r[m] += ca * cb;
    }
  poly_clean(r);
  return r;
}

std::optional<Poly> to_poly(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Const:
      if (!e->value.is_exact()) return std::nullopt;
      return Poly{{Mono{}, e->value.q()}};
    case ExprKind::Var:
    case ExprKind::Param: return Poly{{Mono{{{e->name, e->kind == ExprKind::Param}, 1}}, mpq_class(1)}};
    case ExprKind::Add: {
      auto a = to_poly(e->a), b = to_poly(e->b);
      if (!a || !b) return std::nullopt;
      for (const auto& [m, c] : *b) (*a)[m] += c;
      poly_clean(*a);
      return a;
    }
    case ExprKind::Mul: {
      auto a = to_poly(e->a), b = to_poly(e->b);
      if (!a || !b) return std::nullopt;
      return poly_mul(*a, *b);
    }
    case ExprKind::Pow: {
      if (e->b->kind != ExprKind::Const || !e->b->value.is_natural() || e->b->value.to_ulong() > 16) return std::nullopt;
      auto a = to_poly(e->a);
      if (!a) return std::nullopt;
      Poly r{{Mono{}, mpq_class(1)}};
      for (unsigned long i = 0; i < e->b->value.to_ulong(); ++i) r = poly_mul(r, *a);
      return r;
    }
    default: return std::nullopt;
  }
}

unsigned long degree(const Mono& m) {
  unsigned long d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

// Caller guarantees every coefficient is non-negative.
ExprPtr from_poly(const Poly& p) {
  std::vector<std::pair<Mono, mpq_class>> terms(p.begin(), p.end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return degree(a.first) > degree(b.first); });
  ExprPtr sum;
  for (const auto& [m, c] : terms) {
    ExprPtr t;
    for (const auto& [v, e] : m) {
      ExprPtr base = v.second ? ex::param(v.first) : ex::var(v.first);
      ExprPtr f = e == 1 ? base : ex::pow(base, static_cast<long>(e));
      t = t ? ex::mul(t, f) : f;
    }
    ExprPtr coef = ex::num(ExtReal::rational(c));
    if (!t)
      t = coef;
    else if (c != 1)
      t = ex::mul(coef, t);
    sum = sum ? ex::add(sum, t) : t;
  }
  return sum ? sum : ex::num(0);
}

bool integral(const ExprPtr& e, const SimplifyContext& ctx) {
  switch (e->kind) {
    case ExprKind::Const: return e->value.is_natural();
    case ExprKind::Var:
    case ExprKind::Param: return ctx.integer_names.count(e->name) > 0;
    case ExprKind::Add:
    case ExprKind::Mul:
    case ExprKind::Monus:
    case ExprKind::Min:
    case ExprKind::Max: return integral(e->a, ctx) && integral(e->b, ctx);
    case ExprKind::Pow: return integral(e->a, ctx) && e->b->kind == ExprKind::Const && e->b->value.is_natural();
    case ExprKind::Iverson: return true;
    default: return false;
  }
}

// a == b + 1 as polynomials
bool succ_of(const ExprPtr& a, const ExprPtr& b) {
  auto pa = to_poly(a), pb = to_poly(b);
  if (!pa || !pb) return false;
  for (const auto& [m, c] : *pb) (*pa)[m] -= c;
  poly_clean(*pa);
  return pa->size() == 1 && pa->begin()->first.empty() && pa->begin()->second == 1;
}

bool is_const(const ExprPtr& e) { return e->kind == ExprKind::Const; }
bool is_num(const ExprPtr& e, long v) { return is_const(e) && e->value.is_exact() && e->value == ExtReal(v); }

class Simplifier {
 public:
  explicit Simplifier(const SimplifyContext& ctx) : ctx_(ctx) {}

  ExprPtr expr(const ExprPtr& x) {
    ExprPtr r = rewrite(x);
    return node_count(r) <= node_count(x) ? r : x;
  }

  BExprPtr bexpr(const BExprPtr& b) {
    switch (b->kind) {
      case BKind::True:
      case BKind::False: return b;
      case BKind::Not: {
        auto a = bexpr(b->a);
        if (a->kind == BKind::True) return ex::bfalse();
        if (a->kind == BKind::False) return ex::btrue();
        if (a->kind == BKind::Not) return a->a;
        return a == b->a ? b : ex::bnot(a);
      }
      case BKind::And:
      case BKind::Or: {
        bool is_and = b->kind == BKind::And;
        auto a = bexpr(b->a), c = bexpr(b->b);
        auto unit = is_and ? BKind::True : BKind::False, zero = is_and ? BKind::False : BKind::True;
        if (a->kind == zero || c->kind == zero) return is_and ? ex::bfalse() : ex::btrue();
        if (a->kind == unit) return c;
        if (c->kind == unit) return a;
        if (equal(a, c)) return a;
        if (a == b->a && c == b->b) return b;
        return is_and ? ex::band(a, c) : ex::bor(a, c);
      }
      case BKind::Cmp: {
        auto l = expr(b->l), r = expr(b->r);
        if (is_const(l) && is_const(r)) {
          State empty;
          return evaluate(ex::cmp(b->op, l, r), empty) ? ex::btrue() : ex::bfalse();
        }
        if (equal(l, r)) {
          bool refl = b->op == CmpOp::Eq || b->op == CmpOp::Le || b->op == CmpOp::Ge;
          return refl ? ex::btrue() : ex::bfalse();
        }
        if (l == b->l && r == b->r) return b;
        return ex::cmp(b->op, l, r);
      }
    }
    return b;
  }

 private:
  const SimplifyContext& ctx_;

  ExprPtr fold(const ExprPtr& x) {
    State empty;
    return ex::num(evaluate(x, empty));
  }

  ExprPtr rewrite(const ExprPtr& x) {
    switch (x->kind) {
      case ExprKind::Const:
      case ExprKind::Var:
      case ExprKind::Param: return x;
      case ExprKind::Iverson: {
        auto c = bexpr(x->cond);
        if (c->kind == BKind::True) return ex::num(1);
        if (c->kind == BKind::False) return ex::num(0);
        return c == x->cond ? x : ex::iv(c);
      }
      case ExprKind::Exp: {
        auto a = expr(x->a);
        if (is_num(a, 0)) return ex::num(1);
        return a == x->a ? x : ex::exp(a);
      }
      default: break;
    }
    ExprPtr a = expr(x->a), b = expr(x->b);
    auto rebuilt = [&]() -> ExprPtr {
      if (a == x->a && b == x->b) return x;
      auto n = std::make_shared<Expr>(*x);
      n->a = a;
      n->b = b;
      return n;
    };
    bool both_const = is_const(a) && is_const(b) && a->value.is_exact() && b->value.is_exact();
    switch (x->kind) {
      case ExprKind::Add:
        if (both_const) return fold(rebuilt());
        if (is_num(a, 0)) return b;
        if (is_num(b, 0)) return a;
        return poly_norm(rebuilt());
      case ExprKind::Mul:
        if (is_num(a, 0) || is_num(b, 0)) return ex::num(0);
        if (both_const) return fold(rebuilt());
        if (is_num(a, 1)) return b;
        if (is_num(b, 1)) return a;
        if (a->kind == ExprKind::Iverson && b->kind == ExprKind::Iverson)
          return equal(a->cond, b->cond) ? a : ex::iv(bexpr(ex::band(a->cond, b->cond)));
        return poly_norm(rebuilt());
      case ExprKind::Div:
        if (is_num(b, 1)) return a;
        if (both_const && !b->value.is_zero()) return fold(rebuilt());
        return rebuilt();
      case ExprKind::Pow:
        if (is_num(b, 0)) return ex::num(1);
        if (is_num(b, 1)) return a;
        if (is_num(a, 1)) return ex::num(1);
        if (both_const && b->value.is_natural()) return fold(rebuilt());
        return rebuilt();
      case ExprKind::Min:
      case ExprKind::Max:
        if (both_const || equal(a, b)) return both_const ? fold(rebuilt()) : a;
        return rebuilt();
      case ExprKind::Monus: return monus_rules(rebuilt(), a, b);
      default: return rebuilt();
    }
  }

  ExprPtr poly_norm(const ExprPtr& x) {
    auto p = to_poly(x);
    if (!p) return x;
    for (const auto& [m, c] : *p)
      if (sgn(c) < 0) return x;
    ExprPtr r = from_poly(*p);
    return node_count(r) < node_count(x) ? r : x;
  }

  ExprPtr monus_rules(const ExprPtr& x, const ExprPtr& a, const ExprPtr& b) {
    if (is_num(b, 0)) return a;
    if (is_num(a, 0)) return ex::num(0);
    if (is_const(a) && is_const(b) && a->value.is_exact() && b->value.is_exact()) return fold(x);
    if (equal(a, b)) return ex::num(0);
    // [A >= N] - [B >= N] with A = B + 1 over naturals  ->  [A = N]
    if (a->kind == ExprKind::Iverson && b->kind == ExprKind::Iverson && a->cond->kind == BKind::Cmp &&
        b->cond->kind == BKind::Cmp && a->cond->op == CmpOp::Ge && b->cond->op == CmpOp::Ge &&
        equal(a->cond->r, b->cond->r) && succ_of(a->cond->l, b->cond->l) && integral(a->cond->l, ctx_) &&
        integral(b->cond->l, ctx_) && integral(a->cond->r, ctx_))
      return ex::iv(ex::cmp(CmpOp::Eq, a->cond->l, a->cond->r));
    // (A - N) - (B - N) with A = B + 1 over naturals  ->  [B >= N]
    if (a->kind == ExprKind::Monus && b->kind == ExprKind::Monus && equal(a->b, b->b) && succ_of(a->a, b->a) &&
        integral(a->a, ctx_) && integral(b->a, ctx_) && integral(a->b, ctx_))
      return ex::iv(ex::cmp(CmpOp::Ge, b->a, b->b));
    auto pa = to_poly(a), pb = to_poly(b);
    if (pa && pb) {
      for (const auto& [m, c] : *pb) (*pa)[m] -= c;
      poly_clean(*pa);
      bool nonneg = true, nonpos = true;
      for (const auto& [m, c] : *pa) {
        nonneg = nonneg && sgn(c) >= 0;
        nonpos = nonpos && sgn(c) <= 0;
      }
      if (nonpos) return ex::num(0);
      if (nonneg) {
        ExprPtr r = from_poly(*pa);
        if (node_count(r) <= node_count(x)) return r;
      }
    }
    return x;
  }
};

}  // namespace

ExprPtr simplify(const ExprPtr& x, const SimplifyContext& ctx) {
  Simplifier s(ctx);
  return s.expr(x);
}

BExprPtr simplify(const BExprPtr& b, const SimplifyContext& ctx) {
  Simplifier s(ctx);
  return s.bexpr(b);
}

namespace {
void assignments(const StmtPtr& s, std::vector<const Stmt*>& out) {
  if (!s) return;
  if (s->kind == StmtKind::Assign) out.push_back(s.get());
  for (const auto& c : s->items) assignments(c, out);
  assignments(s->s1, out);
  assignments(s->s2, out);
}
}  // namespace

std::set<std::string> integer_names(const Program& p) {
  SimplifyContext ctx;
  for (const auto& d : p.params)
    if (d.range && d.range->integer) ctx.integer_names.insert(d.name);
  std::vector<const Stmt*> asg;
  assignments(p.body, asg);
  std::set<std::string> vars = free_vars(p);
  ctx.integer_names.insert(vars.begin(), vars.end());
  for (bool changed = true; changed;) {
    changed = false;
    for (const Stmt* a : asg)
      if (ctx.integer_names.count(a->var) && !integral(a->e, ctx)) {
        ctx.integer_names.erase(a->var);
        changed = true;
      }
  }
  return ctx.integer_names;
}

namespace {
StmtPtr simplify_stmt(const StmtPtr& s, const SimplifyContext& ctx) {
  switch (s->kind) {
    case StmtKind::Skip: return s;
    case StmtKind::Assign: {
      auto e = simplify(s->e, ctx);
      if (e->kind == ExprKind::Var && e->name == s->var) return st::skip();
      return st::assign(s->var, e);
    }
    case StmtKind::Reward: {
      std::vector<ExprPtr> args;
      for (const auto& a : s->args) args.push_back(simplify(a, ctx));
      return st::reward(args);
    }
    case StmtKind::Seq: {
      std::vector<StmtPtr> items;
      for (const auto& c : s->items)
        if (auto t = simplify_stmt(c, ctx); t->kind != StmtKind::Skip) items.push_back(t);
      return st::seq(items);
    }
    case StmtKind::Prob: return st::prob(simplify(s->e, ctx), simplify_stmt(s->s1, ctx), simplify_stmt(s->s2, ctx));
    case StmtKind::If: return st::ite(simplify(s->guard, ctx), simplify_stmt(s->s1, ctx), simplify_stmt(s->s2, ctx));
    case StmtKind::While: {
      auto w = st::loop(simplify(s->guard, ctx), simplify_stmt(s->s1, ctx), s->e ? simplify(s->e, ctx) : nullptr);
      std::const_pointer_cast<Stmt>(w)->line = s->line;
      return w;
    }
  }
  return s;
}

ExprPtr subst_known(ExprPtr e, const Valuation& known) {
  for (const auto& [k, v] : known.items()) e = substitute(e, k, ex::num(v));
  return e;
}
}  // namespace

Program simplify_program(const Program& p) {
  SimplifyContext ctx{integer_names(p)};
  Program r = p;
  auto items = stmts_of(simplify_stmt(p.body, ctx));
  std::vector<StmtPtr> out;
  Valuation known;
  std::size_t i = 0;
  for (; i < items.size(); ++i) {
    const StmtPtr& s = items[i];
    if (s->kind == StmtKind::Assign) {
      ExprPtr e = simplify(subst_known(s->e, known), ctx);
      Valuation next;
      for (const auto& [k, v] : known.items())
        if (k != s->var) next.set(k, v);
      if (e->kind == ExprKind::Const) next.set(s->var, e->value);
      known = std::move(next);
      out.push_back(st::assign(s->var, e));
    } else if (s->kind == StmtKind::Reward) {
      std::vector<ExprPtr> args;
      for (const auto& a : s->args) args.push_back(simplify(subst_known(a, known), ctx));
      if (!out.empty() && out.back()->kind == StmtKind::Reward && out.back()->args.size() == args.size()) {
        for (std::size_t k = 0; k < args.size(); ++k) args[k] = simplify(ex::add(out.back()->args[k], args[k]), ctx);
        out.back() = st::reward(args);
      } else {
        out.push_back(st::reward(args));
      }
    } else if (s->kind == StmtKind::Skip) {
      continue;
    } else {
      break;
    }
  }
  out.insert(out.end(), items.begin() + static_cast<long>(i), items.end());
  r.body = st::seq(out);
  return r;
}

}  // namespace rewlab
