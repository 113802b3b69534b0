#include "lang.hpp"

#include <algorithm>
#include <functional>

#include "errors.hpp"

namespace rewlab {

bool Program::is_param(const std::string& n) const { return find_param(n) != nullptr; }

const ParamDecl* Program::find_param(const std::string& n) const {
  for (const auto& d : params)
    if (d.name == n) return &d;
  return nullptr;
}

namespace ex {
namespace {
ExprPtr mk(ExprKind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
BExprPtr mkb(BKind k, BExprPtr a = nullptr, BExprPtr b = nullptr) {
  auto e = std::make_shared<BExpr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
}  // namespace

ExprPtr num(const ExtReal& v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Const;
  e->value = v;
  return e;
}
ExprPtr num(long v) { return num(ExtReal(v)); }
ExprPtr var(const std::string& n) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->name = n;
  return e;
}
ExprPtr param(const std::string& n) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Param;
  e->name = n;
  return e;
}
ExprPtr add(ExprPtr a, ExprPtr b) { return mk(ExprKind::Add, std::move(a), std::move(b)); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return mk(ExprKind::Monus, std::move(a), std::move(b)); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return mk(ExprKind::Mul, std::move(a), std::move(b)); }
ExprPtr div(ExprPtr a, ExprPtr b) { return mk(ExprKind::Div, std::move(a), std::move(b)); }
ExprPtr pow(ExprPtr a, ExprPtr e) { return mk(ExprKind::Pow, std::move(a), std::move(e)); }
ExprPtr pow(ExprPtr a, long k) { return pow(std::move(a), num(k)); }
ExprPtr min(ExprPtr a, ExprPtr b) { return mk(ExprKind::Min, std::move(a), std::move(b)); }
ExprPtr max(ExprPtr a, ExprPtr b) { return mk(ExprKind::Max, std::move(a), std::move(b)); }
ExprPtr iv(BExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Iverson;
  e->cond = std::move(b);
  return e;
}
ExprPtr exp(ExprPtr a) { return mk(ExprKind::Exp, std::move(a)); }
BExprPtr btrue() { return mkb(BKind::True); }
BExprPtr bfalse() { return mkb(BKind::False); }
BExprPtr cmp(CmpOp op, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<BExpr>();
  e->kind = BKind::Cmp;
  e->op = op;
  e->l = std::move(l);
  e->r = std::move(r);
  return e;
}
BExprPtr band(BExprPtr a, BExprPtr b) { return mkb(BKind::And, std::move(a), std::move(b)); }
BExprPtr bor(BExprPtr a, BExprPtr b) { return mkb(BKind::Or, std::move(a), std::move(b)); }
BExprPtr bnot(BExprPtr a) { return mkb(BKind::Not, std::move(a)); }
}  // namespace ex

namespace st {
namespace {
std::shared_ptr<Stmt> mk(StmtKind k) {
  auto s = std::make_shared<Stmt>();
  s->kind = k;
  return s;
}
}  // namespace
StmtPtr skip() { return mk(StmtKind::Skip); }
StmtPtr assign(const std::string& x, ExprPtr e) {
  auto s = mk(StmtKind::Assign);
  s->var = x;
  s->e = std::move(e);
  return s;
}
StmtPtr reward(std::vector<ExprPtr> args) {
  if (args.empty()) throw UsageError("reward needs at least one argument");
  auto s = mk(StmtKind::Reward);
  s->args = std::move(args);
  return s;
}
StmtPtr reward(ExprPtr a) { return reward(std::vector<ExprPtr>{std::move(a)}); }
StmtPtr seq(std::vector<StmtPtr> items) {
  std::vector<StmtPtr> flat;
  for (auto& s : items) {
    if (!s) continue;
    if (s->kind == StmtKind::Seq)
      flat.insert(flat.end(), s->items.begin(), s->items.end());
    else
      flat.push_back(s);
  }
  if (flat.empty()) return skip();
  if (flat.size() == 1) return flat.front();
  auto s = mk(StmtKind::Seq);
  s->items = std::move(flat);
  return s;
}
StmtPtr seq(StmtPtr a, StmtPtr b) { return seq(std::vector<StmtPtr>{std::move(a), std::move(b)}); }
StmtPtr prob(ExprPtr p, StmtPtr s1, StmtPtr s2) {
  auto s = mk(StmtKind::Prob);
  s->e = std::move(p);
  s->s1 = std::move(s1);
  s->s2 = std::move(s2);
  return s;
}
StmtPtr ite(BExprPtr b, StmtPtr s1, StmtPtr s2) {
  auto s = mk(StmtKind::If);
  s->guard = std::move(b);
  s->s1 = std::move(s1);
  s->s2 = s2 ? std::move(s2) : skip();
  return s;
}
StmtPtr loop(BExprPtr b, StmtPtr body, ExprPtr invariant) {
  auto s = mk(StmtKind::While);
  s->guard = std::move(b);
  s->s1 = std::move(body);
  s->e = std::move(invariant);
  return s;
}
}  // namespace st

std::vector<StmtPtr> stmts_of(const StmtPtr& s) {
  if (s->kind == StmtKind::Seq) return s->items;
  return {s};
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Const: return a->value.identical(b->value);
    case ExprKind::Var:
    case ExprKind::Param: return a->name == b->name;
    case ExprKind::Iverson: return equal(a->cond, b->cond);
    case ExprKind::Exp: return equal(a->a, b->a);
    default: return equal(a->a, b->a) && equal(a->b, b->b);
  }
}

bool equal(const BExprPtr& a, const BExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case BKind::True:
    case BKind::False: return true;
    case BKind::Cmp: return a->op == b->op && equal(a->l, b->l) && equal(a->r, b->r);
    case BKind::Not: return equal(a->a, b->a);
    default: return equal(a->a, b->a) && equal(a->b, b->b);
  }
}

bool equal(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case StmtKind::Skip: return true;
    case StmtKind::Assign: return a->var == b->var && equal(a->e, b->e);
    case StmtKind::Reward:
      if (a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
      return true;
    case StmtKind::Seq:
      if (a->items.size() != b->items.size()) return false;
      for (std::size_t i = 0; i < a->items.size(); ++i)
        if (!equal(a->items[i], b->items[i])) return false;
      return true;
    case StmtKind::Prob: return equal(a->e, b->e) && equal(a->s1, b->s1) && equal(a->s2, b->s2);
    case StmtKind::If: return equal(a->guard, b->guard) && equal(a->s1, b->s1) && equal(a->s2, b->s2);
    case StmtKind::While:
      if (!a->e != !b->e) return false;
      return equal(a->guard, b->guard) && equal(a->s1, b->s1) && (!a->e || equal(a->e, b->e));
  }
  return false;
}

bool equal(const Program& a, const Program& b) {
  if (a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    const auto &x = a.params[i], &y = b.params[i];
    if (x.name != y.name || x.range.has_value() != y.range.has_value()) return false;
    if (x.range && (x.range->integer != y.range->integer || !x.range->lo.identical(y.range->lo) ||
                    !x.range->hi.identical(y.range->hi)))
      return false;
  }
  return equal(a.body, b.body);
}

std::size_t node_count(const ExprPtr& e) {
  if (!e) return 0;
  switch (e->kind) {
    case ExprKind::Const:
    case ExprKind::Var:
    case ExprKind::Param: return 1;
    case ExprKind::Iverson: return 1 + node_count(e->cond);
    case ExprKind::Exp: return 1 + node_count(e->a);
    default: return 1 + node_count(e->a) + node_count(e->b);
  }
}

std::size_t node_count(const BExprPtr& b) {
  if (!b) return 0;
  switch (b->kind) {
    case BKind::True:
    case BKind::False: return 1;
    case BKind::Cmp: return 1 + node_count(b->l) + node_count(b->r);
    case BKind::Not: return 1 + node_count(b->a);
    default: return 1 + node_count(b->a) + node_count(b->b);
  }
}

void collect_vars(const ExprPtr& e, std::set<std::string>& vars, std::set<std::string>* params) {
  if (!e) return;
  switch (e->kind) {
    case ExprKind::Const: return;
    case ExprKind::Var: vars.insert(e->name); return;
    case ExprKind::Param:
      if (params) params->insert(e->name);
      return;
    case ExprKind::Iverson: collect_vars(e->cond, vars, params); return;
    default:
      collect_vars(e->a, vars, params);
      collect_vars(e->b, vars, params);
  }
}

void collect_vars(const BExprPtr& b, std::set<std::string>& vars, std::set<std::string>* params) {
  if (!b) return;
  collect_vars(b->l, vars, params);
  collect_vars(b->r, vars, params);
  collect_vars(b->a, vars, params);
  collect_vars(b->b, vars, params);
}

namespace {
void walk(const StmtPtr& s, const std::function<void(const Stmt&)>& f) {
  if (!s) return;
  f(*s);
  for (const auto& c : s->items) walk(c, f);
  walk(s->s1, f);
  walk(s->s2, f);
}

void stmt_names(const StmtPtr& s, std::set<std::string>& vars, std::set<std::string>* params) {
  walk(s, [&](const Stmt& n) {
    if (n.kind == StmtKind::Assign) vars.insert(n.var);
    collect_vars(n.e, vars, params);
    for (const auto& a : n.args) collect_vars(a, vars, params);
    collect_vars(n.guard, vars, params);
  });
}
}  // namespace

std::set<std::string> free_vars(const StmtPtr& s) {
  std::set<std::string> v;
  stmt_names(s, v, nullptr);
  return v;
}

std::set<std::string> free_vars(const Program& p) { return free_vars(p.body); }

std::set<std::string> params_used(const Program& p) {
  std::set<std::string> v, ps;
  stmt_names(p.body, v, &ps);
  return ps;
}

std::set<std::string> param_names(const Program& p) {
  std::set<std::string> r;
  for (const auto& d : p.params) r.insert(d.name);
  return r;
}

std::string fresh_var(const Program& p, const std::string& hint) {
  std::set<std::string> taken = free_vars(p);
  for (const auto& n : params_used(p)) taken.insert(n);
  for (const auto& d : p.params) taken.insert(d.name);
  std::string name = hint;
  while (taken.count(name)) name += "'";
  return name;
}

bool contains_var(const ExprPtr& e) {
  std::set<std::string> v;
  collect_vars(e, v);
  return !v.empty();
}

bool contains_loop(const StmtPtr& s) {
  bool found = false;
  walk(s, [&](const Stmt& n) { found = found || n.kind == StmtKind::While; });
  return found;
}

bool contains_reward(const StmtPtr& s) {
  bool found = false;
  walk(s, [&](const Stmt& n) { found = found || n.kind == StmtKind::Reward; });
  return found;
}

bool contains_exp(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == ExprKind::Exp) return true;
  if (e->kind == ExprKind::Iverson) {
    std::function<bool(const BExprPtr&)> rec = [&](const BExprPtr& b) -> bool {
      if (!b) return false;
      return contains_exp(b->l) || contains_exp(b->r) || rec(b->a) || rec(b->b);
    };
    return rec(e->cond);
  }
  return contains_exp(e->a) || contains_exp(e->b);
}

std::size_t reward_arity(const StmtPtr& s) {
  std::size_t n = 0;
  walk(s, [&](const Stmt& x) {
    if (x.kind != StmtKind::Reward) return;
    if (n && n != x.args.size())
      throw Error(ErrorKind::Arity, "mixed reward arities " + std::to_string(n) + " and " + std::to_string(x.args.size()));
    n = x.args.size();
  });
  return n ? n : 1;
}

Valuation::Valuation(std::initializer_list<std::pair<std::string, ExtReal>> init) {
  for (const auto& [k, v] : init) set(k, v);
}

const ExtReal* Valuation::find(const std::string& n) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), n,
                             [](const auto& p, const std::string& k) { return p.first < k; });
  if (it != items_.end() && it->first == n) return &it->second;
  return nullptr;
}

const ExtReal& Valuation::at(const std::string& n) const {
  const ExtReal* v = find(n);
  if (!v) throw EvalError("unbound name '" + n + "'");
  return *v;
}

void Valuation::set(const std::string& n, ExtReal v) {
  auto it = std::lower_bound(items_.begin(), items_.end(), n,
                             [](const auto& p, const std::string& k) { return p.first < k; });
  if (it != items_.end() && it->first == n)
    it->second = std::move(v);
  else
    items_.insert(it, {n, std::move(v)});
}

std::size_t Valuation::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (const auto& [k, v] : items_) {
    h ^= std::hash<std::string>{}(k) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= v.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool Valuation::operator==(const Valuation& o) const {
  if (items_.size() != o.items_.size()) return false;
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (items_[i].first != o.items_[i].first || !items_[i].second.identical(o.items_[i].second)) return false;
  return true;
}

std::string Valuation::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) s += ", ";
    s += items_[i].first + "=" + items_[i].second.str();
  }
  return s + "}";
}

std::string State::str() const {
  if (!params || params->size() == 0) return vars.str();
  return vars.str() + " " + params->str();
}

}  // namespace rewlab
