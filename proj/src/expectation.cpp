#include "expectation.hpp"

#include <sstream>

#include "errors.hpp"

namespace rewlab {

namespace {
const ExtReal& lookup(const State& s, const std::string& n, bool param) {
  const ExtReal* v = param ? s.params->find(n) : s.vars.find(n);
  if (!v) v = param ? s.vars.find(n) : s.params->find(n);
  if (!v) throw EvalError("unbound " + std::string(param ? "parameter" : "variable") + " '" + n + "'");
  return *v;
}
}  // namespace

ExtReal evaluate(const ExprPtr& x, const State& s) {
  switch (x->kind) {
    case ExprKind::Const: return x->value;
    case ExprKind::Var: return lookup(s, x->name, false);
    case ExprKind::Param: return lookup(s, x->name, true);
    case ExprKind::Add: return evaluate(x->a, s) + evaluate(x->b, s);
    case ExprKind::Monus: return monus(evaluate(x->a, s), evaluate(x->b, s));
    case ExprKind::Mul: {
      ExtReal a = evaluate(x->a, s);
      if (a.is_exact() && a.is_zero()) return a;
      return a * evaluate(x->b, s);
    }
    case ExprKind::Div: return div(evaluate(x->a, s), evaluate(x->b, s));
    case ExprKind::Pow: return pow(evaluate(x->a, s), evaluate(x->b, s));
    case ExprKind::Min: return min(evaluate(x->a, s), evaluate(x->b, s));
    case ExprKind::Max: return max(evaluate(x->a, s), evaluate(x->b, s));
    case ExprKind::Iverson: return ExtReal(evaluate(x->cond, s) ? 1 : 0);
    case ExprKind::Exp: return exp_of(evaluate(x->a, s));
  }
  throw EvalError("bad expression");
}

bool evaluate(const BExprPtr& b, const State& s) {
  switch (b->kind) {
    case BKind::True: return true;
    case BKind::False: return false;
    case BKind::Not: return !evaluate(b->a, s);
    case BKind::And: return evaluate(b->a, s) && evaluate(b->b, s);
    case BKind::Or: return evaluate(b->a, s) || evaluate(b->b, s);
    case BKind::Cmp: {
      auto c = compare(evaluate(b->l, s), evaluate(b->r, s));
      switch (b->op) {
        case CmpOp::Eq: return c == 0;
        case CmpOp::Ne: return c != 0;
        case CmpOp::Lt: return c < 0;
        case CmpOp::Le: return c <= 0;
        case CmpOp::Gt: return c > 0;
        case CmpOp::Ge: return c >= 0;
      }
    }
  }
  return false;
}

namespace {
template <class F>
ExprPtr map_expr(const ExprPtr& x, const F& leaf);

template <class F>
BExprPtr map_bexpr(const BExprPtr& b, const F& leaf) {
  switch (b->kind) {
    case BKind::True:
    case BKind::False: return b;
    case BKind::Cmp: {
      auto l = map_expr(b->l, leaf), r = map_expr(b->r, leaf);
      if (l == b->l && r == b->r) return b;
      return ex::cmp(b->op, l, r);
    }
    case BKind::Not: {
      auto a = map_bexpr(b->a, leaf);
      return a == b->a ? b : ex::bnot(a);
    }
    default: {
      auto a = map_bexpr(b->a, leaf), c = map_bexpr(b->b, leaf);
      if (a == b->a && c == b->b) return b;
      return b->kind == BKind::And ? ex::band(a, c) : ex::bor(a, c);
    }
  }
}

template <class F>
ExprPtr map_expr(const ExprPtr& x, const F& leaf) {
  switch (x->kind) {
    case ExprKind::Const: return x;
    case ExprKind::Var:
    case ExprKind::Param: return leaf(x);
    case ExprKind::Iverson: {
      auto c = map_bexpr(x->cond, leaf);
      return c == x->cond ? x : ex::iv(c);
    }
    case ExprKind::Exp: {
      auto a = map_expr(x->a, leaf);
      return a == x->a ? x : ex::exp(a);
    }
    default: {
      auto a = map_expr(x->a, leaf), b = map_expr(x->b, leaf);
      if (a == x->a && b == x->b) return x;
      auto n = std::make_shared<Expr>(*x);
      n->a = a;
      n->b = b;
      return n;
    }
  }
}
}  // namespace

ExprPtr substitute(const ExprPtr& x, const std::string& name, const ExprPtr& a) {
  return map_expr(x, [&](const ExprPtr& v) { return (v->kind == ExprKind::Var && v->name == name) ? a : v; });
}

BExprPtr substitute(const BExprPtr& b, const std::string& name, const ExprPtr& a) {
  return map_bexpr(b, [&](const ExprPtr& v) { return (v->kind == ExprKind::Var && v->name == name) ? a : v; });
}

ExprPtr bind_params(const ExprPtr& x, const Valuation& params) {
  return map_expr(x, [&](const ExprPtr& v) {
    if (v->kind != ExprKind::Param) return v;
    const ExtReal* val = params.find(v->name);
    return val ? ex::num(*val) : v;
  });
}

// ---- grids

std::vector<std::pair<std::string, ExtReal>> parse_bindings(const std::string& s) {
  std::vector<std::pair<std::string, ExtReal>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("binding '" + item + "' is not of the form name=value");
    auto trim = [](std::string t) {
      t.erase(0, t.find_first_not_of(" \t"));
      t.erase(t.find_last_not_of(" \t") + 1);
      return t;
    };
    std::string k = trim(item.substr(0, eq)), v = trim(item.substr(eq + 1));
    try {
      out.emplace_back(k, ExtReal::parse(v));
    } catch (const EvalError& e) {
      throw UsageError("binding '" + item + "': " + e.what());
    }
  }
  return out;
}

namespace {
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

ExtReal parse_value(const std::string& s) {
  try {
    return ExtReal::parse(s);
  } catch (const EvalError& e) {
    throw UsageError(std::string("grid value: ") + e.what());
  }
}
}  // namespace

StateGrid StateGrid::parse(const std::string& grid, const std::string& bindings, const std::set<std::string>& params) {
  StateGrid g;
  for (const auto& part : split_top(grid)) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw UsageError("grid entry '" + part + "' is not of the form name=range");
    GridAxis ax;
    ax.name = part.substr(0, eq);
    ax.is_param = params.count(ax.name) > 0;
    std::string r = part.substr(eq + 1);
    if (!r.empty() && r.front() == '{') {
      if (r.back() != '}') throw UsageError("unterminated value list in '" + part + "'");
      std::stringstream ss(r.substr(1, r.size() - 2));
      std::string v;
      while (std::getline(ss, v, ',')) ax.values.push_back(parse_value(v));
    } else if (auto dots = r.find(".."); dots != std::string::npos) {
      // lo..hi or lo..hi:step
      std::string rest = r.substr(dots + 2);
      ExtReal step(1);
      if (auto colon = rest.find(':'); colon != std::string::npos) {
        step = parse_value(rest.substr(colon + 1));
        rest = rest.substr(0, colon);
        if (step.is_zero() || !step.is_exact()) throw UsageError("grid step must be a positive rational in '" + part + "'");
      }
      ExtReal lo = parse_value(r.substr(0, dots)), hi = parse_value(rest);
      if (!lo.is_exact() || !hi.is_exact()) throw UsageError("range bounds must be finite in '" + part + "'");
      if (compare(monus(hi, lo), step * ExtReal(100000000)) > 0) throw UsageError("grid axis too large in '" + part + "'");
      for (ExtReal v = lo; v <= hi; v = v + step) ax.values.push_back(v);
    } else {
      ax.values.push_back(parse_value(r));
    }
    if (ax.values.empty()) throw UsageError("empty grid axis '" + ax.name + "'");
    g.add_axis(std::move(ax));
  }
  for (const auto& [k, v] : parse_bindings(bindings)) g.bind(k, v, params.count(k) > 0);
  return g;
}

void StateGrid::add_axis(GridAxis a) {
  for (auto& ax : axes_)
    if (ax.name == a.name) {
      ax = std::move(a);
      return;
    }
  axes_.push_back(std::move(a));
}

void StateGrid::bind(const std::string& name, const ExtReal& v, bool is_param) {
  (is_param ? fixed_params_ : fixed_vars_).set(name, v);
}

std::size_t StateGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes_) n *= a.values.size();
  return n;
}

void StateGrid::for_each(const std::function<bool(const State&)>& fn) const {
  std::vector<std::size_t> idx(axes_.size(), 0);
  for (;;) {
    Valuation vars = fixed_vars_, params = fixed_params_;
    for (std::size_t i = 0; i < axes_.size(); ++i) (axes_[i].is_param ? params : vars).set(axes_[i].name, axes_[i].values[idx[i]]);
    if (!fn(State(std::move(vars), std::move(params)))) return;
    std::size_t k = axes_.size();
    for (;;) {
      if (k == 0) return;
      --k;
      if (++idx[k] < axes_[k].values.size()) break;
      idx[k] = 0;
    }
  }
}

std::string StateGrid::str() const {
  std::string s;
  for (const auto& a : axes_) {
    if (!s.empty()) s += ",";
    s += a.name + "=";
    bool range = a.values.size() > 1;
    for (std::size_t i = 0; range && i < a.values.size(); ++i)
      range = a.values[i].is_natural() && a.values[i] == a.values[0] + ExtReal(static_cast<long>(i));
    if (range) {
      s += a.values.front().str() + ".." + a.values.back().str();
    } else if (a.values.size() == 1) {
      s += a.values[0].str();
    } else {
      s += "{";
      for (std::size_t i = 0; i < a.values.size(); ++i) s += (i ? "," : "") + a.values[i].str();
      s += "}";
    }
  }
  for (const auto* fixed : {&fixed_vars_, &fixed_params_})
    for (const auto& [k, v] : fixed->items()) s += (s.empty() ? "" : ",") + k + "=" + v.str();
  return s;
}

CheckReport leq_on_grid(const ExprPtr& x, const ExprPtr& y, const StateGrid& grid, double tol, std::size_t max_examples) {
  CheckReport r;
  r.tolerance = tol;
  grid.for_each([&](const State& s) {
    ++r.points;
    ExtReal a = evaluate(x, s), b = evaluate(y, s);
    bool exact = a.is_exact() && b.is_exact();
    bool eq = a == b || (!exact && tol > 0 && approx_equal(a, b, tol));
    if (!eq) r.equal_everywhere = false;
    if (!eq && b < a) {
      ++r.violations;
      r.holds = false;
      if (r.counterexamples.size() < max_examples) r.counterexamples.push_back({s, a, b});
    }
    return true;
  });
  return r;
}

}  // namespace rewlab
