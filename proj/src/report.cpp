#include "report.hpp"

#include "errors.hpp"
#include "expectation.hpp"
#include "transform.hpp"

namespace rewlab {

void AnalysisConfig::validate() const {
  if (depth < 1) throw UsageError("depth must be at least 1");
  if (budget < depth) throw UsageError("budget must be at least the depth");
}

Json AnalysisConfig::to_json() const {
  Json j;
  j["input"] = input;
  j["command"] = command;
  j["f"] = f.empty() ? Json(nullptr) : Json(f);
  j["params"] = params;
  j["state"] = state;
  j["grid"] = grid;
  j["post"] = post.empty() ? Json(nullptr) : Json(post);
  j["bound"] = bound.empty() ? Json(nullptr) : Json(bound);
  j["depth"] = depth;
  j["budget"] = budget;
  return j;
}

namespace {

Json num_json(const ExtReal& v) {
  Json j;
  j["exact"] = v.is_exact() ? Json(v.str()) : Json(nullptr);
  j["approx"] = v.is_inf() ? Json("inf") : Json(v.to_double());
  return j;
}

Json state_json(const State& s) {
  Json j = Json::object();
  for (const auto& [k, v] : s.vars.items()) j[k] = v.str();
  if (s.params)
    for (const auto& [k, v] : s.params->items()) j[k] = v.str();
  return j;
}

const char* expr_kind(ExprKind k) {
  switch (k) {
    case ExprKind::Const: return "const";
    case ExprKind::Var: return "var";
    case ExprKind::Param: return "param";
    case ExprKind::Add: return "add";
    case ExprKind::Monus: return "monus";
    case ExprKind::Mul: return "mul";
    case ExprKind::Div: return "div";
    case ExprKind::Pow: return "pow";
    case ExprKind::Min: return "min";
    case ExprKind::Max: return "max";
    case ExprKind::Iverson: return "iverson";
    case ExprKind::Exp: return "exp";
  }
  return "?";
}

Valuation to_valuation(const std::string& s) {
  Valuation v;
  for (auto& [k, x] : parse_bindings(s)) v.set(k, x);
  return v;
}

std::string join_bindings(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "," + b;
}

}  // namespace

Json ast_json(const ExprPtr& e) {
  Json j;
  j["kind"] = expr_kind(e->kind);
  switch (e->kind) {
    case ExprKind::Const: j["value"] = e->value.str(); break;
    case ExprKind::Var:
    case ExprKind::Param: j["name"] = e->name; break;
    case ExprKind::Iverson: j["cond"] = ast_json(e->cond); break;
    case ExprKind::Exp: j["arg"] = ast_json(e->a); break;
    default:
      j["lhs"] = ast_json(e->a);
      j["rhs"] = ast_json(e->b);
  }
  return j;
}

Json ast_json(const BExprPtr& b) {
  Json j;
  switch (b->kind) {
    case BKind::True: j["kind"] = "true"; break;
    case BKind::False: j["kind"] = "false"; break;
    case BKind::Cmp:
      j["kind"] = "cmp";
      j["op"] = to_string(b->op);
      j["lhs"] = ast_json(b->l);
      j["rhs"] = ast_json(b->r);
      break;
    case BKind::And:
    case BKind::Or:
      j["kind"] = b->kind == BKind::And ? "and" : "or";
      j["lhs"] = ast_json(b->a);
      j["rhs"] = ast_json(b->b);
      break;
    case BKind::Not:
      j["kind"] = "not";
      j["arg"] = ast_json(b->a);
      break;
  }
  return j;
}

Json ast_json(const StmtPtr& s) {
  Json j;
  switch (s->kind) {
    case StmtKind::Skip: j["kind"] = "skip"; break;
    case StmtKind::Assign:
      j["kind"] = "assign";
      j["var"] = s->var;
      j["rhs"] = ast_json(s->e);
      break;
    case StmtKind::Reward: {
      j["kind"] = "reward";
      Json args = Json::array();
      for (const auto& a : s->args) args.push_back(ast_json(a));
      j["args"] = std::move(args);
      break;
    }
    case StmtKind::Seq: {
      j["kind"] = "seq";
      Json items = Json::array();
      for (const auto& i : s->items) items.push_back(ast_json(i));
      j["items"] = std::move(items);
      break;
    }
    case StmtKind::Prob:
      j["kind"] = "prob";
      j["p"] = ast_json(s->e);
      j["left"] = ast_json(s->s1);
      j["right"] = ast_json(s->s2);
      break;
    case StmtKind::If:
      j["kind"] = "if";
      j["guard"] = ast_json(s->guard);
      j["then"] = ast_json(s->s1);
      j["else"] = ast_json(s->s2);
      break;
    case StmtKind::While:
      j["kind"] = "while";
      j["line"] = s->line;
      j["guard"] = ast_json(s->guard);
      j["invariant"] = s->e ? ast_json(s->e) : Json(nullptr);
      j["body"] = ast_json(s->s1);
      break;
  }
  return j;
}

Json ast_json(const Program& p) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json params = Json::array();
  for (const auto& d : p.params) {
    Json pj;
    pj["name"] = d.name;
    if (d.range) {
      pj["integer"] = d.range->integer;
      pj["lo"] = d.range->lo.str();
      pj["hi"] = d.range->hi.str();
    }
    params.push_back(std::move(pj));
  }
  j["params"] = std::move(params);
  j["body"] = ast_json(p.body);
  return j;
}

Json bracket_json(const Bracket& b, const AnalysisConfig& cfg) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = cfg.to_json();
  j["lower_bound"] = num_json(b.lower);
  j["upper_bound"] = b.upper ? num_json(*b.upper) : Json(nullptr);
  j["unabsorbed_mass"] = num_json(b.unabsorbed_mass);
  j["terminated_lower_bound"] = num_json(b.terminated_lower);
  j["depth"] = b.depth;
  j["paths_enumerated"] = b.paths_enumerated;
  return j;
}

EvalOutcome run_eval(const Program& p, const AnalysisConfig& cfg) {
  cfg.validate();
  Valuation params = to_valuation(cfg.params);
  Valuation vars = to_valuation(cfg.state);
  ExprPtr post = cfg.post.empty() ? nullptr : parse_expr_in(p, cfg.post);
  std::optional<TransformSpec> spec;
  if (!cfg.f.empty()) {
    spec = TransformSpec::parse(cfg.f);
    if (spec->kind() == TransformSpec::Kind::Product) *spec = spec->with_arity(reward_arity(p.body));
  }
  std::set<std::string> needed = params_used(p);
  if (post) collect_vars(post, needed, &needed);
  if (spec)
    for (const auto& n : spec->params()) needed.insert(n);
  for (const auto& n : needed)
    if (p.is_param(n) || !free_vars(p).count(n))
      if (!params.contains(n) && !vars.contains(n))
        throw UsageError("unbound parameter '" + n + "' (use --param " + n + "=...)");
  ProgramChain chain(p, State(vars, params), post, cfg.budget);
  EvalOutcome out;
  if (spec) {
    RewardFn fn = spec->bind(params);
    out.bracket = expected_reward(chain, cfg.depth, &fn);
  } else {
    out.bracket = expected_reward(chain, cfg.depth);
  }
  out.report = bracket_json(out.bracket, cfg);
  return out;
}

namespace {

Json invariant_json(const InvariantReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["invariant_source_location"] = r.line > 0 ? Json{{"line", r.line}} : Json(nullptr);
  j["invariant"] = r.invariant ? Json(to_string(r.invariant)) : Json(nullptr);
  j["post"] = r.post ? Json(to_string(r.post)) : Json(nullptr);
  j["grid"] = r.grid;
  j["points"] = r.grid_report.points;
  j["violations"] = r.grid_report.violations;
  j["fixed_point"] = r.grid_report.equal_everywhere;
  j["tolerance"] = r.grid_report.tolerance;
  Json ces = Json::array();
  for (const auto& c : r.grid_report.counterexamples) {
    Json cj;
    cj["state"] = state_json(c.state);
    cj["phi_of_I"] = num_json(c.lhs);
    cj["I"] = num_json(c.rhs);
    ces.push_back(std::move(cj));
  }
  j["counterexamples"] = std::move(ces);
  return j;
}

}  // namespace

CheckOutcome run_check(const Program& p, const AnalysisConfig& cfg) {
  std::set<std::string> names = param_names(p);
  for (const auto& n : params_used(p)) names.insert(n);
  ExprPtr bound = cfg.bound.empty() ? nullptr : parse_expr_in(p, cfg.bound);
  if (bound) {
    std::set<std::string> v;
    collect_vars(bound, v, &names);
  }
  StateGrid grid = StateGrid::parse(cfg.grid, join_bindings(cfg.params, cfg.state), names);
  CheckOutcome out;
  out.check = check_program(p, grid, bound);
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = cfg.to_json();
  j["verdict"] = to_string(out.check.verdict);
  j["grid"] = grid.str();
  Json loops = Json::array();
  for (const auto& r : out.check.loops) loops.push_back(invariant_json(r));
  j["loops"] = std::move(loops);
  j["program_bound"] = out.check.program_bound ? Json(to_string(out.check.program_bound)) : Json(nullptr);
  j["bound_check"] = out.check.bound_check ? invariant_json(*out.check.bound_check) : Json(nullptr);
  // first failing location and its counterexamples, for quick reading
  Json first = Json::array();
  Json loc = nullptr;
  auto pick = [&](const InvariantReport& r) {
    if (loc.is_null() && r.verdict == Verdict::Violated) {
      loc = r.line > 0 ? Json{{"line", r.line}} : Json("bound");
      first = invariant_json(r)["counterexamples"];
    }
  };
  for (const auto& r : out.check.loops) pick(r);
  if (out.check.bound_check) pick(*out.check.bound_check);
  j["invariant_source_location"] = loc;
  j["counterexamples"] = first;
  out.report = std::move(j);
  return out;
}

std::string run_dist(const Program& p, const AnalysisConfig& cfg) {
  cfg.validate();
  ProgramChain chain(p, State(to_valuation(cfg.state), to_valuation(cfg.params)), nullptr, cfg.budget);
  return histogram_csv(runtime_distribution(chain, cfg.depth));
}

}  // namespace rewlab
