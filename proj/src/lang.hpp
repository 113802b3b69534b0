#pragma once
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "extreal.hpp"

namespace rewlab {

struct Expr;
struct BExpr;
struct Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using BExprPtr = std::shared_ptr<const BExpr>;
using StmtPtr = std::shared_ptr<const Stmt>;

enum class ExprKind { Const, Var, Param, Add, Monus, Mul, Div, Pow, Min, Max, Iverson, Exp };

struct Expr {
  ExprKind kind;
  ExtReal value;      // Const
  std::string name;   // Var, Param
  ExprPtr a, b;       // operands; Exp uses a only
  BExprPtr cond;      // Iverson
};

enum class BKind { True, False, Cmp, And, Or, Not };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct BExpr {
  BKind kind;
  CmpOp op = CmpOp::Eq;
  ExprPtr l, r;   // Cmp
  BExprPtr a, b;  // And/Or/Not
};

enum class StmtKind { Skip, Assign, Reward, Seq, Prob, If, While };

struct Stmt {
  StmtKind kind;
  std::string var;             // Assign
  ExprPtr e;                   // Assign rhs, Prob probability, While invariant (may be null)
  std::vector<ExprPtr> args;   // Reward
  std::vector<StmtPtr> items;  // Seq (flat, >= 2 items)
  StmtPtr s1, s2;              // Prob/If branches, While body in s1
  BExprPtr guard;              // If/While
  int line = 0;                // source line (While), 0 if synthesized
};

struct ParamRange {
  bool integer = false;  // lo..hi over naturals, else closed real interval
  ExtReal lo, hi;
};

struct ParamDecl {
  std::string name;
  std::optional<ParamRange> range;
};

struct Program {
  std::vector<ParamDecl> params;
  StmtPtr body;

  bool is_param(const std::string& n) const;
  const ParamDecl* find_param(const std::string& n) const;
};

// Builders. Only the constructors below create nodes.
namespace ex {
ExprPtr num(const ExtReal& v);
ExprPtr num(long v);
ExprPtr var(const std::string& n);
ExprPtr param(const std::string& n);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);  // monus
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr a, ExprPtr e);
ExprPtr pow(ExprPtr a, long k);
ExprPtr min(ExprPtr a, ExprPtr b);
ExprPtr max(ExprPtr a, ExprPtr b);
ExprPtr iv(BExprPtr b);
ExprPtr exp(ExprPtr a);
BExprPtr btrue();
BExprPtr bfalse();
BExprPtr cmp(CmpOp op, ExprPtr l, ExprPtr r);
BExprPtr band(BExprPtr a, BExprPtr b);
BExprPtr bor(BExprPtr a, BExprPtr b);
BExprPtr bnot(BExprPtr a);
}  // namespace ex

namespace st {
StmtPtr skip();
StmtPtr assign(const std::string& x, ExprPtr e);
StmtPtr reward(std::vector<ExprPtr> args);
StmtPtr reward(ExprPtr a);
StmtPtr seq(std::vector<StmtPtr> items);  // flattens, drops nothing, 1 item -> item
StmtPtr seq(StmtPtr a, StmtPtr b);
StmtPtr prob(ExprPtr p, StmtPtr s1, StmtPtr s2);
StmtPtr ite(BExprPtr b, StmtPtr s1, StmtPtr s2);
StmtPtr loop(BExprPtr b, StmtPtr body, ExprPtr invariant = nullptr);
}  // namespace st

// Statement list view: a Seq yields its items, anything else itself.
std::vector<StmtPtr> stmts_of(const StmtPtr& s);

bool equal(const ExprPtr& a, const ExprPtr& b);
bool equal(const BExprPtr& a, const BExprPtr& b);
bool equal(const StmtPtr& a, const StmtPtr& b);
bool equal(const Program& a, const Program& b);

std::size_t node_count(const ExprPtr& e);
std::size_t node_count(const BExprPtr& b);

// Program variables (params excluded).
std::set<std::string> free_vars(const Program& p);
std::set<std::string> free_vars(const StmtPtr& s);
void collect_vars(const ExprPtr& e, std::set<std::string>& vars, std::set<std::string>* params = nullptr);
void collect_vars(const BExprPtr& b, std::set<std::string>& vars, std::set<std::string>* params = nullptr);
std::set<std::string> params_used(const Program& p);
// hint, hint', hint'', ... avoiding every variable and parameter name.
std::string fresh_var(const Program& p, const std::string& hint);
bool contains_var(const ExprPtr& e);
bool contains_loop(const StmtPtr& s);
bool contains_reward(const StmtPtr& s);
bool contains_exp(const ExprPtr& e);
// Reward arity; 1 for reward-free programs.
std::size_t reward_arity(const StmtPtr& s);

// Sorted name -> value map.
class Valuation {
 public:
  Valuation() = default;
  Valuation(std::initializer_list<std::pair<std::string, ExtReal>> init);
  const ExtReal* find(const std::string& n) const;
  const ExtReal& at(const std::string& n) const;  // EvalError if missing
  void set(const std::string& n, ExtReal v);
  bool contains(const std::string& n) const { return find(n) != nullptr; }
  const std::vector<std::pair<std::string, ExtReal>>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::size_t hash() const;
  bool operator==(const Valuation& o) const;
  std::string str() const;  // {x=1, y=1/2}

 private:
  std::vector<std::pair<std::string, ExtReal>> items_;
};

// Program variables plus a (shared, run-constant) parameter binding.
struct State {
  Valuation vars;
  std::shared_ptr<const Valuation> params;

  State() : params(std::make_shared<Valuation>()) {}
  State(Valuation v, Valuation p) : vars(std::move(v)), params(std::make_shared<Valuation>(std::move(p))) {}
  State(Valuation v, std::shared_ptr<const Valuation> p) : vars(std::move(v)), params(std::move(p)) {}
  bool operator==(const State& o) const { return vars == o.vars && (params == o.params || *params == *o.params); }
  std::size_t hash() const { return vars.hash(); }
  std::string str() const;
};

// Parser / printer
Program parse_program(const std::string& text);
// Expressions and guards; names in `params` become Param nodes.
ExprPtr parse_expr(const std::string& text, const std::set<std::string>& params = {});
BExprPtr parse_bexpr(const std::string& text, const std::set<std::string>& params = {});
std::set<std::string> param_names(const Program& p);
// Parses against p: identifiers that are not program variables of p become parameters.
ExprPtr parse_expr_in(const Program& p, const std::string& text);
BExprPtr parse_bexpr_in(const Program& p, const std::string& text);

std::string to_string(const ExprPtr& e);
std::string to_string(const BExprPtr& b);
std::string to_string(const StmtPtr& s, int indent = 0);
std::string pretty_print(const Program& p);
std::string to_string(CmpOp op);

}  // namespace rewlab
