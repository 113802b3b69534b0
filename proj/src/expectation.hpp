#pragma once
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lang.hpp"

namespace rewlab {

using Expectation = ExprPtr;

ExtReal evaluate(const ExprPtr& x, const State& s);
bool evaluate(const BExprPtr& b, const State& s);

// X[x/a]; only program variables are replaced.
ExprPtr substitute(const ExprPtr& x, const std::string& name, const ExprPtr& a);
BExprPtr substitute(const BExprPtr& b, const std::string& name, const ExprPtr& a);
// Replace parameter occurrences by constants.
ExprPtr bind_params(const ExprPtr& x, const Valuation& params);

struct GridAxis {
  std::string name;
  bool is_param = false;
  std::vector<ExtReal> values;
};

// Finite Cartesian product of per-name value lists plus fixed parameter bindings.
class StateGrid {
 public:
  StateGrid() = default;
  // grid: "x=0..10,done=0..1,p={1/4,1/2}"; bindings: "N=10,p=1/10".
  // Names in `params` are routed to the parameter environment.
  static StateGrid parse(const std::string& grid, const std::string& bindings, const std::set<std::string>& params);
  void add_axis(GridAxis a);
  void bind(const std::string& name, const ExtReal& v, bool is_param);
  std::size_t size() const;
  const std::vector<GridAxis>& axes() const { return axes_; }
  const Valuation& fixed_vars() const { return fixed_vars_; }
  const Valuation& fixed_params() const { return fixed_params_; }
  // Enumerates in odometer order (last axis fastest). Stops early if fn returns false.
  void for_each(const std::function<bool(const State&)>& fn) const;
  std::string str() const;

 private:
  std::vector<GridAxis> axes_;
  Valuation fixed_vars_, fixed_params_;
};

// "k=v,k=v" -> pairs
std::vector<std::pair<std::string, ExtReal>> parse_bindings(const std::string& s);

struct Counterexample {
  State state;
  ExtReal lhs, rhs;
};

struct CheckReport {
  bool holds = true;
  bool equal_everywhere = true;  // lhs == rhs at every point
  std::size_t points = 0;
  std::size_t violations = 0;
  double tolerance = 0.0;
  std::vector<Counterexample> counterexamples;  // first few, grid order
};

// X <= Y pointwise on the grid. tol = 0 means exact; with floats, |X-Y| <= tol (abs or rel) passes.
CheckReport leq_on_grid(const ExprPtr& x, const ExprPtr& y, const StateGrid& grid, double tol = 0.0,
                        std::size_t max_examples = 20);

struct SimplifyContext {
  std::set<std::string> integer_names;  // names known to range over naturals
};

// Best-effort algebraic simplification; valid on states with finite variable values.
ExprPtr simplify(const ExprPtr& x, const SimplifyContext& ctx = {});
BExprPtr simplify(const BExprPtr& b, const SimplifyContext& ctx = {});

// Variables whose every assignment is natural-valued, plus integer-ranged params.
std::set<std::string> integer_names(const Program& p);
// Simplifies every expression and folds the straight-line prefix by constant propagation.
Program simplify_program(const Program& p);

}  // namespace rewlab
