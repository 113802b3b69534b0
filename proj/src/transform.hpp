#pragma once
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lang.hpp"
#include "opsem.hpp"

namespace rewlab {

// Monotone reward function with numeric and symbolic forms.
class TransformSpec {
 public:
  enum class Kind { Identity, Moment, Cdf, Excess, Mgf, Linear, Product, Composed, Custom };

  static TransformSpec identity();
  static TransformSpec moment(unsigned k);
  static TransformSpec cdf(ExprPtr n);
  static TransformSpec excess(ExprPtr n);
  static TransformSpec mgf(ExprPtr t);
  static TransformSpec linear(ExprPtr alpha, ExprPtr beta);
  static TransformSpec product(std::size_t arity);  // 0: arity taken from the program
  static TransformSpec compose(const TransformSpec& outer, const TransformSpec& inner);  // outer o inner
  // Unary custom function given only by its symbolic form; must be monotone.
  static TransformSpec custom(std::string name, std::function<ExprPtr(const ExprPtr&)> symb);
  // "moment:2", "cdf:N", "excess:3", "mgf:0.5", "linear:2,3", "product", "identity".
  // Identifiers in arguments become parameters.
  static TransformSpec parse(const std::string& text);

  Kind kind() const { return kind_; }
  std::size_t arity() const { return arity_; }
  TransformSpec with_arity(std::size_t n) const;
  std::string name() const;
  // Symbolic f(args).
  ExprPtr apply(const std::vector<ExprPtr>& args) const;
  ExtReal eval(const RewardVec& x, const Valuation& params = {}) const;
  RewardFn bind(const Valuation& params) const;
  // Parameters referenced by the spec's arguments.
  std::set<std::string> params() const;
  bool uses_exp() const;

 private:
  Kind kind_ = Kind::Identity;
  std::size_t arity_ = 1;
  unsigned k_ = 1;
  ExprPtr a_, b_;
  std::shared_ptr<const TransformSpec> outer_, inner_;
  std::function<ExprPtr(const ExprPtr&)> custom_;
  std::string custom_name_;
};

struct TransformResult {
  Program program;
  std::vector<std::string> ghosts;  // tau or tau1..taun
};

// <f>(S) = tau := 0; reward(f(0)); T'_f(S)
TransformResult transform(const Program& p, const TransformSpec& f);
// T'_f(S) with given ghost names.
StmtPtr transform_body(const StmtPtr& s, const TransformSpec& f, const std::vector<std::string>& ghosts);
// f(x) = alpha*x + beta without a ghost variable: reward(beta); reward(a) -> reward(alpha*a).
Program ghost_bust(const Program& p, const ExprPtr& alpha, const ExprPtr& beta);

struct DepthComparison {
  bool holds = true;
  std::vector<ExtReal> lhs, rhs;  // per depth 0..d
  std::string note;
};

// wp(tau' := f(tau); T'_g(T'_f(S))) vs wp(T'_{g o f}(S); tau' := f(tau)) at s, per depth.
DepthComparison compose_check(const Program& p, const TransformSpec& f, const TransformSpec& g, std::size_t depth,
                              const State& s);
// L_f(d) <= L_g(d) for every d, plus per-path f(Rew) <= g(Rew) on realized paths.
DepthComparison monotonicity_check(const Program& p, const TransformSpec& f, const TransformSpec& g,
                                   std::size_t depth, const State& s);

}  // namespace rewlab
