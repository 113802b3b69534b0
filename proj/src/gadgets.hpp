#pragma once
#include <string>

#include "lang.hpp"

namespace rewlab {

struct GadgetSpec {
  enum class Kind { OnTermination, Discount, StepIndexed, Evt, FirstVisit, FirstReturn };
  Kind kind = Kind::OnTermination;
  ExprPtr x;            // on-termination X, discount gamma, step index N
  BExprPtr cond;        // evt / first-visit / first-return
  bool upto = false;    // step-indexed: tau <= N instead of tau = N
  std::string hint;     // ghost name hint; default tau or phi

  static GadgetSpec on_termination(ExprPtr x);
  static GadgetSpec discount(ExprPtr gamma);
  static GadgetSpec step_indexed(ExprPtr n, bool upto = false);
  static GadgetSpec evt(BExprPtr b);
  static GadgetSpec first_visit(BExprPtr b);
  static GadgetSpec first_return(BExprPtr b);
  // "evt", "first-visit", ...; arg is the condition, X, gamma or N in source syntax.
  static GadgetSpec parse(const std::string& kind, const std::string& arg, const Program& p);
};

Program apply_gadget(const Program& p, const GadgetSpec& g);

// Fast dice roller loop with visit queries (query_s, query_done) and its invariant.
const std::string& fdr_source();
Program fdr_fixture();

}  // namespace rewlab
