#pragma once
#include <string>
#include <vector>

#include "expectation.hpp"
#include "opsem.hpp"

namespace rewlab {

// wp for loop-free code; loops contribute their invariant (upper-bound summary)
// and are rejected when unannotated.
ExprPtr wp_symbolic(const StmtPtr& s, const ExprPtr& post);
// Phi_X(Y) = [b] * wp(body)(Y) + [not b] * X
ExprPtr characteristic(const Stmt& loop, const ExprPtr& post, const ExprPtr& y);

Bracket wp_numeric(const StmtPtr& s, const ExprPtr& post, const State& st, std::size_t depth,
                   std::size_t budget = kDefaultBudget);

enum class Verdict { Verified, Violated, Inconclusive };
std::string to_string(Verdict v);

struct InvariantReport {
  Verdict verdict = Verdict::Inconclusive;
  int line = 0;  // source line of the loop, 0 if unknown
  ExprPtr invariant, post, phi;
  CheckReport grid_report;
  std::string grid;
};

double tolerance_for(const ExprPtr& a, const ExprPtr& b);

InvariantReport check_invariant(const Stmt& loop, const ExprPtr& post, const StateGrid& grid);

struct ProgramCheck {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<InvariantReport> loops;  // program order
  ExprPtr program_bound;               // wp(S)(0) with loop summaries
  std::optional<InvariantReport> bound_check;  // program_bound <= claimed bound
};

// Checks every annotated loop with its post derived from the code after it
// (inner loops innermost-out), optionally also wp(S)(0) <= bound.
ProgramCheck check_program(const Program& p, const StateGrid& grid, const ExprPtr& bound = nullptr);

// Phi_X^k(0)(s) for k = 0..n; the body must be loop-free.
std::vector<ExtReal> kleene_iterates(const Stmt& loop, const ExprPtr& post, const State& s, std::size_t n);
// Same for the expected-runtime functional (+1 per guard-true iteration, rewards ignored).
std::vector<ExtReal> ert_iterates(const Stmt& loop, const ExprPtr& post, const State& s, std::size_t n);

struct ErtReport {
  bool holds = true;
  std::size_t points = 0;
  std::vector<Counterexample> mismatches;
};

// wp(while b {reward(1); S'}) against ert(while b {S'}) at every grid point,
// iterate by iterate up to depth; with X = 0 also against the operational chain.
ErtReport ert_equivalence_check(const Stmt& loop, const ExprPtr& post, const StateGrid& grid, std::size_t depth);

struct UnsoundDemo {
  std::vector<ExtReal> counter_linear;     // 5a, per depth
  std::vector<ExtReal> counter_squared;    // 5b
  std::vector<ExtReal> incremental;        // 5c
  std::vector<std::size_t> depths;
};

// The three runtime encodings on the diverging loop `while true { skip }`.
UnsoundDemo unsound_counter_demo(const std::vector<std::size_t>& depths);

}  // namespace rewlab
