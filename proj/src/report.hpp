#pragma once
#include <json.hpp>
#include <string>

#include "lang.hpp"
#include "opsem.hpp"
#include "wpcalc.hpp"

namespace rewlab {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct AnalysisConfig {
  std::string input;
  std::string command;
  std::string f;       // transform spec, empty for identity
  std::string params;  // "N=10,p=1/10"
  std::string state;   // "x=3"
  std::string grid;
  std::string post;
  std::string bound;
  std::size_t depth = 64;
  std::size_t budget = kDefaultBudget;

  // depth >= 1, budget >= depth
  void validate() const;
  Json to_json() const;
};

Json ast_json(const Program& p);
Json ast_json(const StmtPtr& s);
Json ast_json(const ExprPtr& e);
Json ast_json(const BExprPtr& b);

Json bracket_json(const Bracket& b, const AnalysisConfig& cfg);

struct EvalOutcome {
  Bracket bracket;
  Json report;
};
// Expected (f-transformed) reward of the program from the configured state.
EvalOutcome run_eval(const Program& p, const AnalysisConfig& cfg);

struct CheckOutcome {
  ProgramCheck check;
  Json report;
};
CheckOutcome run_check(const Program& p, const AnalysisConfig& cfg);

// Cumulative-reward histogram as "reward,probability" CSV.
std::string run_dist(const Program& p, const AnalysisConfig& cfg);


}  // namespace rewlab
