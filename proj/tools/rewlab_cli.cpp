#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "rewlab/rewlab.h"

namespace {

struct Options {
  std::string file;
  std::vector<std::string> params, state;
  std::string grid, f, post, bound, out, kind, cond;
  std::size_t depth = 64;
  std::string budget;
  bool simplify = false, json = false;
};

using ProgramPtr = std::unique_ptr<rewlab_program, decltype(&rewlab_program_free)>;
using ConfigPtr = std::unique_ptr<rewlab_config, decltype(&rewlab_config_free)>;

int exit_code(rewlab_status s) {
  switch (s) {
    case REWLAB_OK: return 0;
    case REWLAB_VIOLATED:
    case REWLAB_INCONCLUSIVE: return 1;
    case REWLAB_ERR_BUDGET: return 3;
    default: return 2;
  }
}

int report_error(rewlab_status s) {
  std::cerr << "rewlab: " << rewlab_status_name(s) << ": " << rewlab_last_error() << "\n";
  return exit_code(s);
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

int emit(const Options& o, char* text) {
  std::string s(text);
  rewlab_string_free(text);
  if (o.out.empty()) {
    std::cout << s;
    return 0;
  }
  std::ofstream f(o.out);
  if (!f) {
    std::cerr << "rewlab: cannot write " << o.out << "\n";
    return 2;
  }
  f << s;
  return 0;
}

// Emits a program as text or JSON.
int emit_program(const Options& o, const rewlab_program* p) {
  char* text = nullptr;
  rewlab_status s = o.json ? rewlab_program_json(p, &text) : rewlab_program_print(p, &text);
  if (s != REWLAB_OK) return report_error(s);
  return emit(o, text);
}

ConfigPtr make_config(const Options& o) {
  ConfigPtr c(rewlab_config_new(), rewlab_config_free);
  auto set = [&](const char* k, const std::string& v) {
    rewlab_status s = rewlab_config_set(c.get(), k, v.c_str());
    if (s != REWLAB_OK) throw std::runtime_error(rewlab_last_error());
  };
  set("input", o.file);
  set("params", join(o.params));
  set("state", join(o.state));
  set("grid", o.grid);
  set("post", o.post);
  set("bound", o.bound);
  set("f", o.f);
  set("depth", std::to_string(o.depth));
  std::string budget = o.budget;
  if (budget.empty())
    if (const char* env = std::getenv("REWLAB_BUDGET")) budget = env;
  if (!budget.empty()) set("budget", budget);
  return c;
}

int run(const std::string& cmd, const Options& o) {
  rewlab_program* raw = nullptr;
  rewlab_status s = rewlab_program_load(o.file.c_str(), &raw);
  if (s != REWLAB_OK) return report_error(s);
  ProgramPtr prog(raw, rewlab_program_free);

  if (cmd == "parse") return emit_program(o, prog.get());

  if (cmd == "transform") {
    rewlab_program* t = nullptr;
    s = rewlab_transform(prog.get(), o.f.empty() ? "identity" : o.f.c_str(), o.simplify ? 1 : 0, &t);
    if (s != REWLAB_OK) return report_error(s);
    ProgramPtr tp(t, rewlab_program_free);
    return emit_program(o, tp.get());
  }

  if (cmd == "gadget") {
    rewlab_program* g = nullptr;
    s = rewlab_gadget(prog.get(), o.kind.c_str(), o.cond.c_str(), &g);
    if (s != REWLAB_OK) return report_error(s);
    ProgramPtr gp(g, rewlab_program_free);
    if (o.simplify) {
      rewlab_program* q = nullptr;
      s = rewlab_simplify(gp.get(), &q);
      if (s != REWLAB_OK) return report_error(s);
      gp.reset(q);
    }
    return emit_program(o, gp.get());
  }

  ConfigPtr cfg(nullptr, rewlab_config_free);
  try {
    cfg = make_config(o);
  } catch (const std::exception& e) {
    std::cerr << "rewlab: usage error: " << e.what() << "\n";
    return 2;
  }
  char* text = nullptr;
  if (cmd == "eval") s = rewlab_eval(prog.get(), cfg.get(), &text);
  else if (cmd == "check") s = rewlab_check(prog.get(), cfg.get(), &text);
  else s = rewlab_dist(prog.get(), cfg.get(), &text);
  if (text == nullptr) return report_error(s);
  int rc = emit(o, text);
  return rc ? rc : exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rewlab: expected rewards of probabilistic programs"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* c) {
    c->add_option("file", o.file, "program file")->required();
    c->add_option("--out", o.out, "write output to PATH");
    c->add_flag("--json", o.json, "JSON output");
  };
  auto add_analysis = [&](CLI::App* c) {
    c->add_option("--param", o.params, "parameter binding K=V")->take_all();
    c->add_option("--state", o.state, "initial state binding K=V")->take_all();
    c->add_option("--depth", o.depth, "loop unfoldings explored")->check(CLI::PositiveNumber);
    c->add_option("--budget", o.budget, "maximum explored configurations (env REWLAB_BUDGET)");
  };

  auto* parse = app.add_subcommand("parse", "parse and pretty-print");
  add_common(parse);

  auto* tr = app.add_subcommand("transform", "f-transform a program");
  add_common(tr);
  tr->add_option("--f", o.f, "moment:K | cdf:N | excess:N | mgf:T | linear:A,B | product | identity");
  tr->add_flag("--simplify", o.simplify, "simplify the result");

  auto* ev = app.add_subcommand("eval", "bracket the expected reward");
  add_common(ev);
  add_analysis(ev);
  ev->add_option("--f", o.f, "reward function applied to the cumulative reward");
  ev->add_option("--post", o.post, "post-expectation collected on termination");

  auto* ck = app.add_subcommand("check", "check loop invariants on a grid");
  add_common(ck);
  add_analysis(ck);
  ck->add_option("--grid", o.grid, "e.g. x=0..10,done={0,1},tau=0..5:1/2");
  ck->add_option("--bound", o.bound, "claimed upper bound on wp(S)(0)");

  auto* di = app.add_subcommand("dist", "cumulative reward distribution as CSV");
  add_common(di);
  add_analysis(di);

  auto* ga = app.add_subcommand("gadget", "apply a reward gadget");
  add_common(ga);
  ga->add_option("--kind", o.kind,
                 "on-termination | discount | step-indexed | step-indexed-upto | evt | first-visit | first-return")
      ->required();
  ga->add_option("--cond", o.cond, "condition, expectation, factor or index");
  ga->add_flag("--simplify", o.simplify, "simplify the result");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return run(app.get_subcommands().front()->get_name(), o);
}
