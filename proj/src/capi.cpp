#include "rewlab/rewlab.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "expectation.hpp"
#include "gadgets.hpp"
#include "report.hpp"
#include "transform.hpp"

struct rewlab_program {
  rewlab::Program p;
};

struct rewlab_config {
  rewlab::AnalysisConfig c;
};

namespace {

thread_local std::string g_error;

rewlab_status fail(rewlab_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

template <class F>
rewlab_status guarded(F&& fn) {
  try {
    g_error.clear();
    return fn();
  } catch (const rewlab::ParseError& e) {
    return fail(REWLAB_ERR_PARSE, e.what());
  } catch (const rewlab::Error& e) {
    switch (e.kind()) {
      case rewlab::ErrorKind::Parse: return fail(REWLAB_ERR_PARSE, e.what());
      case rewlab::ErrorKind::Usage: return fail(REWLAB_ERR_USAGE, e.what());
      case rewlab::ErrorKind::Eval: return fail(REWLAB_ERR_EVAL, e.what());
      case rewlab::ErrorKind::Budget: return fail(REWLAB_ERR_BUDGET, e.what());
      case rewlab::ErrorKind::Arity: return fail(REWLAB_ERR_ARITY, e.what());
    }
    return fail(REWLAB_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(REWLAB_ERR_BUDGET, "out of memory");
  } catch (const std::exception& e) {
    return fail(REWLAB_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rewlab_status need(const void* p, const char* what) {
  return p ? REWLAB_OK : fail(REWLAB_ERR_USAGE, std::string("null ") + what);
}

std::size_t parse_count(const char* key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    // accept 1e6 style as well
    double d = std::stod(v, &pos);
    if (pos != v.size() || d < 0 || d > 1e18) throw std::invalid_argument(v);
    n = static_cast<unsigned long long>(d);
    if (static_cast<double>(n) != d) throw std::invalid_argument(v);
  } catch (const std::exception&) {
    throw rewlab::UsageError(std::string(key) + " must be a natural number, got '" + v + "'");
  }
  return n;
}

}  // namespace

extern "C" {

const char* rewlab_version(void) { return "0.1.0"; }
const char* rewlab_last_error(void) { return g_error.c_str(); }

const char* rewlab_status_name(rewlab_status s) {
  switch (s) {
    case REWLAB_OK: return "ok";
    case REWLAB_VIOLATED: return "violated";
    case REWLAB_INCONCLUSIVE: return "inconclusive";
    case REWLAB_ERR_USAGE: return "usage error";
    case REWLAB_ERR_PARSE: return "parse error";
    case REWLAB_ERR_EVAL: return "evaluation error";
    case REWLAB_ERR_ARITY: return "arity error";
    case REWLAB_ERR_BUDGET: return "budget exceeded";
    case REWLAB_ERR_IO: return "i/o error";
    case REWLAB_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

void rewlab_string_free(char* s) { std::free(s); }

rewlab_status rewlab_program_parse(const char* text, rewlab_program** out) {
  if (auto s = need(text, "text"); s) return s;
  if (auto s = need(out, "out"); s) return s;
  return guarded([&] {
    *out = new rewlab_program{rewlab::parse_program(text)};
    return REWLAB_OK;
  });
}

rewlab_status rewlab_program_load(const char* path, rewlab_program** out) {
  if (auto s = need(path, "path"); s) return s;
  std::ifstream in(path);
  if (!in) return fail(REWLAB_ERR_IO, std::string("cannot open ") + path);
  std::stringstream ss;
  ss << in.rdbuf();
  rewlab_status s = rewlab_program_parse(ss.str().c_str(), out);
  if (s != REWLAB_OK) g_error = std::string(path) + ":" + g_error;
  return s;
}

void rewlab_program_free(rewlab_program* p) { delete p; }

rewlab_status rewlab_program_print(const rewlab_program* p, char** out) {
  if (auto s = need(p, "program"); s) return s;
  return guarded([&] {
    *out = dup(rewlab::pretty_print(p->p));
    return REWLAB_OK;
  });
}

rewlab_status rewlab_program_json(const rewlab_program* p, char** out) {
  if (auto s = need(p, "program"); s) return s;
  return guarded([&] {
    *out = dup(rewlab::ast_json(p->p).dump(2) + "\n");
    return REWLAB_OK;
  });
}

int rewlab_program_equal(const rewlab_program* a, const rewlab_program* b) {
  return a && b && rewlab::equal(a->p, b->p) ? 1 : 0;
}

rewlab_config* rewlab_config_new(void) { return new rewlab_config{}; }
void rewlab_config_free(rewlab_config* c) { delete c; }

rewlab_status rewlab_config_set(rewlab_config* c, const char* key, const char* value) {
  if (auto s = need(c, "config"); s) return s;
  if (auto s = need(key, "key"); s) return s;
  return guarded([&] {
    std::string k = key, v = value ? value : "";
    auto& cfg = c->c;
    if (k == "input") cfg.input = v;
    else if (k == "params") cfg.params = v;
    else if (k == "state") cfg.state = v;
    else if (k == "grid") cfg.grid = v;
    else if (k == "post") cfg.post = v;
    else if (k == "bound") cfg.bound = v;
    else if (k == "f") cfg.f = v;
    else if (k == "depth") cfg.depth = parse_count("depth", v);
    else if (k == "budget") cfg.budget = parse_count("budget", v);
    else throw rewlab::UsageError("unknown config key '" + k + "'");
    return REWLAB_OK;
  });
}

rewlab_status rewlab_transform(const rewlab_program* p, const char* spec, int simplify, rewlab_program** out) {
  if (auto s = need(p, "program"); s) return s;
  if (auto s = need(spec, "spec"); s) return s;
  return guarded([&] {
    auto f = rewlab::TransformSpec::parse(spec);
    if (f.kind() == rewlab::TransformSpec::Kind::Product) f = f.with_arity(rewlab::reward_arity(p->p.body));
    auto r = rewlab::transform(p->p, f).program;
    if (simplify) r = rewlab::simplify_program(r);
    *out = new rewlab_program{std::move(r)};
    return REWLAB_OK;
  });
}

rewlab_status rewlab_simplify(const rewlab_program* p, rewlab_program** out) {
  if (auto s = need(p, "program"); s) return s;
  return guarded([&] {
    *out = new rewlab_program{rewlab::simplify_program(p->p)};
    return REWLAB_OK;
  });
}

rewlab_status rewlab_gadget(const rewlab_program* p, const char* kind, const char* arg, rewlab_program** out) {
  if (auto s = need(p, "program"); s) return s;
  if (auto s = need(kind, "kind"); s) return s;
  return guarded([&] {
    auto g = rewlab::GadgetSpec::parse(kind, arg ? arg : "", p->p);
    *out = new rewlab_program{rewlab::apply_gadget(p->p, g)};
    return REWLAB_OK;
  });
}

rewlab_status rewlab_eval(const rewlab_program* p, const rewlab_config* c, char** json_out) {
  if (auto s = need(p, "program"); s) return s;
  if (auto s = need(c, "config"); s) return s;
  return guarded([&] {
    auto cfg = c->c;
    cfg.command = "eval";
    *json_out = dup(rewlab::run_eval(p->p, cfg).report.dump(2) + "\n");
    return REWLAB_OK;
  });
}

rewlab_status rewlab_check(const rewlab_program* p, const rewlab_config* c, char** json_out) {
  if (auto s = need(p, "program"); s) return s;
  if (auto s = need(c, "config"); s) return s;
  return guarded([&] {
    auto cfg = c->c;
    cfg.command = "check";
    auto r = rewlab::run_check(p->p, cfg);
    *json_out = dup(r.report.dump(2) + "\n");
    switch (r.check.verdict) {
      case rewlab::Verdict::Verified: return REWLAB_OK;
      case rewlab::Verdict::Violated: return REWLAB_VIOLATED;
      default: return REWLAB_INCONCLUSIVE;
    }
  });
}

rewlab_status rewlab_dist(const rewlab_program* p, const rewlab_config* c, char** csv_out) {
  if (auto s = need(p, "program"); s) return s;
  if (auto s = need(c, "config"); s) return s;
  return guarded([&] {
    auto cfg = c->c;
    cfg.command = "dist";
    *csv_out = dup(rewlab::run_dist(p->p, cfg));
    return REWLAB_OK;
  });
}

}  // extern "C"
