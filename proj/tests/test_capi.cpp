#include <doctest.h>

#include <string>

#include "rewlab/rewlab.h"

namespace {
std::string take(char* s) {
  std::string r = s ? s : "";
  rewlab_string_free(s);
  return r;
}
std::string fixture(const char* rel) { return std::string(REWLAB_FIXTURES) + "/" + rel; }
}  // namespace

TEST_CASE("programs round trip through handles") {
  rewlab_program* p = nullptr;
  REQUIRE(rewlab_program_load(fixture("webserver_a.pgcl").c_str(), &p) == REWLAB_OK);
  char* text = nullptr;
  REQUIRE(rewlab_program_print(p, &text) == REWLAB_OK);
  std::string printed = take(text);
  rewlab_program* again = nullptr;
  REQUIRE(rewlab_program_parse(printed.c_str(), &again) == REWLAB_OK);
  CHECK(rewlab_program_equal(p, again) == 1);
  char* json = nullptr;
  REQUIRE(rewlab_program_json(p, &json) == REWLAB_OK);
  CHECK(take(json).find("\"kind\": \"while\"") != std::string::npos);
  rewlab_program_free(again);
  rewlab_program_free(p);
}

TEST_CASE("errors are reported through status codes") {
  rewlab_program* p = nullptr;
  CHECK(rewlab_program_parse("x := ;", &p) == REWLAB_ERR_PARSE);
  CHECK(p == nullptr);
  CHECK(std::string(rewlab_last_error()).find("1:6") != std::string::npos);
  CHECK(rewlab_program_load("/nonexistent/file.pgcl", &p) == REWLAB_ERR_IO);
  CHECK(rewlab_program_parse(nullptr, &p) == REWLAB_ERR_USAGE);
  rewlab_config* c = rewlab_config_new();
  CHECK(rewlab_config_set(c, "depth", "ten") == REWLAB_ERR_USAGE);
  CHECK(rewlab_config_set(c, "colour", "red") == REWLAB_ERR_USAGE);
  CHECK(rewlab_config_set(c, "budget", "1e6") == REWLAB_OK);
  CHECK(std::string(rewlab_last_error()).empty());
  rewlab_config_free(c);
  CHECK(std::string(rewlab_status_name(REWLAB_ERR_BUDGET)) == "budget exceeded");
}

TEST_CASE("analyses") {
  rewlab_program* p = nullptr;
  REQUIRE(rewlab_program_load(fixture("excess_webserver.pgcl").c_str(), &p) == REWLAB_OK);
  rewlab_config* c = rewlab_config_new();
  rewlab_config_set(c, "depth", "400");
  rewlab_config_set(c, "f", "excess:N");
  char* out = nullptr;
  CHECK(rewlab_eval(p, c, &out) == REWLAB_ERR_USAGE);
  rewlab_config_set(c, "params", "p=1/10,N=10");
  REQUIRE(rewlab_eval(p, c, &out) == REWLAB_OK);
  std::string report = take(out);
  CHECK(report.find("\"approx\": 3.48678440") != std::string::npos);
  CHECK(report.find("\"schema_version\": 1") != std::string::npos);
  REQUIRE(rewlab_eval(p, c, &out) == REWLAB_OK);
  CHECK(take(out) == report);

  rewlab_program* t = nullptr;
  REQUIRE(rewlab_transform(p, "excess:N", 1, &t) == REWLAB_OK);
  REQUIRE(rewlab_program_print(t, &out) == REWLAB_OK);
  CHECK(take(out).find("reward([tau >= N])") != std::string::npos);
  CHECK(rewlab_transform(p, "pgf:0.5", 0, &t) == REWLAB_ERR_USAGE);
  rewlab_program_free(t);

  rewlab_config_set(c, "depth", "10");
  rewlab_config_set(c, "budget", "5");
  CHECK(rewlab_eval(p, c, &out) == REWLAB_ERR_USAGE);
  rewlab_config_free(c);
  rewlab_program_free(p);
}

TEST_CASE("checks and distributions") {
  rewlab_program* p = nullptr;
  REQUIRE(rewlab_program_load(fixture("invariants/webserver_a_moment2.pgcl").c_str(), &p) == REWLAB_OK);
  rewlab_config* c = rewlab_config_new();
  rewlab_config_set(c, "grid", "done=0..1,tau=0..20");
  char* out = nullptr;
  CHECK(rewlab_check(p, c, &out) == REWLAB_OK);
  CHECK(take(out).find("verified (on grid)") != std::string::npos);
  rewlab_config_set(c, "bound", "5");
  CHECK(rewlab_check(p, c, &out) == REWLAB_VIOLATED);
  std::string rep = take(out);
  CHECK(rep.find("\"phi_of_I\"") != std::string::npos);
  CHECK(rep.find("\"invariant_source_location\": \"bound\"") != std::string::npos);
  rewlab_program_free(p);

  REQUIRE(rewlab_program_parse("reward(6)", &p) == REWLAB_OK);
  CHECK(rewlab_check(p, c, &out) == REWLAB_VIOLATED);
  rewlab_string_free(out);
  rewlab_config_set(c, "bound", "");
  CHECK(rewlab_check(p, c, &out) == REWLAB_INCONCLUSIVE);
  rewlab_string_free(out);
  REQUIRE(rewlab_dist(p, c, &out) == REWLAB_OK);
  CHECK(take(out) == "reward,probability\n6,1\n");
  rewlab_config_free(c);
  rewlab_program_free(p);
}

TEST_CASE("gadgets through the C surface") {
  rewlab_program* p = nullptr;
  REQUIRE(rewlab_program_parse("x := 0; while x < 2 { x := x + 1 }", &p) == REWLAB_OK);
  rewlab_program* g = nullptr;
  REQUIRE(rewlab_gadget(p, "evt", "x = 1", &g) == REWLAB_OK);
  rewlab_config* c = rewlab_config_new();
  char* out = nullptr;
  REQUIRE(rewlab_eval(g, c, &out) == REWLAB_OK);
  CHECK(take(out).find("\"exact\": \"1\"") != std::string::npos);
  CHECK(rewlab_gadget(p, "evt", "", &g) == REWLAB_ERR_USAGE);
  rewlab_config_free(c);
  rewlab_program_free(g);
  rewlab_program_free(p);
}
