#include <doctest.h>

#include <random>

#include "errors.hpp"
#include "extreal.hpp"

using rewlab::ExtReal;

namespace {
ExtReal q(long n, long d = 1) { return ExtReal::rational(n, d); }
const ExtReal inf = ExtReal::infinity();
}  // namespace

TEST_CASE("addition") {
  CHECK(q(1, 2) + q(1, 3) == q(5, 6));
  CHECK((inf + ExtReal(7)).is_inf());
  std::mt19937 rng(1);
  for (int i = 0; i < 50; ++i) {
    ExtReal x = q(rng() % 100, 1 + rng() % 20);
    CHECK((ExtReal(0) + x).identical(x));
  }
}

TEST_CASE("monus") {
  CHECK(monus(ExtReal(3), ExtReal(5)) == ExtReal(0));
  CHECK(monus(inf, inf).is_inf());
  CHECK(monus(q(7, 3), ExtReal(0)) == q(7, 3));
  CHECK(monus(ExtReal(5), inf) == ExtReal(0));
}

TEST_CASE("multiplication and powers") {
  CHECK(pow(q(3, 2), 2) == q(9, 4));
  CHECK((ExtReal(0) * inf).is_zero());
  CHECK((inf * ExtReal(0)).is_zero());
  CHECK((inf * q(1, 2)).is_inf());
  CHECK(pow(ExtReal(0), 0UL) == ExtReal(1));
  CHECK(pow(q(1, 2), ExtReal(3)) == q(1, 8));
  CHECK(pow(q(1, 2), ExtReal(3)).is_exact());
  CHECK(pow(ExtReal(4), q(1, 2)).is_float());
}

TEST_CASE("exp") {
  CHECK(exp_scaled(ExtReal(0), q(17, 3)).is_exact());
  CHECK(exp_scaled(ExtReal(0), q(17, 3)) == ExtReal(1));
  CHECK(exp_of(ExtReal(0)).is_exact());
  CHECK(exp_of(ExtReal(1)).is_float());
  CHECK(exp_of(ExtReal(1)).to_double() == doctest::Approx(2.718281828459045));
  CHECK(exp_of(inf).is_inf());
}

TEST_CASE("division") {
  CHECK(div(ExtReal(1), ExtReal(3)) == q(1, 3));
  CHECK_THROWS_AS(div(ExtReal(1), ExtReal(0)), rewlab::EvalError);
  CHECK(div(inf, ExtReal(2)).is_inf());
  CHECK(div(ExtReal(2), inf).is_zero());
}

TEST_CASE("parsing") {
  CHECK(ExtReal::parse("0.75") == q(3, 4));
  CHECK(ExtReal::parse("0.75").is_exact());
  CHECK(ExtReal::parse("1e-3") == q(1, 1000));
  CHECK(ExtReal::parse("3/4") == q(3, 4));
  CHECK(ExtReal::parse("inf").is_inf());
  CHECK(ExtReal::parse("12").str() == "12");
  CHECK_THROWS(ExtReal::parse("-1"));
  CHECK_THROWS(ExtReal::parse("abc"));
}

TEST_CASE("ordering and tolerance") {
  CHECK(q(1, 3) < q(1, 2));
  CHECK(ExtReal(5) < inf);
  CHECK(max(q(1, 3), q(1, 2)) == q(1, 2));
  CHECK(min(inf, ExtReal(4)) == ExtReal(4));
  CHECK(approx_equal(ExtReal::from_double(0.1 + 0.2), q(3, 10), 1e-12));
  CHECK_FALSE(approx_equal(ExtReal(1), q(11, 10), 1e-3));
  CHECK_FALSE(approx_equal(inf, ExtReal(1000000), 1e-3));
}

TEST_CASE("property: exact operations stay exact") {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    ExtReal a = q(rng() % 1000, 1 + rng() % 50), b = q(rng() % 1000, 1 + rng() % 50);
    CHECK(add(a, b).is_exact());
    CHECK(mul(a, b).is_exact());
    CHECK(monus(a, b).is_exact());
    CHECK(monus(a, b) + b >= a);
    CHECK(monus(a, b) <= a);
  }
}

TEST_CASE("property: monus is infinite exactly when the minuend is") {
  for (auto a : {ExtReal(0), q(5, 2), inf})
    for (auto b : {ExtReal(0), q(5, 2), ExtReal(9), inf}) CHECK(monus(a, b).is_inf() == a.is_inf());
}

TEST_CASE("property: pow matches repeated multiplication") {
  std::mt19937 rng(3);
  for (int i = 0; i < 40; ++i) {
    ExtReal a = q(rng() % 30, 1 + rng() % 7);
    ExtReal acc(1);
    for (unsigned long k = 0; k <= 8; ++k) {
      CHECK(pow(a, k) == acc);
      acc = acc * a;
    }
  }
}
