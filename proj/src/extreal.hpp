#pragma once
#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace rewlab {

// Value in [0, inf]: exact rational, tagged float, or infinity.
class ExtReal {
 public:
  enum class Kind : std::uint8_t { Exact, Float, Inf };

  ExtReal() : kind_(Kind::Exact), q_(0) {}
  ExtReal(long n);  // NOLINT: integer literals are common
  static ExtReal rational(const mpq_class& q);
  static ExtReal rational(long num, long den);
  static ExtReal from_double(double d);
  static ExtReal infinity();
  // "inf", "3", "3/4", "0.75", "1e-3"; decimals are exact.
  static ExtReal parse(std::string_view s);

  Kind kind() const { return kind_; }
  bool is_inf() const { return kind_ == Kind::Inf; }
  bool is_float() const { return kind_ == Kind::Float; }
  bool is_exact() const { return kind_ == Kind::Exact; }
  bool is_zero() const;
  bool is_one() const;
  bool is_natural() const;  // exact and integral
  const mpq_class& q() const { return q_; }
  double to_double() const;
  unsigned long to_ulong() const;  // requires is_natural

  std::string str() const;
  std::size_t hash() const;

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator*(const ExtReal& a, const ExtReal& b);
  ExtReal& operator+=(const ExtReal& b) { return *this = *this + b; }
  ExtReal& operator*=(const ExtReal& b) { return *this = *this * b; }

  friend std::partial_ordering compare(const ExtReal& a, const ExtReal& b);
  friend bool operator==(const ExtReal& a, const ExtReal& b) { return compare(a, b) == 0; }
  friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) { return compare(a, b); }

  // Bit-identical equality (kind and payload), used for hashing keys.
  bool identical(const ExtReal& o) const;

 private:
  Kind kind_;
  mpq_class q_;
  double d_ = 0.0;
};

ExtReal add(const ExtReal& a, const ExtReal& b);
ExtReal mul(const ExtReal& a, const ExtReal& b);
// max(0, a - b); inf - anything = inf
ExtReal monus(const ExtReal& a, const ExtReal& b);
ExtReal div(const ExtReal& a, const ExtReal& b);
ExtReal pow(const ExtReal& a, unsigned long k);
// Natural exponents stay exact; other exponents go through std::pow.
ExtReal pow(const ExtReal& a, const ExtReal& e);
ExtReal exp_of(const ExtReal& y);  // e^y, exact 1 at y = 0
ExtReal exp_scaled(const ExtReal& t, const ExtReal& x);
ExtReal min(const ExtReal& a, const ExtReal& b);
ExtReal max(const ExtReal& a, const ExtReal& b);

// |a-b| <= tol or relative <= tol; inf only matches inf.
bool approx_equal(const ExtReal& a, const ExtReal& b, double tol);

struct ExtRealHash {
  std::size_t operator()(const ExtReal& x) const { return x.hash(); }
};
struct ExtRealIdentical {
  bool operator()(const ExtReal& a, const ExtReal& b) const { return a.identical(b); }
};

}  // namespace rewlab
