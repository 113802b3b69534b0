#include "extreal.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "errors.hpp"

namespace rewlab {

ExtReal::ExtReal(long n) : kind_(Kind::Exact), q_(n) {
  if (n < 0) throw EvalError("negative value " + std::to_string(n));
}

ExtReal ExtReal::rational(const mpq_class& q) {
  if (sgn(q) < 0) throw EvalError("negative value " + q.get_str());
  ExtReal r;
  r.q_ = q;
  r.q_.canonicalize();
  return r;
}

ExtReal ExtReal::rational(long num, long den) {
  if (den == 0) throw EvalError("zero denominator");
  return rational(mpq_class(num, den));
}

ExtReal ExtReal::from_double(double d) {
  if (std::isnan(d)) throw EvalError("NaN value");
  if (d < 0) throw EvalError("negative value " + std::to_string(d));
  if (std::isinf(d)) return infinity();
  ExtReal r;
  r.kind_ = Kind::Float;
  r.d_ = d + 0.0;  // normalise -0
  return r;
}

ExtReal ExtReal::infinity() {
  ExtReal r;
  r.kind_ = Kind::Inf;
  return r;
}

ExtReal ExtReal::parse(std::string_view s) {
  auto bad = [&] { return EvalError("malformed number '" + std::string(s) + "'"); };
  if (s == "inf" || s == "oo") return infinity();
  if (s.empty()) throw bad();
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    ExtReal a = parse(s.substr(0, slash)), b = parse(s.substr(slash + 1));
    return div(a, b);
  }
  std::string mant;
  long exp10 = 0;
  std::size_t i = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      mant.push_back(c);
      seen_digit = true;
      if (seen_dot) --exp10;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw bad();
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw bad();
    ++i;
    long e = 0;
    auto res = std::from_chars(s.data() + i, s.data() + s.size(), e);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw bad();
    exp10 += e;
  }
  mpz_class m(mant, 10);
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  mpq_class q = exp10 >= 0 ? mpq_class(m * p10) : mpq_class(m, p10);
  return rational(q);
}

bool ExtReal::is_zero() const {
  return (kind_ == Kind::Exact && sgn(q_) == 0) || (kind_ == Kind::Float && d_ == 0.0);
}

bool ExtReal::is_one() const {
  return (kind_ == Kind::Exact && q_ == 1) || (kind_ == Kind::Float && d_ == 1.0);
}

bool ExtReal::is_natural() const { return kind_ == Kind::Exact && q_.get_den() == 1; }

double ExtReal::to_double() const {
  switch (kind_) {
    case Kind::Inf: return std::numeric_limits<double>::infinity();
    case Kind::Float: return d_;
    default: return q_.get_d();
  }
}

unsigned long ExtReal::to_ulong() const {
  if (!is_natural() || !q_.get_num().fits_ulong_p()) throw EvalError("expected a natural number, got " + str());
  return q_.get_num().get_ui();
}

std::string ExtReal::str() const {
  switch (kind_) {
    case Kind::Inf: return "inf";
    case Kind::Float: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, d_);
      return std::string(buf, res.ptr);
    }
    default: return q_.get_str();
  }
}

std::size_t ExtReal::hash() const {
  // Equal values must hash equal across kinds, so hash the double image.
  double d = to_double();
  return std::hash<double>{}(d);
}

bool ExtReal::identical(const ExtReal& o) const {
  if (kind_ != o.kind_) return false;
  if (kind_ == Kind::Exact) return q_ == o.q_;
  if (kind_ == Kind::Float) return d_ == o.d_;
  return true;
}

std::partial_ordering compare(const ExtReal& a, const ExtReal& b) {
  using K = ExtReal::Kind;
  if (a.kind_ == K::Inf || b.kind_ == K::Inf) {
    if (a.kind_ == b.kind_) return std::partial_ordering::equivalent;
    return a.kind_ == K::Inf ? std::partial_ordering::greater : std::partial_ordering::less;
  }
  if (a.kind_ == K::Exact && b.kind_ == K::Exact) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
  }
  return a.to_double() <=> b.to_double();
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  using K = ExtReal::Kind;
  if (a.kind_ == K::Inf || b.kind_ == K::Inf) return ExtReal::infinity();
  if (a.kind_ == K::Exact && b.kind_ == K::Exact) {
    ExtReal r;
    r.q_ = a.q_ + b.q_;
    return r;
  }
  return ExtReal::from_double(a.to_double() + b.to_double());
}

ExtReal operator*(const ExtReal& a, const ExtReal& b) {
  using K = ExtReal::Kind;
  if (a.is_zero() || b.is_zero()) {
    // 0 * inf = 0; keep exactness if either zero is exact
    if ((a.kind_ == K::Exact && a.is_zero()) || (b.kind_ == K::Exact && b.is_zero())) return ExtReal();
    return ExtReal::from_double(0.0);
  }
  if (a.kind_ == K::Inf || b.kind_ == K::Inf) return ExtReal::infinity();
  if (a.kind_ == K::Exact && b.kind_ == K::Exact) {
    ExtReal r;
    r.q_ = a.q_ * b.q_;
    return r;
  }
  return ExtReal::from_double(a.to_double() * b.to_double());
}

ExtReal add(const ExtReal& a, const ExtReal& b) { return a + b; }
ExtReal mul(const ExtReal& a, const ExtReal& b) { return a * b; }

ExtReal monus(const ExtReal& a, const ExtReal& b) {
  if (a.is_inf()) return ExtReal::infinity();
  if (b.is_inf()) return a.is_float() ? ExtReal::from_double(0.0) : ExtReal();
  if (a.is_exact() && b.is_exact()) {
    if (a.q() <= b.q()) return ExtReal();
    return ExtReal::rational(a.q() - b.q());
  }
  double d = a.to_double() - b.to_double();
  return ExtReal::from_double(d > 0 ? d : 0.0);
}

ExtReal div(const ExtReal& a, const ExtReal& b) {
  if (b.is_zero()) throw EvalError("division by zero");
  if (a.is_inf() && b.is_inf()) throw EvalError("inf / inf is undefined");
  if (a.is_inf()) return ExtReal::infinity();
  if (b.is_inf()) return a.is_float() ? ExtReal::from_double(0.0) : ExtReal();
  if (a.is_exact() && b.is_exact()) return ExtReal::rational(a.q() / b.q());
  return ExtReal::from_double(a.to_double() / b.to_double());
}

ExtReal pow(const ExtReal& a, unsigned long k) {
  if (k == 0) return ExtReal(1);
  if (a.is_inf()) return ExtReal::infinity();
  if (a.is_float()) return ExtReal::from_double(std::pow(a.to_double(), static_cast<double>(k)));
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), a.q().get_num_mpz_t(), k);
  mpz_pow_ui(d.get_mpz_t(), a.q().get_den_mpz_t(), k);
  return ExtReal::rational(mpq_class(n, d));
}

ExtReal pow(const ExtReal& a, const ExtReal& e) {
  if (e.is_natural() && e.q().get_num().fits_ulong_p()) return pow(a, e.q().get_num().get_ui());
  if (e.is_inf()) {
    int c = (a <=> ExtReal(1)) == 0 ? 0 : (a < ExtReal(1) ? -1 : 1);
    if (c < 0) return ExtReal();
    if (c == 0) return ExtReal(1);
    return ExtReal::infinity();
  }
  if (a.is_inf()) return e.is_zero() ? ExtReal(1) : ExtReal::infinity();
  return ExtReal::from_double(std::pow(a.to_double(), e.to_double()));
}

ExtReal exp_of(const ExtReal& y) {
  if (y.is_exact() && y.is_zero()) return ExtReal(1);
  if (y.is_inf()) return ExtReal::infinity();
  return ExtReal::from_double(std::exp(y.to_double()));
}

ExtReal exp_scaled(const ExtReal& t, const ExtReal& x) { return exp_of(t * x); }

ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }
ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

bool approx_equal(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.is_inf() || b.is_inf()) return a.is_inf() && b.is_inf();
  if (a.is_exact() && b.is_exact()) {
    mpq_class d = abs(mpq_class(a.q() - b.q()));
    return d.get_d() <= tol || d.get_d() <= tol * std::max(a.q().get_d(), b.q().get_d());
  }
  double x = a.to_double(), y = b.to_double(), d = std::fabs(x - y);
  return d <= tol || d <= tol * std::max(x, y);
}

}  // namespace rewlab
