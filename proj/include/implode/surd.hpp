#pragma once

// Exact arithmetic in the quadratic field Q[sqrt(15)].  Values are a + b*s15.
// Sign is decided exactly: when a and b disagree in sign, compare a^2 vs 15 b^2.

#include "implode/rational.hpp"

#include <cmath>
#include <ostream>

namespace implode {

struct Surd {
  Rational a{0};  // rational part
  Rational b{0};  // coefficient of sqrt(15)

  Surd() = default;
  Surd(const Rational& a_) : a(a_) {}
  Surd(const Rational& a_, const Rational& b_) : a(a_), b(b_) {}
  Surd(int v) : a(v) {}
  Surd(long v) : a(v) {}

  static Surd sqrt15() { return Surd(0, 1); }

  friend Surd operator+(const Surd& x, const Surd& y) { return {x.a + y.a, x.b + y.b}; }
  friend Surd operator-(const Surd& x, const Surd& y) { return {x.a - y.a, x.b - y.b}; }
  friend Surd operator-(const Surd& x) { return {-x.a, -x.b}; }
  friend Surd operator*(const Surd& x, const Surd& y) {
    return {x.a * y.a + 15 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  Surd conj() const { return {a, -b}; }
  Surd inv() const {
    Rational n = a * a - 15 * b * b;  // nonzero unless *this == 0
    if (n == 0) throw std::domain_error("Surd division by zero");
    return {a / n, -b / n};
  }
  friend Surd operator/(const Surd& x, const Surd& y) { return x * y.inv(); }
  Surd& operator+=(const Surd& y) { *this = *this + y; return *this; }
  Surd& operator-=(const Surd& y) { *this = *this - y; return *this; }
  Surd& operator*=(const Surd& y) { *this = *this * y; return *this; }
  Surd& operator/=(const Surd& y) { *this = *this / y; return *this; }

  bool is_rational() const { return b == 0; }
  friend bool operator==(const Surd& x, const Surd& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(const Surd& x, const Surd& y) { return !(x == y); }
};

inline int sgn(const Surd& x) {
  int sa = sgn(x.a), sb = sgn(x.b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: |a| vs |b|*sqrt(15)  <=>  a^2 vs 15 b^2
  int c = Rational(x.a * x.a).compare(Rational(15 * x.b * x.b));
  return c == 0 ? 0 : (c > 0 ? sa : sb);
}

inline bool operator<(const Surd& x, const Surd& y) { return sgn(x - y) < 0; }
inline bool operator>(const Surd& x, const Surd& y) { return sgn(x - y) > 0; }
inline bool operator<=(const Surd& x, const Surd& y) { return sgn(x - y) <= 0; }
inline bool operator>=(const Surd& x, const Surd& y) { return sgn(x - y) >= 0; }

inline Surd surd_abs(const Surd& x) { return sgn(x) < 0 ? -x : x; }

// rational enclosure of sqrt(15) with error < 10^-m
inline void sqrt15_bounds(unsigned m, Rational& lo, Rational& hi) {
  Int p = pow10(m);
  Int s = isqrt_floor(15 * p * p);
  lo = Rational(s, p);
  hi = Rational(s + 1, p);
}

// rational lower / upper bounds on the value, tight to ~10^-m
inline Rational lower_bound(const Surd& x, unsigned m = 40) {
  Rational lo, hi;
  sqrt15_bounds(m, lo, hi);
  return x.a + x.b * (x.b >= 0 ? lo : hi);
}
inline Rational upper_bound(const Surd& x, unsigned m = 40) {
  Rational lo, hi;
  sqrt15_bounds(m, lo, hi);
  return x.a + x.b * (x.b >= 0 ? hi : lo);
}

inline double to_double(const Surd& x) {
  return to_double(x.a) + to_double(x.b) * std::sqrt(15.0);
}

template <class Real>
inline Real convert(const Surd& x) {
  using std::sqrt;
  return Real(x.a.convert_to<Real>()) + Real(x.b.convert_to<Real>()) * sqrt(Real(15));
}

inline std::string decimal_string(const Surd& x, unsigned digits = 30) {
  if (x.b == 0) return decimal_string(x.a, digits);
  Rational lo = lower_bound(x, digits + 12), hi = upper_bound(x, digits + 12);
  return decimal_string((lo + hi) / 2, digits);
}

inline std::string exact_string(const Surd& x) {
  if (x.b == 0) return x.a.str();
  return x.a.str() + (x.b > 0 ? " + " : " - ") + rat_abs(x.b).str() + "*sqrt(15)";
}

inline std::ostream& operator<<(std::ostream& os, const Surd& x) { return os << exact_string(x); }

}  // namespace implode
