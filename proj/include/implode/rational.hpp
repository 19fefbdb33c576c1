#pragma once

// Exact integer / rational scalars (GMP-backed) plus decimal formatting
// helpers used by the certificate printers.

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace implode {

using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline int sgn(const Rational& x) { return x.sign(); }
inline int sgn(const Int& x) { return x.sign(); }

inline Rational rat_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// floor(sqrt(n)) for n >= 0
inline Int isqrt_floor(const Int& n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  return sqrt(n);
}

inline Int pow10(unsigned k) {
  Int r = 1;
  for (unsigned i = 0; i < k; ++i) r *= 10;
  return r;
}

// Decimal string with `digits` significant digits, round-to-nearest on the
// last digit.  Exact rationals only; no binary float in the path.
inline std::string decimal_string(const Rational& x, unsigned digits = 30) {
  if (x == 0) return "0";
  std::string sign = x < 0 ? "-" : "";
  Rational a = rat_abs(x);
  // find exponent e with 10^e <= a < 10^(e+1)
  int e = 0;
  Rational t = a;
  while (t >= 10) { t /= 10; ++e; }
  while (t < 1) { t *= 10; --e; }
  // mantissa digits: round(a * 10^(digits-1-e))
  int shift = int(digits) - 1 - e;
  Rational scaled = a;
  if (shift >= 0) scaled *= pow10(unsigned(shift));
  else scaled /= pow10(unsigned(-shift));
  Int m = Int(scaled + Rational(1, 2));  // floor(x+1/2) = round half up
  std::string ds = m.str();
  if (int(ds.size()) > int(digits)) { ds.pop_back(); ++e; }  // rounding carry
  std::string out = sign + ds.substr(0, 1);
  if (ds.size() > 1) out += "." + ds.substr(1);
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(Int(s));
  return Rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

}  // namespace implode
