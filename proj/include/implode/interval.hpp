#pragma once

// Directed-rounding double intervals.  Outward rounding via nextafter on every
// endpoint; good enough for the diagnostic (non-load-bearing) interval checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace implode {

struct ZeroDivide : std::domain_error {
  ZeroDivide() : std::domain_error("interval division by interval containing zero") {}
};

struct Interval {
  double lo{0}, hi{0};

  Interval() = default;
  Interval(double v) : lo(v), hi(v) {}
  Interval(double l, double h) : lo(l), hi(h) {
    if (!(l <= h)) throw std::invalid_argument("bad interval");
  }

  static double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
  static double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

  static Interval hull(double a, double b) { return Interval(std::min(a, b), std::max(a, b)); }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }

  friend Interval operator+(const Interval& x, const Interval& y) {
    return Interval(down(x.lo + y.lo), up(x.hi + y.hi));
  }
  friend Interval operator-(const Interval& x, const Interval& y) {
    return Interval(down(x.lo - y.hi), up(x.hi - y.lo));
  }
  friend Interval operator-(const Interval& x) { return Interval(-x.hi, -x.lo); }
  friend Interval operator*(const Interval& x, const Interval& y) {
    double c[4] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
    double lo = *std::min_element(c, c + 4), hi = *std::max_element(c, c + 4);
    return Interval(down(lo), up(hi));
  }
  friend Interval operator/(const Interval& x, const Interval& y) {
    if (y.contains_zero()) throw ZeroDivide();
    double c[4] = {x.lo / y.lo, x.lo / y.hi, x.hi / y.lo, x.hi / y.hi};
    double lo = *std::min_element(c, c + 4), hi = *std::max_element(c, c + 4);
    return Interval(down(lo), up(hi));
  }
};

inline Interval sqrt(const Interval& x) {
  if (x.lo < 0) throw std::domain_error("interval sqrt of negative");
  return Interval(Interval::down(std::sqrt(x.lo)), Interval::up(std::sqrt(x.hi)));
}

}  // namespace implode
