#pragma once

// Dense univariate polynomials over an exact (or float) scalar K.
// Coefficient order: c[i] multiplies x^i.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace implode {

template <class K>
struct Poly {
  std::vector<K> c;

  Poly() = default;
  explicit Poly(std::vector<K> cs) : c(std::move(cs)) { normalize(); }

  static Poly constant(const K& v) { return Poly(std::vector<K>{v}); }

  void normalize() {
    while (!c.empty() && c.back() == K(0)) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return int(c.size()) - 1; }  // -1 for zero poly
  K coeff(std::size_t i) const { return i < c.size() ? c[i] : K(0); }

  K eval(const K& x) const {
    K r(0);
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
  }

  friend Poly operator+(const Poly& p, const Poly& q) {
    std::vector<K> r(std::max(p.c.size(), q.c.size()), K(0));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p.coeff(i) + q.coeff(i);
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& p, const Poly& q) {
    std::vector<K> r(std::max(p.c.size(), q.c.size()), K(0));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p.coeff(i) - q.coeff(i);
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& p) {
    std::vector<K> r = p.c;
    for (auto& v : r) v = -v;
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& p, const Poly& q) {
    if (p.is_zero() || q.is_zero()) return Poly();
    std::vector<K> r(p.c.size() + q.c.size() - 1, K(0));
    for (std::size_t i = 0; i < p.c.size(); ++i)
      for (std::size_t j = 0; j < q.c.size(); ++j) r[i + j] += p.c[i] * q.c[j];
    return Poly(std::move(r));
  }
  friend Poly operator*(const K& s, const Poly& p) {
    std::vector<K> r = p.c;
    for (auto& v : r) v = s * v;
    return Poly(std::move(r));
  }

  Poly derivative() const {
    if (c.size() <= 1) return Poly();
    std::vector<K> r(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) r[i - 1] = K(int(i)) * c[i];
    return Poly(std::move(r));
  }

  // divide by x^k; the k low-order coefficients must vanish exactly
  Poly strip_low(std::size_t k) const {
    for (std::size_t i = 0; i < k && i < c.size(); ++i)
      if (!(c[i] == K(0))) throw std::logic_error("strip_low: nonzero low coefficient");
    if (c.size() <= k) return Poly();
    return Poly(std::vector<K>(c.begin() + k, c.end()));
  }
};

}  // namespace implode
