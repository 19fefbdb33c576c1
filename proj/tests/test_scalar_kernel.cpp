#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "implode/interval.hpp"
#include "implode/poly.hpp"
#include "implode/rational.hpp"
#include "implode/signcert.hpp"
#include "implode/surd.hpp"

#include <random>

using namespace implode;

TEST_CASE("rational basics and decimal formatting") {
  Rational x(1, 3);
  CHECK(decimal_string(x, 10) == "3.333333333e-1");
  CHECK(decimal_string(Rational(0)) == "0");
  CHECK(decimal_string(Rational(-5, 2), 3) == "-2.50");
  CHECK(decimal_string(Rational(9999, 10), 3) == "1.00e3");  // rounding carry
  CHECK(decimal_string(Rational(123), 5) == "1.2300e2");
  CHECK(parse_rational("-7/3") == Rational(-7, 3));
  CHECK(parse_rational("42") == Rational(42));
}

TEST_CASE("surd field axioms on random elements") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> di(-20, 20);
  auto rnd = [&]() {
    int den1 = 0, den2 = 0;
    while (den1 == 0) den1 = di(rng);
    while (den2 == 0) den2 = di(rng);
    return Surd(Rational(di(rng), den1), Rational(di(rng), den2));
  };
  for (int k = 0; k < 200; ++k) {
    Surd x = rnd(), y = rnd(), z = rnd();
    CHECK((x + y) * z == x * z + y * z);
    CHECK(x * y == y * x);
    CHECK((x - y) + y == x);
    if (sgn(y) != 0) CHECK((x / y) * y == x);
  }
}

TEST_CASE("surd sign matches high-precision rational enclosure") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> di(-50, 50);
  for (int k = 0; k < 500; ++k) {
    int d1 = 0, d2 = 0;
    while (d1 == 0) d1 = di(rng);
    while (d2 == 0) d2 = di(rng);
    Surd x(Rational(di(rng), d1), Rational(di(rng), d2));
    Rational lo = lower_bound(x, 60), hi = upper_bound(x, 60);
    int s = sgn(x);
    if (s > 0) CHECK(lo > 0);
    if (s < 0) CHECK(hi < 0);
    if (s == 0) CHECK((lo <= 0 && hi >= 0));
  }
}

TEST_CASE("surd sign exact cancellation cases") {
  // 4 - sqrt(15) > 0 since 16 > 15;  sqrt(15) - 4 < 0
  CHECK(sgn(Surd(4, -1)) == 1);
  CHECK(sgn(Surd(-4, 1)) == -1);
  // 15 - (sqrt(15))^2 = 0
  Surd s = Surd::sqrt15();
  CHECK(sgn(Surd(15) - s * s) == 0);
  // a^2 = 15 b^2 never holds for nonzero rationals, but ratio can be close:
  // 3872983/1000000 < sqrt(15) < 3872984/1000000
  CHECK(sgn(Surd(Rational(-3872983, 1000000), 1)) == 1);   // sqrt(15) > 3.872983
  CHECK(sgn(Surd(Rational(-3872984, 1000000), 1)) == -1);  // sqrt(15) < 3.872984
}

TEST_CASE("surd decimal string") {
  // sqrt(15) = 3.8729833462074168851792653997...
  CHECK(decimal_string(Surd::sqrt15(), 20) == "3.8729833462074168852");
  CHECK(decimal_string(Surd(Rational(1, 5), Rational(0)), 6) == "2.00000e-1");
}

TEST_CASE("interval arithmetic encloses and rounds outward") {
  Interval x(1.0, 2.0), y(-3.0, 0.5);
  Interval s = x + y;
  CHECK(s.lo <= -2.0);
  CHECK(s.hi >= 2.5);
  Interval p = x * y;
  CHECK(p.lo <= -6.0);
  CHECK(p.hi >= 1.0);
  CHECK_THROWS_AS(x / y, ZeroDivide);
  Interval q = y / x;
  CHECK(q.lo <= -3.0);
  CHECK(q.hi >= 0.5);
  // outward rounding: width strictly positive even for thin inputs under *
  Interval t(0.1);
  Interval tt = t * t;
  CHECK(tt.lo < tt.hi);
  CHECK(tt.contains(0.1 * 0.1));
}

TEST_CASE("interval ops contain sampled pointwise results") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dr(-5.0, 5.0);
  for (int k = 0; k < 300; ++k) {
    double a = dr(rng), b = dr(rng), c = dr(rng), d = dr(rng);
    Interval x = Interval::hull(a, b), y = Interval::hull(c, d);
    double px = x.lo + (x.hi - x.lo) * 0.37, py = y.lo + (y.hi - y.lo) * 0.61;
    CHECK((x + y).contains(px + py));
    CHECK((x - y).contains(px - py));
    CHECK((x * y).contains(px * py));
    if (!y.contains_zero()) CHECK((x / y).contains(px / py));
  }
}

TEST_CASE("polynomial arithmetic over rationals") {
  Poly<Rational> p(std::vector<Rational>{1, 2, 3});   // 1 + 2x + 3x^2
  Poly<Rational> q(std::vector<Rational>{-1, 1});     // -1 + x
  Poly<Rational> pq = p * q;
  CHECK(pq.degree() == 3);
  CHECK(pq.coeff(0) == Rational(-1));
  CHECK(pq.coeff(1) == Rational(-1));
  CHECK(pq.coeff(2) == Rational(-1));
  CHECK(pq.coeff(3) == Rational(3));
  CHECK(pq.eval(Rational(2)) == p.eval(Rational(2)) * q.eval(Rational(2)));
  CHECK(p.derivative().coeff(1) == Rational(6));
  Poly<Rational> r(std::vector<Rational>{0, 0, 5, 7});
  Poly<Rational> s = r.strip_low(2);
  CHECK(s.degree() == 1);
  CHECK(s.coeff(0) == Rational(5));
  CHECK_THROWS(p.strip_low(1));
}

TEST_CASE("monotone split reassembles the polynomial") {
  Poly<Rational> p(std::vector<Rational>{3, -2, 0, 5, -1});
  Poly<Rational> pos, neg;
  monotone_split(p, pos, neg);
  Poly<Rational> back = pos - neg;
  for (int i = 0; i <= p.degree(); ++i) CHECK(back.coeff(i) == p.coeff(i));
  for (auto& c : pos.c) CHECK(c >= 0);
  for (auto& c : neg.c) CHECK(c >= 0);
}

TEST_CASE("poly_sign_on certifies definite polynomials") {
  // (x - 2)^2 + 1 > 0 everywhere
  Poly<Rational> p(std::vector<Rational>{5, -4, 1});
  auto cert = poly_sign_on(p, Rational(0), Rational(4));
  CHECK(cert.verdict == SignVerdict::Positive);
  CHECK(cert.margin > 0);
  CHECK(cert.margin <= 1);  // true minimum is 1

  auto certn = poly_sign_on(Poly<Rational>(std::vector<Rational>{-5, 4, -1}), Rational(0), Rational(4));
  CHECK(certn.verdict == SignVerdict::Negative);
  CHECK(certn.margin > 0);

  // x - 1 changes sign on [0,2]
  auto certi = poly_sign_on(Poly<Rational>(std::vector<Rational>{-1, 1}), Rational(0), Rational(2), 12);
  CHECK(certi.verdict == SignVerdict::Indeterminate);
}

TEST_CASE("poly_sign_on margin is a valid lower bound on sampled values") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> di(-6, 6);
  int certified = 0;
  for (int k = 0; k < 100; ++k) {
    std::vector<Rational> cs(5);
    for (auto& c : cs) c = Rational(di(rng));
    Poly<Rational> p(std::move(cs));
    auto cert = poly_sign_on(p, Rational(0), Rational(1, 4), 16);
    if (cert.verdict == SignVerdict::Indeterminate) continue;
    ++certified;
    for (int j = 0; j <= 64; ++j) {
      Rational t = Rational(j, 64) * Rational(1, 4);
      Rational v = p.eval(t);
      if (cert.verdict == SignVerdict::Positive) CHECK(v >= cert.margin);
      else CHECK(v <= -cert.margin);
    }
  }
  CHECK(certified > 20);  // sanity: the sampler produces plenty of definite polys
}

TEST_CASE("poly_sign_on refinement never flips a definite verdict") {
  std::mt19937 rng(555);
  std::uniform_int_distribution<int> di(-9, 9);
  for (int k = 0; k < 60; ++k) {
    std::vector<Rational> cs(6);
    for (auto& c : cs) c = Rational(di(rng), 1 + std::abs(di(rng)));
    Poly<Rational> p(std::move(cs));
    auto c1 = poly_sign_on(p, Rational(0), Rational(1, 4), 8);
    auto c2 = poly_sign_on(p, Rational(0), Rational(1, 4), 20);
    if (c1.verdict != SignVerdict::Indeterminate) {
      CHECK(c2.verdict == c1.verdict);
      CHECK(c2.margin >= c1.margin);  // finer split can only sharpen the bound
    }
  }
}

TEST_CASE("poly_sign_on over the quadratic field") {
  // P(x) = (4 - sqrt(15)) + x, positive on [0, 1/4] with tiny constant term
  Poly<Surd> p(std::vector<Surd>{Surd(4, -1), Surd(1)});
  auto cert = poly_sign_on(p, Rational(0), Rational(1, 4));
  CHECK(cert.verdict == SignVerdict::Positive);
  CHECK(cert.margin > 0);
  CHECK(cert.margin < Rational(13, 100));  // 4 - sqrt(15) ~ 0.127

  auto j = cert.to_json();
  CHECK(j["verdict"] == "positive");
  CHECK(j["poly"].size() == 2);
}
