#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "implode/params.hpp"

#include <cmath>
#include <random>

using namespace implode;

TEST_CASE("limit values are exact") {
  auto P = limit_params();
  CHECK(P.eps == Surd(0));
  CHECK(P.gamma * P.gamma == Surd(Rational(3, 5)));       // gamma*^2 = 1/l = 3/5
  CHECK(P.ell * P.gamma * P.gamma == Surd(1));            // eps + 1
  CHECK(P.A == Surd(5) + P.gamma / Surd(3));
  CHECK(P.B == Surd(Rational(16, 3)));
  CHECK(P.lam_plus == P.A);
  CHECK(P.lam_minus == Surd(0));
  CHECK(P.kappa_infinite);
  CHECK(P.U0 == Surd(0));
  // U1 solves c2 u^2 + (c4-c1) u - c3 = 0, i.e. -u^2 + A u = 0, larger root A
  CHECK(P.c2 * P.U1 * P.U1 + (P.c4 - P.c1) * P.U1 - P.c3 == Surd(0));
  CHECK(P.U1 == P.A);
  CHECK(P.sonic_Z == Surd(1));
  CHECK(P.sonic_V == Surd(1));
  CHECK(P.Y_O == Surd(Rational(1, 4)));
  // lam- = c2 U1 + c4, lam+ = c1 - c2 U1
  CHECK(P.lam_minus == P.c2 * P.U1 + P.c4);
  CHECK(P.lam_plus == P.c1 - P.c2 * P.U1);
}

TEST_CASE("double parameters satisfy the defining algebra") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dg(0.7746, 0.95);
  for (int k = 0; k < 200; ++k) {
    double g = dg(rng);
    auto P = params_from_gamma(g);
    CHECK(P.eps == doctest::Approx(5.0 / 3.0 * g * g - 1).epsilon(1e-13));
    // spectral data: sum/product of eigenvalues vs trace/determinant
    CHECK(P.lam_plus + P.lam_minus == doctest::Approx(P.c1 + P.c4).epsilon(1e-13));
    CHECK(P.lam_plus * P.lam_minus == doctest::Approx(P.c1 * P.c4 - P.c2 * P.c3).epsilon(1e-12));
    // (1, U1) is an eigenvector of [[c4,c2],[c3,c1]] for lam-
    CHECK(P.c4 + P.c2 * P.U1 == doctest::Approx(P.lam_minus).epsilon(1e-12));
    CHECK(P.c3 + P.c1 * P.U1 == doctest::Approx(P.lam_minus * P.U1).epsilon(1e-11));
    // gradient identity: (kappa+1)^2/kappa = ((d+1)lg - (d-1-2l))^2 / (2(d-1)l eps)
    double l = 5.0 / 3.0;
    double lhs = (P.kappa + 1) * (P.kappa + 1) / P.kappa;
    double rhs = std::pow(5 * l * g - (3 - 2 * l), 2) / (2 * 3 * l * P.eps);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    CHECK(P.U0 == P.eps);
    CHECK(P.Y_O == 0.25);
    // sonic point zeroes both phase-plane numerators (checked in phase tests too)
    CHECK(P.sonic_V > 0);
    CHECK(P.sonic_Z > P.sonic_V);  // Z_s/V_s = gamma(1+gamma)l/(l gamma+1) ... > 1 here
  }
}

TEST_CASE("double parameters approach the exact limit") {
  auto L = limit_params();
  double gstar = std::sqrt(15.0) / 5.0;
  auto P = params_from_gamma(gstar * (1 + 1e-10));
  CHECK(P.A == doctest::Approx(to_double(L.A)).epsilon(1e-9));
  CHECK(P.U1 == doctest::Approx(to_double(L.U1)).epsilon(1e-4));
  CHECK(P.lam_minus == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(P.kappa > 1e4);
}

TEST_CASE("kappa <-> gamma roundtrip") {
  for (double t : {50.0, 77.25, 101.5, 250.0, 1000.0}) {
    double g = gamma_of_kappa(t);
    CHECK(g > std::sqrt(15.0) / 5.0);
    CHECK(kappa_of_gamma(g) == doctest::Approx(t).epsilon(1e-10));
  }
  CHECK_THROWS_AS(gamma_of_kappa(49.0), OutOfMonotoneRange);
  CHECK_THROWS_AS(gamma_of_kappa(0.5), OutOfMonotoneRange);
}

TEST_CASE("kappa decreases in gamma near the limit") {
  double prev = 1e300;
  for (double g = 0.7746; g < 0.80; g += 0.002) {
    double k = kappa_of_gamma(g);
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("config parsing") {
  Config c = parse_config_text("d = 4\np = 7\ngamma_mode = kappa_target\nkappa = 103.5\n# comment\n");
  CHECK(c.gamma_mode == GammaMode::KappaTarget);
  CHECK(c.kappa == 103.5);
  Config e = parse_config_text("gamma_mode = explicit\ngamma_num = 4/5\ngamma_den = 1\n");
  CHECK(e.gamma_num == Rational(4, 5));
  CHECK_THROWS(parse_config_text("bogus_key = 1\n"));
  CHECK_THROWS(parse_config_text("d = 3\n"));
  CHECK_THROWS(parse_config_text("gamma_mode = nope\n"));
  CHECK(parse_config_text("").gamma_mode == GammaMode::ExactLimit);  // defaults
}
