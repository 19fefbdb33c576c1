#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "implode/barrier.hpp"
#include "implode/phase.hpp"
#include "implode/shooting.hpp"

#include <chrono>
#include <cmath>

using namespace implode;

namespace {
struct Fixture {
  Params<Surd> par = limit_params();
  Surd U2;
  Fixture() {
    auto S = compute_sonic_series(par, 2);
    U2 = S.U[2];
  }
};
}  // namespace

TEST_CASE("barrier construction at the exact limit") {
  Fixture fx;
  auto B = build_barriers(fx.par, fx.U2);
  CHECK(B.e1 == -fx.par.A);  // d U0 - U1 = -A when U0 = 0, U1 = A
  // defect second derivative tuned to -40 exactly: quadratic coefficient -20
  auto P = detail::lower_defect_numerator(B, 4);
  CHECK(P.coeff(0) == Surd(0));
  CHECK(P.coeff(1) == Surd(0));
  CHECK(P.coeff(2) == Surd(-20));
  // C_inf < 0
  CHECK(sgn(B.C_inf) < 0);
  MESSAGE("e2 = ", decimal_string(B.e2, 20), "  C_inf = ", decimal_string(B.C_inf, 20));
}

TEST_CASE("upper barrier vs geometric root curve identity") {
  Fixture fx;
  auto B = build_barriers(fx.par, fx.U2);
  // B_u - U_g = (U1 - 2 l gamma - 2) Y + (3 - l) Y^2
  Poly<Surd> Ug(std::vector<Surd>{
      fx.par.ell * fx.par.gamma * fx.par.gamma - Surd(1),
      Surd(2) * fx.par.ell * fx.par.gamma + Surd(2),
      fx.par.ell - Surd(1)});
  Poly<Surd> diff = B.Bu - Ug;
  CHECK(diff.coeff(0) == Surd(0));
  CHECK(diff.coeff(1) == fx.par.U1 - Surd(2) * fx.par.ell * fx.par.gamma - Surd(2));
  CHECK(diff.coeff(2) == Surd(3) - fx.par.ell);
}

TEST_CASE("all certificates positive with positive margins, within budget") {
  Fixture fx;
  auto t0 = std::chrono::steady_clock::now();
  auto R = certify_barriers(fx.par, fx.U2);
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(dt < 60.0);
  CHECK(R.certs.size() == 13);
  for (const auto& c : R.certs) {
    INFO("certificate: ", c.name);
    CHECK(c.verdict == SignVerdict::Positive);
    CHECK(c.margin > 0);
  }
  CHECK(R.all_positive());
  auto j = R.to_json();
  CHECK(j.size() == 13);
  MESSAGE("barrier certification: ", dt, " s");
}

TEST_CASE("barriers bracket the root curves numerically") {
  Fixture fx;
  auto B = build_barriers(fx.par, fx.U2);
  Phase<double> ph(params_from_gamma(std::sqrt(15.0) / 5.0 * (1 + 1e-13)));
  auto evalp = [](const Poly<Surd>& p, double y) {
    double r = 0;
    for (int i = p.degree(); i >= 0; --i) r = r * y + to_double(p.c[i]);
    return r;
  };
  for (int i = 1; i <= 200; ++i) {
    double y = 0.25 * i / 200.0;
    double bu = evalp(B.Bu, y);
    CHECK(ph.U_DU(y) < bu);
    if (y < 0.249) {  // lower barrier has the pole at Y_O
      double bl = evalp(B.N, y) / (4 * y - 1);
      CHECK(bu < bl);
      CHECK(bl < ph.U_DY(y));
    }
  }
}

TEST_CASE("tampered e2 breaks certification") {
  Fixture fx;
  auto R = certify_barriers(fx.par, fx.U2);
  auto B2 = R.bar;
  B2.e2 = B2.e2 + Surd(30);  // push the lower barrier way off
  B2.N = Poly<Surd>(std::vector<Surd>{-fx.par.U0, B2.e1, B2.e2});
  auto P = detail::lower_defect_numerator(B2, 4);
  auto cert = poly_sign_on(-P.strip_low(2), Rational(0), Rational(1, 4), 24,
                           "lower_defect_negative_tampered");
  CHECK(cert.verdict != SignVerdict::Positive);
}

TEST_CASE("truncation barrier: defect coefficients cancel through order n") {
  mpreal::default_precision(60);
  mpreal gamma = gamma_of_kappa(mpreal(101.5), 50.0, mpreal(1e-55));
  auto par = params_from_gamma(gamma);
  auto S = compute_sonic_series(par, 33);
  auto lb = build_local_barrier<mpreal>(LocalBarrierKind::GUpper, 31, S.U);
  auto P = local_barrier_defect_coeffs(lb, par);
  mpreal lead = boost::multiprecision::abs(P[32]);
  REQUIRE(lead > 0);
  // orders <= n inherit the recursion and must cancel to rounding
  for (int m = 0; m <= 31; ++m)
    CHECK(double(boost::multiprecision::abs(P[m]) / lead) < 1e-45);
  // leading survivor: ((n+1) lam- - lam+)(c_{n+1} - U_{n+1}) with c_{n+1} = 0
  mpreal expect = (mpreal(32) * par.lam_minus - par.lam_plus) * (mpreal(0) - S.U[32]);
  CHECK(double(boost::multiprecision::abs(P[32] - expect) / lead) < 1e-45);
  // far coefficients follow the pure-square recursion
  for (int m : {40, 51, 60}) {
    mpreal b2m(0), b2m1(0);
    for (int i = 0; i <= 31; ++i) {
      int j = m - i, j1 = m + 1 - i;
      if (j >= 0 && j <= 31) b2m += lb.coef[i] * lb.coef[j];
      if (j1 >= 0 && j1 <= 31) b2m1 += lb.coef[i] * lb.coef[j1];
    }
    mpreal expct = (mpreal(4 * m) / 2 - 2) * b2m - mpreal(m + 1) / 2 * b2m1;
    CHECK(double(boost::multiprecision::abs(P[m] - expct) /
                 (boost::multiprecision::abs(P[m]) + 1)) < 1e-50);
  }
}

TEST_CASE("truncation barrier: sign evidence on the matching window") {
  mpreal::default_precision(60);
  mpreal gamma = gamma_of_kappa(mpreal(101.5), 50.0, mpreal(1e-55));
  auto par = params_from_gamma(gamma);
  mpreal cs = cstar_value(par);
  CHECK(double(cs) > 1.13);
  CHECK(double(cs) < 1.15);
  auto S = compute_sonic_series(par, 102);
  auto lb = build_local_barrier<mpreal>(LocalBarrierKind::GUpper, 101, S.U);
  auto ev = eval_local_barrier_sign(lb, par, -2 / (cs * par.kappa), mpreal(0));
  CHECK(ev.positive);
  // the reported double may underflow near Y = 0 (P ~ Y^{n+1}); sign is
  // certified at working precision inside eval_local_barrier_sign
  CHECK(ev.min_value >= 0);
  CHECK(ev.cancel_rel < 1e-12);
  CHECK(ev.y_lo < ev.argmin);
  CHECK(ev.argmin < 0);
}

TEST_CASE("perturbed near-sonic barrier stays positive in double precision") {
  auto par = params_from_gamma(gamma_of_kappa(101.5));
  auto S = compute_sonic_series(par, 12);
  auto lb = build_local_barrier<double>(LocalBarrierKind::NearUpper, 9, S.U);
  CHECK(lb.beta == -8.0 * 81);
  CHECK(lb.coef.size() == 11);
  auto ev = eval_local_barrier_sign(lb, par, -0.01, 0.0);
  CHECK(ev.positive);
  CHECK(ev.min_value > 0);
}
