#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "implode/phase.hpp"

#include <cmath>
#include <random>

using namespace implode;

namespace {
Phase<double> make_phase(double kappa = 101.5) {
  return Phase<double>(params_from_gamma(gamma_of_kappa(kappa)));
}
}  // namespace

TEST_CASE("sonic point annihilates both (Z,V) right-hand sides") {
  for (double k : {60.0, 101.5, 300.0}) {
    auto ph = make_phase(k);
    double Zs = ph.par.sonic_Z, Vs = ph.par.sonic_V;
    CHECK(std::abs(ph.delta_V(Zs, Vs)) < 1e-13);
    CHECK(std::abs(ph.delta_Z(Zs, Vs)) < 1e-13);
    // and maps to (Y,U) = (0, U0)
    double Y, U;
    ph.to_YU(Zs, Vs, Y, U);
    CHECK(std::abs(Y) < 1e-12);
    CHECK(U == doctest::Approx(ph.par.U0).epsilon(1e-10));
  }
}

TEST_CASE("factored root curves") {
  auto ph = make_phase();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dv(0.05, 0.95);
  for (int i = 0; i < 300; ++i) {
    double V = dv(rng);
    CHECK(std::abs(ph.delta_V(ph.Z_V(V), V)) < 1e-13);
    CHECK(std::abs(ph.delta_Z(ph.Z_plus(V), V)) < 1e-12);
    CHECK(std::abs(ph.delta_Z(ph.Z_minus(V), V)) < 1e-12);
  }
  std::uniform_real_distribution<double> dy(-0.5, 0.95);
  for (int i = 0; i < 300; ++i) {
    double Y = dy(rng);
    if (std::abs(ph.par.d * Y - 1) > 1e-3)
      CHECK(std::abs(ph.delta_Y(Y, ph.U_DY(Y))) < 1e-12);
    CHECK(std::abs(ph.delta_U(Y, ph.U_DU(Y))) < 1e-12);
  }
}

TEST_CASE("plane maps are mutually inverse on the shooting domain") {
  auto ph = make_phase();
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> dv(0.02, 0.98), dz(0.0, 1.0);
  std::uniform_real_distribution<double> dy(-0.6, 0.95), du(0.01, 40.0);
  int zv_checked = 0;
  for (int i = 0; i < 20000 && zv_checked < 10000; ++i) {
    double V = dv(rng);
    double Z = ph.Z_V(V) + dz(rng) * 2.0;  // spread above the V-nullcline
    if (V * Z > 0.999) continue;           // inverse branch needs 1 - VZ > 0
    double Y, U;
    ph.to_YU(Z, V, Y, U);
    if (!(Y > -ph.par.gamma + 1e-3) || U < 1e-8) continue;  // outside branch
    double Zb, Vb;
    ph.to_ZV(Y, U, Zb, Vb);
    CHECK(std::abs(Zb - Z) < 1e-12 * (1 + std::abs(Z)));
    CHECK(std::abs(Vb - V) < 1e-12);
    ++zv_checked;
  }
  CHECK(zv_checked == 10000);
  for (int i = 0; i < 10000; ++i) {
    double Y = dy(rng), U = du(rng);
    if (Y <= -ph.par.gamma + 1e-3) continue;
    double Z, V, Yb, Ub;
    ph.to_ZV(Y, U, Z, V);
    ph.to_YU(Z, V, Yb, Ub);
    CHECK(std::abs(Yb - Y) < 1e-11 * (1 + std::abs(Y)));
    CHECK(std::abs(Ub - U) < 1e-10 * (1 + std::abs(U)));
    // branch criterion: curlyV < curlyZ exactly when Y > -gamma
    CHECK(V < Z);
  }
}

TEST_CASE("finite-difference gradient at the sonic point matches c1..c4") {
  auto ph = make_phase();
  const auto& P = ph.par;
  double h = 1e-6;
  auto fd = [&](auto&& fun, double Y, double U, bool inU) {
    double vp = inU ? fun(Y, U + h) : fun(Y + h, U);
    double vm = inU ? fun(Y, U - h) : fun(Y - h, U);
    return (vp - vm) / (2 * h);
  };
  auto dU = [&](double Y, double U) { return ph.delta_U(Y, U); };
  auto dY = [&](double Y, double U) { return ph.delta_Y(Y, U); };
  CHECK(std::abs(fd(dU, 0, P.U0, true) - P.c1) < 1e-6);
  CHECK(std::abs(fd(dU, 0, P.U0, false) - P.c3) < 1e-6);
  CHECK(std::abs(fd(dY, 0, P.U0, true) - P.c2) < 1e-6);
  CHECK(std::abs(fd(dY, 0, P.U0, false) - P.c4) < 1e-6);
}

TEST_CASE("delta_Z sign through the map equals sign of U - U_g") {
  auto ph = make_phase();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dy(-0.5, 0.9), du(0.01, 30.0);
  for (int i = 0; i < 2000; ++i) {
    double Y = dy(rng), U = du(rng);
    if (Y <= -ph.par.gamma + 1e-3) continue;
    double Z, V;
    ph.to_ZV(Y, U, Z, V);
    double s1 = ph.delta_Z(Z, V);
    double s2 = ph.delta_Z_sign_factor(Y, U);
    if (std::abs(s1) < 1e-10 || std::abs(s2) < 1e-10) continue;  // near the curve
    CHECK(std::signbit(s1) == std::signbit(s2));
  }
}

TEST_CASE("limit-mode phase object works over the exact field") {
  // the sonic point (Z,V) = (1,1) kills delta_V and delta_Z exactly
  auto P = limit_params();
  Surd Zs = P.sonic_Z, Vs = P.sonic_V;
  Surd one(1);
  Surd dV = Surd(3) * (one - Vs * Vs) *
            ((one - Vs * Vs) * Zs / (P.gamma + one) - Vs * (one - Vs * Zs));
  Surd a = one - Zs * Vs, b = Vs - Zs;
  Surd dZ = Zs * (a * a - P.ell * b * b);
  CHECK(sgn(dV) == 0);
  CHECK(sgn(dZ) == 0);
}
