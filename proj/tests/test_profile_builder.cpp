#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "implode/profile.hpp"

#include <cmath>

using namespace implode;

namespace {
// one shared matched-precision context at kappa = 101.5: the crossing and
// profile assembly are the expensive parts, so build them once
struct Shared {
  int digits = 89;
  mpreal gamma;
  GContext<mpreal> ctx;
  BelowSonic bs;
  GlobalProfile gp;

  Shared()
      : gamma((mpreal::default_precision(89),
               gamma_of_kappa(mpreal(101.5), 50.0, mpreal(1e-84)))),
        ctx(gamma, 89, 0.45),
        bs(extend_below_sonic(ctx)),
        gp(build_profile(ctx, 0.2, bs, 1e4)) {}
};

const Shared& shared() {
  static Shared s;
  return s;
}
}  // namespace

TEST_CASE("desingularized crossing: events in order, region certified") {
  const auto& ds = shared().bs.ds;
  CHECK(ds.ok);
  CHECK(ds.region_ok);
  CHECK(ds.xi1 < ds.xi2);
  CHECK(ds.xi2 < ds.xi3);
  // event residuals: Delta_Y at xi1 and Y at xi2 are located to high accuracy
  CHECK(std::abs(ds.dY_xi1) < 1e-10);
  CHECK(std::abs(ds.Y_xi2) < 1e-12);
  // the sqrt-fit prediction of the tangency location agrees with the refined one
  CHECK(ds.Y_root == doctest::Approx(ds.Y_root_fit).epsilon(1e-2));
  CHECK(ds.Y_root < 0);
  // frozen from a validated run at kappa = 101.5
  CHECK(ds.xi1 == doctest::Approx(19.954).epsilon(0.02));
  CHECK(ds.xi2 == doctest::Approx(20.929).epsilon(0.02));
  CHECK(ds.xi3 == doctest::Approx(21.174).epsilon(0.02));
  // endpoint sits past the V-nullcline with positive U
  CHECK(ds.Y_end > 0);
  CHECK(ds.U_end > 0);
}

TEST_CASE("crossing nodes stay in the admissible strip") {
  const auto& bs = shared().bs;
  const Phase<double> ph(params_from_gamma(double(shared().gamma)));
  for (const auto& nd : bs.ds.nodes) {
    double Y = nd[1], U = nd[2];
    if (Y < bs.ds.Y_xi2) continue;
    if (Y <= 0) continue;
    CHECK(Y < 1);
    CHECK(U > 0);
  }
  // backward (Y,U) leg: U positive and monotone in Y
  for (std::size_t i = 1; i < bs.yu_nodes.size(); ++i) {
    CHECK(bs.yu_nodes[i][1] > 0);
    CHECK(bs.yu_nodes[i][0] < bs.yu_nodes[i - 1][0]);
  }
}

TEST_CASE("assembled profile: graph structure and leg agreement") {
  const auto& gp = shared().gp;
  REQUIRE(gp.nodes.size() > 100);
  CHECK(gp.nodes.front().Z == 0.0);
  CHECK(gp.nodes.front().V == 0.0);
  for (std::size_t i = 1; i < gp.nodes.size(); ++i)
    CHECK(gp.nodes[i].Z > gp.nodes[i - 1].Z);
  CHECK(gp.bounds_ok);
  CHECK(gp.overlap_max_rel < 1e-6);
  // measured ~1e-11 on a validated run; keep head-room for platform noise
  CHECK(gp.overlap_max_rel < 1e-8);
}

TEST_CASE("far leg: trapping region, monotone decay, finite limit") {
  const auto& gp = shared().gp;
  CHECK(gp.omega_far_ok);
  CHECK(gp.far_monotone);
  CHECK(gp.Z2 == doctest::Approx(0.998704).epsilon(1e-4));
  CHECK(gp.V2 == doctest::Approx(0.988164).epsilon(1e-4));
  CHECK(gp.V_inf > -1);
  CHECK(gp.V_inf < 1);
  CHECK(gp.V_inf == doctest::Approx(-0.024145).epsilon(1e-2));
}

TEST_CASE("density and phase integrals: normalization and asymptotics") {
  const auto& gp = shared().gp;
  CHECK(gp.W[0] == 1.0);
  CHECK(gp.Phi[0] == 0.0);
  for (std::size_t i = 0; i < gp.W.size(); ++i) CHECK(gp.W[i] > 0);
  // the phase integrand carries the sign of V: increasing while V >= 0
  for (std::size_t i = 1; i < gp.Phi.size(); ++i)
    if (gp.nodes[i].V >= 0 && gp.nodes[i - 1].V >= 0) CHECK(gp.Phi[i] >= gp.Phi[i - 1]);
  double a_ref = 2.0 * 3 / (6.0 * 5 / 3 * (double(shared().ctx.par.gamma) + 1));
  CHECK(gp.a_exponent == doctest::Approx(a_ref).epsilon(1e-12));
  CHECK(gp.wza_drift < 1e-3);
  CHECK(gp.W_inf > 0);
  CHECK(gp.ok);
}

TEST_CASE("origin defect: fitted even coefficients vanish to tolerance") {
  CHECK(shared().gp.even_coeff_max < 1e-10);
}

TEST_CASE("logarithmic slope is continuous across the series cutover") {
  const auto& gp = shared().gp;
  detail::Curve c;
  for (const auto& nd : gp.nodes)
    if (nd.Z < 1e-2) c.push(nd.Z, nd.V, nd.dV);
  JWFunc jw(params_from_gamma(double(shared().gamma)), &c);
  double below = jw(jw.zcut * 0.999), above = jw(jw.zcut * 1.001);
  CHECK(below == doctest::Approx(above).epsilon(1e-4));
  // odd symmetry of V makes J_W vanish linearly at the origin
  CHECK(std::abs(jw(1e-9)) < 1e-8);
}
