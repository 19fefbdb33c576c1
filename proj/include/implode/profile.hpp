#pragma once

// Continuation of the matched solution below the sonic point, the
// desingularized crossing of the Delta_Y root curve and of Y = 0, the mapped
// return to the (Z,V) plane, the far-field leg, and the assembled global
// profiles V, W, Phi.
//
// The backward (Y < 0) leg rides the same unstable sonic mode as the shooting
// leg, so it reuses the MPFR Taylor stepper at the matched working precision.
// Once the Delta_Y margin degenerates (|Delta_Y| ~ sqrt(|Y - Y_I'|)), the
// xi-parametrized system dY/dxi = Delta_Y, dU/dxi = Delta_U takes over; it is
// regular through the root curve and through Y = 0.

#include "implode/integrate.hpp"
#include "implode/phase.hpp"
#include "implode/shooting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace implode {

struct DesingSegment {
  double xi1 = 0;   // Delta_Y = 0
  double xi2 = 0;   // Y = 0
  double xi3 = 0;   // end of the checked window
  double Y_switch = 0;    // backward-leg handoff
  double Y_root_fit = 0;  // a-priori estimate of Y_I' from the sqrt fit
  double Y_root = 0;      // refined Y_I' (tangency located on the crossing)
  double dY_xi1 = 0;      // Delta_Y at the refined xi1 (event residual)
  double Y_xi2 = 0;       // Y at the refined xi2 (event residual)
  double Y_end = 0, U_end = 0;
  std::vector<std::array<double, 3>> nodes;  // (xi, Y, U)
  bool region_ok = false;  // 0 < Y < 1, 0 < U < min(U_DY, U_DU, U_g) on [xi2, xi3]
  bool ok = false;
};

struct BelowSonic {
  std::vector<std::array<double, 2>> yu_nodes;  // backward leg, (Y, U)
  DesingSegment ds;
};

namespace detail {

// evaluate a local Taylor polynomial at offset t
template <class Real>
Real horner_at(const std::vector<Real>& c, const Real& t) {
  Real v(0);
  for (int i = int(c.size()) - 1; i >= 0; --i) v = v * t + c[i];
  return v;
}

// bisect m(t) = margin(U0 + t, P(t)) for a sign change over [0, h]
template <class Real, class Margin>
Real bisect_on_series(const std::vector<Real>& y, const Real& U0, const Real& h,
                      Margin m) {
  Real lo(0), hi = h;
  Real mlo = m(U0, horner_at(y, lo));
  for (int it = 0; it < 200; ++it) {
    Real mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    Real v = m(U0 + mid, horner_at(y, mid));
    if ((mlo < Real(0)) == (v < Real(0))) lo = mid;
    else hi = mid;
    if (boost::multiprecision::abs(hi - lo) <
        boost::multiprecision::abs(h) * Real(1e-15))
      break;
  }
  return (lo + hi) / 2;
}

}  // namespace detail

// Backward continuation from Y = -r plus the desingularized crossing.
// `ctx` must be the matched-kappa context (series, parameters, precision).
inline BelowSonic extend_below_sonic(const GContext<mpreal>& ctx) {
  BelowSonic out;
  const Phase<mpreal>& ph = ctx.ph;

  // series value at -r
  mpreal mr = -ctx.r;
  mpreal Um(0);
  for (int i = int(ctx.U.size()) - 1; i >= 0; --i) Um = Um * mr + ctx.U[i];

  // backward Taylor leg until the Delta_Y margin degenerates
  TaylorStepper<mpreal> ts(ctx.par, ctx.digits);
  mpreal Y = mr, U = Um;
  std::vector<mpreal> u;
  out.yu_nodes.push_back({double(Y), double(U)});
  mpreal Ya = Y, dYa = ph.delta_Y(Y, U);
  mpreal Y_target(-0.5);
  int guard = 0;
  while (++guard < 100000) {
    ts.step(Y, U, Y_target, u);
    out.yu_nodes.push_back({double(Y), double(U)});
    mpreal dY = ph.delta_Y(Y, U), dU = ph.delta_U(Y, U);
    if (boost::multiprecision::abs(dY) <
        boost::multiprecision::abs(dU) / 1000) {
      // inverse-quadratic fit honoring Delta_Y ~ sqrt(|Y - Y_I'|):
      // Y = Y_I' + alpha Delta_Y^2 through the last two nodes
      mpreal a2 = dYa * dYa, b2 = dY * dY;
      mpreal YI = (Ya * b2 - Y * a2) / (b2 - a2);
      out.ds.Y_switch = double(Y);
      out.ds.Y_root_fit = double(YI);
      break;
    }
    Ya = Y;
    dYa = dY;
    if (Y == Y_target)
      throw std::runtime_error("extend_below_sonic: no Delta_Y degeneracy found");
  }

  // re-integrate to exactly Y_I'/2 for the desingularized seed
  mpreal Yh = mpreal(out.ds.Y_root_fit) / 2;
  mpreal Ys = mr, Us = Um;
  while (Ys != Yh) ts.step(Ys, Us, Yh, u);

  // Desingularized crossing.  Along the crossing dU/dxi = Delta_U stays
  // strictly negative (U never meets the U_DU root curve here), so U is a
  // faithful monotone substitute for xi; the curve Y(U) is integrated with
  // the swapped Taylor recursion, which is regular through the vertical
  // tangency Delta_Y = 0 and crosses it in a few analytic steps.  xi itself
  // is recovered by the quadrature dxi = dU / Delta_U along the leg.  This
  // stretch hugs a separatrix (transverse growth ~ e^{5 xi}), hence it stays
  // at the matched working precision.
  Phase<double> phd(params_from_gamma(double(ctx.par.gamma)));
  DesingSegment& ds = out.ds;
  TaylorStepperUY<mpreal> tu(ctx.par, ctx.digits);
  mpreal Ucur = Us, Ycur = Ys, xi(0);
  std::vector<mpreal> ys;
  ds.nodes.push_back({0.0, double(Ycur), double(Ucur)});
  bool have1 = false, have2 = false;
  double margin_at_2 = 0;
  const int sub = 8;
  int guard2 = 0;
  bool done = false;
  while (!done && ++guard2 < 20000) {
    mpreal U0 = Ucur, Y0 = Ycur;
    mpreal h = tu.step(Ucur, Ycur, mpreal(0), ys);
    // xi increment and sub-nodes from the local series
    mpreal tprev(0), fprev = mpreal(1) / ph.delta_U(Y0, U0);
    for (int j = 1; j <= sub && !done; ++j) {
      mpreal t = h * mpreal(j) / sub;
      mpreal Yt = detail::horner_at(ys, t);
      mpreal ft = mpreal(1) / ph.delta_U(Yt, U0 + t);
      mpreal tm = (tprev + t) / 2;
      mpreal fm = mpreal(1) / ph.delta_U(detail::horner_at(ys, tm), U0 + tm);
      xi += (t - tprev) / 6 * (fprev + 4 * fm + ft);  // Simpson, dxi = dU/Delta_U
      // events against the previous sub-node
      mpreal Yprev_sub = detail::horner_at(ys, tprev);
      mpreal dYp = ph.delta_Y(Yprev_sub, U0 + tprev);
      if (!have1 && dYp * ph.delta_Y(Yt, U0 + t) <= 0) {
        mpreal te = detail::bisect_on_series(ys, U0, t, [&](const mpreal& uu,
                                                            const mpreal& yy) {
          return ph.delta_Y(yy, uu);
        });
        mpreal Ye = detail::horner_at(ys, te);
        ds.xi1 = double(xi);
        ds.Y_root = double(Ye);
        ds.dY_xi1 = double(ph.delta_Y(Ye, U0 + te));
        have1 = true;
      }
      if (have1 && !have2 && Yprev_sub * Yt <= 0 && Yt >= 0) {
        mpreal te = detail::bisect_on_series(
            ys, U0, t, [](const mpreal&, const mpreal& yy) { return yy; });
        ds.xi2 = double(xi);
        ds.Y_xi2 = double(detail::horner_at(ys, te));
        have2 = true;
        double Yd = double(Yt), Ud = double(U0 + t);
        margin_at_2 = std::min({phd.U_DY(Yd), phd.U_DU(Yd), phd.U_g(Yd)}) - Ud;
      }
      ds.nodes.push_back({double(xi), double(Yt), double(U0 + t)});
      if (have2) {
        double thr = std::min(0.05, margin_at_2 / 2);
        if (double(Yt) >= thr) {
          ds.xi3 = double(xi);
          ds.Y_end = double(Yt);
          ds.U_end = double(U0 + t);
          done = true;
        }
      }
      tprev = t;
      fprev = ft;
    }
    if (!done && (double(Ycur) < -1.0 || Ucur == mpreal(0)))
      throw std::runtime_error("extend_below_sonic: crossing did not complete");
  }
  if (!done) throw std::runtime_error("extend_below_sonic: crossing did not complete");

  // node checks on [xi2, xi3]: inside the admissible triangle
  ds.region_ok = true;
  for (const auto& nd : ds.nodes) {
    if (nd[0] < ds.xi2 || nd[0] > ds.xi3) continue;
    double Yd = nd[1], Ud = nd[2];
    if (Yd < 0) continue;  // xi2 itself sits at Y = 0
    double cap = std::min({phd.U_DY(Yd), phd.U_DU(Yd), phd.U_g(Yd)});
    if (!(Yd < 1 && Ud > 0 && Ud < cap)) ds.region_ok = false;
  }
  ds.ok = have1 && have2 && ds.xi1 < ds.xi2 && ds.xi2 < ds.xi3 && ds.region_ok;
  return out;
}

// ---------------------------------------------------------------------------
// Global profile: the matched trajectory assembled as a single graph V(Z) on
// [0, Z_max], plus the density/potential profiles W, Phi by quadrature.
// Delta_Z changes sign exactly once, at the sonic point, so every leg is a
// graph over Z and the legs are glued at fixed Z cut points inside verified
// overlap windows.

struct ProfileNode {
  double Z = 0, V = 0, dV = 0;
};

struct GlobalProfile {
  double a_exponent = 0;
  double V_inf = 0;      // Aitken-extrapolated limit of V
  double W_inf = 0;      // W(Z_max) * Z_max^a
  double Z2 = 0, V2 = 0; // far-leg seed (mapped crossing endpoint)
  double overlap_max_rel = 0;  // worst disagreement between adjacent legs
  double wza_drift = 0;        // relative drift of W Z^a over [1e3, Z_max]
  double even_coeff_max = 0;   // fitted even Taylor coefficients of V at 0
  double jw_asym_max = 0;      // max Z^2 |J_W + a/Z| over Z >= 100
  bool far_monotone = false;   // V strictly decreasing past the crossing
  bool bounds_ok = false;      // |V| < 1 and V < Z at every node
  bool omega_far_ok = false;   // far seed inside the trapping region
  std::vector<ProfileNode> nodes;  // merged curve, Z strictly increasing
  std::vector<double> W, Phi;      // per node; W(0) = 1, Phi(0) = 0
  bool ok = false;
};

namespace detail {

// cubic Hermite between two nodes; optional derivative
inline double hermite(const ProfileNode& a, const ProfileNode& b, double Z,
                      double* deriv = nullptr) {
  double h = b.Z - a.Z, t = (Z - a.Z) / h;
  double t2 = t * t, t3 = t2 * t;
  double v = (2 * t3 - 3 * t2 + 1) * a.V + (t3 - 2 * t2 + t) * h * a.dV +
             (-2 * t3 + 3 * t2) * b.V + (t3 - t2) * h * b.dV;
  if (deriv)
    *deriv = (6 * t2 - 6 * t) / h * (a.V - b.V) + (3 * t2 - 4 * t + 1) * a.dV +
             (3 * t2 - 2 * t) * b.dV;
  return v;
}

struct Curve {
  std::vector<ProfileNode> n;
  double z_lo() const { return n.front().Z; }
  double z_hi() const { return n.back().Z; }
  bool covers(double Z) const { return Z >= z_lo() && Z <= z_hi(); }
  double V(double Z, double* deriv = nullptr) const {
    auto it = std::upper_bound(n.begin(), n.end(), Z,
                               [](double z, const ProfileNode& p) { return z < p.Z; });
    std::size_t i = it == n.begin() ? 0 : std::size_t(it - n.begin()) - 1;
    if (i + 1 >= n.size()) i = n.size() - 2;
    return hermite(n[i], n[i + 1], Z, deriv);
  }
  void push(double Z, double Vv, double dV) {
    if (!n.empty() && Z <= n.back().Z) return;  // enforce a strict graph
    n.push_back({Z, Vv, dV});
  }
};

template <class F>
double simpson_rec(const F& f, double a, double m, double b, double fa,
                   double fm, double fb, double S, double tol, int depth) {
  double lm = (a + m) / 2, rm = (m + b) / 2;
  double flm = f(lm), frm = f(rm);
  double Sl = (m - a) / 6 * (fa + 4 * flm + fm);
  double Sr = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(Sl + Sr - S) <= 15 * tol ||
      (m - a) < 1e-14 * (std::abs(a) + std::abs(b)))
    return Sl + Sr + (Sl + Sr - S) / 15;
  return simpson_rec(f, a, lm, m, fa, flm, fm, Sl, tol / 2, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, Sr, tol / 2, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  double m = (a + b) / 2;
  double fa = f(a), fm = f(m), fb = f(b);
  double S = (b - a) / 6 * (fa + 4 * fm + fb);
  // keep the target above the double-precision noise of the integrand
  double noise = (std::abs(fa) + std::abs(fm) + std::abs(fb)) * (b - a) * 1e-14;
  return simpson_rec(f, a, m, b, fa, fm, fb, S, std::max(tol, noise), 24);
}

// worst relative V-disagreement of curve b against curve a on their common
// Z window; counts how many nodes were actually comparable
inline void overlap_check(const Curve& a, const Curve& b, double& worst,
                          int& compared) {
  for (const auto& nd : b.n) {
    if (nd.Z <= a.z_lo() || nd.Z >= a.z_hi()) continue;
    double va = a.V(nd.Z);
    double rel = std::abs(va - nd.V) / (std::abs(nd.V) + 1e-6);
    worst = std::max(worst, rel);
    ++compared;
  }
}

}  // namespace detail

// logarithmic slope J_W of the density profile W; the 0/0 at the origin is
// removable and replaced by its series limit J_W(Z) ~ c_lin Z below zcut
struct JWFunc {
  double d, gp1, ell, pm1, a;
  double c_lin, zcut;
  const detail::Curve* curve;

  JWFunc(const Params<double>& par, const detail::Curve* c) : curve(c) {
    d = par.d;
    gp1 = double(par.gamma) + 1;
    ell = double(par.ell);
    pm1 = par.p - 1;
    a = 2 * (d - 1) / (pm1 * ell * gp1);
    double V1, V3;
    origin_coeffs(par, V1, V3);
    c_lin = 2 / (pm1 * ell) * ((d + 2) * V3 + d * V1 * V1 * V1 - V1 * V1) /
            (1 - V1);
    zcut = 1e-4;
  }
  double operator()(double Z) const {
    if (std::abs(Z) < zcut) return c_lin * Z;
    double dv;
    double V = curve->V(Z, &dv);
    double om = 1 - V * V;
    double br = (d - 1) * V / (Z * om) - (d - 1) / gp1 - (Z * V - 1) / om * dv;
    return 2 / (pm1 * ell) / (Z - V) * br;
  }
};

// Chebyshev interpolation of the origin branch on [0, sigma]: V is odd, so
// the even coefficients of the fitted polynomial measure the defect of the
// assembled origin leg.  Integrated at working precision so the coefficient
// extraction (amplification ~ sigma^-k) stays far below the target.
inline double origin_even_fit(const Params<mpreal>& par, double sigma = 2e-5,
                              int deg = 7) {
  Phase<mpreal> ph(par);
  mpreal V1, V3;
  origin_coeffs(par, V1, V3);
  mpreal Z0 = mpreal(sigma) * mpreal(1e-7);
  mpreal V0 = V1 * Z0 + V3 * Z0 * Z0 * Z0;
  auto rhs = [&ph](const mpreal& Z, const std::array<mpreal, 1>& y,
                   std::array<mpreal, 1>& dy) {
    mpreal dz = ph.delta_Z(Z, y[0]);
    if (dz == mpreal(0)) return false;
    dy[0] = ph.delta_V(Z, y[0]) / dz;
    return true;
  };
  RK45<mpreal, 1, decltype(rhs)> rk(rhs, Z0, {V0}, mpreal(1e-45), Z0 / 4);
  // Chebyshev nodes of [0, sigma], ascending; the node at 0 is exact
  int m = deg + 1;
  std::vector<mpreal> xs(m), vs(m);
  xs[0] = 0;
  vs[0] = 0;
  mpreal pi = acos(mpreal(-1));
  for (int k = 1; k < deg; ++k) {
    mpreal c = cos(pi * k / deg);
    xs[deg - k] = mpreal(sigma) / 2 * (1 + c);
  }
  xs[deg] = sigma;
  for (int k = 1; k < m; ++k) {
    while (rk.step(xs[k])) {}
    vs[k] = rk.y[0];
  }
  // Newton divided differences, then expansion to monomial coefficients
  std::vector<mpreal> dd = vs;
  for (int j = 1; j < m; ++j)
    for (int i = m - 1; i >= j; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
  std::vector<mpreal> coef(m, mpreal(0));
  for (int i = m - 1; i >= 0; --i) {
    for (int j = m - 1; j > 0; --j) coef[j] = coef[j - 1] - coef[j] * xs[i];
    coef[0] = dd[i] - coef[0] * xs[i];
  }
  double worst = 0;
  for (int k = 0; k < m; k += 2)
    worst = std::max(worst, double(boost::multiprecision::abs(coef[k])));
  return worst;
}

inline GlobalProfile build_profile(const GContext<mpreal>& ctx, double delta_Y,
                                   const BelowSonic& bs, double zmax = 1e4) {
  GlobalProfile gp;
  const Phase<mpreal>& ph = ctx.ph;
  Params<double> pard = params_from_gamma(double(ctx.par.gamma));
  Phase<double> phd(pard);
  double V1, V3;
  origin_coeffs(pard, V1, V3);
  gp.a_exponent = 2.0 * (pard.d - 1) /
                  ((pard.p - 1) * double(pard.ell) * (double(pard.gamma) + 1));

  auto slope_d = [&phd](double Z, double V) {
    return phd.delta_V(Z, V) / phd.delta_Z(Z, V);
  };

  // ---- origin leg: analytic seed plus RK45, extended past the cut for the
  // overlap window with the sonic leg
  detail::Curve origin;
  double Z0 = delta_Y / 64;
  for (double Zt : {0.0, Z0 / 4, Z0 / 2, 3 * Z0 / 4})
    origin.push(Zt, V1 * Zt + V3 * Zt * Zt * Zt, V1 + 3 * V3 * Zt * Zt);
  {
    auto rhs = [&phd](const double& Z, const std::array<double, 1>& y,
                      std::array<double, 1>& dy) {
      double dz = phd.delta_Z(Z, y[0]);
      if (dz == 0) return false;
      dy[0] = phd.delta_V(Z, y[0]) / dz;
      return true;
    };
    double Vz0 = V1 * Z0 + V3 * Z0 * Z0 * Z0;
    RK45<double, 1, decltype(rhs)> rk(rhs, Z0, {Vz0}, 1e-13, Z0 / 4);
    origin.push(Z0, Vz0, slope_d(Z0, Vz0));
    double Z_ext = 1.3 * delta_Y;
    while (rk.step(Z_ext)) origin.push(rk.x, rk.y[0], slope_d(rk.x, rk.y[0]));
    origin.push(rk.x, rk.y[0], slope_d(rk.x, rk.y[0]));
  }

  // ---- sonic leg, re-run densely (8 sub-nodes per Taylor step)
  detail::Curve sonic;
  OriginLeg<mpreal> ol = origin_leg(ph, mpreal(delta_Y), mpreal(1e-18));
  {
    std::vector<ProfileNode> tmp;
    TaylorStepper<mpreal> ts(ctx.par, ctx.digits);
    mpreal Y = ctx.r, U = ctx.U_r, Zm, Vm;
    std::vector<mpreal> u;
    ph.to_ZV(Y, U, Zm, Vm);
    tmp.push_back({double(Zm), double(Vm), slope_d(double(Zm), double(Vm))});
    int guard = 0;
    while (Y < ol.Y_F && ++guard < 100000) {
      mpreal Ya = Y;
      mpreal h = ts.step(Y, U, ol.Y_F, u);
      for (int j = 1; j <= 8; ++j) {
        mpreal t = h * mpreal(j) / 8;
        mpreal Ut = detail::horner_at(u, t);
        ph.to_ZV(Ya + t, Ut, Zm, Vm);
        tmp.push_back({double(Zm), double(Vm), slope_d(double(Zm), double(Vm))});
      }
    }
    for (auto it = tmp.rbegin(); it != tmp.rend(); ++it)
      sonic.push(it->Z, it->V, it->dV);  // Z decreases in Y: reverse
  }

  // ---- sonic gap from the series itself, Y in [-1.5r, 1.5r]; slopes by
  // high-precision finite differences in the parameter (Delta_V / Delta_Z is
  // 0/0 at the sonic point)
  detail::Curve gapc;
  double Zcut_hi, Zcut_lo;  // sonic-side / below-side merge cuts
  {
    auto series_zv = [&](const mpreal& Yq, mpreal& Zm, mpreal& Vm) {
      mpreal Uq(0);
      for (int i = int(ctx.U.size()) - 1; i >= 0; --i) Uq = Uq * Yq + ctx.U[i];
      ph.to_ZV(Yq, Uq, Zm, Vm);
    };
    mpreal hfd = ctx.r * mpreal(1e-18);
    int m = 41;
    for (int i = 0; i < m; ++i) {
      mpreal Yq = ctx.r * (mpreal(3) / 2) * (1 - mpreal(2 * i) / (m - 1));
      mpreal Zm, Vm, Zp, Vp, Zq, Vq;
      series_zv(Yq, Zq, Vq);
      series_zv(Yq + hfd, Zp, Vp);
      series_zv(Yq - hfd, Zm, Vm);
      gapc.push(double(Zq), double(Vq), double((Vp - Vm) / (Zp - Zm)));
    }
    mpreal Zm, Vm;
    series_zv(ctx.r * mpreal(5) / 4, Zm, Vm);
    Zcut_hi = double(Zm);
    series_zv(-ctx.r * mpreal(5) / 4, Zm, Vm);
    Zcut_lo = double(Zm);
  }

  // ---- below-sonic continuation: the desingularized leg covers the whole
  // stretch; the backward Y-leg retraces part of it and serves as an
  // independent cross-check
  detail::Curve below, backchk;
  for (const auto& nd : bs.ds.nodes) {
    double Zd, Vd;
    phd.to_ZV(nd[1], nd[2], Zd, Vd);
    below.push(Zd, Vd, slope_d(Zd, Vd));
  }
  for (const auto& nd : bs.yu_nodes) {
    double Zd, Vd;
    phd.to_ZV(nd[0], nd[1], Zd, Vd);
    backchk.push(Zd, Vd, slope_d(Zd, Vd));
  }

  // ---- far leg: linear in Z to 10, then logarithmic to Z_max with
  // checkpoints for the Aitken extrapolation of V_inf
  detail::Curve farc;
  gp.Z2 = below.n.back().Z;
  gp.V2 = below.n.back().V;
  double Vq[3] = {0, 0, 0};
  {
    auto rhs = [&phd](const double& Z, const std::array<double, 1>& y,
                      std::array<double, 1>& dy) {
      double dz = phd.delta_Z(Z, y[0]);
      if (dz == 0) return false;
      dy[0] = phd.delta_V(Z, y[0]) / dz;
      return true;
    };
    farc.push(gp.Z2, gp.V2, slope_d(gp.Z2, gp.V2));
    RK45<double, 1, decltype(rhs)> rk(rhs, gp.Z2, {gp.V2}, 1e-12,
                                      (1 - gp.Z2) / 8);
    double Zmid = std::min(10.0, zmax);
    while (rk.step(Zmid)) farc.push(rk.x, rk.y[0], slope_d(rk.x, rk.y[0]));
    farc.push(rk.x, rk.y[0], slope_d(rk.x, rk.y[0]));
    if (zmax > Zmid) {
      auto rhs_s = [&phd](const double& s, const std::array<double, 1>& y,
                          std::array<double, 1>& dy) {
        double Z = std::exp(s);
        double dz = phd.delta_Z(Z, y[0]);
        if (dz == 0) return false;
        dy[0] = Z * phd.delta_V(Z, y[0]) / dz;
        return true;
      };
      RK45<double, 1, decltype(rhs_s)> rks(rhs_s, std::log(Zmid), {rk.y[0]},
                                           1e-12, 0.01);
      double targets[3] = {std::log(zmax / 4), std::log(zmax / 2),
                           std::log(zmax)};
      for (int q = 0; q < 3; ++q) {
        while (rks.step(targets[q])) {
          double Zc = std::exp(rks.x);
          farc.push(Zc, rks.y[0], slope_d(Zc, rks.y[0]));
        }
        double Zc = std::exp(rks.x);
        farc.push(Zc, rks.y[0], slope_d(Zc, rks.y[0]));
        Vq[q] = rks.y[0];
      }
    }
  }

  // ---- overlap consistency between adjacent legs
  {
    double worst = 0;
    int cmp = 0;
    detail::overlap_check(origin, sonic, worst, cmp);
    detail::overlap_check(sonic, gapc, worst, cmp);
    detail::overlap_check(gapc, below, worst, cmp);
    detail::overlap_check(below, backchk, worst, cmp);
    gp.overlap_max_rel = cmp >= 4 ? worst : 1.0;
  }

  // ---- merge at fixed cuts inside the overlap windows
  double cut_os = 1.15 * delta_Y;
  for (const auto& nd : origin.n)
    if (nd.Z < cut_os) gp.nodes.push_back(nd);
  for (const auto& nd : sonic.n)
    if (nd.Z >= cut_os && nd.Z < Zcut_hi) gp.nodes.push_back(nd);
  for (const auto& nd : gapc.n)
    if (nd.Z >= Zcut_hi && nd.Z < Zcut_lo) gp.nodes.push_back(nd);
  for (const auto& nd : below.n)
    if (nd.Z >= Zcut_lo && nd.Z < gp.Z2) gp.nodes.push_back(nd);
  for (const auto& nd : farc.n)
    if (nd.Z >= gp.Z2) gp.nodes.push_back(nd);
  for (std::size_t i = 1; i < gp.nodes.size(); ++i)
    if (gp.nodes[i].Z <= gp.nodes[i - 1].Z)
      throw std::runtime_error("build_profile: merged curve not monotone");

  // ---- pointwise bounds and region membership
  gp.bounds_ok = true;
  for (const auto& nd : gp.nodes) {
    if (!(std::abs(nd.V) < 1) || (nd.Z > 0 && !(nd.V < nd.Z)))
      gp.bounds_ok = false;
  }
  gp.omega_far_ok = gp.Z2 > phd.Z_V(gp.V2) && phd.Z_V(gp.V2) > gp.V2 &&
                    gp.V2 > phd.Z_minus(gp.V2);
  gp.far_monotone = true;
  for (std::size_t i = 1; i < farc.n.size(); ++i)
    if (!(farc.n[i].V < farc.n[i - 1].V)) gp.far_monotone = false;

  // ---- W and Phi by panel-wise adaptive Simpson over the merged curve
  detail::Curve merged;
  merged.n = gp.nodes;
  JWFunc jw(pard, &merged);
  std::size_t N = gp.nodes.size();
  std::vector<double> lnW(N, 0.0);
  gp.W.assign(N, 1.0);
  gp.Phi.assign(N, 0.0);
  double pw = (pard.p - 1) / 2.0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    double a = gp.nodes[i].Z, b = gp.nodes[i + 1].Z, m = (a + b) / 2;
    double tol = std::max(1e-10 * (b - a) / zmax, 1e-15);
    double Ih = detail::adaptive_simpson(jw, a, m, tol / 2);
    double If = Ih + detail::adaptive_simpson(jw, m, b, tol / 2);
    lnW[i + 1] = lnW[i] + If;
    gp.W[i + 1] = std::exp(lnW[i + 1]);
    // quadratic model of ln W across the panel feeds the Phi integrand
    double la = lnW[i], lm = lnW[i] + Ih, lb = lnW[i + 1];
    auto phi_int = [&](double Z) {
      double t = (Z - a) / (b - a);
      double lw = la + t * (4 * lm - 3 * la - lb) + t * t * (2 * la + 2 * lb - 4 * lm);
      double V = merged.V(Z);
      double om = 1 - V * V;
      return V * std::exp(pw * lw) / (om * std::sqrt(om));
    };
    gp.Phi[i + 1] = gp.Phi[i] + detail::adaptive_simpson(phi_int, a, b, tol);
  }

  // ---- far-field diagnostics
  double wza_min = 1e308, wza_max = -1e308;
  for (std::size_t i = 0; i < N; ++i) {
    double Z = gp.nodes[i].Z;
    if (Z >= 100)
      gp.jw_asym_max =
          std::max(gp.jw_asym_max, Z * Z * std::abs(jw(Z) + jw.a / Z));
    if (Z >= 1e3 && Z <= zmax) {
      double wza = gp.W[i] * std::pow(Z, gp.a_exponent);
      wza_min = std::min(wza_min, wza);
      wza_max = std::max(wza_max, wza);
    }
  }
  gp.wza_drift = (wza_max - wza_min) / ((wza_max + wza_min) / 2);
  gp.W_inf = gp.W[N - 1] * std::pow(gp.nodes[N - 1].Z, gp.a_exponent);
  double den = Vq[0] + Vq[2] - 2 * Vq[1];
  gp.V_inf = den != 0 ? Vq[2] - (Vq[2] - Vq[1]) * (Vq[2] - Vq[1]) / den : Vq[2];

  gp.even_coeff_max = origin_even_fit(ctx.par);

  gp.ok = gp.bounds_ok && gp.far_monotone && gp.omega_far_ok &&
          gp.overlap_max_rel < 1e-6 && gp.wza_drift < 1e-3 &&
          gp.even_coeff_max < 1e-10 && gp.V_inf > -1 && gp.V_inf < 1;
  return gp;
}

}  // namespace implode
