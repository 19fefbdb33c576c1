#pragma once

// kappa-shooting across the sonic point.
//
// For gamma slightly above the limit value, the smooth branch leaving the
// sonic point is integrated from the series handoff radius r toward
// Y_F = Y(delta_Y), inside the barrier tube B_u < U < B_l.  The origin leg
// V_F(Z) is integrated in the (Z,V) plane and mapped to (Y_F, U_F).  The
// mismatch g(kappa) = U_ext(Y_F) - U_F classifies each kappa: an exit through
// the lower tube edge means g < 0 (U_ext follows B_u), through the upper edge
// g > 0.
//
// The sonic point is an unstable node, so integrator noise injected near the
// handoff radius is amplified along the leg; the cumulative variational
// growth, tabulated once in double along the tube midline, tops out around
// 10^45 for the parameters of interest.  Doubles therefore exit the tube
// through truncation noise long before delta_Y and carry no kappa
// information, while MPFR floats with ~45 digits of headroom track the true
// branch all the way.  The branch itself depends smoothly and mildly on kappa
// (dU/dkappa = O(10) at the far end), so the whole search runs at one fixed
// precision: bisection on the genuine exit side, switching to secant steps
// once both bracket ends reach Y_F inside the tube.

#include "implode/barrier.hpp"
#include "implode/integrate.hpp"
#include "implode/params.hpp"
#include "implode/phase.hpp"
#include "implode/series.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ios>
#include <string>
#include <vector>

namespace implode {

using mpreal =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

enum class ExitClass { None, Lower, Upper };

struct ShootOptions {
  int n = 101;               // kappa bracket (n, n+1), n odd
  double delta_Y = 0.0;      // 0: pick from the grid {0.2, 0.1, 0.05, ...}
  double rk_tol = 1e-12;     // double-phase integrator tolerance
  double g_tol = 1e-8;
  double origin_tol = 1e-18; // origin-leg tolerance in the MPFR phase
  int scan_points = 9;
  double r_frac = 0.45;      // series handoff radius as a fraction of the
                             // estimated convergence radius
  int extra_digits = 0;      // headroom on top of the measured requirement
  int max_iters = 200;
  bool verbose = false;
};

template <class Real>
struct GContext {
  Params<Real> par;
  Phase<Real> ph;
  Barriers<Real> bar;
  std::vector<Real> U;  // sonic series coefficients
  Real r;               // handoff radius
  Real U_r;             // series value at r
  int digits;

  GContext(const Real& gamma, int digits_, double r_frac, int min_order = 90)
      : par(params_from_gamma(gamma)), ph(par), bar(), U(), digits(digits_) {
    using std::ceil;
    using std::log;
    int M = std::max(min_order,
                     int(double(digits_) * 2.302585 / -std::log(r_frac)) + 40);
    auto S = compute_sonic_series(par, M);
    bar = build_barriers(par, S.U[2]);
    U = std::move(S.U);
    Real rho = TaylorStepper<Real>::radius_estimate(U);
    r = Real(r_frac) * rho;
    Real v(0);
    for (int i = int(U.size()) - 1; i >= 0; --i) v = v * r + U[i];
    U_r = v;
  }
};

template <class Real>
struct OriginLeg {
  Real V_F, Y_F, U_F;
  std::vector<std::array<double, 2>> nodes;  // (Z, V)
};

// V1, V3: leading odd Taylor coefficients of the smooth origin branch
template <class Real>
void origin_coeffs(const Params<Real>& par, Real& V1, Real& V3) {
  Real gp1 = par.gamma + Real(1);
  V1 = Real(par.d - 1) / (Real(par.d) * gp1);
  Real V1sq = V1 * V1, V1cu = V1sq * V1;
  Real inner = Real(par.d - 1) * (Real(-2) / gp1 * V1sq + V1cu + V1sq) +
               V1 * (Real(2) * V1 + par.ell * (V1 - Real(1)) * (V1 - Real(1)));
  V3 = inner / Real(par.d + 2);
}

template <class Real>
OriginLeg<Real> origin_leg(const Phase<Real>& ph, const Real& delta_Y, const Real& tol) {
  Real V1, V3;
  origin_coeffs(ph.par, V1, V3);
  Real Z0 = delta_Y / Real(64);
  Real V0 = V1 * Z0 + V3 * Z0 * Z0 * Z0;
  auto rhs = [&ph](const Real& Z, const std::array<Real, 1>& y, std::array<Real, 1>& dy) {
    Real dz = ph.delta_Z(Z, y[0]);
    if (dz == Real(0)) return false;
    dy[0] = ph.delta_V(Z, y[0]) / dz;
    return true;
  };
  RK45<Real, 1, decltype(rhs)> rk(rhs, Z0, {V0}, tol, Z0 / Real(4));
  OriginLeg<Real> L;
  L.nodes.push_back({double(Z0), double(V0)});
  while (rk.step(delta_Y)) L.nodes.push_back({double(rk.x), double(rk.y[0])});
  L.nodes.push_back({double(rk.x), double(rk.y[0])});
  L.V_F = rk.y[0];
  ph.to_YU(delta_Y, L.V_F, L.Y_F, L.U_F);
  return L;
}

template <class Real>
struct SonicLeg {
  ExitClass exit = ExitClass::None;
  bool reached = false;  // integrated all the way to Y_F
  Real Y_end, U_end;
  double Y_exit = 0;
  double lambda_log = 0;   // integral of d(dU/dY)/dU along the trajectory
  double max_defect = 0;   // max relative ODE residual of the step polynomials
  std::vector<std::array<Real, 2>> nodes;  // (Y, U), kept at working precision
};

template <class Real>
ExitClass tube_exit(const GContext<Real>& ctx, const Real& Y, const Real& U) {
  Real bu = ctx.bar.Bu.eval(Y);
  if (U < bu) return ExitClass::Lower;
  Real q = ctx.bar.q.eval(Y);
  if (q < Real(0)) {  // below the pole of B_l
    Real bl = ctx.bar.N.eval(Y) / q;
    if (U > bl) return ExitClass::Upper;
  }
  return ExitClass::None;
}

// double-phase sonic leg: embedded RK45 with the variational log-growth
// integrated alongside
template <class Real>
SonicLeg<Real> sonic_leg_rk(const GContext<Real>& ctx, const Real& Y_F, const Real& tol) {
  const auto& ph = ctx.ph;
  auto rhs = [&ph](const Real& Y, const std::array<Real, 2>& y, std::array<Real, 2>& dy) {
    Real dYv = ph.delta_Y(Y, y[0]);
    if (dYv == Real(0)) return false;
    Real dUv = ph.delta_U(Y, y[0]);
    dy[0] = dUv / dYv;
    // d/dU (Delta_U/Delta_Y) = (dU'_U Delta_Y - Delta_U dY'_U) / Delta_Y^2
    Real pU = Real(4) * y[0] + Real(2) * ph.phi(Y);
    Real pY = Real(ph.par.d) * Y - Real(1);
    dy[1] = (pU * dYv - dUv * pY) / (dYv * dYv);
    return true;
  };
  SonicLeg<Real> leg;
  RK45<Real, 2, decltype(rhs)> rk(rhs, ctx.r, {ctx.U_r, Real(0)}, tol, ctx.r / Real(8));
  leg.nodes.push_back({ctx.r, ctx.U_r});
  bool more = true;
  while (more) {
    more = rk.step(Y_F);
    leg.nodes.push_back({rk.x, rk.y[0]});
    ExitClass ec = tube_exit(ctx, rk.x, rk.y[0]);
    if (ec != ExitClass::None) {
      leg.exit = ec;
      leg.Y_exit = double(rk.x);
      break;
    }
  }
  leg.reached = (leg.exit == ExitClass::None && rk.x == Y_F);
  leg.Y_end = rk.x;
  leg.U_end = rk.y[0];
  leg.lambda_log = double(rk.y[1]);
  return leg;
}

// Relative defect of a local Taylor solution polynomial at an interior point:
// the step's interpolant P is the numerical solution, so |P'(t) - F(Y0+t,
// P(t))| is a true pointwise residual of the governing ODE.
template <class Real>
double taylor_step_defect(const Phase<Real>& ph, const Real& Y0,
                          const std::vector<Real>& u, const Real& h) {
  using std::abs;
  double worst = 0;
  for (int num = 1; num <= 3; ++num) {
    Real t = h * Real(num) / Real(4);
    Real Pval(0), Pder(0);
    for (int i = int(u.size()) - 1; i >= 0; --i) {
      Pval = Pval * t + u[i];
      if (i >= 1) Pder = Pder * t + u[i] * Real(i);
    }
    Real Yt = Y0 + t;
    Real dYv = ph.delta_Y(Yt, Pval);
    if (dYv == Real(0)) continue;
    Real F = ph.delta_U(Yt, Pval) / dYv;
    double rel = double(abs(Pder - F) / (abs(F) + Real(1)));
    worst = std::max(worst, rel);
  }
  return worst;
}

// high-precision sonic leg: Taylor-series continuation
inline SonicLeg<mpreal> sonic_leg_taylor(const GContext<mpreal>& ctx, const mpreal& Y_F) {
  SonicLeg<mpreal> leg;
  TaylorStepper<mpreal> ts(ctx.par, ctx.digits);
  mpreal Y = ctx.r, U = ctx.U_r;
  std::vector<mpreal> u;
  leg.nodes.push_back({Y, U});
  int steps = 0;
  while (Y != Y_F && ++steps < 100000) {
    mpreal Y0 = Y;
    mpreal h = ts.step(Y, U, Y_F, u);
    leg.max_defect =
        std::max(leg.max_defect, taylor_step_defect(ctx.ph, Y0, u, h));
    leg.nodes.push_back({Y, U});
    ExitClass ec = tube_exit(ctx, Y, U);
    if (ec != ExitClass::None) {
      leg.exit = ec;
      leg.Y_exit = double(Y);
      break;
    }
  }
  leg.reached = (leg.exit == ExitClass::None && Y == Y_F);
  leg.Y_end = Y;
  leg.U_end = U;
  return leg;
}

template <class Real>
struct GEval {
  Real g{0};
  ExitClass exit = ExitClass::None;
  bool numeric = false;  // trajectory reached Y_F inside the tube
  OriginLeg<Real> origin;
  SonicLeg<Real> sonic;

  int sign() const {
    if (exit == ExitClass::Lower) return -1;
    if (exit == ExitClass::Upper) return +1;
    return g < Real(0) ? -1 : +1;
  }
};

template <class Real>
GEval<Real> eval_g(const GContext<Real>& ctx, const Real& delta_Y, double rk_tol,
                   bool use_taylor, double origin_tol = 1e-18) {
  GEval<Real> ev;
  // the origin leg is stable (perturbations decay like (Z1/Z2)^(d-1)); a fixed
  // tight tolerance is enough even for the high-precision phase
  Real otol = use_taylor ? Real(origin_tol) : Real(rk_tol);
  ev.origin = origin_leg(ctx.ph, delta_Y, otol);
  if constexpr (std::is_same_v<Real, mpreal>) {
    if (use_taylor) ev.sonic = sonic_leg_taylor(ctx, ev.origin.Y_F);
    else ev.sonic = sonic_leg_rk(ctx, ev.origin.Y_F, Real(rk_tol));
  } else {
    ev.sonic = sonic_leg_rk(ctx, ev.origin.Y_F, Real(rk_tol));
  }
  ev.exit = ev.sonic.exit;
  if (ev.sonic.reached) {
    ev.numeric = true;
    ev.g = ev.sonic.U_end - ev.origin.U_F;
  } else if (ev.exit == ExitClass::Lower) {
    ev.g = ctx.bar.Bu.eval(ev.origin.Y_F) - ev.origin.U_F;  // follows B_u
  } else {
    Real q = ctx.bar.q.eval(ev.origin.Y_F);
    ev.g = ctx.bar.N.eval(ev.origin.Y_F) / q - ev.origin.U_F;  // follows B_l
  }
  return ev;
}

// ---- driver ----

struct ShootResult {
  bool found = false;
  int n = 0;
  double kappa_star = 0;
  std::string kappa_star_str;  // full-precision decimal
  std::string gamma_str;
  double g_final = 0;
  double delta_Y = 0;
  double Y_F = 0, U_F = 0;
  int digits_used = 0;
  int mp_iterations = 0;
  double amplification_log10 = 0;
  std::vector<std::array<double, 2>> sonic_nodes;   // (Y, U)
  std::vector<std::array<double, 2>> origin_nodes;  // (Z, V)
  double max_ode_residual = 0;      // per-interval replay mismatch, relative
  double slope_consistency = 0;     // chain-rule mismatch at the glue point
  bool dZdY_negative = false;
  bool nodes_V_ok = false;          // V in (-1,1) and V < Z at every node
  double conditioning_min = 0;      // min |n lam- - lam+| / lam+ over the series
};

inline double pick_delta_Y(double gamma_d) {
  // first grid value whose image Y_F lands strictly inside (0.2, Y_O)
  auto par = params_from_gamma(gamma_d);
  Phase<double> ph(par);
  for (double dY : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
    double V1, V3;
    origin_coeffs(par, V1, V3);
    double V = V1 * dY + V3 * dY * dY * dY;  // good enough for the screen
    double Y, U;
    ph.to_YU(dY, V, Y, U);
    if (Y > 0.2 && Y < par.Y_O - 1e-6) return dY;
  }
  throw std::runtime_error("pick_delta_Y: no grid value admissible");
}

// replay each stored interval with a single classical RK4 step of the given
// slope field and compare against the stored endpoint (for the stable legs,
// where a double-precision replay is meaningful)
template <class F>
inline double replay_residual(F f, const std::vector<std::array<double, 2>>& nodes) {
  double worst = 0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    double x0 = nodes[i - 1][0], y0 = nodes[i - 1][1];
    double h = nodes[i][0] - x0;
    if (h == 0) continue;
    double k1 = f(x0, y0);
    double k2 = f(x0 + h / 2, y0 + h / 2 * k1);
    double k3 = f(x0 + h / 2, y0 + h / 2 * k2);
    double k4 = f(x0 + h, y0 + h * k3);
    double y1 = y0 + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    double rel = std::abs(y1 - nodes[i][1]) / (std::abs(nodes[i][1]) + 1);
    worst = std::max(worst, rel);
  }
  return worst;
}

namespace detail {

// Cumulative log10 growth of transverse perturbations along the tube midline,
// tabulated once in double.  Used to size the MPFR working precision: a
// perturbation (rounding or kappa offset) injected near the handoff radius is
// amplified by about 10^L10(Y) by the time the trajectory reaches Y.
struct AmpTable {
  std::vector<double> Y, L10;

  double at(double y) const {
    if (Y.empty() || y <= Y.front()) return 0;
    if (y >= Y.back()) return L10.back();
    std::size_t i = std::upper_bound(Y.begin(), Y.end(), y) - Y.begin();
    double t = (y - Y[i - 1]) / (Y[i] - Y[i - 1]);
    return L10[i - 1] + t * (L10[i] - L10[i - 1]);
  }
};

inline AmpTable build_amp_table(const GContext<double>& ctx, double Y_F) {
  const auto& ph = ctx.ph;
  auto h = [&](double Y) {
    double bu = ctx.bar.Bu.eval(Y);
    double bl = ctx.bar.N.eval(Y) / ctx.bar.q.eval(Y);
    double U = 0.5 * (bu + bl);
    double dYv = ph.delta_Y(Y, U), dUv = ph.delta_U(Y, U);
    double pU = 4 * U + 2 * ph.phi(Y);
    double pY = ph.par.d * Y - 1;
    return (pU * dYv - dUv * pY) / (dYv * dYv);
  };
  AmpTable T;
  const int nn = 4000;
  double a = ctx.r, b = Y_F;
  double la = std::log(a), lb = std::log(b);
  double prevY = a, prevH = h(a), acc = 0;
  T.Y.push_back(a);
  T.L10.push_back(0);
  for (int i = 1; i <= nn; ++i) {
    double y = std::exp(la + (lb - la) * i / nn);
    double hy = h(y);
    acc += 0.5 * (prevH + hy) * (y - prevY);
    T.Y.push_back(y);
    T.L10.push_back(acc / 2.302585092994046);
    prevY = y;
    prevH = hy;
  }
  return T;
}

}  // namespace detail

struct Classification {
  int sgn = 0;
  bool numeric = false;  // reached Y_F inside the tube
  double g = 0;
  double Y_exit = 0;
};

// one evaluation of kappa at the given working precision
inline Classification classify_mp(const std::string& kappa_str, int digits, double delta_Y,
                                  const ShootOptions& opt, GEval<mpreal>* keep = nullptr,
                                  std::string* gamma_out = nullptr) {
  Classification c;
  mpreal::default_precision(digits);
  mpreal km(kappa_str);
  mpreal gamma =
      gamma_of_kappa(km, 50.0, boost::multiprecision::pow(mpreal(10), -(digits - 5)));
  GContext<mpreal> ctx(gamma, digits, opt.r_frac);
  GEval<mpreal> ev = eval_g(ctx, mpreal(delta_Y), 0.0, true, opt.origin_tol);
  c.numeric = ev.numeric;
  c.g = double(ev.g);
  c.sgn = ev.sign();
  c.Y_exit = ev.sonic.Y_exit;
  if (gamma_out) *gamma_out = gamma.str(0, std::ios_base::scientific);
  if (keep) *keep = std::move(ev);
  return c;
}

inline ShootResult find_kappa(const ShootOptions& opt = {}) {
  ShootResult res;
  auto fmt = [](double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return std::string(b);
  };

  for (int n : {opt.n, opt.n + 2, opt.n + 4}) {
    double kl = n + 1e-4, kh = n + 1 - 1e-4;
    double gm = gamma_of_kappa(0.5 * (kl + kh), 50.0, 1e-15);
    double delta_Y = opt.delta_Y > 0 ? opt.delta_Y : pick_delta_Y(gm);

    // size the working precision from the measured variational growth along
    // the tube midline, with headroom for the g tolerance
    int D;
    detail::AmpTable amp;
    {
      GContext<double> ctxd(gm, 16, opt.r_frac);
      OriginLeg<double> ol = origin_leg(ctxd.ph, delta_Y, 1e-12);
      amp = detail::build_amp_table(ctxd, ol.Y_F);
      res.amplification_log10 = amp.L10.back();
      D = std::max(60, int(amp.L10.back()) + 45) + opt.extra_digits;
    }

    auto classify = [&](const std::string& ks, GEval<mpreal>* keep, std::string* gs) {
      return classify_mp(ks, D, delta_Y, opt, keep, gs);
    };

    // scan for an exit-side flip
    int m = std::max(2, opt.scan_points);
    std::vector<double> ks(m);
    std::vector<int> sg(m, 0);
    std::vector<Classification> cs(m);
    int flip = -1;
    for (int i = 0; i < m && flip < 0; ++i) {
      ks[i] = kl + (kh - kl) * i / (m - 1);
      cs[i] = classify(fmt(ks[i]), nullptr, nullptr);
      sg[i] = cs[i].sgn;
      if (i > 0 && sg[i] != sg[i - 1]) flip = i;
      if (opt.verbose)
        std::fprintf(stderr, "scan kappa %.6f sign %+d numeric %d exit %.4g\n", ks[i],
                     cs[i].sgn, int(cs[i].numeric), cs[i].Y_exit);
    }
    if (flip < 0) continue;

    // bracket endpoints as decimal strings so reseeding at a changed precision
    // round-trips exactly; secant steps once both ends carry a numeric g
    std::string lo_s = fmt(ks[flip - 1]), hi_s = fmt(ks[flip]);
    int s_lo = sg[flip - 1];
    Classification c_lo = cs[flip - 1], c_hi = cs[flip];

    while (res.mp_iterations < opt.max_iters) {
      mpreal::default_precision(D + 12);
      mpreal lo(lo_s), hi(hi_s), w = hi - lo;
      mpreal km = (lo + hi) / 2;
      if (c_lo.numeric && c_hi.numeric && c_lo.g != c_hi.g) {
        mpreal ks = lo - mpreal(c_lo.g) * w / (mpreal(c_hi.g) - mpreal(c_lo.g));
        // keep secant proposals strictly interior
        if (ks > lo + w / 1024 && ks < hi - w / 1024) km = ks;
      }
      std::string km_s = km.str(0, std::ios_base::scientific);
      GEval<mpreal> ev;
      std::string gs;
      Classification c = classify(km_s, &ev, &gs);
      ++res.mp_iterations;
      if (opt.verbose)
        std::fprintf(stderr,
                     "it %4d digits %4d width %.3e sign %+d numeric %d g %.3e exit %.4g\n",
                     res.mp_iterations, D, double(w), c.sgn, int(c.numeric), c.g,
                     c.Y_exit);
      if (c.numeric && std::abs(c.g) < opt.g_tol) {
        res.found = true;
        res.n = n;
        res.kappa_star = std::stod(km_s);
        res.kappa_star_str = km_s;
        res.gamma_str = gs;
        res.g_final = c.g;
        res.delta_Y = delta_Y;
        res.Y_F = double(ev.origin.Y_F);
        res.U_F = double(ev.origin.U_F);
        res.digits_used = D;
        for (const auto& nd : ev.sonic.nodes)
          res.sonic_nodes.push_back({double(nd[0]), double(nd[1])});
        res.origin_nodes = ev.origin.nodes;

        mpreal::default_precision(D);
        mpreal gval(gs);
        Params<mpreal> parm = params_from_gamma(gval);
        Phase<mpreal> phm(parm);

        // residuals: pointwise defect of the Taylor interpolants on the
        // unstable leg, cross-discretization replay on the stable leg
        double r_sonic = ev.sonic.max_defect;
        auto fzv = [&](double Z, double V) {
          Phase<double> phd(params_from_gamma(std::stod(gs)));
          return phd.delta_V(Z, V) / phd.delta_Z(Z, V);
        };
        double r_origin = replay_residual(fzv, res.origin_nodes);
        res.max_ode_residual = std::max(r_sonic, r_origin);

        // node-wise phase-plane sanity: V in (-1,1), V < Z
        res.nodes_V_ok = true;
        for (const auto& nd : ev.sonic.nodes) {
          mpreal Z, V;
          phm.to_ZV(nd[0], nd[1], Z, V);
          if (!(V > mpreal(-1) && V < mpreal(1) && V < Z)) res.nodes_V_ok = false;
        }
        for (const auto& zv : res.origin_nodes)
          if (!(zv[1] > -1 && zv[1] < 1 && zv[1] < zv[0])) res.nodes_V_ok = false;

        // chain-rule slope match at the glue point, and dZ/dY < 0 there
        {
          mpreal Z = mpreal(delta_Y), V = ev.origin.V_F;
          mpreal h = mpreal(1) / boost::multiprecision::pow(mpreal(2), 40);
          mpreal dVdZ = phm.delta_V(Z, V) / phm.delta_Z(Z, V);
          mpreal Y1, U1, Y2, U2;
          phm.to_YU(Z - h, V - h * dVdZ, Y1, U1);
          phm.to_YU(Z + h, V + h * dVdZ, Y2, U2);
          mpreal slope_zv = (U2 - U1) / (Y2 - Y1);
          mpreal slope_yu = phm.delta_U(ev.origin.Y_F, ev.origin.U_F) /
                            phm.delta_Y(ev.origin.Y_F, ev.origin.U_F);
          res.slope_consistency =
              double(boost::multiprecision::abs(slope_zv - slope_yu) /
                     (boost::multiprecision::abs(slope_yu) + mpreal(1)));
          res.dZdY_negative = double((Y2 - Y1) / (2 * h)) < 0;
        }
        {
          auto S = compute_sonic_series(params_from_gamma(std::stod(gs)), 90);
          res.conditioning_min = S.min_divisor_rel;
        }
        return res;
      }
      if (c.sgn == s_lo) {
        lo_s = km_s;
        c_lo = c;
      } else {
        hi_s = km_s;
        c_hi = c;
      }
    }
    break;  // bracket existed but refinement exhausted the iteration budget
  }
  return res;
}

}  // namespace implode
