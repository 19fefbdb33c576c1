#pragma once

// ODE integrators used by the shooting and profile stages.
//
// * rk45: adaptive embedded Dormand-Prince 5(4), templated on the scalar so
//   the same code runs in double or MPFR floats.  Tableau entries are built
//   from integer ratios, so nothing is lost at high precision.
// * TaylorYU: arbitrary-order Taylor-series stepper for the scalar sonic-plane
//   ODE  Delta_Y(Y,U) U' = Delta_U(Y,U).  The right-hand sides are polynomial,
//   so the local Taylor coefficients of the solution satisfy an O(M^2)
//   convolution recursion; per-step order M scales with the requested digits,
//   which keeps the cost polynomial even at 10^-150 tolerances.  This is what
//   makes the near-sonic legs (local exponent ~ kappa/Y) tractable.

#include "implode/params.hpp"
#include "implode/phase.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace implode {

template <class Real, std::size_t N, class F>
class RK45 {
 public:
  Real x;
  std::array<Real, N> y;
  Real x_prev;
  std::array<Real, N> y_prev;

  RK45(F f, Real x0, std::array<Real, N> y0, Real tol, Real h0)
      : x(x0), y(y0), x_prev(x0), y_prev(y0), f_(std::move(f)), tol_(tol), h_(h0) {}

  // advance one accepted step toward x_end (h clamped); returns false when
  // x_end has been reached
  bool step(const Real& x_end) {
    using std::abs;
    using std::pow;
    if (x == x_end) return false;
    Real dir = x_end > x ? Real(1) : Real(-1);
    if (h_ <= Real(0)) throw std::logic_error("rk45: nonpositive step");
    for (int attempt = 0; attempt < 200; ++attempt) {
      Real h = h_;
      bool clamped = false;
      if (abs(x_end - x) <= h) {
        h = abs(x_end - x);
        clamped = true;
      }
      std::array<Real, N> y5, y4;
      if (!try_step(h * dir, y5, y4)) {
        h_ = h_ / Real(4);
        continue;
      }
      Real err(0), scale(0);
      for (std::size_t i = 0; i < N; ++i) {
        err += abs(y5[i] - y4[i]);
        scale += abs(y[i]) + abs(y5[i]);
      }
      Real lim = tol_ * (Real(1) + scale / Real(2));
      if (err <= lim) {
        x_prev = x;
        y_prev = y;
        x = clamped ? x_end : x + h * dir;
        y = y5;
        Real grow = err > Real(0) ? Real(0.9) * pow(lim / err, Real(1) / Real(5)) : Real(4);
        if (grow > Real(4)) grow = Real(4);
        if (grow < Real(0.2)) grow = Real(0.2);
        h_ = h * grow;
        return !clamped;
      }
      h_ = h * Real(0.9) * pow(lim / err, Real(1) / Real(5));
      if (h_ < h / Real(10)) h_ = h / Real(10);
    }
    throw std::runtime_error("rk45: step size underflow");
  }

 private:
  F f_;
  Real tol_, h_;

  static Real frac(long n, long d) { return Real(n) / Real(d); }

  bool try_step(const Real& h, std::array<Real, N>& y5, std::array<Real, N>& y4) {
    // Dormand-Prince coefficients
    static const long ac[7][6][2] = {
        {},
        {{1, 5}},
        {{3, 40}, {9, 40}},
        {{44, 45}, {-56, 15}, {32, 9}},
        {{19372, 6561}, {-25360, 2187}, {64448, 6561}, {-212, 729}},
        {{9017, 3168}, {-355, 33}, {46732, 5247}, {49, 176}, {-5103, 18656}},
        {{35, 384}, {0, 1}, {500, 1113}, {125, 192}, {-2187, 6784}, {11, 84}}};
    static const long cc[7][2] = {{0, 1},  {1, 5},  {3, 10}, {4, 5},
                                  {8, 9},  {1, 1},  {1, 1}};
    static const long b5[7][2] = {{35, 384},    {0, 1},         {500, 1113}, {125, 192},
                                  {-2187, 6784}, {11, 84},      {0, 1}};
    static const long b4[7][2] = {{5179, 57600}, {0, 1},        {7571, 16695}, {393, 640},
                                  {-92097, 339200}, {187, 2100}, {1, 40}};
    std::array<std::array<Real, N>, 7> k;
    for (int s = 0; s < 7; ++s) {
      std::array<Real, N> ys = y;
      for (int j = 0; j < s; ++j) {
        Real a = frac(ac[s][j][0], ac[s][j][1]);
        if (a == Real(0)) continue;
        for (std::size_t i = 0; i < N; ++i) ys[i] += h * a * k[j][i];
      }
      if (!f_(x + h * frac(cc[s][0], cc[s][1]), ys, k[s])) return false;
    }
    y5 = y;
    y4 = y;
    for (int s = 0; s < 7; ++s)
      for (std::size_t i = 0; i < N; ++i) {
        y5[i] += h * frac(b5[s][0], b5[s][1]) * k[s][i];
        y4[i] += h * frac(b4[s][0], b4[s][1]) * k[s][i];
      }
    return true;
  }
};

// Taylor recurrence for U(Y) solving Delta_Y U' = Delta_U around (Y0, u0).
// Returns local coefficients u[0..M]; fails (returns false) if the leading
// divisor Delta_Y(Y0,u0) is zero (the caller is at a degenerate point).
template <class Real>
bool taylor_coeffs_YU(const Params<Real>& par, const Real& Y0, const Real& u0, int M,
                      std::vector<Real>& u) {
  const int d = par.d;
  // recentered polynomials: g(Y0+s) = (Y-1)f, phi(Y0+s)
  Real g0 = par.eps, g1 = par.A - par.eps, g2 = -par.A - par.B, g3 = par.B;
  Real gr0 = g0 + Y0 * (g1 + Y0 * (g2 + Y0 * g3));
  Real gr1 = g1 + Y0 * (Real(2) * g2 + Real(3) * Y0 * g3);
  Real gr2 = g2 + Real(3) * Y0 * g3;
  Real gr3 = g3;
  Real p0 = -par.eps, p1 = Real(d - 1) - par.A, p2 = par.B - Real(d - 1);
  Real pr0 = p0 + Y0 * (p1 + Y0 * p2);
  Real pr1 = p1 + Real(2) * Y0 * p2;
  Real pr2 = p2;
  Real qlin = Real(d) * Y0 - Real(1);  // q(Y0)

  u.assign(std::size_t(M) + 1, Real(0));
  u[0] = u0;
  std::vector<Real> Acf(std::size_t(M) + 1, Real(0)), Bcf(std::size_t(M) + 1, Real(0));
  std::vector<Real> usq(std::size_t(M) + 1, Real(0));
  usq[0] = u0 * u0;
  Acf[0] = qlin * u0 + gr0;
  if (Acf[0] == Real(0)) return false;
  Bcf[0] = Real(2) * usq[0] + Real(2) * pr0 * u0;

  for (int k = 0; k < M; ++k) {
    // u_{k+1} from  sum_j Acf_j (k+1-j) u_{k+1-j} = Bcf_k
    Real rhs = Bcf[k];
    for (int j = 1; j <= k; ++j) rhs -= Acf[j] * Real(k + 1 - j) * u[k + 1 - j];
    u[k + 1] = rhs / (Acf[0] * Real(k + 1));
    // refresh series pieces that involve u_{k+1}
    int m = k + 1;
    Real s(0);
    for (int i = 0; i <= m; ++i) s += u[i] * u[m - i];
    usq[m] = s;
    Acf[m] = qlin * u[m] + Real(d) * u[m - 1];
    if (m <= 3) Acf[m] += (m == 1 ? gr1 : m == 2 ? gr2 : gr3);
    Bcf[m] = Real(2) * usq[m] + Real(2) * pr0 * u[m];
    if (m >= 1) Bcf[m] += Real(2) * pr1 * u[m - 1];
    if (m >= 2) Bcf[m] += Real(2) * pr2 * u[m - 2];
  }
  return true;
}

// Taylor recurrence for the swapped form Y(U) solving Delta_U Y' = Delta_Y
// around (U0, y0), with t = U - U0.  Regular wherever Delta_U != 0, in
// particular through the vertical tangency Delta_Y = 0 that stops the Y
// parametrization below the sonic point.
template <class Real>
bool taylor_coeffs_UY(const Params<Real>& par, const Real& U0, const Real& y0, int M,
                      std::vector<Real>& y) {
  const int d = par.d;
  // f(Y) = -eps - A Y + B Y^2;  g(Y) = (Y-1) f(Y);  phi(Y) = f + (d-1)Y(1-Y)
  Real g0 = par.eps, g1 = par.A - par.eps, g2 = -par.A - par.B, g3 = par.B;
  Real p0 = -par.eps, p1 = Real(d - 1) - par.A, p2 = par.B - Real(d - 1);

  y.assign(std::size_t(M) + 1, Real(0));
  y[0] = y0;
  std::vector<Real> ysq(std::size_t(M) + 1, Real(0)), ycu(std::size_t(M) + 1, Real(0));
  std::vector<Real> D(std::size_t(M) + 1, Real(0));  // Delta_U(U0+t, y(t))
  std::vector<Real> E(std::size_t(M) + 1, Real(0));  // Delta_Y(U0+t, y(t))
  ysq[0] = y0 * y0;
  ycu[0] = ysq[0] * y0;
  auto refresh = [&](int m) {
    // phi_m and W_m = (U + phi)_m, then D_m = 2 (U0 W_m + W_{m-1})
    Real phim = p1 * y[m] + p2 * ysq[m] + (m == 0 ? p0 : Real(0));
    Real Wm = phim + (m == 0 ? U0 : m == 1 ? Real(1) : Real(0));
    D[m] = Real(2) * U0 * Wm;
    if (m >= 1) {
      Real phim1 = p1 * y[m - 1] + p2 * ysq[m - 1] + (m == 1 ? p0 : Real(0));
      Real Wm1 = phim1 + (m == 1 ? U0 : m == 2 ? Real(1) : Real(0));
      D[m] += Real(2) * Wm1;
    }
    // G_m = ((Y-1) f)_m, then E_m = d (U0 y_m + y_{m-1}) - [m==0] U0 - [m==1] + G_m
    Real Gm = g1 * y[m] + g2 * ysq[m] + g3 * ycu[m] + (m == 0 ? g0 : Real(0));
    E[m] = Real(d) * U0 * y[m] + Gm;
    if (m >= 1) E[m] += Real(d) * y[m - 1];
    if (m == 0) E[m] -= U0;
    if (m == 1) E[m] -= Real(1);
  };
  refresh(0);
  if (D[0] == Real(0)) return false;
  for (int k = 0; k < M; ++k) {
    Real rhs = E[k];
    for (int j = 1; j <= k; ++j) rhs -= D[j] * Real(k + 1 - j) * y[k + 1 - j];
    y[k + 1] = rhs / (D[0] * Real(k + 1));
    int m = k + 1;
    Real s2(0);
    for (int i = 0; i <= m; ++i) s2 += y[i] * y[m - i];
    ysq[m] = s2;
    Real s3(0);
    for (int i = 0; i <= m; ++i) s3 += ysq[i] * y[m - i];
    ycu[m] = s3;
    refresh(m);
  }
  return true;
}

// One adaptive Taylor step.  `digits` drives both the order and the accepted
// truncation level; returns the new (Y,U) and the step actually taken.
template <class Real>
struct TaylorStepper {
  Params<Real> par;
  int digits;
  int order;

  TaylorStepper(Params<Real> p, int digits_)
      : par(std::move(p)), digits(digits_), order(std::max(24, int(digits_ * 13 / 10))) {}

  // estimate of the local convergence radius from the series tail
  static Real radius_estimate(const std::vector<Real>& u) {
    using std::abs;
    using std::pow;
    Real best(0);
    int M = int(u.size()) - 1;
    for (int m = M; m > M - 4 && m > 0; --m) {
      if (u[m] == Real(0)) continue;
      Real r = pow(abs(u[m]), Real(-1) / Real(m));
      if (best == Real(0) || r < best) best = r;
    }
    return best == Real(0) ? Real(1) : best;
  }

  // advance toward Y_end; returns the signed step taken; (Y,U) updated in place;
  // `u` holds the local series afterwards (usable for event refinement)
  Real step(Real& Y, Real& U, const Real& Y_end, std::vector<Real>& u) {
    using std::abs;
    using std::pow;
    if (!taylor_coeffs_YU(par, Y, U, order, u))
      throw std::runtime_error("taylor step at degenerate point");
    Real rho = radius_estimate(u);
    // pick h with |u_M| h^M <= 10^-digits * scale
    Real scale = abs(u[0]) + Real(1);
    Real tol = scale * pow(Real(10), Real(-digits));
    Real h;
    if (u[order] == Real(0)) h = rho / Real(2);
    else h = pow(tol / abs(u[order]), Real(1) / Real(order));
    if (h > rho * Real(3) / Real(4)) h = rho * Real(3) / Real(4);
    bool last = abs(Y_end - Y) <= h;
    if (last) h = abs(Y_end - Y);
    Real hs = Y_end > Y ? h : -h;
    Real val(0);
    for (int i = order; i >= 0; --i) val = val * hs + u[i];
    Y = last ? Y_end : Y + hs;
    U = val;
    return hs;
  }
};

// Same adaptive stepping for the swapped form Y(U).
template <class Real>
struct TaylorStepperUY {
  Params<Real> par;
  int digits;
  int order;

  TaylorStepperUY(Params<Real> p, int digits_)
      : par(std::move(p)), digits(digits_), order(std::max(24, int(digits_ * 13 / 10))) {}

  // advance toward U_end; (U,Y) updated in place; `y` holds the local series
  Real step(Real& U, Real& Y, const Real& U_end, std::vector<Real>& y) {
    using std::abs;
    using std::pow;
    if (!taylor_coeffs_UY(par, U, Y, order, y))
      throw std::runtime_error("taylor step at degenerate point (Delta_U = 0)");
    Real rho = TaylorStepper<Real>::radius_estimate(y);
    Real scale = abs(y[0]) + Real(1);
    Real tol = scale * pow(Real(10), Real(-digits));
    Real h;
    if (y[order] == Real(0)) h = rho / Real(2);
    else h = pow(tol / abs(y[order]), Real(1) / Real(order));
    if (h > rho * Real(3) / Real(4)) h = rho * Real(3) / Real(4);
    bool last = abs(U_end - U) <= h;
    if (last) h = abs(U_end - U);
    Real hs = U_end > U ? h : -h;
    Real val(0);
    for (int i = order; i >= 0; --i) val = val * hs + y[i];
    U = last ? U_end : U + hs;
    Y = val;
    return hs;
  }
};

}  // namespace implode
