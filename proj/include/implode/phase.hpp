#pragma once

// The two phase planes of the self-similar flow and the maps between them:
//   (Z,V): slowness / velocity plane of the original autonomous system,
//   (Y,U): the plane in which the sonic point sits at the origin.
// All right-hand sides are polynomial / rational; root curves are provided in
// factored form.

#include "implode/params.hpp"

#include <cmath>

namespace implode {

template <class Real>
struct Phase {
  Params<Real> par;

  explicit Phase(Params<Real> p) : par(std::move(p)) {}

  // ---- (Z,V) plane ----
  Real delta_V(const Real& Z, const Real& V) const {
    const Real one(1);
    return Real(par.d - 1) * (one - V * V) *
           ((one - V * V) * Z / (par.gamma + one) - V * (one - V * Z));
  }
  Real delta_Z(const Real& Z, const Real& V) const {
    Real a = Real(1) - Z * V, b = V - Z;
    return Z * (a * a - par.ell * b * b);
  }

  // roots of delta_V and delta_Z in Z for fixed V
  Real Z_V(const Real& V) const {
    return (Real(1) + par.gamma) * V / (Real(1) + par.gamma * V * V);
  }
  Real Z_plus(const Real& V) const {
    using std::sqrt;
    Real sl = sqrt(par.ell);
    return (sl * V + Real(1)) / (V + sl);
  }
  Real Z_minus(const Real& V) const {
    using std::sqrt;
    Real sl = sqrt(par.ell);
    return (Real(1) - sl * V) / (V - sl);
  }

  // ---- (Y,U) plane ----
  Real f(const Real& Y) const { return -par.eps - par.A * Y + par.B * Y * Y; }
  Real fprime(const Real& Y) const { return -par.A + Real(2) * par.B * Y; }
  Real phi(const Real& Y) const { return f(Y) + Real(par.d - 1) * Y * (Real(1) - Y); }
  Real delta_U(const Real& Y, const Real& U) const { return Real(2) * U * (U + phi(Y)); }
  Real delta_Y(const Real& Y, const Real& U) const {
    return (Real(par.d) * Y - Real(1)) * U + (Y - Real(1)) * f(Y);
  }

  // root curves in U for fixed Y
  Real U_DY(const Real& Y) const {
    return -(Y - Real(1)) * f(Y) / (Real(par.d) * Y - Real(1));
  }
  Real U_DU(const Real& Y) const { return -phi(Y); }
  Real U_g(const Real& Y) const {
    Real a = Y + par.gamma, b = Real(1) - Y;
    return par.ell * a * a - b * b;
  }

  // ---- maps ----
  // (Z,V) -> (Y,U)
  void to_YU(const Real& Z, const Real& V, Real& Y, Real& U) const {
    Real one(1), gp1 = par.gamma + one;
    Real om = one - V * V;
    Y = (om * Z - gp1 * V * (one - V * Z)) / (Z * om);
    Real t = gp1 * (one - V * Z) / (om * Z);
    U = t * t * om;
  }
  // (Y,U) -> (Z,V); valid branch for Y > -gamma (curlyV < curlyZ)
  void to_ZV(const Real& Y, const Real& U, Real& Z, Real& V) const {
    using std::sqrt;
    Real one(1);
    Real s = sqrt(U + (one - Y) * (one - Y));
    Z = s / (U / (one + par.gamma) + one - Y);
    V = (one - Y) / s;
  }

  // delta_Z pushed through the map, up to the positive factor
  // (U + (1-Y)^2)(U/(1+gamma) + 1-Y)^2 / (Z U^2): sign equals sign of U - U_g.
  Real delta_Z_sign_factor(const Real& Y, const Real& U) const { return U - U_g(Y); }
};

}  // namespace implode
