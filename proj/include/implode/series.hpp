#pragma once

// Taylor expansion of the sonic-point solution branch of
//     Delta_Y(Y,U) U' = Delta_U(Y,U)
// with
//     Delta_U = 2U^2 + 2 phi(Y) U,        phi = f + (d-1)Y(1-Y),
//     Delta_Y = (dY - 1) U + (Y-1) f(Y),  f = -eps - A Y + B Y^2.
//
// Coefficients U_n are produced by the top-order linear solve
//     (n lam- - lam+) U_n = Delta_U_n^0 - sum_{2<=i<=n} (n+1-i) U_{n+1-i} Delta_Y_i^0
// where the ^0 quantities are evaluated with U_n set to zero, then patched by
// the exact U_n contribution (c1 U_n into Delta_U_n, c2 U_n into Delta_Y_n).
// Everything is a clean O(N^2) pass; over Q[sqrt(15)] it is exact.

#include "implode/params.hpp"
#include "implode/rational.hpp"
#include "implode/surd.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace implode {

inline std::vector<Rational> catalan_numbers(std::size_t n_max) {
  std::vector<Rational> c(n_max + 1);
  c[0] = 1;
  for (std::size_t n = 0; n < n_max; ++n) c[n + 1] = c[n] * Rational(4 * n + 2) / Rational(n + 2);
  return c;
}

template <class K>
struct SonicSeries {
  Params<K> par;
  std::vector<K> U;        // U_0 .. U_N
  std::vector<K> Uhat;     // U_n / catalan_n
  std::vector<K> DU, DY;   // Delta_U,n / Delta_Y,n along the solution
  std::vector<K> Usq;      // (U^2)_n
  std::vector<K> cU;       // c_{U,j} = 4 U_j + 2 phi_j  (U-derivative coefficients)
  std::vector<K> e;        // e_l = -(l+1)U_{l+1} + d l U_l - c_{U,l},  l = 0..N-1
  std::vector<Rational> cat;
  K phi[3];
  K g[4];                  // (Y-1) f(Y)
  double min_divisor_rel = 1e300;  // conditioning of the top-order solve

  int order() const { return int(U.size()) - 1; }
};

namespace detail {
template <class K>
K divide_exact(const K& num, const K& den) { return num / den; }
}  // namespace detail

template <class K>
SonicSeries<K> compute_sonic_series(const Params<K>& par, int N) {
  if (N < 1) throw std::invalid_argument("compute_sonic_series: N >= 1");
  SonicSeries<K> S;
  S.par = par;
  const int d = par.d;
  const K& eps = par.eps;
  const K& A = par.A;
  const K& B = par.B;

  // phi = -eps + (d-1-A) Y + (B-d+1) Y^2
  S.phi[0] = -eps;
  S.phi[1] = K(d - 1) - A;
  S.phi[2] = B - K(d - 1);
  // (Y-1) f = eps + (A-eps) Y + (-A-B) Y^2 + B Y^3
  S.g[0] = eps;
  S.g[1] = A - eps;
  S.g[2] = -A - B;
  S.g[3] = B;

  auto& U = S.U;
  auto& DU = S.DU;
  auto& DY = S.DY;
  auto& Usq = S.Usq;
  U.assign(N + 1, K(0));
  DU.assign(N + 1, K(0));
  DY.assign(N + 1, K(0));
  Usq.assign(N + 1, K(0));

  U[0] = par.U0;
  U[1] = par.U1;
  Usq[0] = U[0] * U[0];
  Usq[1] = K(2) * U[0] * U[1];
  DU[0] = K(2) * Usq[0] + K(2) * S.phi[0] * U[0];                    // = 0
  DY[0] = -U[0] + S.g[0];                                            // = 0
  DU[1] = K(2) * Usq[1] + K(2) * (S.phi[0] * U[1] + S.phi[1] * U[0]);
  DY[1] = K(d) * U[0] - U[1] + S.g[1];                               // = lam-

  for (int n = 2; n <= N; ++n) {
    // convolution pieces with U_n = 0
    K usq0(0);
    for (int i = 1; i <= n - 1; ++i) usq0 += U[i] * U[n - i];
    K du0 = K(2) * usq0 + K(2) * (S.phi[1] * U[n - 1] + S.phi[2] * U[n - 2]);
    K dy0 = K(d) * U[n - 1] + (n <= 3 ? S.g[n] : K(0));

    // rhs of the top-order solve
    K rhs = du0;
    for (int i = 2; i <= n - 1; ++i) rhs -= K(n + 1 - i) * U[n + 1 - i] * DY[i];
    rhs -= U[1] * dy0;  // i = n term uses the provisional Delta_Y

    K divisor = K(n) * par.lam_minus - par.lam_plus;  // never 0: see a_{n,n} analysis
    if constexpr (std::is_floating_point_v<K>) {
      double rel = std::abs(double(divisor)) / std::abs(double(par.lam_plus));
      if (rel < S.min_divisor_rel) S.min_divisor_rel = rel;
    }
    U[n] = detail::divide_exact(rhs, divisor);

    DU[n] = du0 + par.c1 * U[n];
    DY[n] = dy0 + par.c2 * U[n];
    Usq[n] = usq0 + K(2) * U[0] * U[n];
  }

  S.cat = catalan_numbers(std::size_t(N));
  S.Uhat.assign(N + 1, K(0));
  for (int n = 0; n <= N; ++n) S.Uhat[n] = detail::divide_exact(U[n], K(S.cat[n]));

  S.cU.assign(N + 1, K(0));
  for (int n = 0; n <= N; ++n) {
    S.cU[n] = K(4) * U[n];
    if (n <= 2) S.cU[n] += K(2) * S.phi[n];
  }
  S.e.assign(N, K(0));
  for (int l = 0; l < N; ++l) S.e[l] = -K(l + 1) * U[l + 1] + K(d * l) * U[l] - S.cU[l];

  return S;
}

// Residual of Delta_Y U' - Delta_U at order n; identically zero by construction,
// kept as the module's self-check oracle.
template <class K>
K recursion_residual(const SonicSeries<K>& S, int n) {
  K r(0);
  for (int i = 1; i <= n; ++i) r += S.DY[i] * K(n - i + 1) * S.U[n - i + 1];
  return r - S.DU[n];
}

// C* = Delta_Y,2 / lam+ at the exact limit (the gamma -> gamma* value of the
// second-order expansion rate that drives the coefficient growth).
inline Surd cstar(const SonicSeries<Surd>& S) {
  if (!S.par.kappa_infinite) throw std::domain_error("cstar: exact-limit series required");
  return S.DY[2] / S.par.lam_plus;
}

}  // namespace implode
