#pragma once

// Self-similar parameter derivation for the d = 4, p = 7 hard-coded defaults
// (l = 4/(p-1) + 1 = 5/3).  The smooth-profile limit gamma* = 1/sqrt(l)
// = sqrt(15)/5 lives in Q[sqrt(15)] and gets an exact instantiation; general
// gamma uses a float scalar (double or MPFR).

#include "implode/rational.hpp"
#include "implode/surd.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace implode {

enum class GammaMode { ExactLimit, KappaTarget, Explicit };

struct Config {
  int d = 4;
  int p = 7;
  GammaMode gamma_mode = GammaMode::ExactLimit;
  double kappa = 101.5;
  Rational gamma_num = 0, gamma_den = 1;  // Explicit mode: gamma = gamma_num/gamma_den
  double c_kappa_floor = 50.0;
};

struct OutOfMonotoneRange : std::domain_error {
  using std::domain_error::domain_error;
};

template <class K>
struct Params {
  int d = 4, p = 7;
  K gamma, ell, eps, A, B;
  K c1, c2, c3, c4;
  K lam_plus, lam_minus;
  bool kappa_infinite = false;
  K kappa;       // lam_plus / lam_minus, valid when !kappa_infinite
  K U0, U1;      // sonic-point Taylor data: U(Y) = U0 + U1 Y + ...
  K Y_O;         // 1/d
  K accel;       // a = 2(d-1)/((p-1) l (gamma+1))
  K sonic_Z, sonic_V;
};

// gamma* = 1/sqrt(5/3) = sqrt(15)/5 together with every derived quantity,
// all exact.  eps = 0 collapses most of the spectral data: lam+ = A, lam- = 0.
inline Params<Surd> limit_params() {
  Params<Surd> P;
  P.gamma = Surd(0, Rational(1, 5));
  P.ell = Surd(Rational(5, 3));
  P.eps = Surd(0);
  P.A = Surd(5, Rational(1, 15));  // 5 + gamma/3
  P.B = Surd(Rational(16, 3));
  P.c1 = Surd(0);
  P.c2 = Surd(-1);
  P.c3 = Surd(0);
  P.c4 = P.A;
  P.lam_plus = P.A;
  P.lam_minus = Surd(0);
  P.kappa_infinite = true;
  P.kappa = Surd(0);
  P.U0 = Surd(0);
  P.U1 = P.A;  // larger root of -u^2 + A u = 0
  P.Y_O = Surd(Rational(1, 4));
  // a = 6 / (10 (gamma+1)) = 3/(5(gamma+1))
  P.accel = Surd(Rational(3, 5)) / (P.gamma + Surd(1));
  P.sonic_Z = Surd(1);  // (gamma+1) sqrt(l) / (l gamma + 1) collapses to 1
  P.sonic_V = Surd(1);  // 1/(gamma sqrt(l)) = 1
  return P;
}

template <class Real>
Params<Real> params_from_gamma(const Real& gamma, int d = 4, int p = 7) {
  using std::sqrt;
  Params<Real> P;
  P.d = d;
  P.p = p;
  P.gamma = gamma;
  P.ell = Real(4) / Real(p - 1) + Real(1);
  P.eps = P.ell * gamma * gamma - Real(1);
  P.A = Real(d + 1) - (Real(d - 1) - Real(2) * P.ell) * gamma;
  P.B = Real(2 * d - 1) - P.ell;
  P.c1 = Real(2) * P.eps;
  P.c2 = Real(-1);
  P.c3 = Real(2) * P.eps * (Real(d - 1) - P.A);
  P.c4 = Real(d - 1) * P.eps + P.A;
  Real disc = (P.c1 - P.c4) * (P.c1 - P.c4) + Real(4) * P.c2 * P.c3;
  if (disc < 0) throw std::domain_error("params_from_gamma: complex eigenvalues");
  Real sq = sqrt(disc);
  P.lam_plus = (P.c1 + P.c4 + sq) / Real(2);
  P.lam_minus = (P.c1 + P.c4 - sq) / Real(2);
  P.kappa_infinite = (P.lam_minus == Real(0));
  P.kappa = P.kappa_infinite ? Real(0) : P.lam_plus / P.lam_minus;
  P.U0 = P.eps;
  P.U1 = (P.c4 - P.c1 + sq) / Real(2);
  P.Y_O = Real(1) / Real(d);
  P.accel = Real(2 * (d - 1)) / (Real(p - 1) * P.ell * (gamma + Real(1)));
  Real sl = sqrt(P.ell);
  P.sonic_Z = (gamma + Real(1)) * sl / (P.ell * gamma + Real(1));
  P.sonic_V = Real(1) / (gamma * sl);
  return P;
}

template <class Real>
Real kappa_of_gamma(const Real& gamma) {
  auto P = params_from_gamma(gamma);
  if (P.kappa_infinite) throw std::domain_error("kappa_of_gamma: at the limit");
  return P.kappa;
}

// kappa(gamma) decreases from +inf as gamma increases past gamma*.  Bisect on
// (gamma*, gamma_hi).  Only targets above the configured floor are served;
// below it the gamma -> kappa map is not being used in its monotone regime.
template <class Real>
Real gamma_of_kappa(const Real& target, double c_kappa_floor = 50.0,
                    const Real& rel_tol = Real(1e-14)) {
  if (!(target >= Real(c_kappa_floor)))
    throw OutOfMonotoneRange("gamma_of_kappa: kappa target below floor");
  using std::sqrt;
  Real gstar = sqrt(Real(15)) / Real(5);
  Real lo = gstar, hi = gstar * Real(2);  // kappa(hi) is small; safe upper end
  while (kappa_of_gamma(hi) >= target) hi = hi * Real(2);
  // lo sits exactly at the pole; step inside until finite side found
  Real step = (hi - gstar) / Real(1048576);
  lo = gstar + step;
  while (kappa_of_gamma(lo) < target) {
    step = step / Real(1024);
    lo = gstar + step;
  }
  for (int it = 0; it < 20000; ++it) {
    Real mid = (lo + hi) / Real(2);
    if (kappa_of_gamma(mid) >= target) lo = mid;
    else hi = mid;
    if (hi - lo <= rel_tol * lo) break;
  }
  return (lo + hi) / Real(2);
}

// ---- config files: flat "key = value" lines, '#' comments ----

inline Config parse_config_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "d") cfg.d = std::stoi(val);
    else if (key == "p") cfg.p = std::stoi(val);
    else if (key == "gamma_mode") {
      if (val == "exact_limit") cfg.gamma_mode = GammaMode::ExactLimit;
      else if (val == "kappa_target") cfg.gamma_mode = GammaMode::KappaTarget;
      else if (val == "explicit") cfg.gamma_mode = GammaMode::Explicit;
      else throw std::runtime_error("config: unknown gamma_mode '" + val + "'");
    } else if (key == "kappa") cfg.kappa = std::stod(val);
    else if (key == "gamma_num") cfg.gamma_num = parse_rational(val);
    else if (key == "gamma_den") cfg.gamma_den = parse_rational(val);
    else if (key == "c_kappa_floor") cfg.c_kappa_floor = std::stod(val);
    else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (cfg.d != 4 || cfg.p != 7)
    throw std::runtime_error("config: only d = 4, p = 7 is supported");
  return cfg;
}

inline Config parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace implode
