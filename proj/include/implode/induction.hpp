#pragma once

// Finite-induction verification at the exact limit: the coefficient-growth
// claims that seed the asymptotic induction (product bound, positivity,
// monotonicity, ratio asymptotics, small-index bounds, the M1 gap) plus the
// three closing inequalities on the induction constants.  Everything runs in
// Q[sqrt(15)]; verdicts are exact, and each inequality can be printed to any
// number of significant digits.

#include "implode/rational.hpp"
#include "implode/series.hpp"
#include "implode/surd.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace implode {

struct InductionOptions {
  int n0 = 20;
  int n1 = 450;
  int j0 = 25;
  int l0 = 2;
  int N = 30;
  Rational delta_hat{49, 1000};
  Rational C1bar{623, 50};
};

// The raw material the checks consume.  Kept as plain vectors so tests can
// mutate single entries and confirm the verifier notices.
struct InductionInputs {
  std::vector<Surd> U, Uhat, e, DY;
  Surd lam_plus;
  Surd Cstar;
  int d = 4;
  Surd phi[3];

  static InductionInputs from_series(const SonicSeries<Surd>& S) {
    InductionInputs in;
    in.U = S.U;
    in.Uhat = S.Uhat;
    in.e = S.e;
    in.DY = S.DY;
    in.lam_plus = S.par.lam_plus;
    in.Cstar = cstar(S);
    in.d = S.par.d;
    for (int i = 0; i < 3; ++i) in.phi[i] = S.phi[i];
    return in;
  }
};

struct InequalityRecord {
  std::string label;
  Surd lhs, rhs;  // claim: lhs < rhs (strict)
  bool holds = false;

  void settle() { holds = lhs < rhs; }
  nlohmann::json to_json(unsigned digits = 35) const {
    return {{"label", label},
            {"lhs", decimal_string(lhs, digits)},
            {"rhs", decimal_string(rhs, digits)},
            {"lhs_exact", exact_string(lhs)},
            {"rhs_exact", exact_string(rhs)},
            {"holds", holds}};
  }
};

struct InductionReport {
  // growth claims
  bool unif_product_bound = false;  // |Uhat_j Uhat_{n-j}| <= C1bar |Uhat_n|
  bool sign_positive = false;       // U_n > 0 for n0 <= n <= n1
  bool hat_monotone = false;        // |Uhat_{n-1}| < |Uhat_n| on the same range
  bool hat_ratio_asym = false;      // |Uhat_n - (C*/4) n Uhat_{n-1}| <= dhat (C*/4) n |Uhat_{n-1}|
  bool c1bar_dominates = false;     // C1bar > max(1, |Uhat_0|)
  bool small_index_bound = false;
  bool m1_gap = false;
  // closing inequalities on the constants
  InequalityRecord ineq_main, ineq_q, ineq_tail;
  // retained constants
  Surd Cstar, M1, CJ1, CJ2, CJ3, CErr, q_n1, b3;

  bool growth_ok() const {
    return unif_product_bound && sign_positive && hat_monotone && hat_ratio_asym &&
           c1bar_dominates && small_index_bound && m1_gap;
  }
  bool pass() const { return growth_ok() && ineq_main.holds && ineq_q.holds && ineq_tail.holds; }

  nlohmann::json to_json(unsigned digits = 35) const {
    nlohmann::json j;
    j["unif_product_bound"] = unif_product_bound;
    j["sign_positive"] = sign_positive;
    j["hat_monotone"] = hat_monotone;
    j["hat_ratio_asym"] = hat_ratio_asym;
    j["c1bar_dominates"] = c1bar_dominates;
    j["small_index_bound"] = small_index_bound;
    j["m1_gap"] = m1_gap;
    j["ineq_main"] = ineq_main.to_json(digits);
    j["ineq_q"] = ineq_q.to_json(digits);
    j["ineq_tail"] = ineq_tail.to_json(digits);
    j["Cstar"] = decimal_string(Cstar, digits);
    j["M1"] = decimal_string(M1, digits);
    j["CJ1"] = decimal_string(CJ1, digits);
    j["CJ2"] = decimal_string(CJ2, digits);
    j["CJ3"] = decimal_string(CJ3, digits);
    j["CErr"] = decimal_string(CErr, digits);
    j["q_n1"] = decimal_string(q_n1, digits);
    j["b3"] = decimal_string(b3, digits);
    j["pass"] = pass();
    return j;
  }
};

namespace detail {

inline Surd surd_max(const Surd& x, const Surd& y) { return x < y ? y : x; }
inline Surd max_abs_or_one(const Surd& x) { return surd_max(surd_abs(x), Surd(1)); }

inline Surd surd_pow(const Surd& x, int k) {
  Surd r(1), b = x;
  if (k < 0) { b = x.inv(); k = -k; }
  while (k) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

// rational upper bound on sqrt(n) for integer n >= 0 (tight to 1e-30)
inline Rational sqrt_upper(int n) {
  Int p = pow10(30);
  Int s = isqrt_floor(Int(n) * p * p);
  return Rational(s + 1, p);
}

inline Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace detail

inline InductionReport verify_induction(const InductionInputs& in,
                                        const InductionOptions& opt = {}) {
  using detail::max_abs_or_one;
  using detail::surd_max;
  using detail::surd_pow;
  InductionReport R;
  const int n0 = opt.n0, n1 = opt.n1, j0 = opt.j0, l0 = opt.l0, N = opt.N;
  const Surd dhat{opt.delta_hat};
  const Surd C1bar{opt.C1bar};
  const Surd& Cs = in.Cstar;
  R.Cstar = Cs;
  if (int(in.Uhat.size()) <= n1) throw std::invalid_argument("verify_induction: series too short");

  // (a) product bound, positivity, monotonicity, ratio asymptotics
  R.unif_product_bound = true;
  for (int n = 0; n <= n1 && R.unif_product_bound; ++n) {
    Surd bound = C1bar * surd_abs(in.Uhat[n]);
    for (int j = 0; j <= n / 2; ++j) {
      if (surd_abs(in.Uhat[j] * in.Uhat[n - j]) > bound) {
        R.unif_product_bound = false;
        break;
      }
    }
  }
  R.sign_positive = true;
  for (int n = n0; n <= n1; ++n)
    if (sgn(in.U[n]) <= 0) { R.sign_positive = false; break; }
  R.hat_monotone = true;
  for (int n = n0; n <= n1; ++n)
    if (!(surd_abs(in.Uhat[n - 1]) < surd_abs(in.Uhat[n]))) { R.hat_monotone = false; break; }
  R.hat_ratio_asym = true;
  for (int n = n0; n <= n1; ++n) {
    Surd target = (Cs / Surd(4)) * Surd(n) * in.Uhat[n - 1];
    Surd slack = dhat * (Cs / Surd(4)) * Surd(n) * surd_abs(in.Uhat[n - 1]);
    if (surd_abs(in.Uhat[n] - target) > slack) { R.hat_ratio_asym = false; break; }
  }
  R.c1bar_dominates = C1bar > max_abs_or_one(in.Uhat[0]);

  // (b) small-index bound:
  //   ((C*/4)(1-dhat)(n1+1-N-j0))^(j-1) >= 2^(j-1) |Uhat_{j+l-1}| / max(|Uhat_l|,1)
  R.small_index_bound = true;
  {
    Surd base = (Cs / Surd(4)) * (Surd(1) - dhat) * Surd(n1 + 1 - N - j0);
    for (int j = 1; j <= j0 && R.small_index_bound; ++j) {
      Surd lhs = surd_pow(base, j - 1);
      Surd two_pow = Surd(Rational(Int(1) << unsigned(j - 1)));
      for (int l = 0; l <= l0; ++l) {
        Surd rhs = two_pow * surd_abs(in.Uhat[j + l - 1]) / max_abs_or_one(in.Uhat[l]);
        if (!(lhs >= rhs)) { R.small_index_bound = false; break; }
      }
    }
  }

  // (c) M1 gap:  (1/(j0+l0))^(l0) * (1/M1) * (9/5)^(j0) / (3 sqrt(j0)) > 1
  {
    Surd M1(0);
    for (int l = 0; l <= l0; ++l) {
      Surd cand = surd_abs(in.Uhat[n0]) / (Surd(detail::factorial(n0)) * max_abs_or_one(in.Uhat[l]));
      cand *= surd_pow(Cs / Surd(4), l - n0);
      if (l == 0 || cand > M1) M1 = cand;
    }
    R.M1 = M1;
    Surd lhs = surd_pow(Surd(Rational(1, j0 + l0)), l0) / M1;
    lhs *= surd_pow(Surd(Rational(9, 5)), j0);
    lhs /= Surd(3) * Surd(detail::sqrt_upper(j0));
    R.m1_gap = lhs > Surd(1);
  }

  // ---- constants for the closing inequalities ----
  const int dY = 1, dU = 2, dG = 3;

  // b3 = max_{i<=N, 0<=l<=l0} |Uhat_i / Uhat_{i+l}|  (0/0 entries skipped)
  Surd b3(0);
  for (int i = 0; i <= N; ++i)
    for (int l = 0; l <= l0; ++l) {
      if (sgn(in.Uhat[i + l]) == 0) {
        if (sgn(in.Uhat[i]) == 0) continue;  // 0/0 asserts nothing
        throw std::domain_error("b3: zero denominator with nonzero numerator");
      }
      Surd r = surd_abs(in.Uhat[i] / in.Uhat[i + l]);
      if (r > b3) b3 = r;
    }
  R.b3 = b3;

  // b_{2,l} = C1bar^l max(|Uhat_1|,1), b_{2,-1} = 1
  auto b2 = [&](int l) -> Surd {
    if (l == -1) return Surd(1);
    return surd_pow(C1bar, l) * max_abs_or_one(in.Uhat[1]);
  };

  // q_n = (1/4)(n - N)(1 - dhat) C*
  auto q = [&](int n) { return Surd(Rational(n - N, 4)) * (Surd(1) - dhat) * Cs; };
  R.q_n1 = q(n1);

  Surd two_pow_mN = Surd(Rational(1, Int(1) << unsigned(N)));

  // nu_1 (only l = 1 arises since dY = 1)
  Surd nu1(0);
  {
    Surd best(0);
    for (int m = 0; m <= N - 2; ++m) {
      Surd opt1 = surd_pow(C1bar, 0) * surd_pow(R.q_n1, -m);               // C1bar^{l-1} q^{-m}
      Surd opt2 = b2(-1) * Surd(Rational(1, Int(1) << unsigned(N - 2 - m)));
      Surd cand = surd_abs(in.Uhat[m + 2]) * (opt1 < opt2 ? opt1 : opt2);
      if (m == 0 || cand > best) best = cand;
    }
    Surd tail1 = max_abs_or_one(in.Uhat[0]) * Surd(Rational(Int(1) << unsigned(dG - 1)));
    Surd tail2(0);
    for (int m = 0; m <= 2; ++m) tail2 = surd_max(tail2, max_abs_or_one(in.Uhat[m]));
    tail2 = Surd(2) * tail2;
    nu1 = b3 * best + two_pow_mN * surd_max(tail1, tail2);
  }

  // G_1 = d Y - 1: coefficient magnitudes 1 (j=0) and d (j=1)
  R.CJ1 = Surd(Rational(Int(1) << unsigned(2 * (dY + 2)))) * Surd(1 + in.d) * nu1;

  // C_J2 = 2^{-N+2dG} |U_1| sum_j |(G_1)_j| b_{2,-1} 2^{j+1}
  {
    Surd coeff_sum = Surd(1) * b2(-1) * Surd(2) + Surd(in.d) * b2(-1) * Surd(4);
    R.CJ2 = Surd(Rational(Int(1) << unsigned(2 * dG), Int(1) << unsigned(N))) *
            surd_abs(in.U[1]) * coeff_sum;
  }

  // C_J3 = 2^{-N+2dY} sum_{l<=dU} sum_j |(F_l)_j| b_{2,l-2} 2^{j+1}
  //   F_1 = 2 phi (degree 2), F_2 = 2 (degree 0)
  {
    Surd s(0);
    for (int j = 0; j <= 2; ++j)
      s += Surd(2) * surd_abs(in.phi[j]) * b2(-1) * Surd(Rational(Int(1) << unsigned(j + 1)));
    s += Surd(2) * b2(0) * Surd(2);
    R.CJ3 = Surd(Rational(Int(1) << unsigned(2 * dY), Int(1) << unsigned(N))) * s;
  }

  // C_err(n1) = sum_{2<=l<=N-2} (|e_l|/n1 + |DY_{l+1}|) (3 q_{n1})^{-(l-1)}
  {
    Surd s(0);
    Surd inv3q = (Surd(3) * R.q_n1).inv();
    Surd w = Surd(1);
    for (int l = 2; l <= N - 2; ++l) {
      w *= inv3q;  // (3q)^{-(l-1)}
      s += (surd_abs(in.e[l]) / Surd(n1) + surd_abs(in.DY[l + 1])) * w;
    }
    R.CErr = s;
  }

  R.ineq_main.label = "n1^-1 (CJ2 + CJ3 + |e_1| + |DY_2|) + CJ1 + CErr < delta_hat";
  R.ineq_main.lhs =
      (R.CJ2 + R.CJ3 + surd_abs(in.e[1]) + surd_abs(in.DY[2])) / Surd(n1) + R.CJ1 + R.CErr;
  R.ineq_main.rhs = dhat;
  R.ineq_main.settle();

  R.ineq_q.label = "max(|Uhat_1|, 1) < q_n1";
  R.ineq_q.lhs = max_abs_or_one(in.Uhat[1]);
  R.ineq_q.rhs = R.q_n1;
  R.ineq_q.settle();

  R.ineq_tail.label = "3 C*/(2(4 n1 - 2)) + (1/20)/lam+ < (C*/4) delta_hat";
  R.ineq_tail.lhs = Surd(Rational(3, 2 * (4 * n1 - 2))) * Cs + Surd(Rational(1, 20)) / in.lam_plus;
  R.ineq_tail.rhs = (Cs / Surd(4)) * dhat;
  R.ineq_tail.settle();

  return R;
}

}  // namespace implode
