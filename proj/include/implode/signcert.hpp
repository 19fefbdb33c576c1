#pragma once

// Certified sign of an exact polynomial on a closed interval [a,b], 0 <= a < b.
//
// Split P = Ppos - Pneg by coefficient sign; both halves have nonnegative
// coefficients, hence are monotone increasing on [0, inf).  On a subinterval
// [t0,t1] this gives the enclosure
//     Ppos(t0) - Pneg(t1) <= P <= Ppos(t1) - Pneg(t0).
// Depth-first adaptive bisection with exact rational breakpoints; leaf margins
// are exact lower bounds on |P| over the leaf.

#include "implode/poly.hpp"
#include "implode/rational.hpp"
#include "implode/surd.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace implode {

enum class SignVerdict { Positive, Negative, Indeterminate };

inline const char* to_string(SignVerdict v) {
  switch (v) {
    case SignVerdict::Positive: return "positive";
    case SignVerdict::Negative: return "negative";
    default: return "indeterminate";
  }
}

// rational lower bound on an exact scalar (identity for Rational)
inline Rational rat_lower(const Rational& x) { return x; }
inline Rational rat_upper(const Rational& x) { return x; }
inline Rational rat_lower(const Surd& x) { return lower_bound(x); }
inline Rational rat_upper(const Surd& x) { return upper_bound(x); }

template <class K>
struct SignCertificate {
  Poly<K> poly;
  Rational a, b;
  SignVerdict verdict{SignVerdict::Indeterminate};
  Rational margin{0};                  // exact lower bound on |P| over [a,b]
  std::vector<Rational> breakpoints;   // bisection points, in discovery order
  int max_depth_used{0};
  std::string name;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["name"] = name;
    std::vector<std::string> cs;
    for (const auto& c : poly.c) cs.push_back(scalar_repr(c));
    j["poly"] = cs;
    j["interval"] = {a.str(), b.str()};
    j["verdict"] = to_string(verdict);
    j["margin"] = margin.str();
    j["margin_decimal"] = decimal_string(margin, 20);
    std::vector<std::string> bps;
    for (const auto& t : breakpoints) bps.push_back(t.str());
    j["breakpoints"] = bps;
    j["max_depth_used"] = max_depth_used;
    return j;
  }

  static std::string scalar_repr(const Rational& x) { return x.str(); }
  static std::string scalar_repr(const Surd& x) { return exact_string(x); }
};

template <class K>
void monotone_split(const Poly<K>& p, Poly<K>& pos, Poly<K>& neg) {
  std::vector<K> cp(p.c.size(), K(0)), cn(p.c.size(), K(0));
  for (std::size_t i = 0; i < p.c.size(); ++i) {
    if (sgn(p.c[i]) >= 0) cp[i] = p.c[i];
    else cn[i] = -p.c[i];
  }
  pos = Poly<K>(std::move(cp));
  neg = Poly<K>(std::move(cn));
}

namespace detail {

template <class K>
struct SignWork {
  const Poly<K>&pos, &neg;
  SignCertificate<K>& cert;
  int max_depth;
  bool any_pos = false, any_neg = false, any_indet = false;
  Rational min_margin{0};
  bool have_margin = false;

  void note_margin(const Rational& m) {
    if (!have_margin || m < min_margin) { min_margin = m; have_margin = true; }
  }

  void visit(const Rational& t0, const Rational& t1, int depth) {
    if (any_pos && any_neg) { any_indet = true; return; }  // sign change: hopeless
    K k0(t0), k1(t1);
    Rational lo = rat_lower(pos.eval(k0) - neg.eval(k1));
    Rational hi = rat_upper(pos.eval(k1) - neg.eval(k0));
    if (depth > cert.max_depth_used) cert.max_depth_used = depth;
    if (lo > 0) { any_pos = true; note_margin(lo); return; }
    if (hi < 0) { any_neg = true; note_margin(-hi); return; }
    if (depth >= max_depth) { any_indet = true; return; }
    Rational mid = (t0 + t1) / 2;
    cert.breakpoints.push_back(mid);
    visit(t0, mid, depth + 1);
    visit(mid, t1, depth + 1);
  }
};

}  // namespace detail

// K must construct from Rational (Rational and Surd both do).
template <class K>
SignCertificate<K> poly_sign_on(const Poly<K>& p, const Rational& a, const Rational& b,
                                int max_depth = 24, std::string name = "") {
  if (!(Rational(0) <= a && a < b)) throw std::invalid_argument("poly_sign_on: need 0 <= a < b");
  SignCertificate<K> cert;
  cert.poly = p;
  cert.a = a;
  cert.b = b;
  cert.name = std::move(name);
  Poly<K> pos, neg;
  monotone_split(p, pos, neg);
  detail::SignWork<K> w{pos, neg, cert, max_depth};
  w.visit(a, b, 0);
  if (w.any_indet || (w.any_pos && w.any_neg)) {
    cert.verdict = SignVerdict::Indeterminate;
    cert.margin = 0;
  } else {
    cert.verdict = w.any_pos ? SignVerdict::Positive : SignVerdict::Negative;
    cert.margin = w.min_margin;
  }
  return cert;
}

}  // namespace implode
