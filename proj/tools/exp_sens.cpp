#include "implode/shooting.hpp"

#include <cstdio>

using namespace implode;

// difference between branches at two nearby kappas, tracked along Y
int main(int argc, char** argv) {
  int digits = argc > 1 ? atoi(argv[1]) : 120;
  int expo = argc > 2 ? atoi(argv[2]) : 20;  // dk = 10^-expo
  mpreal::default_precision(digits);
  mpreal ka(101.5);
  mpreal kb = ka + boost::multiprecision::pow(mpreal(10), -expo);
  mpreal tol = boost::multiprecision::pow(mpreal(10), -(digits - 5));
  mpreal ga = gamma_of_kappa(ka, 50.0, tol);
  mpreal gb = gamma_of_kappa(kb, 50.0, tol);
  std::printf("dgamma = %.6e\n", double(gb - ga));
  GContext<mpreal> A(ga, digits, 0.45), B(gb, digits, 0.45);
  std::printf("rA=%.10e rB-rA=%.3e  U_rA=%.10e\n", double(A.r), double(B.r - A.r),
              double(A.U_r));
  // evaluate both series at the common radius min(rA, rB)
  mpreal r = A.r < B.r ? A.r : B.r;
  auto horner = [&](const std::vector<mpreal>& u) {
    mpreal v(0);
    for (int i = int(u.size()) - 1; i >= 0; --i) v = v * r + u[i];
    return v;
  };
  mpreal Ua = horner(A.U), Ub = horner(B.U);
  std::printf("U(r) diff at common r: %.6e\n", double(Ub - Ua));
  // step both to a set of checkpoints, report separation
  TaylorStepper<mpreal> tsA(A.par, digits), tsB(B.par, digits);
  mpreal Ya = r, YA = r, Uaa = Ua, Ubb = Ub;
  std::vector<mpreal> u;
  for (double ckpt : {0.01, 0.02, 0.05, 0.1, 0.1349, 0.2, 0.24}) {
    mpreal tgt(ckpt);
    mpreal Y1 = Ya, U1 = Uaa;
    while (Y1 != tgt) tsA.step(Y1, U1, tgt, u);
    mpreal Y2 = YA, U2 = Ubb;
    while (Y2 != tgt) tsB.step(Y2, U2, tgt, u);
    Ya = Y1; Uaa = U1; YA = Y2; Ubb = U2;
    std::printf("Y=%.4f  U=%.8e  dU=%.6e\n", ckpt, double(U1), double(U2 - U1));
  }
  return 0;
}
