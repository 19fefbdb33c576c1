#include "implode/shooting.hpp"

#include <cstdio>

using namespace implode;

// trace the backward leg and the raw desing field, no events
int main(int argc, char** argv) {
  setvbuf(stdout, nullptr, _IONBF, 0);
  double kap = argc > 1 ? atof(argv[1]) : 101.5;
  int digits = argc > 2 ? atoi(argv[2]) : 89;
  mpreal::default_precision(digits);
  mpreal gamma = gamma_of_kappa(mpreal(kap), 50.0,
                                boost::multiprecision::pow(mpreal(10), -(digits - 5)));
  GContext<mpreal> ctx(gamma, digits, 0.45);
  const Phase<mpreal>& ph = ctx.ph;
  mpreal mr = -ctx.r, Um(0);
  for (int i = int(ctx.U.size()) - 1; i >= 0; --i) Um = Um * mr + ctx.U[i];
  printf("U(-r)=%.8e\n", double(Um));
  TaylorStepper<mpreal> ts(ctx.par, digits);
  mpreal Y = mr, U = Um;
  std::vector<mpreal> u;
  int k = 0;
  while (k++ < 100000) {
    ts.step(Y, U, mpreal(-0.5), u);
    mpreal dY = ph.delta_Y(Y, U), dU = ph.delta_U(Y, U);
    if (k % 5 == 0 || boost::multiprecision::abs(dY) < boost::multiprecision::abs(dU) / 100)
      printf("k=%4d Y=%.10e U=%.8e dY=%.3e dU=%.3e\n", k, double(Y), double(U),
             double(dY), double(dU));
    if (boost::multiprecision::abs(dY) < boost::multiprecision::abs(dU) / 1000) break;
    if (Y == mpreal(-0.5)) { printf("hit target\n"); break; }
  }
  // re-integrate to the seed and trace the desing leg step by step
  Phase<double> phd(params_from_gamma(double(gamma)));
  mpreal YI = Y;  // approx root per the trace
  mpreal Yh = YI / 2, Ys = mr, Us = Um;
  while (Ys != Yh) ts.step(Ys, Us, Yh, u);
  printf("seed Y=%.8e U=%.8e dY=%.4e dU=%.4e\n", double(Ys), double(Us),
         double(ph.delta_Y(Ys, Us)), double(ph.delta_U(Ys, Us)));
  double sgn = double(ph.delta_Y(Ys, Us)) < 0 ? 1.0 : -1.0;
  auto rhs = [&phd, sgn](double, const std::array<double, 2>& y,
                         std::array<double, 2>& dy) {
    dy[0] = sgn * phd.delta_Y(y[0], y[1]);
    dy[1] = sgn * phd.delta_U(y[0], y[1]);
    return true;
  };
  RK45<double, 2, decltype(rhs)> rk(rhs, 0.0, {double(Ys), double(Us)}, 1e-13,
                                    1.0 / 1024);
  for (int i = 0; i < 4000; ++i) {
    bool more = rk.step(50.0);
    if (i % 50 == 0 || rk.y[0] > 0.04 || !more)
      printf("s=%.6e Y=%.8e U=%.8e dY=%.3e\n", rk.x, rk.y[0], rk.y[1],
             phd.delta_Y(rk.y[0], rk.y[1]));
    if (!more || rk.y[0] > 0.06) break;
  }
  return 0;
}
// appended: manual desing trace entry point is folded into main via env var
