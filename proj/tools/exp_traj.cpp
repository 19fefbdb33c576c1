#include "implode/shooting.hpp"

#include <cstdio>

using namespace implode;

int main(int argc, char** argv) {
  double k = argc > 1 ? atof(argv[1]) : 101.5;
  double gamma = gamma_of_kappa(k, 50.0, 1e-15);
  GContext<double> ctx(gamma, 16, 0.45);
  std::printf("gamma=%.17g r=%.6g U_r=%.6g e1=%.6g e2=%.6g U2=%.6g\n", gamma, ctx.r,
              ctx.U_r, ctx.bar.e1, ctx.bar.e2, ctx.bar.U2);
  // series values on a grid inside the radius, with tube bounds
  for (double Y : {0.25 * ctx.r, 0.5 * ctx.r, ctx.r}) {
    double v = 0;
    for (int i = int(ctx.U.size()) - 1; i >= 0; --i) v = v * Y + ctx.U[i];
    double bu = ctx.bar.Bu.eval(Y);
    double bl = ctx.bar.N.eval(Y) / ctx.bar.q.eval(Y);
    std::printf("Y=%.6g  series=%.17g  Bu=%.17g  Bl=%.17g  in=%d\n", Y, v, bu, bl,
                int(v > bu && v < bl));
  }
  auto ph = ctx.ph;
  auto rhs = [&ph](const double& Y, const std::array<double, 2>& y,
                   std::array<double, 2>& dy) {
    double dYv = ph.delta_Y(Y, y[0]);
    if (dYv == 0) return false;
    dy[0] = ph.delta_U(Y, y[0]) / dYv;
    dy[1] = 0;
    return true;
  };
  RK45<double, 2, decltype(rhs)> rk(rhs, ctx.r, {ctx.U_r, 0.0}, 1e-12, ctx.r / 8);
  for (int i = 0; i < 400; ++i) {
    bool more = rk.step(0.2485);
    double bu = ctx.bar.Bu.eval(rk.x);
    double bl = ctx.bar.N.eval(rk.x) / ctx.bar.q.eval(rk.x);
    if (i < 25 || rk.y[0] < bu || rk.y[0] > bl || !more)
      std::printf("%3d Y=%.8g U=%.17g  Bu=%.8g Bl=%.8g  %s\n", i, rk.x, rk.y[0], bu, bl,
                  rk.y[0] < bu ? "BELOW" : rk.y[0] > bl ? "ABOVE" : "in");
    if (rk.y[0] < bu || rk.y[0] > bl) break;
    if (!more) break;
  }
  return 0;
}
