#include "implode/shooting.hpp"

#include <cstdio>

using namespace implode;

int main(int argc, char** argv) {
  double k = argc > 1 ? atof(argv[1]) : 101.5;
  double gamma = gamma_of_kappa(k, 50.0, 1e-15);
  auto par = params_from_gamma(gamma);
  auto S = compute_sonic_series(par, 90);
  auto B = build_barriers(par, S.U[2]);
  Phase<double> ph(par);
  auto P = detail::lower_defect_numerator(B, par.d);
  auto Du = [&](double y) {
    return B.Bu.derivative().eval(y) * (B.q.eval(y) * B.Bu.eval(y) + B.g.eval(y)) -
           2 * B.Bu.eval(y) * (B.Bu.eval(y) + B.phi.eval(y));
  };
  std::printf("gamma=%.12g  checks on (0,0.25): P<0 (lower defect), Du>0 (upper defect),\n"
              "N-q*Bu>0... negative margins flagged\n", gamma);
  double worstP = 0, worstDu = 0, worstSep = 0, worstDY = 0;
  double yP = 0, yDu = 0, ySep = 0, yDY = 0;
  for (int i = 1; i < 2500; ++i) {
    double y = 0.25 * i / 2500;
    double p = P.eval(y);
    if (p > worstP) { worstP = p; yP = y; }
    double du = Du(y);
    if (du < worstDu) { worstDu = du; yDu = y; }
    double sep = -(B.N.eval(y) - B.q.eval(y) * B.Bu.eval(y));
    if (sep < worstSep) { worstSep = sep; ySep = y; }
    // Delta_Y sign along both barrier graphs (fence direction argument)
    double dyl = ph.delta_Y(y, B.N.eval(y) / B.q.eval(y));
    if (dyl < worstDY) { worstDY = dyl; yDY = y; }
  }
  std::printf("max P        = %.6g at Y=%.4g  (need < 0)\n", worstP, yP);
  std::printf("min Du       = %.6g at Y=%.4g  (need > 0)\n", worstDu, yDu);
  std::printf("min -(N-qBu) = %.6g at Y=%.4g  (need > 0)\n", worstSep, ySep);
  std::printf("min dY on Bl = %.6g at Y=%.4g  (sign matters for fence direction)\n",
              worstDY, yDY);
  return 0;
}
