#include "implode/profile.hpp"
#include <cstdio>
using namespace implode;
int main(int argc, char** argv) {
  double kap = argc > 1 ? atof(argv[1]) : 101.5;
  int digits = argc > 2 ? atoi(argv[2]) : 89;
  mpreal::default_precision(digits);
  mpreal gamma = gamma_of_kappa(mpreal(kap), 50.0, mpreal(pow(10.0, -(digits - 5))));
  GContext<mpreal> ctx(gamma, digits, 0.45);
  printf("gamma %.15f eps %.15f\n", double(ctx.par.gamma), double(ctx.par.eps));
  BelowSonic bs = extend_below_sonic(ctx);
  Phase<double> phd(params_from_gamma(double(gamma)));
  // sign factor of Delta_Z and Z monotonicity along backward + desing legs
  double Zprev = -1; int nonmono = 0; double min_abs_sf = 1e9; double sf_first = 0, sf_last = 0;
  auto probe = [&](double Y, double U, const char* tag, int i) {
    double sf = U - phd.U_g(Y);
    double Z, V; phd.to_ZV(Y, U, Z, V);
    if (i == 0) sf_first = sf;
    sf_last = sf;
    if (fabs(sf) < min_abs_sf) min_abs_sf = fabs(sf);
    if (Zprev > 0 && Z <= Zprev) nonmono++;
    Zprev = Z;
    if (i % 40 == 0) printf("%s i=%4d Y=% .6e U=%.6e sf=% .3e Z=%.9f V=%.9f\n", tag, i, Y, U, sf, Z, V);
  };
  int i = 0;
  for (auto& n : bs.yu_nodes) probe(n[0], n[1], "bk", i++);
  printf("bk first sf %.3e last sf %.3e\n", sf_first, sf_last);
  i = 0; Zprev = -1;
  for (auto& n : bs.ds.nodes) probe(n[1], n[2], "ds", i++);
  printf("ds nodes=%zu nonmono=%d min|sf|=%.3e sf_first=%.3e sf_last=%.3e\n",
         bs.ds.nodes.size(), nonmono, min_abs_sf, sf_first, sf_last);
  // sonic leg side: sign factor at Y=+r and Y=-r from the series
  printf("sf(+r)=%.6e sf(-r)=%.6e at r=%.3e\n",
         double(ctx.U_r) - phd.U_g(double(ctx.r)),
         bs.yu_nodes[0][1] - phd.U_g(bs.yu_nodes[0][0]), double(ctx.r));
  return 0;
}
