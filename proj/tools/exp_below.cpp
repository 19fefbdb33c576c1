#include "implode/profile.hpp"

#include <cstdio>

using namespace implode;

int main(int argc, char** argv) {
  double kap = argc > 1 ? atof(argv[1]) : 101.5;
  int digits = argc > 2 ? atoi(argv[2]) : 89;
  mpreal::default_precision(digits);
  mpreal gamma = gamma_of_kappa(mpreal(kap), 50.0,
                                boost::multiprecision::pow(mpreal(10), -(digits - 5)));
  GContext<mpreal> ctx(gamma, digits, 0.45);
  std::printf("r=%.6e U(0)=%.6e\n", double(ctx.r), double(ctx.U[0]));
  BelowSonic bs = extend_below_sonic(ctx);
  const auto& ds = bs.ds;
  std::printf("yu_nodes=%zu Y_switch=%.8e Y_root=%.8e\n", bs.yu_nodes.size(),
              ds.Y_switch, ds.Y_root);
  std::printf("xi1=%.6e xi2=%.6e xi3=%.6e Y_end=%.6e U_end=%.6e\n", ds.xi1, ds.xi2,
              ds.xi3, ds.Y_end, ds.U_end);
  std::printf("ok=%d region_ok=%d ds_nodes=%zu\n", int(ds.ok), int(ds.region_ok),
              ds.nodes.size());
  // map endpoint to (Z,V) and test the far-region chain
  Phase<double> ph(params_from_gamma(double(gamma)));
  double Z2, V2;
  ph.to_ZV(ds.Y_end, ds.U_end, Z2, V2);
  std::printf("Z2=%.8e V2=%.8e Z_V=%.8e Z_minus=%.8e chain=%d\n", Z2, V2, ph.Z_V(V2),
              ph.Z_minus(V2),
              int(Z2 > ph.Z_V(V2) && ph.Z_V(V2) > V2 && V2 > ph.Z_minus(V2)));
  return 0;
}
