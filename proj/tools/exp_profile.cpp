#include "implode/profile.hpp"
#include <cstdio>
using namespace implode;
int main(int argc, char** argv) {
  double kap = argc > 1 ? atof(argv[1]) : 101.5;
  int digits = argc > 2 ? atoi(argv[2]) : 89;
  mpreal::default_precision(digits);
  mpreal gamma = gamma_of_kappa(mpreal(kap), 50.0, mpreal(pow(10.0, -(digits - 5))));
  GContext<mpreal> ctx(gamma, digits, 0.45);
  double dY = pick_delta_Y(double(gamma));
  fprintf(stderr, "delta_Y %.6f\n", dY);
  BelowSonic bs = extend_below_sonic(ctx);
  fprintf(stderr, "below done ok=%d\n", int(bs.ds.ok));
  GlobalProfile gp = build_profile(ctx, dY, bs, 1e4);
  printf("nodes %zu\n", gp.nodes.size());
  printf("a %.12f\n", gp.a_exponent);
  printf("Z2 %.9f V2 %.9f omega_far_ok %d\n", gp.Z2, gp.V2, int(gp.omega_far_ok));
  printf("overlap_max_rel %.3e\n", gp.overlap_max_rel);
  printf("bounds_ok %d far_monotone %d\n", int(gp.bounds_ok), int(gp.far_monotone));
  printf("V_inf %.9f W_inf %.9f\n", gp.V_inf, gp.W_inf);
  printf("wza_drift %.3e jw_asym_max %.3e\n", gp.wza_drift, gp.jw_asym_max);
  printf("even_coeff_max %.3e\n", gp.even_coeff_max);
  printf("ok %d\n", int(gp.ok));
  // spot checks
  std::size_t N = gp.nodes.size();
  printf("W0 %.17g Phi0 %.17g\n", gp.W[0], gp.Phi[0]);
  for (std::size_t i = 0; i < N; i += N / 12)
    printf("  Z %.6e V % .9f W %.6e Phi %.6e\n", gp.nodes[i].Z, gp.nodes[i].V, gp.W[i], gp.Phi[i]);
  printf("  Z %.6e V % .9f W %.6e Phi %.6e\n", gp.nodes[N-1].Z, gp.nodes[N-1].V, gp.W[N-1], gp.Phi[N-1]);
  return 0;
}
