#include "implode/shooting.hpp"

#include <cstdio>

using namespace implode;

int main(int argc, char** argv) {
  ShootOptions opt;
  opt.verbose = true;
  if (argc > 1) opt.n = atoi(argv[1]);
  if (argc > 2) opt.scan_points = atoi(argv[2]);
  ShootResult r = find_kappa(opt);
  std::printf("found=%d n=%d kappa=%.17g g=%.3e digits=%d iters=%d amp10=%.1f\n",
              int(r.found), r.n, r.kappa_star, r.g_final, r.digits_used,
              r.mp_iterations, r.amplification_log10);
  if (r.found) {
    std::printf("kappa* = %s\n", r.kappa_star_str.c_str());
    std::printf("res=%.3e slope=%.3e dZdY<0=%d Vok=%d cond=%.3e nodes=%zu/%zu\n",
                r.max_ode_residual, r.slope_consistency, int(r.dZdY_negative),
                int(r.nodes_V_ok), r.conditioning_min, r.sonic_nodes.size(),
                r.origin_nodes.size());
  }
  return 0;
}
