#include "implode/shooting.hpp"

#include <cstdio>

using namespace implode;

int main(int argc, char** argv) {
  double k = argc > 1 ? atof(argv[1]) : 101.5;
  double gamma = gamma_of_kappa(k, 50.0, 1e-15);
  GContext<double> ctx(gamma, 16, 0.45);
  OriginLeg<double> ol = origin_leg(ctx.ph, 0.2, 1e-12);
  auto amp = detail::build_amp_table(ctx, ol.Y_F);
  for (double y : {0.006, 0.01, 0.02, 0.04, 0.08, 0.12, 0.1349, 0.15, 0.2, 0.24, 0.248, ol.Y_F})
    std::printf("L10(%.4g) = %.2f\n", y, amp.at(y));
  // tube width profile
  for (double y : {0.01, 0.05, 0.1, 0.13, 0.1349, 0.14, 0.2, 0.24})
    std::printf("width(%.4g) = %.6g   Bu=%.6g Bl=%.6g\n", y,
                ctx.bar.N.eval(y) / ctx.bar.q.eval(y) - ctx.bar.Bu.eval(y),
                ctx.bar.Bu.eval(y), ctx.bar.N.eval(y) / ctx.bar.q.eval(y));
  return 0;
}
