#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "implode/induction.hpp"

#include <random>

using namespace implode;

namespace {
const SonicSeries<Surd>& shared_series() {
  static auto S = compute_sonic_series(limit_params(), 451);
  return S;
}
}  // namespace

TEST_CASE("full verification passes at the exact limit") {
  auto in = InductionInputs::from_series(shared_series());
  auto R = verify_induction(in);
  CHECK(R.unif_product_bound);
  CHECK(R.sign_positive);
  CHECK(R.hat_monotone);
  CHECK(R.hat_ratio_asym);
  CHECK(R.c1bar_dominates);
  CHECK(R.small_index_bound);
  CHECK(R.m1_gap);
  CHECK(R.ineq_main.holds);
  CHECK(R.ineq_q.holds);
  CHECK(R.ineq_tail.holds);
  CHECK(R.pass());
  MESSAGE("ineq_main lhs = ", decimal_string(R.ineq_main.lhs, 35));
  MESSAGE("ineq_q    lhs = ", decimal_string(R.ineq_q.lhs, 35), "  rhs = ",
          decimal_string(R.ineq_q.rhs, 35));
  MESSAGE("ineq_tail lhs = ", decimal_string(R.ineq_tail.lhs, 35), "  rhs = ",
          decimal_string(R.ineq_tail.rhs, 35));
  auto j = R.to_json();
  CHECK(j["pass"] == true);
  CHECK(std::string(j["ineq_main"]["lhs"]).size() >= 30);
}

TEST_CASE("random single-coefficient mutations are detected") {
  auto base = InductionInputs::from_series(shared_series());
  std::mt19937 rng(4242);
  // mutate inside the range the claims actually cover (n0 = 20 onward)
  std::uniform_int_distribution<int> pick(20, 450);
  std::uniform_int_distribution<int> kind(0, 2);
  int detected = 0;
  for (int t = 0; t < 20; ++t) {
    auto in = base;
    int n = pick(rng);
    switch (kind(rng)) {
      case 0:  // sign flip
        in.Uhat[n] = -in.Uhat[n];
        in.U[n] = -in.U[n];
        break;
      case 1:  // 10% inflation
        in.Uhat[n] = in.Uhat[n] * Surd(Rational(11, 10));
        in.U[n] = in.U[n] * Surd(Rational(11, 10));
        break;
      default:  // swap with neighbour (breaks monotone growth)
        std::swap(in.Uhat[n], in.Uhat[n - 1]);
        std::swap(in.U[n], in.U[n - 1]);
        break;
    }
    auto R = verify_induction(in);
    if (!R.growth_ok()) ++detected;
  }
  CHECK(detected == 20);
}

TEST_CASE("weakened constants flip the closing inequalities") {
  auto in = InductionInputs::from_series(shared_series());
  InductionOptions opt;
  opt.delta_hat = Rational(1, 1000);  // far too demanding
  auto R = verify_induction(in, opt);
  CHECK(!R.pass());
}

TEST_CASE("too-short series is rejected") {
  auto S = compute_sonic_series(limit_params(), 100);
  auto in = InductionInputs::from_series(S);
  CHECK_THROWS(verify_induction(in));
}
