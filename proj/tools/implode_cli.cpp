// command-line front end: exact coefficient tables, lemma verification, and
// the shooting + profile pipeline.  Exit codes: 0 success, 1 failed check,
// 2 configuration / usage error.
#include <CLI11.hpp>
#include <json.hpp>

#include "implode/barrier.hpp"
#include "implode/induction.hpp"
#include "implode/profile.hpp"
#include "implode/shooting.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

using namespace implode;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  Config cfg;                 // parsed config file (defaults if absent)
  std::string out = "out";
  std::string format = "csv";
  int N = 500;
  int n = 101;
  double kappa = 0;           // 0: not set on the command line
  bool limit_gamma = false;
  double zmax = 1e4;
  double tol = 1e-8;
  int workers = 0;
  bool quiet = false;
};

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_canonical(const RunConfig& rc, const std::string& command) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "command=%s d=%d p=%d gamma_mode=%d kappa_cfg=%.17g N=%d n=%d "
                "kappa=%.17g limit_gamma=%d zmax=%.17g tol=%.17g format=%s",
                command.c_str(), rc.cfg.d, rc.cfg.p, int(rc.cfg.gamma_mode),
                rc.cfg.kappa, rc.N, rc.n, rc.kappa, int(rc.limit_gamma), rc.zmax,
                rc.tol, rc.format.c_str());
  return buf;
}

void write_manifest(const RunConfig& rc, const std::string& command, double wall_s) {
  json m;
  m["command"] = command;
  m["config"] = config_canonical(rc, command);
  char h[32];
  std::snprintf(h, sizeof h, "%016" PRIx64, fnv1a(config_canonical(rc, command)));
  m["config_hash"] = h;
  m["version"] = "1.0.0";
  m["compiler"] =
#if defined(__clang__)
      "clang " __clang_version__;
#elif defined(__GNUC__)
      "gcc " __VERSION__;
#else
      "unknown";
#endif
  m["wall_time_s"] = wall_s;
  m["workers"] = rc.workers;
  std::ofstream(fs::path(rc.out) / "manifest.json") << m.dump(2) << "\n";
}

void note(const RunConfig& rc, const char* fmt, ...) {
  // human diagnostics go to stderr; --quiet silences them entirely
  if (rc.quiet) return;
  va_list ap;
  va_start(ap, fmt);
  std::vfprintf(stderr, fmt, ap);
  va_end(ap);
}

// ---- coeffs ----

int cmd_coeffs(RunConfig& rc) {
  fs::create_directories(rc.out);
  auto t0 = std::chrono::steady_clock::now();
  bool exact = rc.limit_gamma ||
               (rc.kappa == 0 && rc.cfg.gamma_mode == GammaMode::ExactLimit);
  double kap = rc.kappa > 0 ? rc.kappa : rc.cfg.kappa;
  std::ostringstream body;
  if (exact) {
    auto S = compute_sonic_series(limit_params(), std::max(1, rc.N));
    if (rc.format == "json") {
      json rows = json::array();
      for (int n = 0; n <= rc.N; ++n)
        rows.push_back({{"n", n}, {"U", exact_string(S.U[n])}, {"Uhat", exact_string(S.Uhat[n])}});
      body << rows.dump(2) << "\n";
    } else {
      body << "n,U_n,Uhat_n\n";
      for (int n = 0; n <= rc.N; ++n)
        body << n << ",\"" << exact_string(S.U[n]) << "\",\"" << exact_string(S.Uhat[n])
             << "\"\n";
    }
  } else {
    // resonance: the order-n solve divides by n lam- - lam+, which vanishes
    // exactly when kappa is an integer in range
    if (kap == std::floor(kap) && kap <= double(rc.N) + 1) {
      std::fprintf(stderr, "error: resonant order; kappa = %g is an integer <= N+1\n", kap);
      return 2;
    }
    mpreal::default_precision(40);
    mpreal gamma = gamma_of_kappa(mpreal(kap), rc.cfg.c_kappa_floor, mpreal(1e-35));
    auto par = params_from_gamma(gamma);
    auto S = compute_sonic_series(par, std::max(1, rc.N));
    double lp = double(par.lam_plus), lm = double(par.lam_minus);
    auto fmtv = [](const mpreal& v) {
      std::ostringstream os;
      os.precision(17);
      os << std::scientific << v;
      return os.str();
    };
    if (rc.format == "json") {
      json rows = json::array();
      for (int n = 0; n <= rc.N; ++n) {
        double cond = std::abs(n * lm - lp) / lp;
        rows.push_back({{"n", n}, {"U", fmtv(S.U[n])}, {"cond", cond}});
      }
      body << rows.dump(2) << "\n";
    } else {
      body << "n,U_n,cond\n";
      char c[32];
      for (int n = 0; n <= rc.N; ++n) {
        std::snprintf(c, sizeof c, "%.6e", std::abs(n * lm - lp) / lp);
        body << n << "," << fmtv(S.U[n]) << "," << c << "\n";
      }
    }
  }
  std::string name = rc.format == "json" ? "coeffs.json" : "coeffs.csv";
  std::ofstream(fs::path(rc.out) / name) << body.str();
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(rc, "coeffs", wall);
  note(rc, "coeffs: wrote %d rows (%s mode) in %.2f s\n", rc.N + 1,
       exact ? "exact" : "float", wall);
  if (rc.quiet) std::printf("%s\n", (fs::path(rc.out) / name).c_str());
  return 0;
}

// ---- verify ----

int cmd_verify(RunConfig& rc, const std::string& which) {
  fs::create_directories(rc.out);
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  json report;
  if (which == "induction" || which == "all") {
    auto S = compute_sonic_series(limit_params(), 451);
    auto R = verify_induction(InductionInputs::from_series(S));
    report["induction"] = R.to_json();
    std::ofstream(fs::path(rc.out) / "induction.json") << R.to_json().dump(2) << "\n";
    note(rc, "verify induction: %s\n", R.pass() ? "pass" : "FAIL");
    ok = ok && R.pass();
  }
  if (which == "barriers" || which == "all") {
    auto par = limit_params();
    auto S = compute_sonic_series(par, 2);
    auto R = certify_barriers(par, S.U[2]);
    report["barriers"] = R.to_json();
    std::ofstream(fs::path(rc.out) / "barriers.json") << R.to_json().dump(2) << "\n";
    note(rc, "verify barriers: %zu certificates, %s\n", R.certs.size(),
         R.all_positive() ? "all positive" : "FAIL");
    ok = ok && R.all_positive();
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(rc, "verify " + which, wall);
  if (rc.quiet) std::printf("%s\n", ok ? "pass" : "fail");
  return ok ? 0 : 1;
}

// ---- shoot-and-profile ----

int cmd_shoot(RunConfig& rc) {
  if (rc.n % 2 == 0) {
    std::fprintf(stderr, "error: n must be odd\n");
    return 2;
  }
  fs::create_directories(rc.out);
  auto t0 = std::chrono::steady_clock::now();

  ShootOptions opt;
  opt.n = rc.n;
  opt.g_tol = rc.tol;
  opt.verbose = !rc.quiet;
  json events = json::array();
  note(rc, "shoot: scanning kappa in (%d, %d)\n", rc.n, rc.n + 1);
  ShootResult sr = find_kappa(opt);
  if (!sr.found) {
    std::fprintf(stderr, "error: shooting stage failed (no matched kappa in (%d, %d))\n",
                 rc.n, rc.n + 1);
    return 1;
  }
  events.push_back({{"event", "kappa_matched"},
                    {"kappa", sr.kappa_star},
                    {"iterations", sr.mp_iterations},
                    {"digits", sr.digits_used}});

  char hexk[64];
  std::snprintf(hexk, sizeof hexk, "%a", sr.kappa_star);
  json shoot;
  shoot["n"] = sr.n;
  shoot["kappa_star_hex"] = hexk;
  shoot["kappa_star"] = sr.kappa_star_str;
  shoot["gamma"] = sr.gamma_str;
  shoot["g_final"] = sr.g_final;
  shoot["delta_Y"] = sr.delta_Y;
  shoot["digits_used"] = sr.digits_used;
  shoot["mp_iterations"] = sr.mp_iterations;
  shoot["amplification_log10"] = sr.amplification_log10;
  shoot["residuals"] = {{"max_ode_residual", sr.max_ode_residual},
                        {"slope_consistency", sr.slope_consistency},
                        {"conditioning_min", sr.conditioning_min}};
  shoot["checks"] = {{"nodes_V_ok", sr.nodes_V_ok}, {"dZdY_negative", sr.dZdY_negative}};

  // matched-precision continuation: crossing and global profile
  mpreal::default_precision(sr.digits_used);
  mpreal gamma(sr.gamma_str);
  GContext<mpreal> ctx(gamma, sr.digits_used, 0.45);
  note(rc, "shoot: continuing below the sonic point\n");
  BelowSonic bs;
  try {
    bs = extend_below_sonic(ctx);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: crossing stage failed: %s\n", e.what());
    return 1;
  }
  if (!bs.ds.ok) {
    std::fprintf(stderr, "error: crossing stage failed (event sequence incomplete)\n");
    return 1;
  }
  events.push_back({{"event", "xi1_delta_Y_zero"}, {"xi", bs.ds.xi1}});
  events.push_back({{"event", "xi2_Y_zero"}, {"xi", bs.ds.xi2}});
  events.push_back({{"event", "xi3_window_end"}, {"xi", bs.ds.xi3}});
  shoot["events"] = events;
  std::ofstream(fs::path(rc.out) / "shoot.json") << shoot.dump(2) << "\n";

  note(rc, "shoot: assembling the global profile to Z = %g\n", rc.zmax);
  GlobalProfile gp;
  try {
    gp = build_profile(ctx, sr.delta_Y, bs, rc.zmax);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: profile stage failed: %s\n", e.what());
    return 1;
  }

  // profile table: Z, V, W, Phi plus the physical velocity combinations
  {
    std::ofstream f(fs::path(rc.out) / "profile.csv");
    f << "Z,V,W,Phi,U0,U\n";
    char line[256];
    for (std::size_t i = 0; i < gp.nodes.size(); ++i) {
      double V = gp.nodes[i].V, om = std::sqrt(1 - V * V);
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    gp.nodes[i].Z, V, gp.W[i], gp.Phi[i], 1 / om, V / om);
      f << line;
    }
  }

  json sum;
  sum["n"] = sr.n;
  sum["kappa_star"] = sr.kappa_star_str;
  sum["a_exponent"] = gp.a_exponent;
  sum["V_inf"] = gp.V_inf;
  sum["W_inf"] = gp.W_inf;
  sum["events"] = {{"xi1", bs.ds.xi1}, {"xi2", bs.ds.xi2}, {"xi3", bs.ds.xi3},
                   {"Z2", gp.Z2},      {"V2", gp.V2}};
  sum["checks"] = {{"bounds_ok", gp.bounds_ok},
                   {"far_monotone", gp.far_monotone},
                   {"omega_far_ok", gp.omega_far_ok},
                   {"overlap_max_rel", gp.overlap_max_rel},
                   {"wza_drift", gp.wza_drift},
                   {"even_coeff_max", gp.even_coeff_max},
                   {"ok", gp.ok}};
  std::ofstream(fs::path(rc.out) / "summary.json") << sum.dump(2) << "\n";

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(rc, "shoot-and-profile", wall);
  note(rc, "shoot: done in %.1f s, profile ok = %d\n", wall, int(gp.ok));
  if (rc.quiet) std::printf("%s\n", sum.dump().c_str());
  if (!gp.ok) {
    std::fprintf(stderr, "error: profile stage failed (consistency checks)\n");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig rc;
  rc.workers = int(std::thread::hardware_concurrency());
  std::string config_path, which = "all";

  CLI::App app{"self-similar implosion profile toolkit"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* c) {
    c->add_option("--config", config_path, "flat key = value configuration file")
        ->each([&](const std::string& p) { rc.cfg = parse_config_file(p); });
    c->add_option("--out", rc.out, "output directory");
    c->add_option("--format", rc.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--workers", rc.workers, "worker threads for independent runs");
    c->add_flag("--quiet", rc.quiet, "machine output only on stdout");
  };

  auto* co = app.add_subcommand("coeffs", "regenerate the sonic-point coefficient table");
  co->add_option("--N", rc.N, "highest order");
  co->add_flag("--limit-gamma", rc.limit_gamma, "exact arithmetic at the limit exponent");
  co->add_option("--kappa", rc.kappa, "float mode at this eigenvalue ratio");
  add_common(co);

  auto* ve = app.add_subcommand("verify", "run the exact certification suites");
  ve->add_option("which", which, "induction | barriers | all")
      ->check(CLI::IsMember({"induction", "barriers", "all"}));
  add_common(ve);

  auto* sh = app.add_subcommand("shoot-and-profile",
                                "match kappa and build the global profile");
  sh->add_option("--n", rc.n, "odd bracket index: kappa in (n, n+1)");
  sh->add_option("--kappa", rc.kappa, "unused placeholder for config symmetry");
  sh->add_option("--zmax", rc.zmax, "far-field endpoint");
  sh->add_option("--tol", rc.tol, "matching tolerance on g(kappa)");
  add_common(sh);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (co->parsed()) return cmd_coeffs(rc);
    if (ve->parsed()) return cmd_verify(rc, which);
    if (sh->parsed()) return cmd_shoot(rc);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
