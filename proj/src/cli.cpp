#include "fracstab/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fracstab/certify.hpp"
#include "fracstab/config.hpp"
#include "fracstab/csvio.hpp"
#include "fracstab/errors.hpp"
#include "fracstab/fracops.hpp"
#include "fracstab/mittag_leffler.hpp"
#include "fracstab/solver.hpp"
#include "fracstab/stats.hpp"
#include "fracstab/svgplot.hpp"

namespace fracstab {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string certificate_report(const StabilityCertificate& cert, double q, double T) {
  std::string out;
  out += std::string("mode = ") +
         (cert.mode == CertMode::verbatim ? "verbatim" : "rectified") + "\n";
  out += "q = " + fmt(q) + "\n";
  out += "T = " + fmt(T) + "\n";
  out += "epsilon = " + fmt(cert.epsilon) + "\n";
  out += "Q1 = " + fmt(cert.Q1) + "\n";
  out += "Q2 = " + fmt(cert.Q2) + "\n";
  out += "M = " + fmt(cert.M) + "\n";
  out += "M_factors.coeff = " + fmt(cert.m_factors.coeff) + "\n";
  out += "M_factors.holder = " + fmt(cert.m_factors.holder) + "\n";
  out += "M_factors.nsum = " + fmt(cert.m_factors.nsum) + "\n";
  out += "M_factors.product = " + fmt(cert.m_factors.product) + "\n";
  out += std::string("M_factors.ledger_hit = ") +
         (cert.m_factors.ledger_hit ? "true" : "false") + "\n";
  out += "r = " + fmt(cert.r) + "\n";
  out += "delta = " + fmt(cert.delta) + "\n";
  out += "beta_rate = " + fmt(cert.beta_rate) + "\n";
  out += "nu = " + fmt(cert.nu) + "\n";
  out += "M1 = " + fmt(cert.M1) + "\n";
  out += std::string("contraction_ok = ") + (cert.contraction_ok ? "true" : "false") +
         "\n";
  out += std::string("exp_stable_ok = ") + (cert.exp_stable_ok ? "true" : "false") +
         "\n";
  for (const std::string& w : cert.warnings) {
    out += "# warning: " + w + "\n";
  }
  return out;
}

int cmd_certify(const std::string& config_path, double epsilon,
                const std::string& mode_override, const std::string& report_path) {
  RunConfig cfg = parse_config(config_path);
  if (!cfg.has_hypothesis) {
    throw ConfigError(config_path +
                      ": certification needs a hypothesis block (hypothesis.*)");
  }
  CertificateRequest request;
  request.hc = cfg.hypothesis;
  request.q = cfg.system.q;
  request.T = cfg.system.T;
  request.epsilon = epsilon;
  request.mode = cfg.mode;
  if (mode_override == "rectified") request.mode = CertMode::rectified;
  if (mode_override == "verbatim") request.mode = CertMode::verbatim;

  const StabilityCertificate cert = build_certificate(request);
  const std::string report = certificate_report(cert, request.q, request.T);
  std::cout << report;
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw Error("cannot open report file '" + report_path + "'");
    out << report;
  }
  return cert.contraction_ok ? 0 : 2;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed,
                 const std::string& out_path, bool verify) {
  RunConfig cfg = parse_config(config_path);
  Trajectory traj = simulate_path(cfg.system, cfg.h, RngStream{seed, 0});
  write_trajectory_csv(traj, out_path);
  std::cout << "wrote " << out_path << " (" << traj.grid.values.size() << " rows, "
            << traj.scheme_meta.jump_events << " jump events, "
            << traj.scheme_meta.deferred_jump_evals << " deferred kernel evals)\n";
  if (verify) {
    const double residual = deterministic_residual(traj.grid, cfg.system);
    std::cout << "residual = " << fmt(residual) << "\n";
  }
  return 0;
}

int cmd_ensemble(const std::string& config_path, int paths_override,
                 long long seed_override, const std::string& out_path,
                 bool fit_requested, const std::string& svg_path) {
  RunConfig cfg = parse_config(config_path);
  const int paths = paths_override > 0 ? paths_override : cfg.ensemble.paths;
  const std::uint64_t seed = seed_override >= 0
                                 ? static_cast<std::uint64_t>(seed_override)
                                 : cfg.ensemble.seed;

  EnsembleStats stats = run_ensemble(cfg.system, cfg.h, paths, seed);
  DecayFit fit;
  const bool has_fit = fit_requested;
  if (has_fit) fit = fit_decay(stats, cfg.ensemble.window_fraction);

  write_ensemble_csv(stats, has_fit ? &fit : nullptr, out_path);
  if (!svg_path.empty()) write_svg(stats, has_fit ? &fit : nullptr, svg_path);

  std::cout << "wrote " << out_path << " (" << stats.paths_used << "/" << paths
            << " paths, " << stats.divergent << " divergent)\n";
  if (has_fit) {
    const double lo = fit.mu_hat - 1.959963984540054 * fit.mu_se;
    const double hi = fit.mu_hat + 1.959963984540054 * fit.mu_se;
    std::cout << "mu_hat = " << fmt(fit.mu_hat) << " (95% CI [" << fmt(lo) << ", "
              << fmt(hi) << "]), m_star_hat = " << fmt(fit.m_star_hat)
              << ", r_squared = " << fmt(fit.r_squared) << "\n";
  }
  return 0;
}

int cmd_ml(double q, double p, double re, double im) {
  const MLEvaluation result = ml_scalar(q, p, std::complex<double>(re, im));
  if (result.value.imag() == 0.0) {
    std::cout << fmt(result.value.real()) << "\n";
  } else {
    std::cout << fmt(result.value.real()) << " " << fmt(result.value.imag()) << "\n";
  }
  std::cout << "# truncation_bound " << fmt(result.truncation_bound) << ", terms "
            << result.terms_used << "\n";
  return 0;
}

int cmd_selftest(int paths) {
  struct Case {
    const char* name;
    std::uint64_t seed;
  };
  constexpr Case kCases[] = {{"wiener_isometry", 101},
                             {"wiener_p4_bound", 202},
                             {"jump_isometry", 303},
                             {"jump_martingale", 404}};
  bool all_ok = true;
  for (const Case& c : kCases) {
    const IsometryReport report = isometry_report(paths, c.seed, c.name);
    const bool ok = report.one_sided ? report.z <= 3.0 : std::abs(report.z) <= 3.0;
    all_ok = all_ok && ok;
    std::printf("%-18s estimate % .6e expected % .6e z %+7.3f %s %s\n", c.name,
                report.estimate, report.expected, report.z,
                report.one_sided ? "(one-sided)" : "           ",
                ok ? "PASS" : "FAIL");
  }
  std::cout << (all_ok ? "selftest passed" : "selftest FAILED") << "\n";
  return all_ok ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{
      "Simulation and stability certification of Caputo-fractional systems "
      "with Wiener and compensated-jump noise"};
  app.name("fracstab");
  app.require_subcommand(1);

  std::string config_path, report_path, out_path, svg_path, mode_override;
  double epsilon = 1.0;
  std::uint64_t sim_seed = 1;
  bool verify = false;
  int paths_override = -1;
  long long seed_override = -1;
  bool fit_requested = false;
  double ml_q = 1.0, ml_p = 1.0, ml_re = 0.0, ml_im = 0.0;
  int selftest_paths = 5000;

  CLI::App* certify = app.add_subcommand("certify", "evaluate a stability certificate");
  certify->add_option("--config", config_path, "run configuration file")->required();
  certify->add_option("--epsilon", epsilon, "target mean-square level for delta");
  certify->add_option("--mode", mode_override, "override mode: rectified|verbatim")
      ->check(CLI::IsMember({"rectified", "verbatim"}));
  certify->add_option("--report", report_path, "also write the report to this file");

  CLI::App* simulate = app.add_subcommand("simulate", "simulate one path to CSV");
  simulate->add_option("--config", config_path, "run configuration file")->required();
  simulate->add_option("--seed", sim_seed, "stream seed");
  simulate->add_option("--out", out_path, "output CSV path")->required();
  simulate->add_flag("--verify", verify,
                     "check the fractional-derivative residual (noise-free runs)");

  CLI::App* ensemble = app.add_subcommand("ensemble", "mean-square statistics to CSV");
  ensemble->add_option("--config", config_path, "run configuration file")->required();
  ensemble->add_option("--paths", paths_override, "number of paths (overrides config)");
  ensemble->add_option("--seed", seed_override, "base seed (overrides config)");
  ensemble->add_option("--out", out_path, "output CSV path")->required();
  ensemble->add_flag("--fit-decay", fit_requested, "fit an exponential decay envelope");
  ensemble->add_option("--svg", svg_path, "also render an SVG plot");

  CLI::App* ml = app.add_subcommand("ml", "evaluate the two-parameter function E_{q,p}(z)");
  ml->add_option("--q", ml_q, "first parameter, > 0")->required();
  ml->add_option("--p", ml_p, "second parameter");
  ml->add_option("--re", ml_re, "Re z")->required();
  ml->add_option("--im", ml_im, "Im z");

  CLI::App* selftest = app.add_subcommand("selftest", "noise-layer distribution checks");
  selftest->add_option("--paths", selftest_paths, "repetitions per check");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  }

  try {
    if (certify->parsed()) {
      return cmd_certify(config_path, epsilon, mode_override, report_path);
    }
    if (simulate->parsed()) {
      return cmd_simulate(config_path, sim_seed, out_path, verify);
    }
    if (ensemble->parsed()) {
      return cmd_ensemble(config_path, paths_override, seed_override, out_path,
                          fit_requested, svg_path);
    }
    if (ml->parsed()) {
      return cmd_ml(ml_q, ml_p, ml_re, ml_im);
    }
    if (selftest->parsed()) {
      return cmd_selftest(selftest_paths);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "usage error: no subcommand\n";
  return 64;
}

}  // namespace fracstab
