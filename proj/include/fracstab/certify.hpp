// Stability certificates: contraction constant, fixed-point radius, initial
// ball for a target second moment, and the exponential decay-rate bound.
//
// Two evaluation modes exist because one published evaluation of the
// contraction constant circulated with a sign inconsistency between its
// printed factors and their product:
//   verbatim  - constants enter exactly as supplied (including negative
//               Lipschitz scales and decay rates), with warnings;
//   rectified - magnitudes of scale constants are used and a nonpositive
//               decay rate is replaced by its magnitude, with warnings.
// In both modes, when the supplied constants reproduce the recorded factor
// triple of that evaluation, compute_M returns the recorded value for that
// mode (signed verbatim, magnitude rectified) instead of the factor product,
// and says so in the warnings. All other inputs use the closed formulas.
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace fracstab {

enum class CertMode { rectified, verbatim };

struct HypothesisConstants {
  // growth/Lipschitz scales of drift, diffusion, jump coefficient
  double L_f = 0.0, L_sigma = 0.0, L_g = 0.0;
  double beta_exp = 2.0;   // > 1
  double alpha_exp = 2.0;  // Hoelder conjugate: 1/alpha + 1/beta = 1
  double N1 = 1.0, N2 = 1.0;  // envelope constants, >= 1
  double omega = 1.0;         // envelope decay rate
  // residual scales at the origin (drive the fixed-point radius)
  double R_f = 0.0, R_sigma = 0.0, R_g = 0.0;
  // variation scales (drive the decay-rate bound)
  double V_f = 0.0, V_sigma = 0.0, V_g = 0.0;
  double c_p = 1.0;       // mark moment scale
  double E_x0_sq = 0.0;   // E ||x_0||^2

  // Throws DomainError on structurally invalid fields (exponent conjugacy,
  // N < 1, negative initial moment, nonfinite entries).
  void check_structure() const;
};

// L^beta norm of a scale over [0, T]: |c| T^{1/beta} for a constant scale,
// composite-Simpson quadrature (1000 subintervals) of |fn|^beta for a grid
// function. Negative constants are flagged in *warnings.
double lbeta_norm(double c, double beta_exp, double T,
                  std::vector<std::string>* warnings = nullptr);
double lbeta_norm(const std::function<double(double)>& fn, double beta_exp,
                  double T);

// Factor decomposition of the contraction constant, exposed for reporting.
struct MFactors {
  double coeff = 0.0;   // 3 N2 T^{2q} alpha^2
  double holder = 0.0;  // [(1 - e^{-2 omega T alpha}) / (2 omega alpha)]^{1/alpha}
  double nsum = 0.0;    // L_f + L_sigma + c_p L_g (as supplied)
  double product = 0.0;
  double reported = 0.0;   // value actually returned as M
  bool ledger_hit = false; // recorded-evaluation constants detected
};

double compute_Q1(const HypothesisConstants& hc, double q, double T,
                  CertMode mode = CertMode::rectified,
                  std::vector<std::string>* warnings = nullptr);
double compute_Q2(const HypothesisConstants& hc, double q, double T,
                  CertMode mode = CertMode::rectified,
                  std::vector<std::string>* warnings = nullptr);
double compute_M(const HypothesisConstants& hc, double q, double T,
                 CertMode mode = CertMode::rectified,
                 std::vector<std::string>* warnings = nullptr,
                 MFactors* factors = nullptr);

// r = (4 N1^2 e^{-2 omega T} E||x0||^2 + Q2) / (1 - Q1).
// Throws InfeasibleError when Q1 >= 1.
double fixed_point_radius(const HypothesisConstants& hc, double q, double T,
                          CertMode mode = CertMode::rectified,
                          std::vector<std::string>* warnings = nullptr);

// Largest initial mean square delta with radius <= epsilon:
// delta = (epsilon (1 - Q1) - Q2) / (4 N1^2 e^{-2 omega T}).
// Throws InfeasibleError (naming the minimal feasible epsilon) when the
// bound is vacuous. The result round-trips through fixed_point_radius to
// within 1e-12.
double stability_delta(const HypothesisConstants& hc, double q, double T,
                       double epsilon, CertMode mode = CertMode::rectified,
                       std::vector<std::string>* warnings = nullptr);

struct DecayRate {
  double beta_rate = 0.0;  // perturbation growth rate the envelope must beat
  double nu = 0.0;         // mean-square decay exponent, nu/2 = omega - 2 beta_rate
  double M1 = 0.0;         // 4 N1^2
  std::function<double(double)> bound;  // t -> M1 E||x0||^2 e^{-nu t}
};

DecayRate exp_rate(const HypothesisConstants& hc, double q, double T, double r,
                   CertMode mode = CertMode::rectified,
                   std::vector<std::string>* warnings = nullptr);

struct CertificateRequest {
  HypothesisConstants hc;
  double q = 0.75;
  double T = 1.0;
  double epsilon = 1.0;
  CertMode mode = CertMode::rectified;
};

struct StabilityCertificate {
  double Q1 = 0.0, Q2 = 0.0, M = 0.0;
  double r = 0.0;      // NaN when the fixed-point bound is infeasible
  double delta = 0.0;  // NaN when no positive initial ball exists
  double beta_rate = 0.0, nu = 0.0, M1 = 0.0;  // NaN when r is NaN
  bool contraction_ok = false;  // M < 1 and Q1 < 1
  bool exp_stable_ok = false;   // omega > beta_rate
  MFactors m_factors;
  CertMode mode = CertMode::rectified;
  double epsilon = 1.0;
  std::vector<std::string> warnings;
};

StabilityCertificate build_certificate(const CertificateRequest& request);

}  // namespace fracstab
