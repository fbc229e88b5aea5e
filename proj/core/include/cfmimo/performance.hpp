#pragma once

// Closed-form effective SINR and spectral efficiency, plus a brute-force
// received-signal simulator that evaluates each term of the downlink signal
// decomposition separately.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/random.hpp"
#include "cfmimo/uplink_training.hpp"

namespace cfmimo {

struct UserResult {
  double gamma = 0.0;  // linear
  double rate = 0.0;   // bit/s/Hz
};

// gamma_k = rho^2 eta_k / (rho^2 sum_i eta_i xi_ki + (1 - rho^2) sum_i eta_i chi_ki
//                          + sigma^2 / (p_d T^2)),  T = phase attenuation.
// Only rho^2 enters, so any |rho| <= 1 is accepted.
double sinr_closed_form(double rho, std::size_t user, const Eigen::VectorXd& eta, const Eigen::MatrixXd& xi,
                        const Eigen::MatrixXd& chi, double noise_var, double p_d, double attenuation);

// R = (1 - (n_ai + n_dtau) / T_b) log2(1 + gamma).
double spectral_efficiency(double gamma, std::size_t air_delay_samples, std::size_t delay_samples,
                           std::size_t block_length);

// Expected term powers as used by the closed form (all in W).
struct TermPowers {
  double desired = 0.0;
  double estimation_error = 0.0;  // I1
  double innovation = 0.0;        // I2
  double noise = 0.0;             // I3
};

TermPowers closed_form_terms(double rho, std::size_t user, const Eigen::VectorXd& eta, const Eigen::MatrixXd& xi,
                             const Eigen::MatrixXd& chi, double noise_var, double p_d, double attenuation);

struct OracleSetup {
  Eigen::MatrixXd beta;  // M x K
  PilotPlan plan;
  double p_u = 0.0;
  double p_d = 0.0;
  double noise_var = 0.0;
  // G_hat = G at pilot time (no estimation error).
  bool perfect_csi = false;
  Eigen::VectorXd eta;  // K
  Eigen::VectorXd rho;  // K
  // Accumulated phase variances n * sigma^2 over the delay (rad^2).
  double ap_phase_var = 0.0;
  double ue_phase_var = 0.0;
  bool ue_phase_drift = true;
};

struct OracleResult {
  // Per-user sample means of the squared term magnitudes (W).
  Eigen::VectorXd desired;           // |D|^2, coherent part along s_k
  Eigen::VectorXd leakage;           // other-user residue of the G_hat term (phase noise only)
  Eigen::VectorXd estimation_error;  // |I1|^2
  Eigen::VectorXd innovation;        // |I2|^2
  Eigen::VectorXd noise;             // |I3|^2
  // mean|D|^2 / (mean|I1|^2 + mean|I2|^2 + sigma^2)
  Eigen::VectorXd sinr;
  // Largest normalised sample cross-correlation among D, I1, I2, I3, per user.
  Eigen::VectorXd max_term_correlation;
  // max |y_k - (D + leakage + I1 + I2 + I3)| / sum of term magnitudes, over all draws.
  double max_decomposition_residual = 0.0;
  std::size_t draws = 0;
  std::size_t rejected = 0;
};

// Each draw runs the full chain: pilot-time channels with AP/UE phases, de-spread
// observation and MMSE estimate, ZF weights, aged data-time channels with fresh
// innovations and phase drift, unit-power Gaussian symbols and receiver noise.
OracleResult simulate_received(const OracleSetup& setup, std::size_t n_sym, RandomStream& rng);

struct EmpiricalCdf {
  std::vector<double> values;         // ascending
  std::vector<double> probabilities;  // i / n, ending at 1
  double q05 = 0.0;
  double q50 = 0.0;
};

// Linear interpolation between order statistics at h = (n - 1) p.
double quantile(std::span<const double> sorted, double p);

EmpiricalCdf cdf_and_percentiles(std::span<const double> samples);

}  // namespace cfmimo
