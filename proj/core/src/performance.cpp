#include "cfmimo/performance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "cfmimo/config.hpp"
#include "cfmimo/errors.hpp"
#include "cfmimo/zf_precoding.hpp"

namespace cfmimo {

namespace {

using cd = std::complex<double>;

void check_closed_form_inputs(double rho, std::size_t user, const Eigen::VectorXd& eta, const Eigen::MatrixXd& xi,
                              const Eigen::MatrixXd& chi, double attenuation) {
  if (!(std::abs(rho) <= 1.0)) {
    throw InvalidParameter("sinr_closed_form: |rho| must be <= 1");
  }
  const auto K = eta.size();
  if (xi.rows() != K || xi.cols() != K || chi.rows() != K || chi.cols() != K ||
      user >= static_cast<std::size_t>(K)) {
    throw InvalidParameter("sinr_closed_form: xi, chi must be K x K and user < K");
  }
  if (!(attenuation > 0.0 && attenuation <= 1.0)) {
    throw InvalidParameter("sinr_closed_form: phase attenuation must lie in (0, 1]");
  }
}

cd unit_phasor(double phase) { return std::polar(1.0, phase); }

}  // namespace

double sinr_closed_form(double rho, std::size_t user, const Eigen::VectorXd& eta, const Eigen::MatrixXd& xi,
                        const Eigen::MatrixXd& chi, double noise_var, double p_d, double attenuation) {
  check_closed_form_inputs(rho, user, eta, xi, chi, attenuation);
  const auto k = static_cast<Eigen::Index>(user);
  const double r2 = rho * rho;
  const double numerator = r2 * eta(k);
  if (numerator == 0.0) {
    return 0.0;
  }
  const double denominator = r2 * xi.row(k).dot(eta) + (1.0 - r2) * chi.row(k).dot(eta) +
                             noise_var / (p_d * attenuation * attenuation);
  return numerator / denominator;
}

TermPowers closed_form_terms(double rho, std::size_t user, const Eigen::VectorXd& eta, const Eigen::MatrixXd& xi,
                             const Eigen::MatrixXd& chi, double noise_var, double p_d, double attenuation) {
  check_closed_form_inputs(rho, user, eta, xi, chi, attenuation);
  const auto k = static_cast<Eigen::Index>(user);
  const double r2 = rho * rho;
  const double t2 = attenuation * attenuation;
  return {p_d * eta(k) * r2 * t2, p_d * r2 * t2 * xi.row(k).dot(eta), p_d * (1.0 - r2) * t2 * chi.row(k).dot(eta),
          noise_var};
}

double spectral_efficiency(double gamma, std::size_t air_delay_samples, std::size_t delay_samples,
                           std::size_t block_length) {
  if (block_length == 0) {
    throw InvalidParameter("spectral_efficiency: block length must be > 0");
  }
  if (air_delay_samples + delay_samples > block_length) {
    throw InvalidParameter("spectral_efficiency: overhead exceeds the block length");
  }
  if (!(gamma >= 0.0)) {
    throw InvalidParameter("spectral_efficiency: gamma must be >= 0");
  }
  const double payload =
      1.0 - static_cast<double>(air_delay_samples + delay_samples) / static_cast<double>(block_length);
  return payload * std::log2(1.0 + gamma);
}

OracleResult simulate_received(const OracleSetup& setup, std::size_t n_sym, RandomStream& rng) {
  const Eigen::Index M = setup.beta.rows();
  const Eigen::Index K = setup.beta.cols();
  if (n_sym < 1) {
    throw InvalidParameter("simulate_received: n_sym must be >= 1");
  }
  if (K < 1 || K > M || setup.eta.size() != K || setup.rho.size() != K ||
      setup.plan.num_users() != static_cast<std::size_t>(K)) {
    throw InvalidParameter("simulate_received: inconsistent dimensions");
  }
  if ((setup.rho.array().abs() > 1.0).any()) {
    throw InvalidParameter("simulate_received: |rho| must be <= 1");
  }

  const Eigen::MatrixXd beta_sqrt = setup.beta.cwiseSqrt();
  const Eigen::VectorXd innovation_gain = (1.0 - setup.rho.array().square()).sqrt().matrix();
  const Eigen::VectorXd eta_sqrt = setup.eta.cwiseSqrt();
  const double pd_sqrt = std::sqrt(setup.p_d);
  const double noise_std = std::sqrt(setup.noise_var);
  const double ap_drift_std = std::sqrt(setup.ap_phase_var);
  const double ue_drift_std = setup.ue_phase_drift ? std::sqrt(setup.ue_phase_var) : 0.0;

  Eigen::MatrixXcd g_pilot(M, K), g_hat(M, K), g_tilde(M, K), e(M, K), g_data(M, K);
  Eigen::VectorXcd ap_drift(M), ap_pilot_phase(M), ue_drift(K), ue_pilot_phase(K), s(K), x(M), v(M), z(K);

  // Running sums: 4 terms + leakage, and the 6 pairwise cross moments.
  Eigen::MatrixXd power = Eigen::MatrixXd::Zero(K, 5);
  Eigen::MatrixXcd cross = Eigen::MatrixXcd::Zero(K, 6);
  constexpr std::array<std::pair<int, int>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  OracleResult out;
  std::size_t accepted = 0;
  while (accepted < n_sym) {
    for (Eigen::Index m = 0; m < M; ++m) {
      ap_pilot_phase(m) = unit_phasor(2.0 * kPi * rng.uniform());
      ap_drift(m) = unit_phasor(ap_drift_std * rng.normal());
    }
    for (Eigen::Index k = 0; k < K; ++k) {
      ue_pilot_phase(k) = unit_phasor(2.0 * kPi * rng.uniform());
      ue_drift(k) = unit_phasor(ue_drift_std * rng.normal());
    }
    for (Eigen::Index k = 0; k < K; ++k) {
      for (Eigen::Index m = 0; m < M; ++m) {
        g_pilot(m, k) = beta_sqrt(m, k) * rng.complex_normal() * ap_pilot_phase(m) * ue_pilot_phase(k);
      }
    }
    if (setup.perfect_csi) {
      g_hat = g_pilot;
    } else {
      const Eigen::MatrixXcd y = pilot_observe(g_pilot, setup.plan, setup.p_u, setup.noise_var, rng);
      g_hat = mmse_estimate_all(y, setup.beta, setup.plan, setup.p_u, setup.noise_var).g_hat;
    }
    g_tilde = g_pilot - g_hat;

    const Eigen::MatrixXcd g_hat_rows = g_hat.transpose();
    Eigen::MatrixXcd weights;
    try {
      weights = zf_weights(g_hat_rows);
    } catch (const RankDeficiency&) {
      if (++out.rejected > n_sym) {
        throw DegenerateInput("simulate_received: too many singular draws");
      }
      continue;
    }

    // Innovations carry the pilot-time phases; data-time channels follow.
    for (Eigen::Index k = 0; k < K; ++k) {
      for (Eigen::Index m = 0; m < M; ++m) {
        e(m, k) = beta_sqrt(m, k) * rng.complex_normal() * ap_pilot_phase(m) * ue_pilot_phase(k);
        g_data(m, k) = (setup.rho(k) * g_pilot(m, k) + innovation_gain(k) * e(m, k)) * ap_drift(m) * ue_drift(k);
      }
    }
    for (Eigen::Index k = 0; k < K; ++k) {
      s(k) = rng.complex_normal();
      z(k) = noise_std * rng.complex_normal();
    }
    const Eigen::VectorXcd ps = (eta_sqrt.cast<cd>().array() * s.array()).matrix();
    x.noalias() = weights * ps;
    v = (ap_drift.array() * x.array()).matrix();

    for (Eigen::Index k = 0; k < K; ++k) {
      const cd common = pd_sqrt * ue_drift(k);
      // The G_hat term of user k, split into its own-symbol part and the rest.
      const cd own_gain = (g_hat.col(k).array() * ap_drift.array() * weights.col(k).array()).sum();
      const cd desired = common * setup.rho(k) * own_gain * eta_sqrt(k) * s(k);
      const cd hat_total = common * setup.rho(k) * (g_hat.col(k).transpose() * v)(0);
      const cd leakage = hat_total - desired;
      const cd error_term = common * setup.rho(k) * (g_tilde.col(k).transpose() * v)(0);
      const cd innovation_term = common * innovation_gain(k) * (e.col(k).transpose() * v)(0);
      const cd noise_term = z(k);

      const cd received = pd_sqrt * (g_data.col(k).transpose() * x)(0) + noise_term;
      const cd assembled = desired + leakage + error_term + innovation_term + noise_term;
      const double scale = std::max(std::abs(desired) + std::abs(leakage) + std::abs(error_term) +
                                         std::abs(innovation_term) + std::abs(noise_term),
                                     1e-300);
      out.max_decomposition_residual = std::max(out.max_decomposition_residual, std::abs(received - assembled) / scale);

      const std::array<cd, 4> terms{desired, error_term, innovation_term, noise_term};
      power(k, 0) += std::norm(desired);
      power(k, 1) += std::norm(error_term);
      power(k, 2) += std::norm(innovation_term);
      power(k, 3) += std::norm(noise_term);
      power(k, 4) += std::norm(leakage);
      for (std::size_t p = 0; p < kPairs.size(); ++p) {
        cross(k, static_cast<Eigen::Index>(p)) += terms[kPairs[p].first] * std::conj(terms[kPairs[p].second]);
      }
    }
    ++accepted;
  }

  const double inv = 1.0 / static_cast<double>(accepted);
  power *= inv;
  cross *= inv;
  out.draws = accepted;
  out.desired = power.col(0);
  out.estimation_error = power.col(1);
  out.innovation = power.col(2);
  out.noise = power.col(3);
  out.leakage = power.col(4);
  out.sinr = (out.desired.array() / (out.estimation_error.array() + out.innovation.array() + setup.noise_var)).matrix();
  out.max_term_correlation = Eigen::VectorXd::Zero(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (std::size_t p = 0; p < kPairs.size(); ++p) {
      const double denom = std::sqrt(power(k, kPairs[p].first) * power(k, kPairs[p].second));
      if (denom > 0.0) {
        out.max_term_correlation(k) =
            std::max(out.max_term_correlation(k), std::abs(cross(k, static_cast<Eigen::Index>(p))) / denom);
      }
    }
  }
  return out;
}

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw DegenerateInput("quantile: empty sample set");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidParameter("quantile: p must lie in [0, 1]");
  }
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

EmpiricalCdf cdf_and_percentiles(std::span<const double> samples) {
  if (samples.empty()) {
    throw DegenerateInput("cdf_and_percentiles: empty sample set");
  }
  EmpiricalCdf cdf;
  cdf.values.assign(samples.begin(), samples.end());
  std::sort(cdf.values.begin(), cdf.values.end());
  const auto n = static_cast<double>(cdf.values.size());
  cdf.probabilities.resize(cdf.values.size());
  for (std::size_t i = 0; i < cdf.values.size(); ++i) {
    cdf.probabilities[i] = static_cast<double>(i + 1) / n;
  }
  cdf.q05 = quantile(cdf.values, 0.05);
  cdf.q50 = quantile(cdf.values, 0.50);
  return cdf;
}

}  // namespace cfmimo
