#pragma once

// Pilot assignment, de-spread pilot observation and linear MMSE estimation.
//
// Pilot sequences are orthonormal and never materialised: correlating the
// received block with pilot i_k collapses to the sum of the channels of every
// user sharing that pilot plus unit-norm-combined noise.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/config.hpp"
#include "cfmimo/random.hpp"

namespace cfmimo {

struct PilotPlan {
  std::vector<std::size_t> assignment;         // pilot index per user, 0-based
  std::vector<std::vector<std::size_t>> coset;  // users sharing k's pilot, includes k, ascending

  std::size_t num_users() const noexcept { return assignment.size(); }
};

PilotPlan assign_pilots(std::size_t num_users, std::size_t pilot_length, PilotPolicy policy,
                        RandomStream& rng);

// Builds the cosets for a given assignment.
PilotPlan make_pilot_plan(std::vector<std::size_t> assignment);

// De-spread observations y_{mk,p} (M x K) for true pilot-time channels g (M x K).
Eigen::MatrixXcd pilot_observe(const Eigen::MatrixXcd& g_pilot, const PilotPlan& plan, double p_u,
                               double noise_var, RandomStream& rng);

struct MmseScalar {
  std::complex<double> estimate;
  double variance = 0.0;  // alpha
};

// One link: coset_beta_sum = sum of beta_{mk'} over k' in P_k.
MmseScalar mmse_estimate(std::complex<double> y, double beta, double coset_beta_sum, double p_u,
                         double noise_var);

struct EstimationResult {
  Eigen::MatrixXcd g_hat;             // M x K
  Eigen::MatrixXd alpha;              // M x K
  Eigen::MatrixXd g_tilde_variance;   // M x K, beta - alpha
};

// alpha_{mk} = p_u beta_{mk}^2 / (p_u sum_{k' in P_k} beta_{mk'} + sigma^2).
Eigen::MatrixXd estimate_variances(const Eigen::MatrixXd& beta, const PilotPlan& plan, double p_u,
                                   double noise_var);

// MMSE estimates for every link from de-spread observations.
EstimationResult mmse_estimate_all(const Eigen::MatrixXcd& y, const Eigen::MatrixXd& beta,
                                   const PilotPlan& plan, double p_u, double noise_var);

}  // namespace cfmimo
