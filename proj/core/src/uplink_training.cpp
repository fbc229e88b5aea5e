#include "cfmimo/uplink_training.hpp"

#include <algorithm>
#include <cmath>

#include "cfmimo/errors.hpp"

namespace cfmimo {

namespace {

Eigen::MatrixXd coset_sums(const Eigen::MatrixXd& beta, const PilotPlan& plan) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(beta.rows(), beta.cols());
  for (Eigen::Index k = 0; k < beta.cols(); ++k) {
    for (const auto j : plan.coset[k]) {
      sums.col(k) += beta.col(static_cast<Eigen::Index>(j));
    }
  }
  return sums;
}

void check_dims(const Eigen::MatrixXd& beta, const PilotPlan& plan) {
  if (static_cast<std::size_t>(beta.cols()) != plan.num_users()) {
    throw InvalidParameter("pilot plan and beta disagree on the number of users");
  }
}

}  // namespace

PilotPlan make_pilot_plan(std::vector<std::size_t> assignment) {
  PilotPlan plan;
  plan.coset.resize(assignment.size());
  for (std::size_t k = 0; k < assignment.size(); ++k) {
    for (std::size_t j = 0; j < assignment.size(); ++j) {
      if (assignment[j] == assignment[k]) {
        plan.coset[k].push_back(j);
      }
    }
  }
  plan.assignment = std::move(assignment);
  return plan;
}

PilotPlan assign_pilots(std::size_t num_users, std::size_t pilot_length, PilotPolicy policy,
                        RandomStream& rng) {
  if (pilot_length < 1) {
    throw InvalidParameter("assign_pilots: pilot_length must be >= 1");
  }
  std::vector<std::size_t> assignment(num_users);
  if (policy == PilotPolicy::round_robin) {
    for (std::size_t k = 0; k < num_users; ++k) {
      assignment[k] = k % pilot_length;
    }
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, pilot_length - 1);
    for (auto& a : assignment) {
      a = pick(rng.engine());
    }
  }
  return make_pilot_plan(std::move(assignment));
}

Eigen::MatrixXcd pilot_observe(const Eigen::MatrixXcd& g_pilot, const PilotPlan& plan, double p_u,
                               double noise_var, RandomStream& rng) {
  if (static_cast<std::size_t>(g_pilot.cols()) != plan.num_users()) {
    throw InvalidParameter("pilot_observe: channel matrix and pilot plan disagree on K");
  }
  const Eigen::Index M = g_pilot.rows();
  const auto K = static_cast<Eigen::Index>(plan.num_users());
  const double amplitude = std::sqrt(p_u);
  const double noise_std = std::sqrt(noise_var);

  // Users on the same pilot see the same observation, noise included.
  const std::size_t pilots =
      plan.assignment.empty() ? 0 : *std::max_element(plan.assignment.begin(), plan.assignment.end()) + 1;
  Eigen::MatrixXcd per_pilot = Eigen::MatrixXcd::Zero(M, static_cast<Eigen::Index>(pilots));
  for (Eigen::Index k = 0; k < K; ++k) {
    per_pilot.col(static_cast<Eigen::Index>(plan.assignment[k])) += amplitude * g_pilot.col(k);
  }
  for (Eigen::Index i = 0; i < per_pilot.cols(); ++i) {
    for (Eigen::Index m = 0; m < M; ++m) {
      per_pilot(m, i) += noise_std * rng.complex_normal();
    }
  }
  Eigen::MatrixXcd y(M, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    y.col(k) = per_pilot.col(static_cast<Eigen::Index>(plan.assignment[k]));
  }
  return y;
}

MmseScalar mmse_estimate(std::complex<double> y, double beta, double coset_beta_sum, double p_u,
                         double noise_var) {
  if (!(beta > 0.0)) {
    throw InvalidParameter("mmse_estimate: beta must be > 0");
  }
  const double denom = p_u * coset_beta_sum + noise_var;
  return {std::sqrt(p_u) * beta / denom * y, p_u * beta * beta / denom};
}

Eigen::MatrixXd estimate_variances(const Eigen::MatrixXd& beta, const PilotPlan& plan, double p_u,
                                   double noise_var) {
  check_dims(beta, plan);
  const Eigen::MatrixXd sums = coset_sums(beta, plan);
  return (p_u * beta.array().square() / (p_u * sums.array() + noise_var)).matrix();
}

EstimationResult mmse_estimate_all(const Eigen::MatrixXcd& y, const Eigen::MatrixXd& beta,
                                   const PilotPlan& plan, double p_u, double noise_var) {
  check_dims(beta, plan);
  const Eigen::MatrixXd sums = coset_sums(beta, plan);
  EstimationResult r;
  r.g_hat.resize(beta.rows(), beta.cols());
  r.alpha.resize(beta.rows(), beta.cols());
  for (Eigen::Index k = 0; k < beta.cols(); ++k) {
    for (Eigen::Index m = 0; m < beta.rows(); ++m) {
      const auto e = mmse_estimate(y(m, k), beta(m, k), sums(m, k), p_u, noise_var);
      r.g_hat(m, k) = e.estimate;
      r.alpha(m, k) = e.variance;
    }
  }
  r.g_tilde_variance = beta - r.alpha;
  return r;
}

}  // namespace cfmimo
