#pragma once

// Zero-forcing precoding, the equal-eta power-control rule and Monte Carlo
// estimation of the expectation matrices xi, chi and delta.
//
// Layout: the estimated channel matrix G_hat is K x M (row k holds user k's
// estimates over all APs); W = G_hat^H (G_hat G_hat^H)^{-1} is M x K and the
// power matrix is P = diag(sqrt(eta)).

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

namespace cfmimo {

// Reciprocal condition estimate of G G^H below which a draw counts as singular.
inline constexpr double kRcondThreshold = 1e-12;

// W = G^H (G G^H)^{-1} via a Cholesky solve; throws RankDeficiency.
Eigen::MatrixXcd zf_weights(const Eigen::MatrixXcd& g_hat);

// x = W diag(sqrt(eta)) s, so that G_hat x = diag(sqrt(eta)) s.
Eigen::VectorXcd zf_precode(const Eigen::MatrixXcd& g_hat, const Eigen::VectorXd& eta,
                            const Eigen::VectorXcd& s);

struct Expectations {
  Eigen::MatrixXd xi;     // K x K, (k, i)
  Eigen::MatrixXd chi;    // K x K, (k, i)
  Eigen::MatrixXd delta;  // K x M, (k, m)
  std::size_t draws = 0;
  std::size_t rejected = 0;
};

struct ExpectationOptions {
  std::size_t n_inner = 200;
  std::size_t workers = 1;
  std::size_t chunk_size = 32;
};

// Averages, over n_inner draws of G_hat with independent entries CN(0, alpha_mk):
//   xi_ki    = [B D_k B^H]_ii,  D_k = diag(beta_.k - alpha_.k)
//   chi_ki   = [B E_k B^H]_ii,  E_k = diag(beta_.k)
//   delta_km = |B_km|^2
// with B = (G_hat G_hat^H)^{-1} G_hat. Draws are split into fixed-size chunks,
// each with its own sub-stream of `seed`, and reduced in chunk order, so the
// result does not depend on the worker count. Singular draws are redrawn and
// counted; more than 1% rejected raises DegenerateInput.
Expectations estimate_expectations(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& alpha,
                                   const ExpectationOptions& options, std::uint64_t seed);

// Common coefficient eta = 1 / max_m sum_k delta_km.
double power_control_eta(const Eigen::MatrixXd& delta);

struct PrecoderState {
  Eigen::MatrixXcd g_hat;    // K x M
  Eigen::MatrixXcd weights;  // M x K
  Eigen::VectorXd eta;       // K
  Expectations expectations;
};

}  // namespace cfmimo
