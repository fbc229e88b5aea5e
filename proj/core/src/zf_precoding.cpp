#include "cfmimo/zf_precoding.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "cfmimo/errors.hpp"
#include "cfmimo/random.hpp"

namespace cfmimo {

namespace {

struct Accumulator {
  Eigen::MatrixXd xi;
  Eigen::MatrixXd chi;
  Eigen::MatrixXd delta;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

Accumulator run_chunk(const Eigen::MatrixXd& beta_t, const Eigen::MatrixXd& error_t,
                      const Eigen::MatrixXd& alpha_sqrt_t, std::size_t draws, std::uint64_t seed) {
  const Eigen::Index K = beta_t.rows();
  const Eigen::Index M = beta_t.cols();
  Accumulator acc;
  acc.xi = Eigen::MatrixXd::Zero(K, K);
  acc.chi = Eigen::MatrixXd::Zero(K, K);
  acc.delta = Eigen::MatrixXd::Zero(K, M);

  RandomStream rng(seed);
  Eigen::MatrixXcd g(K, M);
  Eigen::MatrixXcd gram(K, K);
  Eigen::MatrixXd weight_power(K, M);
  Eigen::LLT<Eigen::MatrixXcd> llt(K);

  while (acc.accepted < draws) {
    for (Eigen::Index m = 0; m < M; ++m) {
      for (Eigen::Index k = 0; k < K; ++k) {
        g(k, m) = alpha_sqrt_t(k, m) * rng.complex_normal();
      }
    }
    gram.noalias() = g * g.adjoint();
    llt.compute(gram);
    if (llt.info() != Eigen::Success || !(llt.rcond() >= kRcondThreshold)) {
      // A chunk that cannot fill itself within its own budget is hopeless.
      if (++acc.rejected > draws) {
        break;
      }
      continue;
    }
    weight_power = llt.solve(g).cwiseAbs2();
    acc.delta += weight_power;
    acc.xi.noalias() += error_t * weight_power.transpose();
    acc.chi.noalias() += beta_t * weight_power.transpose();
    ++acc.accepted;
  }
  return acc;
}

}  // namespace

Eigen::MatrixXcd zf_weights(const Eigen::MatrixXcd& g_hat) {
  if (g_hat.rows() == 0 || g_hat.rows() > g_hat.cols()) {
    throw InvalidParameter("zf_weights: need 1 <= K <= M");
  }
  const Eigen::MatrixXcd gram = g_hat * g_hat.adjoint();
  const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (!(rcond >= kRcondThreshold)) {
    throw RankDeficiency("zf_weights: G G^H is singular or ill-conditioned", rcond);
  }
  return llt.solve(g_hat).adjoint();
}

Eigen::VectorXcd zf_precode(const Eigen::MatrixXcd& g_hat, const Eigen::VectorXd& eta,
                            const Eigen::VectorXcd& s) {
  if (eta.size() != g_hat.rows() || s.size() != g_hat.rows()) {
    throw InvalidParameter("zf_precode: eta and s must have K entries");
  }
  if ((eta.array() < 0.0).any()) {
    throw InvalidParameter("zf_precode: eta must be >= 0");
  }
  const Eigen::VectorXcd scaled = (eta.array().sqrt().cast<std::complex<double>>() * s.array()).matrix();
  return zf_weights(g_hat) * scaled;
}

Expectations estimate_expectations(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& alpha,
                                   const ExpectationOptions& options, std::uint64_t seed) {
  if (options.n_inner < 1 || options.chunk_size < 1) {
    throw InvalidParameter("estimate_expectations: n_inner and chunk_size must be >= 1");
  }
  if (beta.rows() != alpha.rows() || beta.cols() != alpha.cols()) {
    throw InvalidParameter("estimate_expectations: beta and alpha must have equal shape");
  }
  if (beta.cols() > beta.rows()) {
    throw InvalidParameter("estimate_expectations: need K <= M");
  }
  if ((alpha.array() < 0.0).any() || (alpha.array() > beta.array() * (1.0 + 1e-12)).any()) {
    throw InvalidParameter("estimate_expectations: need 0 <= alpha <= beta");
  }

  // Transposed K x M copies match the row layout of G_hat.
  const Eigen::MatrixXd beta_t = beta.transpose();
  const Eigen::MatrixXd error_t = (beta - alpha).cwiseMax(0.0).transpose();
  const Eigen::MatrixXd alpha_sqrt_t = alpha.cwiseSqrt().transpose();

  const std::size_t chunks = (options.n_inner + options.chunk_size - 1) / options.chunk_size;
  std::vector<Accumulator> partial(chunks);
  auto chunk_draws = [&](std::size_t c) {
    return std::min(options.chunk_size, options.n_inner - c * options.chunk_size);
  };
  auto work = [&](std::size_t c) {
    partial[c] = run_chunk(beta_t, error_t, alpha_sqrt_t, chunk_draws(c), derive_seed(seed, {c}));
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, chunks));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      work(c);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunks; c = next++) {
          work(c);
        }
      });
    }
  }

  Expectations out;
  const Eigen::Index K = beta.cols();
  out.xi = Eigen::MatrixXd::Zero(K, K);
  out.chi = Eigen::MatrixXd::Zero(K, K);
  out.delta = Eigen::MatrixXd::Zero(K, beta.rows());
  for (const auto& p : partial) {
    out.xi += p.xi;
    out.chi += p.chi;
    out.delta += p.delta;
    out.draws += p.accepted;
    out.rejected += p.rejected;
  }
  if (static_cast<double>(out.rejected) > 0.01 * static_cast<double>(options.n_inner) ||
      out.draws < options.n_inner) {
    throw DegenerateInput("estimate_expectations: " + std::to_string(out.rejected) + " of " +
                          std::to_string(options.n_inner) + " inner draws were singular");
  }
  const double inv = 1.0 / static_cast<double>(out.draws);
  out.xi *= inv;
  out.chi *= inv;
  out.delta *= inv;
  return out;
}

double power_control_eta(const Eigen::MatrixXd& delta) {
  if (delta.size() == 0 || (delta.array() < 0.0).any() || !delta.allFinite()) {
    throw InvalidParameter("power_control_eta: delta must be finite and >= 0");
  }
  const double worst = delta.colwise().sum().maxCoeff();
  if (!(worst > 0.0)) {
    throw DegenerateInput("power_control_eta: every AP has zero expected power");
  }
  return 1.0 / worst;
}

}  // namespace cfmimo
