#include "cfmimo/channel_aging.hpp"

#include <cmath>

#include "cfmimo/errors.hpp"

namespace cfmimo {

namespace {

constexpr double kSeriesLimit = 12.0;

double j0_series(double x) {
  const long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-21L) {
      break;
    }
  }
  return static_cast<double>(sum);
}

// J0(x) ~ sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4, with the
// series truncated at its smallest term.
double j0_asymptotic(double x) {
  double p = 0.0;
  double q = 0.0;
  double a = 1.0;  // a_k(0) / x^k
  double previous = std::abs(a);
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      a *= -(odd * odd) / (8.0 * k * x);
      if (std::abs(a) > previous) {
        break;
      }
      previous = std::abs(a);
    }
    // P collects even k with sign (-1)^(k/2), Q odd k with sign (-1)^((k-1)/2).
    switch (k % 4) {
      case 0: p += a; break;
      case 1: q += a; break;
      case 2: p -= a; break;
      case 3: q -= a; break;
    }
    if (std::abs(a) < 1e-18) {
      break;
    }
  }
  const double chi = x - kPi / 4.0;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  if (!std::isfinite(x)) {
    throw InvalidParameter("bessel_j0: argument must be finite");
  }
  const double ax = std::abs(x);
  return ax <= kSeriesLimit ? j0_series(ax) : j0_asymptotic(ax);
}

double correlation_coefficient(double speed_kmh, double fc_hz, double delay_s) {
  if (!(speed_kmh >= 0.0) || !(fc_hz > 0.0) || !(delay_s >= 0.0)) {
    throw InvalidParameter("correlation_coefficient: need v >= 0, f_c > 0, delay >= 0");
  }
  const double wavelength_m = kSpeedOfLight / fc_hz;
  const double doppler_hz = (speed_kmh / 3.6) / wavelength_m;
  return bessel_j0(2.0 * kPi * doppler_hz * delay_s);
}

AgedColumn age_channel(const Eigen::VectorXcd& h_pilot, double rho, RandomStream& rng) {
  if (!(std::abs(rho) <= 1.0)) {
    throw InvalidParameter("age_channel: |rho| must be <= 1");
  }
  const double innovation_gain = std::sqrt(1.0 - rho * rho);
  AgedColumn out;
  out.innovation.resize(h_pilot.size());
  for (Eigen::Index m = 0; m < h_pilot.size(); ++m) {
    out.innovation(m) = rng.complex_normal();
  }
  out.h_data = rho * h_pilot + innovation_gain * out.innovation;
  return out;
}

std::vector<double> wiener_phase_path(double increment_var, std::size_t n, RandomStream& rng) {
  if (!(increment_var >= 0.0)) {
    throw InvalidParameter("wiener_phase_path: increment variance must be >= 0");
  }
  const double step = std::sqrt(increment_var);
  std::vector<double> path(n);
  double phi = 0.0;
  for (auto& p : path) {
    phi += step * rng.normal();
    p = phi;
  }
  return path;
}

double hardened_attenuation(double increment_var, std::size_t n) {
  if (!(increment_var >= 0.0)) {
    throw InvalidParameter("hardened_attenuation: increment variance must be >= 0");
  }
  return std::exp(-static_cast<double>(n) * increment_var / 2.0);
}

double accumulated_phase_variance(double label_deg, PhaseLabelMapping mapping) {
  if (!(label_deg >= 0.0) || !std::isfinite(label_deg)) {
    throw InvalidParameter("phase label must be finite and >= 0 degrees");
  }
  const double rad = label_deg * kPi / 180.0;
  return mapping == PhaseLabelMapping::accumulated_std ? rad * rad : rad;
}

ChannelRealization draw_channel_realization(std::size_t num_aps, const Eigen::VectorXd& rho,
                                            double accumulated_ap_phase_var, RandomStream& rng) {
  const auto M = static_cast<Eigen::Index>(num_aps);
  const auto K = rho.size();
  ChannelRealization r;
  r.rho = rho;
  r.h_pilot.resize(M, K);
  r.h_data.resize(M, K);
  r.innovation.resize(M, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index m = 0; m < M; ++m) {
      r.h_pilot(m, k) = rng.complex_normal();
    }
    auto aged = age_channel(r.h_pilot.col(k), rho(k), rng);
    r.h_data.col(k) = aged.h_data;
    r.innovation.col(k) = aged.innovation;
  }
  // One increment of the accumulated variance over one sample.
  r.phase_attenuation = hardened_attenuation(accumulated_ap_phase_var, 1);
  return r;
}

}  // namespace cfmimo
