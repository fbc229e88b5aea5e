#pragma once

// Small-scale fading, Jakes correlation, two-instant channel aging and Wiener
// phase noise.

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/config.hpp"
#include "cfmimo/random.hpp"

namespace cfmimo {

// Zeroth-order Bessel function of the first kind. Power series for |x| <= 12,
// Hankel asymptotic expansion beyond; absolute error below 1e-9 on [0, 50].
double bessel_j0(double x);

// rho = J0(2 pi f_d dtau), f_d = v / lambda. Speed in km/h, carrier in Hz.
double correlation_coefficient(double speed_kmh, double fc_hz, double delay_s);

struct AgedColumn {
  Eigen::VectorXcd h_data;
  Eigen::VectorXcd innovation;
};

// h_data = rho * h_pilot + sqrt(1 - rho^2) * eps, eps ~ CN(0, I).
AgedColumn age_channel(const Eigen::VectorXcd& h_pilot, double rho, RandomStream& rng);

// phi_1 .. phi_n of a Wiener process started at phi_0 = 0 with i.i.d.
// N(0, increment_var) increments.
std::vector<double> wiener_phase_path(double increment_var, std::size_t n, RandomStream& rng);

// exp(-n sigma^2 / 2): the large-M limit of (1/M) tr(dPhi).
double hardened_attenuation(double increment_var, std::size_t n);

// Accumulated AP phase variance n*sigma^2 (rad^2) for a scenario label in degrees.
double accumulated_phase_variance(double label_deg, PhaseLabelMapping mapping);

struct ChannelRealization {
  Eigen::MatrixXcd h_pilot;     // M x K
  Eigen::MatrixXcd h_data;      // M x K
  Eigen::MatrixXcd innovation;  // M x K
  Eigen::VectorXd rho;          // K
  double phase_attenuation = 1.0;
};

// Draws h_pilot ~ CN(0,1) and ages every user column with its own rho.
ChannelRealization draw_channel_realization(std::size_t num_aps, const Eigen::VectorXd& rho,
                                            double accumulated_ap_phase_var, RandomStream& rng);

}  // namespace cfmimo
