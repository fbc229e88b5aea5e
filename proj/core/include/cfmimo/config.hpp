#pragma once

// System parameters, unit conventions and the fronthaul delay budget.
//
// Units: distances inside the propagation model are km, the carrier enters the
// path-loss constant in MHz (COST-Hata convention) and the Doppler / phase-noise
// formulas in Hz. Powers are W, times are s, delays in samples are integers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cfmimo {

inline constexpr double kBoltzmann = 1.380649e-23;   // J/K, exact since 2019 SI
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

// Time from pilot transmission to synchronous downlink transmission.
struct DelayBudget {
  double t_pilot_s = 0.0;
  double t_ce_s = 0.0;
  double t_fh_up_s = 0.0;
  double t_zf_s = 0.0;
  double t_fh_down_s = 0.0;
  double t_tx_s = 0.0;
  // Delay not attributed to any of the six stages.
  double lumped_s = 0.0;

  static DelayBudget lumped(double total_s);

  double total_s() const noexcept;
  void validate() const;
};

enum class PilotPolicy { round_robin, random };

// How a scenario label "x degrees" becomes an accumulated AP phase variance.
//   accumulated_std:      sqrt(n * sigma^2) = x (in rad)
//   accumulated_variance: n * sigma^2       = x (in rad, read as rad^2)
enum class PhaseLabelMapping { accumulated_std, accumulated_variance };

struct PhaseNoiseConfig {
  double c_ap_s = 0.0;  // oscillator constant of the APs
  double c_ue_s = 0.0;  // oscillator constant of the UEs
  PhaseLabelMapping label_mapping = PhaseLabelMapping::accumulated_std;
};

struct SystemConfig {
  double area_side_km = 1.0;
  std::size_t num_aps = 128;
  std::size_t num_users = 16;
  double carrier_freq_mhz = 1900.0;
  double ap_height_m = 15.0;
  double ue_height_m = 1.65;
  double d0_km = 0.01;
  double d1_km = 0.05;
  double shadow_std_db = 8.0;
  double tx_power_ap_w = 0.2;
  double tx_power_ue_w = 0.1;
  double bandwidth_hz = 20e6;
  double noise_temp_k = 290.0;
  double noise_figure_db = 9.0;
  double symbol_period_s = 5e-8;
  std::size_t pilot_length = 16;
  // Absent: derived from overhead_ratio = (n_ai + n_dtau) / T_b.
  std::optional<std::size_t> block_length;
  std::size_t air_delay_samples = 0;
  double overhead_ratio = 0.1;
  // One shared value, or one value per user.
  std::vector<double> ue_speeds_kmh{0.0};
  DelayBudget delay = DelayBudget::lumped(1e-3);
  PhaseNoiseConfig phase_noise;
  PilotPolicy pilot_policy = PilotPolicy::round_robin;

  double carrier_freq_hz() const noexcept { return carrier_freq_mhz * 1e6; }
  double speed_kmh(std::size_t user) const;

  // Throws InvalidParameter naming the first violated invariant.
  void validate() const;
};

// Quantities computed once from a validated SystemConfig.
struct DerivedConstants {
  double path_loss_constant_db = 0.0;  // L
  double noise_variance_w = 0.0;       // sigma_z^2
  std::size_t delay_samples = 0;       // n_dtau
  std::size_t air_delay_samples = 0;   // n_ai
  std::size_t block_length = 0;        // T_b
  double ap_phase_increment_var = 0.0;
  double ue_phase_increment_var = 0.0;

  double overhead_ratio() const noexcept {
    return static_cast<double>(air_delay_samples + delay_samples) / static_cast<double>(block_length);
  }
};

DerivedConstants derive_constants(const SystemConfig& config);

// Path-loss constant L in dB; f_c in MHz, heights in m.
double compute_L(double fc_mhz, double h_ap_m, double h_ue_m);

// n = ceil(delay / T_s). Quotients within 1e-9 (relative) of an integer are
// taken as exact so that decimal inputs such as 1e-3 / 1e-4 give 10.
std::size_t delay_to_samples(double delay_s, double symbol_period_s);

// kappa * B * T0 * 10^(N_f/10), in W.
double noise_variance(double bandwidth_hz, double noise_temp_k, double noise_figure_db);

// Wiener increment variance 4 pi^2 f_c c T_s in rad^2.
double phase_increment_variance(double fc_hz, double oscillator_const_s, double symbol_period_s);

inline double watts_to_dbm(double w) noexcept { return 10.0 * std::log10(w * 1e3); }

std::string to_string(PilotPolicy policy);
std::string to_string(PhaseLabelMapping mapping);

}  // namespace cfmimo
