#include "cfmimo/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cfmimo/errors.hpp"

namespace cfmimo {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw InvalidParameter(what);
  }
}

}  // namespace

DelayBudget DelayBudget::lumped(double total_s) {
  DelayBudget b;
  b.lumped_s = total_s;
  return b;
}

double DelayBudget::total_s() const noexcept {
  return t_pilot_s + t_ce_s + t_fh_up_s + t_zf_s + t_fh_down_s + t_tx_s + lumped_s;
}

void DelayBudget::validate() const {
  for (const double t : {t_pilot_s, t_ce_s, t_fh_up_s, t_zf_s, t_fh_down_s, t_tx_s, lumped_s}) {
    require(std::isfinite(t) && t >= 0.0, "delay budget components must be finite and >= 0");
  }
}

double SystemConfig::speed_kmh(std::size_t user) const {
  if (ue_speeds_kmh.size() == 1) {
    return ue_speeds_kmh.front();
  }
  return ue_speeds_kmh.at(user);
}

void SystemConfig::validate() const {
  require(num_aps >= 1, "num_aps must be >= 1");
  require(num_users >= 1, "num_users must be >= 1");
  require(num_users <= num_aps, "zero forcing needs num_users <= num_aps");
  require(area_side_km > 0.0, "area_side_km must be > 0");
  const double diagonal = std::sqrt(2.0) * area_side_km;
  require(d0_km > 0.0 && d0_km < d1_km && d1_km < diagonal, "need 0 < d0 < d1 < area diagonal");
  require(carrier_freq_mhz > 0.0 && ap_height_m > 0.0 && ue_height_m > 0.0,
          "carrier frequency and antenna heights must be > 0");
  require(shadow_std_db >= 0.0, "shadow_std_db must be >= 0");
  require(tx_power_ap_w > 0.0 && tx_power_ue_w > 0.0, "transmit powers must be > 0");
  require(bandwidth_hz > 0.0 && noise_temp_k > 0.0, "bandwidth and noise temperature must be > 0");
  require(std::isfinite(noise_figure_db), "noise_figure_db must be finite");
  require(symbol_period_s > 0.0, "symbol_period_s must be > 0");
  require(pilot_length >= 1, "pilot_length must be >= 1");
  require(ue_speeds_kmh.size() == 1 || ue_speeds_kmh.size() == num_users,
          "ue_speed_kmh must hold one shared value or one value per user");
  for (const double v : ue_speeds_kmh) {
    require(std::isfinite(v) && v >= 0.0, "ue speeds must be >= 0");
  }
  require(phase_noise.c_ap_s >= 0.0 && phase_noise.c_ue_s >= 0.0, "oscillator constants must be >= 0");
  delay.validate();
  if (!block_length) {
    require(overhead_ratio > 0.0 && overhead_ratio < 1.0, "overhead_ratio must lie in (0, 1)");
  }
  const std::size_t n_delay = delay_to_samples(delay.total_s(), symbol_period_s);
  const DerivedConstants derived = derive_constants(*this);
  require(derived.block_length > air_delay_samples + n_delay,
          "block_length must exceed n_ai + n_dtau");
}

DerivedConstants derive_constants(const SystemConfig& config) {
  DerivedConstants d;
  d.path_loss_constant_db = compute_L(config.carrier_freq_mhz, config.ap_height_m, config.ue_height_m);
  d.noise_variance_w = noise_variance(config.bandwidth_hz, config.noise_temp_k, config.noise_figure_db);
  d.delay_samples = delay_to_samples(config.delay.total_s(), config.symbol_period_s);
  d.air_delay_samples = config.air_delay_samples;
  if (config.block_length) {
    d.block_length = *config.block_length;
  } else {
    const double overhead = static_cast<double>(d.air_delay_samples + d.delay_samples);
    d.block_length = static_cast<std::size_t>(std::llround(overhead / config.overhead_ratio));
    // Zero delay would give T_b = 0; keep at least one payload symbol.
    if (d.block_length <= d.air_delay_samples + d.delay_samples) {
      d.block_length = d.air_delay_samples + d.delay_samples + 1;
    }
  }
  d.ap_phase_increment_var =
      phase_increment_variance(config.carrier_freq_hz(), config.phase_noise.c_ap_s, config.symbol_period_s);
  d.ue_phase_increment_var =
      phase_increment_variance(config.carrier_freq_hz(), config.phase_noise.c_ue_s, config.symbol_period_s);
  return d;
}

double compute_L(double fc_mhz, double h_ap_m, double h_ue_m) {
  if (!(fc_mhz > 0.0) || !(h_ap_m > 0.0) || !(h_ue_m > 0.0)) {
    throw InvalidParameter("compute_L: f_c and antenna heights must be > 0");
  }
  const double lf = std::log10(fc_mhz);
  return 46.3 + 33.9 * lf - 13.82 * std::log10(h_ap_m) - (1.1 * lf - 0.7) * h_ue_m + (1.56 * lf - 0.8);
}

std::size_t delay_to_samples(double delay_s, double symbol_period_s) {
  if (!(symbol_period_s > 0.0) || !std::isfinite(symbol_period_s)) {
    throw InvalidParameter("delay_to_samples: symbol period must be > 0");
  }
  if (!(delay_s >= 0.0) || !std::isfinite(delay_s)) {
    throw InvalidParameter("delay_to_samples: delay must be >= 0");
  }
  const double q = delay_s / symbol_period_s;
  const double nearest = std::round(q);
  if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, q)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(q));
}

double noise_variance(double bandwidth_hz, double noise_temp_k, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0) || !(noise_temp_k > 0.0) || !std::isfinite(noise_figure_db)) {
    throw InvalidParameter("noise_variance: bandwidth and temperature must be > 0");
  }
  return kBoltzmann * bandwidth_hz * noise_temp_k * std::pow(10.0, noise_figure_db / 10.0);
}

double phase_increment_variance(double fc_hz, double oscillator_const_s, double symbol_period_s) {
  if (!(fc_hz >= 0.0) || !(oscillator_const_s >= 0.0) || !(symbol_period_s >= 0.0)) {
    throw InvalidParameter("phase_increment_variance: inputs must be >= 0");
  }
  return 4.0 * kPi * kPi * fc_hz * oscillator_const_s * symbol_period_s;
}

std::string to_string(PilotPolicy policy) {
  return policy == PilotPolicy::round_robin ? "round_robin" : "random";
}

std::string to_string(PhaseLabelMapping mapping) {
  return mapping == PhaseLabelMapping::accumulated_std ? "accumulated_std" : "accumulated_variance";
}

}  // namespace cfmimo
