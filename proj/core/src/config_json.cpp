#include "cfmimo/config_json.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cfmimo/errors.hpp"

namespace cfmimo {

namespace {

using nlohmann::json;
using Setter = std::function<void(SystemConfig&, const json&)>;

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) {
    throw ConfigError("config key '" + key + "' must be a number");
  }
  return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

Setter number(double SystemConfig::*field, std::string key) {
  return [field, key](SystemConfig& c, const json& v) { c.*field = as_number(v, key); };
}

Setter count(std::size_t SystemConfig::*field, std::string key) {
  return [field, key](SystemConfig& c, const json& v) { c.*field = as_count(v, key); };
}

void set_delay_budget(SystemConfig& c, const json& v) {
  if (!v.is_object()) {
    throw ConfigError("config key 'delay_budget' must be an object");
  }
  static const std::map<std::string, double DelayBudget::*> fields = {
      {"t_pilot_s", &DelayBudget::t_pilot_s}, {"t_ce_s", &DelayBudget::t_ce_s},
      {"t_fh_up_s", &DelayBudget::t_fh_up_s}, {"t_zf_s", &DelayBudget::t_zf_s},
      {"t_fh_down_s", &DelayBudget::t_fh_down_s}, {"t_tx_s", &DelayBudget::t_tx_s},
      {"lumped_s", &DelayBudget::lumped_s},
  };
  DelayBudget budget;
  for (const auto& [key, value] : v.items()) {
    const auto it = fields.find(key);
    if (it == fields.end()) {
      throw ConfigError("unknown key 'delay_budget." + key + "'");
    }
    budget.*(it->second) = as_number(value, "delay_budget." + key);
  }
  c.delay = budget;
}

void set_phase_noise(SystemConfig& c, const json& v) {
  if (!v.is_object()) {
    throw ConfigError("config key 'phase_noise' must be an object");
  }
  for (const auto& [key, value] : v.items()) {
    if (key == "c_ap_s") {
      c.phase_noise.c_ap_s = as_number(value, "phase_noise.c_ap_s");
    } else if (key == "c_ue_s") {
      c.phase_noise.c_ue_s = as_number(value, "phase_noise.c_ue_s");
    } else if (key == "label_mapping") {
      const auto s = value.is_string() ? value.get<std::string>() : std::string{};
      if (s == "accumulated_std") {
        c.phase_noise.label_mapping = PhaseLabelMapping::accumulated_std;
      } else if (s == "accumulated_variance") {
        c.phase_noise.label_mapping = PhaseLabelMapping::accumulated_variance;
      } else {
        throw ConfigError("phase_noise.label_mapping must be 'accumulated_std' or 'accumulated_variance'");
      }
    } else {
      throw ConfigError("unknown key 'phase_noise." + key + "'");
    }
  }
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"area_side_km", number(&SystemConfig::area_side_km, "area_side_km")},
      {"num_aps", count(&SystemConfig::num_aps, "num_aps")},
      {"num_users", count(&SystemConfig::num_users, "num_users")},
      {"carrier_freq_mhz", number(&SystemConfig::carrier_freq_mhz, "carrier_freq_mhz")},
      {"ap_height_m", number(&SystemConfig::ap_height_m, "ap_height_m")},
      {"ue_height_m", number(&SystemConfig::ue_height_m, "ue_height_m")},
      {"d0_km", number(&SystemConfig::d0_km, "d0_km")},
      {"d1_km", number(&SystemConfig::d1_km, "d1_km")},
      {"shadow_std_db", number(&SystemConfig::shadow_std_db, "shadow_std_db")},
      {"tx_power_ap_w", number(&SystemConfig::tx_power_ap_w, "tx_power_ap_w")},
      {"tx_power_ue_w", number(&SystemConfig::tx_power_ue_w, "tx_power_ue_w")},
      {"bandwidth_hz", number(&SystemConfig::bandwidth_hz, "bandwidth_hz")},
      {"noise_temp_k", number(&SystemConfig::noise_temp_k, "noise_temp_k")},
      {"noise_figure_db", number(&SystemConfig::noise_figure_db, "noise_figure_db")},
      {"symbol_period_s", number(&SystemConfig::symbol_period_s, "symbol_period_s")},
      {"pilot_length", count(&SystemConfig::pilot_length, "pilot_length")},
      {"air_delay_samples", count(&SystemConfig::air_delay_samples, "air_delay_samples")},
      {"overhead_ratio", number(&SystemConfig::overhead_ratio, "overhead_ratio")},
      {"block_length",
       [](SystemConfig& c, const json& v) {
         if (v.is_null()) {
           c.block_length.reset();
         } else {
           c.block_length = as_count(v, "block_length");
         }
       }},
      {"ue_speed_kmh",
       [](SystemConfig& c, const json& v) {
         if (v.is_array()) {
           c.ue_speeds_kmh.clear();
           for (const auto& e : v) {
             c.ue_speeds_kmh.push_back(as_number(e, "ue_speed_kmh[]"));
           }
         } else {
           c.ue_speeds_kmh = {as_number(v, "ue_speed_kmh")};
         }
       }},
      {"delay_total_s",
       [](SystemConfig& c, const json& v) { c.delay = DelayBudget::lumped(as_number(v, "delay_total_s")); }},
      {"delay_budget", set_delay_budget},
      {"phase_noise", set_phase_noise},
      {"pilot_policy",
       [](SystemConfig& c, const json& v) {
         const auto s = v.is_string() ? v.get<std::string>() : std::string{};
         if (s == "round_robin") {
           c.pilot_policy = PilotPolicy::round_robin;
         } else if (s == "random") {
           c.pilot_policy = PilotPolicy::random;
         } else {
           throw ConfigError("pilot_policy must be 'round_robin' or 'random'");
         }
       }},
  };
  return table;
}

}  // namespace

SystemConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("config JSON must be an object");
  }
  if (doc.contains("delay_total_s") && doc.contains("delay_budget")) {
    throw ConfigError("give either 'delay_total_s' or 'delay_budget', not both");
  }
  SystemConfig config;
  const auto& table = setters();
  for (const auto& [key, value] : doc.items()) {
    const auto it = table.find(key);
    if (it == table.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    try {
      it->second(config, value);
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  try {
    config.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return config;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const SystemConfig& c) {
  json doc = {
      {"area_side_km", c.area_side_km},
      {"num_aps", c.num_aps},
      {"num_users", c.num_users},
      {"carrier_freq_mhz", c.carrier_freq_mhz},
      {"ap_height_m", c.ap_height_m},
      {"ue_height_m", c.ue_height_m},
      {"d0_km", c.d0_km},
      {"d1_km", c.d1_km},
      {"shadow_std_db", c.shadow_std_db},
      {"tx_power_ap_w", c.tx_power_ap_w},
      {"tx_power_ue_w", c.tx_power_ue_w},
      {"bandwidth_hz", c.bandwidth_hz},
      {"noise_temp_k", c.noise_temp_k},
      {"noise_figure_db", c.noise_figure_db},
      {"symbol_period_s", c.symbol_period_s},
      {"pilot_length", c.pilot_length},
      {"air_delay_samples", c.air_delay_samples},
      {"overhead_ratio", c.overhead_ratio},
      {"ue_speed_kmh", c.ue_speeds_kmh},
      {"delay_budget",
       {{"t_pilot_s", c.delay.t_pilot_s},
        {"t_ce_s", c.delay.t_ce_s},
        {"t_fh_up_s", c.delay.t_fh_up_s},
        {"t_zf_s", c.delay.t_zf_s},
        {"t_fh_down_s", c.delay.t_fh_down_s},
        {"t_tx_s", c.delay.t_tx_s},
        {"lumped_s", c.delay.lumped_s}}},
      {"phase_noise",
       {{"c_ap_s", c.phase_noise.c_ap_s},
        {"c_ue_s", c.phase_noise.c_ue_s},
        {"label_mapping", to_string(c.phase_noise.label_mapping)}}},
      {"pilot_policy", to_string(c.pilot_policy)},
  };
  doc["block_length"] = c.block_length ? json(*c.block_length) : json(nullptr);
  return doc.dump(2);
}

}  // namespace cfmimo
