#include "cfmimo/experiment.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include "cfmimo/channel_aging.hpp"
#include "cfmimo/errors.hpp"
#include "cfmimo/performance.hpp"
#include "cfmimo/propagation.hpp"
#include "cfmimo/random.hpp"
#include "cfmimo/uplink_training.hpp"
#include "cfmimo/zf_precoding.hpp"

namespace cfmimo {

namespace {

std::string grid_suffix(double value) {
  // Integral grid values print without a fraction ("30", not "30.0").
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  return format_double(value);
}

// Points that can share one drop: same seed and inner-ensemble size and the
// same alpha (the benchmark and perfect modes both use alpha = beta).
struct GroupKey {
  std::uint64_t seed;
  std::size_t n_inner;
  bool mmse;
  auto operator<=>(const GroupKey&) const = default;
};

struct Group {
  GroupKey key;
  std::size_t n_drops = 0;
  std::vector<std::size_t> points;  // indices into the flat point list
};

struct UnitOutput {
  std::vector<std::vector<ResultRecord>> per_point;  // parallel to Group::points
  std::string error;
};

UnitOutput evaluate_drop(const SystemConfig& config, const DerivedConstants& derived, const Group& group,
                         const std::vector<ScenarioPoint>& points, std::size_t drop) {
  UnitOutput out;
  out.per_point.resize(group.points.size());
  try {
    const std::uint64_t seed = group.key.seed;
    RandomStream ls_rng(derive_seed(seed, {drop, static_cast<std::uint64_t>(StreamTag::large_scale)}));
    const LargeScaleState ls = draw_large_scale(config, ls_rng);

    Eigen::MatrixXd alpha = ls.beta;
    if (group.key.mmse) {
      RandomStream pilot_rng(derive_seed(seed, {drop, static_cast<std::uint64_t>(StreamTag::pilots)}));
      const PilotPlan plan = assign_pilots(config.num_users, config.pilot_length, config.pilot_policy, pilot_rng);
      alpha = estimate_variances(ls.beta, plan, config.tx_power_ue_w, derived.noise_variance_w);
    }

    ExpectationOptions opts;
    opts.n_inner = group.key.n_inner;
    const Expectations ex =
        estimate_expectations(ls.beta, alpha, opts, derive_seed(seed, {drop, static_cast<std::uint64_t>(StreamTag::inner)}));
    const auto K = static_cast<Eigen::Index>(config.num_users);
    const Eigen::VectorXd eta = Eigen::VectorXd::Constant(K, power_control_eta(ex.delta));
    const double delay_s = config.delay.total_s();

    for (std::size_t gi = 0; gi < group.points.size(); ++gi) {
      const ScenarioPoint& p = points[group.points[gi]];
      if (drop >= p.n_drops) {
        continue;
      }
      const bool benchmark = p.csi == CsiMode::benchmark;

      double phase_label = 0.0;
      double attenuation = 1.0;
      if (p.phase_label_deg) {
        phase_label = *p.phase_label_deg;
        attenuation =
            std::exp(-accumulated_phase_variance(phase_label, config.phase_noise.label_mapping) / 2.0);
      } else {
        const double accumulated = derived.ap_phase_increment_var * static_cast<double>(derived.delay_samples);
        phase_label = config.phase_noise.label_mapping == PhaseLabelMapping::accumulated_std
                          ? std::sqrt(accumulated) * 180.0 / kPi
                          : accumulated * 180.0 / kPi;
        attenuation = hardened_attenuation(derived.ap_phase_increment_var, derived.delay_samples);
      }
      if (benchmark) {
        attenuation = 1.0;
      }

      auto& records = out.per_point[gi];
      records.reserve(config.num_users);
      for (Eigen::Index k = 0; k < K; ++k) {
        const double velocity =
            p.velocity_kmh ? *p.velocity_kmh : config.speed_kmh(static_cast<std::size_t>(k));
        const double rho =
            benchmark ? 1.0 : correlation_coefficient(velocity, config.carrier_freq_hz(), delay_s);
        const double gamma = sinr_closed_form(rho, static_cast<std::size_t>(k), eta, ex.xi, ex.chi,
                                              derived.noise_variance_w, config.tx_power_ap_w, attenuation);
        const double se = spectral_efficiency(gamma, derived.air_delay_samples, derived.delay_samples,
                                              derived.block_length);
        records.push_back({p.label, drop, static_cast<std::size_t>(k), velocity, rho, phase_label, attenuation,
                           gamma, se});
      }
    }
  } catch (const std::exception& e) {
    out.error = e.what();
    for (auto& r : out.per_point) {
      r.clear();
    }
  }
  return out;
}

}  // namespace

std::string to_string(CsiMode mode) {
  switch (mode) {
    case CsiMode::benchmark: return "benchmark";
    case CsiMode::perfect: return "perfect";
    case CsiMode::mmse: return "mmse";
  }
  return "unknown";
}

CsiMode csi_mode_from_string(const std::string& text) {
  if (text == "benchmark") return CsiMode::benchmark;
  if (text == "perfect") return CsiMode::perfect;
  if (text == "mmse") return CsiMode::mmse;
  throw InvalidParameter("unknown CSI mode '" + text + "' (benchmark|perfect|mmse)");
}

void ScenarioSpec::validate() const {
  if (label.empty() || label.find_first_of(",\"\n\r") != std::string::npos) {
    throw InvalidParameter("scenario label must be non-empty and free of commas, quotes and newlines");
  }
  if (n_drops < 1 || n_inner < 1) {
    throw InvalidParameter("scenario '" + label + "': n_drops and n_inner must be >= 1");
  }
  for (const double v : velocities_kmh) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidParameter("scenario '" + label + "': velocities must be finite and >= 0");
    }
  }
  for (const double d : phase_labels_deg) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw InvalidParameter("scenario '" + label + "': phase labels must be finite and >= 0");
    }
  }
}

std::vector<ScenarioPoint> expand(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<std::optional<double>> velocities(spec.velocities_kmh.begin(), spec.velocities_kmh.end());
  std::vector<std::optional<double>> phases(spec.phase_labels_deg.begin(), spec.phase_labels_deg.end());
  if (velocities.empty()) velocities.emplace_back();
  if (phases.empty()) phases.emplace_back();

  std::vector<ScenarioPoint> out;
  for (const auto& v : velocities) {
    for (const auto& ph : phases) {
      ScenarioPoint p;
      p.label = spec.label;
      if (velocities.size() > 1) p.label += "_v" + grid_suffix(*v);
      if (phases.size() > 1) p.label += "_pn" + grid_suffix(*ph);
      p.velocity_kmh = v;
      p.phase_label_deg = ph;
      p.csi = spec.csi;
      p.n_drops = spec.n_drops;
      p.n_inner = spec.n_inner;
      p.seed = spec.seed;
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<ScenarioSpec> default_scenarios(std::size_t n_drops, std::size_t n_inner, std::uint64_t seed) {
  auto make = [&](std::string label, std::vector<double> v, std::vector<double> pn, CsiMode csi) {
    return ScenarioSpec{std::move(label), std::move(v), std::move(pn), csi, n_drops, n_inner, seed};
  };
  std::vector<double> speed_grid;
  for (int v = 0; v <= 150; v += 10) speed_grid.push_back(v);
  std::vector<double> phase_grid;
  for (int d = 0; d <= 180; d += 15) phase_grid.push_back(d);

  return {
      make("benchmark", {0.0}, {0.0}, CsiMode::benchmark),
      make("v30", {30.0}, {0.0}, CsiMode::perfect),
      make("v50", {50.0}, {0.0}, CsiMode::perfect),
      make("v120", {120.0}, {0.0}, CsiMode::perfect),
      make("pn30", {0.0}, {30.0}, CsiMode::perfect),
      make("pn90", {0.0}, {90.0}, CsiMode::perfect),
      make("pn150", {0.0}, {150.0}, CsiMode::perfect),
      make("rho_sweep", speed_grid, {0.0}, CsiMode::perfect),
      make("pn_sweep", {0.0}, phase_grid, CsiMode::perfect),
  };
}

ResultSet run_experiment(const SystemConfig& config, const std::vector<ScenarioSpec>& scenarios,
                         const RunOptions& options) {
  config.validate();
  const DerivedConstants derived = derive_constants(config);

  std::vector<ScenarioPoint> points;
  for (const auto& s : scenarios) {
    auto expanded = expand(s);
    points.insert(points.end(), expanded.begin(), expanded.end());
  }
  std::set<std::string> labels;
  for (const auto& p : points) {
    if (!labels.insert(p.label).second) {
      throw InvalidParameter("duplicate scenario label '" + p.label + "'");
    }
  }

  std::vector<Group> groups;
  std::map<GroupKey, std::size_t> group_of;
  std::vector<std::pair<std::size_t, std::size_t>> slot(points.size());  // (group, index in group)
  for (std::size_t i = 0; i < points.size(); ++i) {
    const GroupKey key{points[i].seed, points[i].n_inner, points[i].csi == CsiMode::mmse};
    auto [it, inserted] = group_of.try_emplace(key, groups.size());
    if (inserted) {
      groups.push_back({key, 0, {}});
    }
    Group& g = groups[it->second];
    g.n_drops = std::max(g.n_drops, points[i].n_drops);
    slot[i] = {it->second, g.points.size()};
    g.points.push_back(i);
  }

  std::vector<std::pair<std::size_t, std::size_t>> units;  // (group, drop)
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t d = 0; d < groups[g].n_drops; ++d) {
      units.emplace_back(g, d);
    }
  }
  std::vector<UnitOutput> outputs(units.size());
  auto run_unit = [&](std::size_t u) {
    outputs[u] = evaluate_drop(config, derived, groups[units[u].first], points, units[u].second);
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, units.size()));
  if (workers == 1) {
    for (std::size_t u = 0; u < units.size(); ++u) run_unit(u);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t u = next++; u < units.size(); u = next++) run_unit(u);
      });
    }
  }

  // Unit index of (group g, drop d).
  std::vector<std::size_t> unit_base(groups.size(), 0);
  for (std::size_t g = 1; g < groups.size(); ++g) {
    unit_base[g] = unit_base[g - 1] + groups[g - 1].n_drops;
  }

  ResultSet result;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [g, idx] = slot[i];
    std::vector<Diagnostic> failures;
    for (std::size_t d = 0; d < points[i].n_drops; ++d) {
      const UnitOutput& o = outputs[unit_base[g] + d];
      if (!o.error.empty()) {
        failures.push_back({points[i].label, d, o.error});
      }
    }
    if (!failures.empty()) {
      result.diagnostics.insert(result.diagnostics.end(), failures.begin(), failures.end());
      continue;
    }
    for (std::size_t d = 0; d < points[i].n_drops; ++d) {
      const auto& recs = outputs[unit_base[g] + d].per_point[idx];
      result.records.insert(result.records.end(), recs.begin(), recs.end());
    }
  }
  result.summary = summarize(result.records);
  return result;
}

}  // namespace cfmimo
