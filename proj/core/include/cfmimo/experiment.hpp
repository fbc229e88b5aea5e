#pragma once

// Scenario sweeps over velocity and phase-noise grids, run drop by drop with
// seeded, schedule-independent randomness.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfmimo/config.hpp"
#include "cfmimo/results_io.hpp"

namespace cfmimo {

// benchmark: alpha = beta, rho = 1, no phase attenuation.
// perfect:   alpha = beta, aging from the scenario's velocity and phase label.
// mmse:      alpha from MMSE estimation, aging as above.
enum class CsiMode { benchmark, perfect, mmse };

std::string to_string(CsiMode mode);
CsiMode csi_mode_from_string(const std::string& text);

struct ScenarioSpec {
  std::string label;
  // Empty: use the configured per-user speeds.
  std::vector<double> velocities_kmh;
  // Empty: use the configured AP oscillator constant.
  std::vector<double> phase_labels_deg;
  CsiMode csi = CsiMode::perfect;
  std::size_t n_drops = 200;
  std::size_t n_inner = 200;
  std::uint64_t seed = 1;

  void validate() const;
};

// One (velocity, phase label) grid point of a scenario.
struct ScenarioPoint {
  std::string label;
  std::optional<double> velocity_kmh;
  std::optional<double> phase_label_deg;
  CsiMode csi = CsiMode::perfect;
  std::size_t n_drops = 0;
  std::size_t n_inner = 0;
  std::uint64_t seed = 0;
};

// Cartesian product of the velocity and phase grids. A grid with more than one
// entry appends "_v<speed>" / "_pn<deg>" to the label.
std::vector<ScenarioPoint> expand(const ScenarioSpec& spec);

// Benchmark, the three mobility and three phase-noise cases, and the rho and
// phase sweeps.
std::vector<ScenarioSpec> default_scenarios(std::size_t n_drops, std::size_t n_inner, std::uint64_t seed);

struct RunOptions {
  std::size_t workers = 1;
};

struct Diagnostic {
  std::string scenario;
  std::size_t drop = 0;
  std::string message;
};

struct ResultSet {
  std::vector<ResultRecord> records;  // ordered by (scenario, drop, user)
  std::vector<SummaryRecord> summary;
  std::vector<Diagnostic> diagnostics;
};

// Per drop: large-scale draw, pilot plan, alpha, xi/chi/delta, eta, then rho,
// attenuation, gamma and SE per user for every point sharing the drop. Points
// with the same seed share drops. A scenario with any failing drop is dropped
// from records and summary and reported in diagnostics.
ResultSet run_experiment(const SystemConfig& config, const std::vector<ScenarioSpec>& scenarios,
                         const RunOptions& options = {});

}  // namespace cfmimo
