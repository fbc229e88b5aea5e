#pragma once

// CSV schemas for per-user results and per-scenario summaries.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfmimo {

inline constexpr std::string_view kResultsHeader =
    "scenario,drop,user,velocity_kmh,rho,tpn_label_deg,attenuation,gamma_linear,se_bpshz";
inline constexpr std::string_view kSummaryHeader = "scenario,q05_bpshz,q50_bpshz,n_samples";

struct ResultRecord {
  std::string scenario;
  std::size_t drop = 0;
  std::size_t user = 0;
  double velocity_kmh = 0.0;
  double rho = 1.0;
  double tpn_label_deg = 0.0;
  double attenuation = 1.0;
  double gamma_linear = 0.0;
  double se_bpshz = 0.0;

  bool operator==(const ResultRecord&) const = default;
};

struct SummaryRecord {
  std::string scenario;
  double q05_bpshz = 0.0;
  double q50_bpshz = 0.0;
  std::size_t n_samples = 0;

  bool operator==(const SummaryRecord&) const = default;
};

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

std::string results_to_csv(std::span<const ResultRecord> records);
std::string summary_to_csv(std::span<const SummaryRecord> records);
std::vector<ResultRecord> parse_results_csv(std::string_view text);
std::vector<SummaryRecord> parse_summary_csv(std::string_view text);

// Per-scenario 5% and 50% quantiles of se_bpshz, scenarios in first-seen order.
std::vector<SummaryRecord> summarize(std::span<const ResultRecord> records);

// Writes `content` to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// results.csv and summary.csv inside `dir` (created if missing).
void write_results(std::span<const ResultRecord> records, std::span<const SummaryRecord> summary,
                   const std::filesystem::path& dir);

}  // namespace cfmimo
