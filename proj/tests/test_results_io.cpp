#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <limits>

#include "cfmimo/errors.hpp"
#include "cfmimo/performance.hpp"
#include "cfmimo/random.hpp"
#include "cfmimo/results_io.hpp"

using namespace cfmimo;

namespace {

std::vector<ResultRecord> synthetic(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<ResultRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    out.push_back({i % 3 == 0 ? "alpha" : "beta_v30", i / 4, i % 4, 30.0 * u, std::cos(u * 7), 15.0 * (i % 13),
                   std::exp(-u), std::exp(20 * rng.normal()), rng.uniform() * 9.0});
  }
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cfmimo_io_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("golden headers") {
  CHECK(results_to_csv({}) == "scenario,drop,user,velocity_kmh,rho,tpn_label_deg,attenuation,gamma_linear,se_bpshz\n");
  CHECK(summary_to_csv({}) == "scenario,q05_bpshz,q50_bpshz,n_samples\n");
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(30.0) == "30");
  CHECK(format_double(1e-300) == "1e-300");
  for (const double v : {0.1 + 0.2, std::nextafter(1.0, 2.0), 6.360793201074298e-13, -0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("results round-trip exactly") {
  const auto records = synthetic(500, 1);
  CHECK(parse_results_csv(results_to_csv(records)) == records);
}

TEST_CASE("summary round-trips and matches a recomputation from results") {
  const auto records = synthetic(400, 2);
  const auto summary = summarize(records);
  REQUIRE(summary.size() == 2);
  CHECK(summary[0].scenario == "alpha");
  CHECK(parse_summary_csv(summary_to_csv(summary)) == summary);

  const auto dir = scratch("summary");
  write_results(records, summary, dir);
  const auto back = parse_results_csv(read_file(dir / "results.csv"));
  const auto stored = parse_summary_csv(read_file(dir / "summary.csv"));
  CHECK(summarize(back) == stored);

  std::vector<double> se;
  for (const auto& r : back)
    if (r.scenario == "beta_v30") se.push_back(r.se_bpshz);
  const auto cdf = cdf_and_percentiles(se);
  CHECK(stored[1].q05_bpshz == cdf.q05);
  CHECK(stored[1].q50_bpshz == cdf.q50);
  CHECK(stored[1].n_samples == se.size());
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed CSV is rejected") {
  CHECK_THROWS_AS(parse_results_csv("scenario,drop\n"), IoError);
  CHECK_THROWS_AS(parse_results_csv(""), IoError);
  const std::string header(kResultsHeader);
  CHECK_THROWS_AS(parse_results_csv(header + "\na,1,2\n"), IoError);
  CHECK_THROWS_AS(parse_results_csv(header + "\na,x,0,0,1,0,1,1,1\n"), IoError);
  CHECK_THROWS_AS(parse_summary_csv(std::string(kSummaryHeader) + "\na,1,2,-4\n"), IoError);
}

TEST_CASE("atomic writes leave no temporary behind") {
  const auto dir = scratch("atomic");
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "f.csv", "one\n");
  write_file_atomic(dir / "f.csv", "two\n");
  CHECK(read_file(dir / "f.csv") == "two\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("I/O errors carry the path") {
  CHECK_THROWS_WITH(read_file("/nonexistent/x.csv"), Catch::Matchers::ContainsSubstring("/nonexistent/x.csv"));
  CHECK_THROWS_AS(write_results({}, {}, "/proc/cfmimo_no_such_dir"), IoError);
}
