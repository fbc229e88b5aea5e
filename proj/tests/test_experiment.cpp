#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "cfmimo/errors.hpp"
#include "cfmimo/experiment.hpp"

using namespace cfmimo;

namespace {

SystemConfig small_config() {
  SystemConfig c;
  c.num_aps = 32;
  c.num_users = 4;
  c.pilot_length = 4;
  return c;
}

}  // namespace

TEST_CASE("one drop with K = 16 gives 16 rows") {
  const ScenarioSpec spec{"one", {30.0}, {0.0}, CsiMode::perfect, 1, 50, 3};
  const auto rs = run_experiment(SystemConfig{}, {spec});
  CHECK(rs.records.size() == 16);
  CHECK(rs.diagnostics.empty());
  REQUIRE(rs.summary.size() == 1);
  CHECK(rs.summary[0].n_samples == 16);
}

TEST_CASE("row count is the sum of drops times K") {
  const std::vector<ScenarioSpec> specs{
      {"a", {0.0}, {0.0}, CsiMode::benchmark, 3, 40, 1},
      {"b", {10.0, 20.0}, {0.0}, CsiMode::perfect, 5, 40, 1},
      {"c", {}, {}, CsiMode::mmse, 2, 40, 9},
  };
  const auto rs = run_experiment(small_config(), specs);
  CHECK(rs.records.size() == (3 + 2 * 5 + 2) * 4);
  CHECK(rs.summary.size() == 4);
}

TEST_CASE("records are ordered by scenario, drop, user") {
  const std::vector<ScenarioSpec> specs{
      {"z", {50.0}, {0.0}, CsiMode::perfect, 3, 40, 1},
      {"a", {0.0}, {0.0}, CsiMode::benchmark, 2, 40, 1},
  };
  const auto rs = run_experiment(small_config(), specs, {4});
  std::size_t i = 0;
  for (const std::string label : {"z", "a"}) {
    const std::size_t drops = label == "z" ? 3 : 2;
    for (std::size_t d = 0; d < drops; ++d)
      for (std::size_t k = 0; k < 4; ++k, ++i) {
        CHECK(rs.records[i].scenario == label);
        CHECK(rs.records[i].drop == d);
        CHECK(rs.records[i].user == k);
      }
  }
}

TEST_CASE("identical seeds give byte-identical CSV for any worker count") {
  const auto specs = default_scenarios(4, 40, 77);
  const auto reference = results_to_csv(run_experiment(small_config(), specs, {1}).records);
  for (const std::size_t w : {2u, 4u, 8u}) {
    CHECK(results_to_csv(run_experiment(small_config(), specs, {w}).records) == reference);
  }
  CHECK(results_to_csv(run_experiment(small_config(), specs, {1}).records) == reference);
}

TEST_CASE("different seeds give different results") {
  const ScenarioSpec a{"s", {30.0}, {0.0}, CsiMode::perfect, 2, 40, 1};
  ScenarioSpec b = a;
  b.seed = 2;
  CHECK(results_to_csv(run_experiment(small_config(), {a}).records) !=
        results_to_csv(run_experiment(small_config(), {b}).records));
}

TEST_CASE("benchmark rows carry rho = 1 and no attenuation") {
  const ScenarioSpec spec{"benchmark", {0.0}, {0.0}, CsiMode::benchmark, 2, 40, 5};
  for (const auto& r : run_experiment(small_config(), {spec}).records) {
    CHECK(r.rho == 1.0);
    CHECK(r.attenuation == 1.0);
    CHECK(r.velocity_kmh == 0.0);
    CHECK(r.se_bpshz > 0.0);
  }
}

TEST_CASE("a perfect-CSI point at rest without phase noise equals the benchmark") {
  const std::vector<ScenarioSpec> specs{
      {"benchmark", {0.0}, {0.0}, CsiMode::benchmark, 3, 40, 5},
      {"still", {0.0}, {0.0}, CsiMode::perfect, 3, 40, 5},
  };
  const auto rs = run_experiment(small_config(), specs);
  const std::size_t n = rs.records.size() / 2;
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(rs.records[i].se_bpshz == rs.records[n + i].se_bpshz);
    CHECK(rs.records[i].gamma_linear == rs.records[n + i].gamma_linear);
  }
}

TEST_CASE("configured speeds apply when a scenario has no velocity grid") {
  SystemConfig c = small_config();
  c.ue_speeds_kmh = {0, 30, 60, 120};
  const ScenarioSpec spec{"cfg", {}, {0.0}, CsiMode::perfect, 1, 40, 5};
  const auto rs = run_experiment(c, {spec});
  for (std::size_t k = 0; k < 4; ++k) CHECK(rs.records[k].velocity_kmh == c.ue_speeds_kmh[k]);
  CHECK(rs.records[0].rho == 1.0);
  CHECK(rs.records[3].rho < rs.records[1].rho);
}

TEST_CASE("grid expansion labels") {
  const auto pts = expand({"sweep", {0, 10}, {0, 7.5}, CsiMode::perfect, 1, 1, 1});
  std::vector<std::string> labels;
  for (const auto& p : pts) labels.push_back(p.label);
  CHECK(labels == std::vector<std::string>{"sweep_v0_pn0", "sweep_v0_pn7.5", "sweep_v10_pn0", "sweep_v10_pn7.5"});
  CHECK(expand({"single", {30}, {0}, CsiMode::perfect, 1, 1, 1})[0].label == "single");

  std::set<std::string> all;
  for (const auto& s : default_scenarios(1, 1, 1))
    for (const auto& p : expand(s)) CHECK(all.insert(p.label).second);
  CHECK(all.count("benchmark") == 1);
  CHECK(all.count("v30") == 1);
  CHECK(all.count("pn150") == 1);
  CHECK(all.count("rho_sweep_v150") == 1);
  CHECK(all.count("pn_sweep_pn180") == 1);
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS(run_experiment(small_config(), {{"x", {0}, {0}, CsiMode::perfect, 0, 10, 1}}), InvalidParameter);
  CHECK_THROWS_AS(run_experiment(small_config(), {{"x", {0}, {0}, CsiMode::perfect, 1, 0, 1}}), InvalidParameter);
  CHECK_THROWS_AS(run_experiment(small_config(), {{"a,b", {0}, {0}, CsiMode::perfect, 1, 1, 1}}), InvalidParameter);
  CHECK_THROWS_AS(run_experiment(small_config(), {{"x", {-5}, {0}, CsiMode::perfect, 1, 1, 1}}), InvalidParameter);
  CHECK_THROWS_AS(run_experiment(small_config(), {{"x", {0}, {0}, CsiMode::perfect, 1, 1, 1},
                                                  {"x", {0}, {0}, CsiMode::perfect, 1, 1, 1}}),
                  InvalidParameter);
  CHECK_THROWS_AS(csi_mode_from_string("noisy"), InvalidParameter);
  CHECK(csi_mode_from_string(to_string(CsiMode::mmse)) == CsiMode::mmse);
}

TEST_CASE("a failing scenario is reported and left out") {
  // 150 dB shadowing spreads the user gains so far apart that the inner Gram
  // matrices are numerically singular.
  SystemConfig c = small_config();
  c.shadow_std_db = 150.0;
  const std::vector<ScenarioSpec> specs{
      {"fragile", {0.0}, {0.0}, CsiMode::perfect, 3, 100, 4},
      {"other", {0.0}, {0.0}, CsiMode::perfect, 2, 100, 5},
  };
  const auto rs = run_experiment(c, specs);
  REQUIRE_FALSE(rs.diagnostics.empty());
  CHECK(rs.diagnostics[0].scenario == "fragile");
  CHECK_THAT(rs.diagnostics[0].message, Catch::Matchers::ContainsSubstring("singular"));
  for (const auto& r : rs.records) CHECK(r.scenario != "fragile");
  for (const auto& s : rs.summary) CHECK(s.scenario != "fragile");
}
