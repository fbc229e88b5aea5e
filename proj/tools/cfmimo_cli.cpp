// cfmimo: run downlink scenarios and write results.csv / summary.csv.
//
//   cfmimo simulate --config configs/reference.json --scenario all --drops 200 --out out/
//   cfmimo simulate --benchmark --drops 50 --seed 7 --out out/
//   cfmimo drop --seed 3 --out drop/

#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "cfmimo/config_json.hpp"
#include "cfmimo/errors.hpp"
#include "cfmimo/experiment.hpp"
#include "cfmimo/propagation.hpp"
#include "cfmimo/random.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct SimulateArgs {
  std::string config;
  std::string scenario = "all";
  std::size_t drops = 200;
  std::size_t inner = 200;
  std::uint64_t seed = 1;
  std::string out = "results";
  bool benchmark = false;
  std::size_t workers = 0;
  std::string csi = "perfect";
};

cfmimo::SystemConfig load(const std::string& path) {
  return path.empty() ? cfmimo::SystemConfig{} : cfmimo::load_config(path);
}

int simulate(const SimulateArgs& a) {
  const cfmimo::SystemConfig config = load(a.config);
  const cfmimo::CsiMode csi = cfmimo::csi_mode_from_string(a.csi);

  std::vector<cfmimo::ScenarioSpec> chosen;
  if (a.benchmark) {
    chosen.push_back({"benchmark", {0.0}, {0.0}, cfmimo::CsiMode::benchmark, a.drops, a.inner, a.seed});
  } else {
    for (auto& s : cfmimo::default_scenarios(a.drops, a.inner, a.seed)) {
      if (a.scenario != "all" && s.label != a.scenario) continue;
      if (s.csi != cfmimo::CsiMode::benchmark) s.csi = csi;
      chosen.push_back(std::move(s));
    }
    if (chosen.empty()) {
      throw cfmimo::ConfigError("unknown scenario '" + a.scenario + "'");
    }
  }

  cfmimo::RunOptions opts;
  opts.workers = a.workers ? a.workers : std::max(1u, std::thread::hardware_concurrency());
  const cfmimo::ResultSet rs = cfmimo::run_experiment(config, chosen, opts);
  cfmimo::write_results(rs.records, rs.summary, a.out);

  for (const auto& s : rs.summary) {
    std::cout << s.scenario << "  q05=" << s.q05_bpshz << "  q50=" << s.q50_bpshz << "  n=" << s.n_samples
              << "\n";
  }
  for (const auto& d : rs.diagnostics) {
    std::cerr << "scenario " << d.scenario << " drop " << d.drop << ": " << d.message << "\n";
  }
  return rs.diagnostics.empty() ? kExitOk : kExitNumerical;
}

int dump_drop(const std::string& config_path, std::uint64_t seed, std::size_t drop, const std::string& out) {
  const cfmimo::SystemConfig config = load(config_path);
  cfmimo::RandomStream rng(
      cfmimo::derive_seed(seed, {drop, static_cast<std::uint64_t>(cfmimo::StreamTag::large_scale)}));
  cfmimo::write_drop_csv(cfmimo::draw_large_scale(config, rng), out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free massive MIMO downlink simulator (ZF precoding, channel aging)"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "run scenarios and write results.csv and summary.csv");
  simulate_cmd->add_option("--config", sim.config, "JSON configuration (defaults to the built-in setup)");
  simulate_cmd->add_option("--scenario", sim.scenario, "scenario label or 'all'");
  simulate_cmd->add_option("--drops", sim.drops, "drops per scenario")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--inner", sim.inner, "inner draws for xi/chi/delta")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", sim.seed, "master seed");
  simulate_cmd->add_option("--out", sim.out, "output directory");
  simulate_cmd->add_flag("--benchmark", sim.benchmark, "run only the benchmark (alpha = beta, rho = 1, T = 1)");
  simulate_cmd->add_option("--workers", sim.workers, "worker threads (0 = hardware)");
  simulate_cmd->add_option("--csi", sim.csi, "CSI model for aging scenarios")
      ->check(CLI::IsMember({"perfect", "mmse"}));

  std::string drop_config;
  std::string drop_out = "drop";
  std::uint64_t drop_seed = 1;
  std::size_t drop_index = 0;
  auto* drop_cmd = app.add_subcommand("drop", "write nodes.csv and links.csv for one drop");
  drop_cmd->add_option("--config", drop_config, "JSON configuration");
  drop_cmd->add_option("--seed", drop_seed, "master seed");
  drop_cmd->add_option("--drop", drop_index, "drop index");
  drop_cmd->add_option("--out", drop_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate_cmd->parsed()) return simulate(sim);
    return dump_drop(drop_config, drop_seed, drop_index, drop_out);
  } catch (const cfmimo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cfmimo::InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cfmimo::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
