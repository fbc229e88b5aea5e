#include "cfmimo/propagation.hpp"

#include <cmath>
#include <fstream>

#include "cfmimo/errors.hpp"
#include "cfmimo/results_io.hpp"

namespace cfmimo {

std::pair<std::vector<Point2>, std::vector<Point2>> place_nodes(const SystemConfig& config,
                                                                RandomStream& rng) {
  auto draw = [&](std::size_t n) {
    std::vector<Point2> pts(n);
    for (auto& p : pts) {
      p.x_km = config.area_side_km * rng.uniform();
      p.y_km = config.area_side_km * rng.uniform();
    }
    return pts;
  };
  auto aps = draw(config.num_aps);
  auto ues = draw(config.num_users);
  return {std::move(aps), std::move(ues)};
}

double path_loss(double d_km, double L_db, double d0_km, double d1_km) {
  if (!(d0_km > 0.0) || !(d1_km > d0_km)) {
    throw InvalidParameter("path_loss: need 0 < d0 < d1");
  }
  if (!(d_km >= 0.0)) {
    throw InvalidParameter("path_loss: distance must be >= 0");
  }
  if (d_km > d1_km) {
    return -L_db - 35.0 * std::log10(d_km);
  }
  if (d_km > d0_km) {
    return -L_db - 10.0 * std::log10(std::pow(d1_km, 1.5) * d_km * d_km);
  }
  return -L_db - 10.0 * std::log10(std::pow(d1_km, 1.5) * d0_km * d0_km);
}

LargeScaleState make_large_scale(const SystemConfig& config, std::vector<Point2> aps,
                                 std::vector<Point2> ues, Eigen::MatrixXd shadowing_db) {
  const auto M = static_cast<Eigen::Index>(aps.size());
  const auto K = static_cast<Eigen::Index>(ues.size());
  if (shadowing_db.rows() != M || shadowing_db.cols() != K) {
    throw InvalidParameter("make_large_scale: shadowing must be M x K");
  }
  const double L = compute_L(config.carrier_freq_mhz, config.ap_height_m, config.ue_height_m);

  LargeScaleState s;
  s.distance_km.resize(M, K);
  s.path_loss_db.resize(M, K);
  s.beta.resize(M, K);
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index k = 0; k < K; ++k) {
      const double d = std::hypot(aps[m].x_km - ues[k].x_km, aps[m].y_km - ues[k].y_km);
      s.distance_km(m, k) = d;
      s.path_loss_db(m, k) = path_loss(d, L, config.d0_km, config.d1_km);
      s.beta(m, k) = std::pow(10.0, (s.path_loss_db(m, k) + shadowing_db(m, k)) / 10.0);
    }
  }
  s.shadowing_db = std::move(shadowing_db);
  s.ap_positions = std::move(aps);
  s.ue_positions = std::move(ues);
  return s;
}

LargeScaleState draw_large_scale(const SystemConfig& config, RandomStream& rng) {
  auto [aps, ues] = place_nodes(config, rng);
  Eigen::MatrixXd shadowing(aps.size(), ues.size());
  for (Eigen::Index m = 0; m < shadowing.rows(); ++m) {
    for (Eigen::Index k = 0; k < shadowing.cols(); ++k) {
      shadowing(m, k) = config.shadow_std_db * rng.normal();
    }
  }
  return make_large_scale(config, std::move(aps), std::move(ues), std::move(shadowing));
}

void write_drop_csv(const LargeScaleState& state, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  std::string nodes = "node_type,index,x_km,y_km\n";
  auto add_nodes = [&nodes](const char* type, const std::vector<Point2>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      nodes += std::string(type) + "," + std::to_string(i) + "," + format_double(pts[i].x_km) + "," +
               format_double(pts[i].y_km) + "\n";
    }
  };
  add_nodes("ap", state.ap_positions);
  add_nodes("ue", state.ue_positions);

  std::string links = "m,k,d_km,PL_dB,X_dB,beta\n";
  for (Eigen::Index m = 0; m < state.beta.rows(); ++m) {
    for (Eigen::Index k = 0; k < state.beta.cols(); ++k) {
      links += std::to_string(m) + "," + std::to_string(k) + "," + format_double(state.distance_km(m, k)) +
               "," + format_double(state.path_loss_db(m, k)) + "," + format_double(state.shadowing_db(m, k)) +
               "," + format_double(state.beta(m, k)) + "\n";
    }
  }
  write_file_atomic(dir / "nodes.csv", nodes);
  write_file_atomic(dir / "links.csv", links);
}

}  // namespace cfmimo
