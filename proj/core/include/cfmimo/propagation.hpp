#pragma once

// One "drop": node placement, three-slope COST-Hata path loss, log-normal
// shadowing and the large-scale gain matrix beta (rows = APs, columns = UEs).

#include <filesystem>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/config.hpp"
#include "cfmimo/random.hpp"

namespace cfmimo {

struct Point2 {
  double x_km = 0.0;
  double y_km = 0.0;
};

struct LargeScaleState {
  std::vector<Point2> ap_positions;  // M
  std::vector<Point2> ue_positions;  // K
  Eigen::MatrixXd distance_km;       // M x K, planar distance
  Eigen::MatrixXd path_loss_db;      // M x K
  Eigen::MatrixXd shadowing_db;      // M x K
  Eigen::MatrixXd beta;              // M x K, 10^((PL + X)/10)

  std::size_t num_aps() const noexcept { return ap_positions.size(); }
  std::size_t num_users() const noexcept { return ue_positions.size(); }
};

// M + K points i.i.d. uniform over [0, side]^2. APs are drawn first.
std::pair<std::vector<Point2>, std::vector<Point2>> place_nodes(const SystemConfig& config,
                                                                RandomStream& rng);

// Three-slope model; d <= d0 is clamped to the inner constant.
double path_loss(double d_km, double L_db, double d0_km, double d1_km);

LargeScaleState draw_large_scale(const SystemConfig& config, RandomStream& rng);

// Builds the derived matrices for given positions and shadowing (M x K, dB).
LargeScaleState make_large_scale(const SystemConfig& config, std::vector<Point2> aps,
                                 std::vector<Point2> ues, Eigen::MatrixXd shadowing_db);

// Writes nodes.csv (node_type,index,x_km,y_km) and
// links.csv (m,k,d_km,PL_dB,X_dB,beta) into `dir`.
void write_drop_csv(const LargeScaleState& state, const std::filesystem::path& dir);

}  // namespace cfmimo
