#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/random.hpp"

namespace testing {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;  // of the mean
};

inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  const auto n = static_cast<double>(xs.size());
  for (const double x : xs) m.mean += x;
  m.mean /= n;
  for (const double x : xs) m.variance += (x - m.mean) * (x - m.mean);
  m.variance /= n - 1.0;
  m.std_error = std::sqrt(m.variance / n);
  return m;
}

inline bool within_sigma(const Moments& m, double expected, double k = 3.0) {
  return std::abs(m.mean - expected) <= k * m.std_error;
}

inline Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols, cfmimo::RandomStream& rng) {
  Eigen::MatrixXcd a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = rng.complex_normal();
  return a;
}

}  // namespace testing
