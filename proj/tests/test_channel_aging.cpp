#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "cfmimo/channel_aging.hpp"
#include "cfmimo/errors.hpp"
#include "support.hpp"

using namespace cfmimo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Slow power series at 100 digits; cancellation near x = 50 costs ~22 of them.
double j0_oracle(double x) {
  using big = boost::multiprecision::cpp_dec_float_100;
  const big q = big(x) * big(x) / 4;
  big term = 1, sum = 1;
  for (int k = 1; k < 400; ++k) {
    term *= -q / (big(k) * big(k));
    sum += term;
    if (abs(term) < big("1e-60")) break;
  }
  return sum.convert_to<double>();
}

}  // namespace

TEST_CASE("bessel_j0 reference values") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(std::abs(bessel_j0(2.40482556)) < 1e-7);
  CHECK_THAT(bessel_j0(1.0), WithinAbs(0.7651976866, 1e-10));
  CHECK_THAT(bessel_j0(-1.0), WithinAbs(bessel_j0(1.0), 0.0));
  CHECK_THROWS_AS(bessel_j0(NAN), InvalidParameter);
}

TEST_CASE("bessel_j0 matches a high-precision series on [0, 50]") {
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double x = 50.0 * i / 499.0;
    worst = std::max(worst, std::abs(bessel_j0(x) - j0_oracle(x)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("bessel_j0 agrees with std::cyl_bessel_j") {
  for (double x = 0.0; x <= 80.0; x += 0.37) {
    CHECK_THAT(bessel_j0(x), WithinAbs(std::cyl_bessel_j(0.0, x), 1e-9));
  }
}

TEST_CASE("correlation_coefficient") {
  CHECK_THAT(correlation_coefficient(30, 1.9e9, 1e-3), WithinAbs(0.97, 0.005));
  CHECK_THAT(correlation_coefficient(30, 1.9e9, 1e-3), WithinAbs(0.9726590943332243, 1e-12));
  CHECK_THAT(correlation_coefficient(120, 1.9e9, 1e-3), WithinAbs(0.6057184516436763, 1e-12));
  CHECK(correlation_coefficient(0, 1.9e9, 1e-3) == 1.0);
  CHECK(correlation_coefficient(0, 5e9, 7.0) == 1.0);
  CHECK_THROWS_AS(correlation_coefficient(-1, 1.9e9, 1e-3), InvalidParameter);
}

TEST_CASE("correlation_coefficient has its first zero at 2.40482556") {
  // Solve 2 pi f_d dtau = 2.40482556 for the speed at 1.9 GHz, 1 ms.
  const double wavelength = kSpeedOfLight / 1.9e9;
  const double v_kmh = 2.40482556 / (2 * kPi * 1e-3) * wavelength * 3.6;
  CHECK(std::abs(correlation_coefficient(v_kmh, 1.9e9, 1e-3)) < 1e-7);
  CHECK(correlation_coefficient(0.9 * v_kmh, 1.9e9, 1e-3) > 0.0);
  CHECK(correlation_coefficient(1.1 * v_kmh, 1.9e9, 1e-3) < 0.0);
}

TEST_CASE("age_channel limits") {
  RandomStream rng(1);
  const Eigen::VectorXcd h = testing::random_complex(64, 1, rng);
  const auto same = age_channel(h, 1.0, rng);
  CHECK(same.h_data == h);
  const auto fresh = age_channel(h, 0.0, rng);
  CHECK(fresh.h_data == fresh.innovation);
  CHECK_THROWS_AS(age_channel(h, 1.5, rng), InvalidParameter);
}

TEST_CASE("age_channel moments at rho = 0.97") {
  RandomStream rng(2);
  const int n = 100000;
  const Eigen::VectorXcd h = testing::random_complex(n, 1, rng);
  const auto aged = age_channel(h, 0.97, rng);
  std::vector<double> corr(n), power(n), zero_corr(n);
  for (int i = 0; i < n; ++i) {
    corr[i] = (aged.h_data(i) * std::conj(h(i))).real();
    power[i] = std::norm(aged.h_data(i));
    zero_corr[i] = (aged.innovation(i) * std::conj(h(i))).real();
  }
  CHECK(testing::within_sigma(testing::moments(corr), 0.97));
  CHECK(testing::within_sigma(testing::moments(power), 1.0));
  CHECK(testing::within_sigma(testing::moments(zero_corr), 0.0));
}

TEST_CASE("aged |h|^2 stays Exp(1): Kolmogorov-Smirnov at 1%") {
  RandomStream rng(3);
  const int n = 100000;
  const Eigen::VectorXcd h = testing::random_complex(n, 1, rng);
  const auto aged = age_channel(h, 0.6, rng);
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = std::norm(aged.h_data(i));
  std::sort(p.begin(), p.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = 1.0 - std::exp(-p[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
  }
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("wiener_phase_path") {
  RandomStream rng(4);
  const auto flat = wiener_phase_path(0.0, 50, rng);
  CHECK(std::all_of(flat.begin(), flat.end(), [](double p) { return p == 0.0; }));
  CHECK(wiener_phase_path(0.1, 0, rng).empty());

  const double s2 = 0.02;
  const std::size_t n = 25;
  std::vector<double> end_sq, cross;
  for (int i = 0; i < 100000; ++i) {
    const auto path = wiener_phase_path(s2, n, rng);
    end_sq.push_back(path.back() * path.back());
    // Disjoint intervals (0, 10] and (10, 25].
    cross.push_back(path[9] * (path[24] - path[9]));
  }
  CHECK(testing::within_sigma(testing::moments(end_sq), n * s2));
  CHECK(testing::within_sigma(testing::moments(cross), 0.0));
}

TEST_CASE("wiener variance grows linearly in n") {
  RandomStream rng(5);
  const double s2 = 0.01;
  for (const std::size_t n : {1u, 10u, 40u}) {
    std::vector<double> sq;
    for (int i = 0; i < 100000; ++i) {
      const double phi = wiener_phase_path(s2, n, rng).back();
      sq.push_back(phi * phi);
    }
    CHECK(testing::within_sigma(testing::moments(sq), n * s2));
  }
}

TEST_CASE("hardened_attenuation") {
  CHECK(hardened_attenuation(0.0, 20000) == 1.0);
  CHECK(hardened_attenuation(0.3, 0) == 1.0);
  CHECK_THAT(hardened_attenuation(0.01, 50), WithinRel(std::exp(-0.25), 1e-15));
  double previous = 1.0;
  for (std::size_t n = 1; n < 200; n += 7) {
    CHECK(hardened_attenuation(0.01, n) < previous);
    previous = hardened_attenuation(0.01, n);
  }
  CHECK(hardened_attenuation(0.02, 10) < hardened_attenuation(0.01, 10));
  CHECK_THROWS_AS(hardened_attenuation(-1.0, 3), InvalidParameter);
}

TEST_CASE("array average of AP phase drift hardens at M = 4096") {
  RandomStream rng(6);
  const double s2 = 0.01;
  const std::size_t n = 50;
  const int M = 4096;
  const int realizations = 20;
  std::complex<double> avg = 0.0;
  for (int r = 0; r < realizations; ++r) {
    std::complex<double> sum = 0.0;
    for (int m = 0; m < M; ++m) {
      sum += std::polar(1.0, wiener_phase_path(s2, n, rng).back());
    }
    avg += sum / static_cast<double>(M);
  }
  avg /= static_cast<double>(realizations);
  CHECK_THAT(avg.real(), WithinRel(hardened_attenuation(s2, n), 0.01));
  CHECK(std::abs(avg.imag()) < 0.01);
}

TEST_CASE("accumulated_phase_variance label mappings") {
  CHECK_THAT(accumulated_phase_variance(180, PhaseLabelMapping::accumulated_std), WithinRel(kPi * kPi, 1e-15));
  CHECK_THAT(accumulated_phase_variance(180, PhaseLabelMapping::accumulated_variance), WithinRel(kPi, 1e-15));
  CHECK(accumulated_phase_variance(0, PhaseLabelMapping::accumulated_std) == 0.0);
  CHECK_THROWS_AS(accumulated_phase_variance(-5, PhaseLabelMapping::accumulated_std), InvalidParameter);
}

TEST_CASE("draw_channel_realization ages each user with its own rho") {
  RandomStream rng(7);
  Eigen::VectorXd rho(3);
  rho << 1.0, 0.5, 0.0;
  const auto r = draw_channel_realization(16, rho, 0.5, rng);
  CHECK(r.h_data.col(0) == r.h_pilot.col(0));
  CHECK(r.h_data.col(2) == r.innovation.col(2));
  CHECK(r.h_data.col(1).isApprox(0.5 * r.h_pilot.col(1) + std::sqrt(0.75) * r.innovation.col(1)));
  CHECK_THAT(r.phase_attenuation, WithinRel(std::exp(-0.25), 1e-15));
}
