#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cfmimo {

// Purpose tags keep sub-streams of one drop statistically independent.
enum class StreamTag : std::uint64_t {
  large_scale = 1,
  pilots = 2,
  inner = 3,
  oracle = 4,
  test = 99,
};

// SplitMix64 finaliser; bijective mixing of a 64-bit word.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Counter-based sub-seed: folds each path component into the master seed.
// The result depends only on the values, never on call order across threads.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept;

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return uniform_(engine_); }
  double normal() { return normal_(engine_); }
  // CN(0,1): independent real and imaginary parts of variance 1/2.
  std::complex<double> complex_normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace cfmimo
