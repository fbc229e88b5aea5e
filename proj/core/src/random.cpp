#include "cfmimo/random.hpp"

#include <cmath>

namespace cfmimo {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(master);
  for (const auto p : path) {
    h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
  }
  return h;
}

std::complex<double> RandomStream::complex_normal() {
  static const double kScale = 1.0 / std::sqrt(2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {kScale * re, kScale * im};
}

}  // namespace cfmimo
