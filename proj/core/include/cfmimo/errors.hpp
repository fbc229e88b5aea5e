#pragma once

#include <stdexcept>
#include <string>

namespace cfmimo {

// A physical or protocol parameter outside its admissible range.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input that is well-typed but carries no usable information
// (empty sample set, all-zero power expectations, too many singular draws).
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// G G^H is singular or too ill-conditioned to invert reliably.
class RankDeficiency : public std::runtime_error {
 public:
  RankDeficiency(const std::string& what, double rcond)
      : std::runtime_error(what + " (rcond=" + std::to_string(rcond) + ")"), rcond_(rcond) {}

  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cfmimo
