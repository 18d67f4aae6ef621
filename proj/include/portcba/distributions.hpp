#pragma once

#include <cmath>
#include <string>

#include "portcba/errors.hpp"

namespace portcba {

// Triangular delay distribution in hours. All-zero parameters mean "no
// delay" and are treated specially by the engine (no server is occupied).
struct Triangular {
  double min = 0.0;
  double mode = 0.0;
  double max = 0.0;

  static constexpr Triangular zero() { return {}; }

  bool is_zero() const { return max == 0.0 && mode == 0.0 && min == 0.0; }

  void validate(const std::string& context) const {
    if (!(min <= mode && mode <= max))
      throw ConfigError(context + ": triangular requires min <= mode <= max, got (" +
                        std::to_string(min) + ", " + std::to_string(mode) + ", " +
                        std::to_string(max) + ")");
    if (min < 0.0) throw ConfigError(context + ": negative delay time");
  }

  // Inverse CDF. Continuous and nondecreasing in u; u=0 -> min, u=1 -> max.
  double sample(double u) const {
    const double span = max - min;
    if (span == 0.0) return min;
    const double cut = (mode - min) / span;
    if (u < cut) return min + std::sqrt(u * span * (mode - min));
    return max - std::sqrt((1.0 - u) * span * (max - mode));
  }

  double mean() const { return (min + mode + max) / 3.0; }

  double variance() const {
    return (min * min + mode * mode + max * max - min * mode - min * max - mode * max) / 18.0;
  }

  friend bool operator==(const Triangular&, const Triangular&) = default;
};

// Exponential interarrival sample from a uniform draw in [0,1).
inline double exponential_sample(double rate, double u) {
  return -std::log1p(-u) / rate;
}

}  // namespace portcba
