#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "portcba/distributions.hpp"
#include "portcba/errors.hpp"
#include "portcba/rng.hpp"

namespace portcba {

// One block of a repeating traffic pattern: [start_hour, end_hour) of the
// cycle runs at `factor` times the base rate.
struct ScheduleBlock {
  double start_hour = 0.0;
  double end_hour = 0.0;
  double factor = 1.0;

  friend bool operator==(const ScheduleBlock&, const ScheduleBlock&) = default;
};

struct ArrivalProcess {
  enum class Kind { homogeneous, piecewise };

  Kind kind = Kind::homogeneous;
  double cycle_hours = 24.0;          // pattern period: 24 daily, 168 weekly, 8760 annual
  std::vector<ScheduleBlock> blocks;  // must partition [0, cycle_hours)

  double factor_at(double t) const {
    if (kind == Kind::homogeneous) return 1.0;
    double phase = std::fmod(t, cycle_hours);
    if (phase < 0.0) phase += cycle_hours;
    for (const auto& b : blocks)
      if (phase >= b.start_hour && phase < b.end_hour) return b.factor;
    return blocks.empty() ? 1.0 : blocks.back().factor;
  }

  double max_factor() const {
    if (kind == Kind::homogeneous) return 1.0;
    double m = 0.0;
    for (const auto& b : blocks) m = std::max(m, b.factor);
    return m;
  }

  // Exact time average of the factor over [0, horizon].
  double mean_factor_over(double horizon) const {
    if (kind == Kind::homogeneous || horizon <= 0.0) return 1.0;
    const double cycles = std::floor(horizon / cycle_hours);
    double cycle_integral = 0.0;
    for (const auto& b : blocks) cycle_integral += b.factor * (b.end_hour - b.start_hour);
    double integral = cycles * cycle_integral;
    const double tail = horizon - cycles * cycle_hours;
    for (const auto& b : blocks) {
      const double lo = std::min(b.start_hour, tail);
      const double hi = std::min(b.end_hour, tail);
      integral += b.factor * (hi - lo);
    }
    return integral / horizon;
  }

  void validate(double horizon) const {
    if (kind == Kind::homogeneous) return;
    if (blocks.empty()) throw ConfigError("arrivals: piecewise pattern has no blocks");
    if (cycle_hours <= 0.0) throw ConfigError("arrivals: cycle_hours must be > 0");
    double expected_start = 0.0;
    for (const auto& b : blocks) {
      if (b.factor < 0.0) throw ConfigError("arrivals: negative rate factor");
      if (std::abs(b.start_hour - expected_start) > 1e-9 || b.end_hour <= b.start_hour)
        throw ConfigError("arrivals: blocks must partition the cycle in order");
      expected_start = b.end_hour;
    }
    if (std::abs(expected_start - cycle_hours) > 1e-9)
      throw ConfigError("arrivals: blocks do not cover the full cycle");
    if (horizon > 0.0) {
      const double mean = mean_factor_over(horizon);
      if (std::abs(mean - 1.0) > 1e-6)
        throw ConfigError("arrivals: pattern factors average to " + std::to_string(mean) +
                          " over the horizon; total volume would not be preserved");
    }
  }

  friend bool operator==(const ArrivalProcess&, const ArrivalProcess&) = default;
};

// Draws arrival times for one replication. Homogeneous processes invert
// exponential interarrivals directly; piecewise patterns thin candidates
// generated at the peak rate, so the realised rate tracks the schedule
// without integrating it. Both consume keyed draws: a pattern of all-1
// factors reproduces the homogeneous arrival times bit for bit.
class ArrivalGenerator {
public:
  ArrivalGenerator(const ArrivalProcess& process, double base_rate, rng::DrawKit kit,
                   double horizon)
      : process_(process),
        kit_(kit),
        horizon_(horizon),
        peak_rate_(base_rate * process.max_factor()),
        max_factor_(process.max_factor()) {}

  // Next arrival time strictly inside the horizon, or nothing.
  std::optional<double> next() {
    if (peak_rate_ <= 0.0) return std::nullopt;
    while (true) {
      t_ += exponential_sample(peak_rate_, kit_.u(rng::Stream::arrival, index_));
      if (!(t_ < horizon_)) return std::nullopt;
      const double accept = process_.factor_at(t_) / max_factor_;
      const double u = kit_.u(rng::Stream::thinning, index_);
      ++index_;
      if (u < accept) return t_;
    }
  }

private:
  const ArrivalProcess& process_;
  rng::DrawKit kit_;
  double horizon_;
  double peak_rate_;
  double max_factor_;
  double t_ = 0.0;
  std::uint64_t index_ = 0;
};

}  // namespace portcba
