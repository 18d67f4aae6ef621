#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include <boost/math/distributions/students_t.hpp>

#include "portcba/errors.hpp"

namespace portcba {

struct ReplicationSummary {
  std::size_t n_reps = 0;
  double mean = 0.0;
  double stddev = 0.0;         // sample standard deviation (n-1 denominator)
  double ci_half_width = 0.0;  // 95%, Student-t
};

inline double student_t_975(std::size_t df) {
  boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(dist, 0.975);
}

inline ReplicationSummary summarize(std::span<const double> values) {
  if (values.empty()) throw ConfigError("summarize: no replications");
  ReplicationSummary s;
  s.n_reps = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n_reps);
  if (s.n_reps >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.n_reps - 1));
    s.ci_half_width = student_t_975(s.n_reps - 1) * s.stddev /
                      std::sqrt(static_cast<double>(s.n_reps));
  }
  return s;
}

/// Smallest replication count n (>= 3) whose 95% half-width falls within the
/// requested fraction of the pilot mean, assuming the pilot's variability:
/// t(n-1) * s / (sqrt(n) * |mean|) <= relative_precision.
inline std::size_t required_replications(const ReplicationSummary& pilot,
                                         double relative_precision) {
  if (pilot.n_reps < 3) throw ConfigError("required_replications: pilot needs >= 3 replications");
  if (relative_precision <= 0.0)
    throw ConfigError("required_replications: relative precision must be > 0");
  if (pilot.mean == 0.0)
    throw ConfigError("required_replications: pilot mean is zero, relative precision undefined");

  const double target = relative_precision * std::abs(pilot.mean);
  for (std::size_t n = 3; n <= 1000000; ++n) {
    if (student_t_975(n - 1) * pilot.stddev / std::sqrt(static_cast<double>(n)) <= target)
      return n;
  }
  throw ConfigError("required_replications: precision unattainable below 1e6 replications");
}

}  // namespace portcba
