#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "portcba/errors.hpp"
#include "portcba/factors.hpp"

namespace portcba {

namespace detail {
inline std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
}  // namespace detail

/// Share of traffic searched when traffic grows by tg and search activity by
/// sg, starting from a base share s0. The searched share dilutes with volume
/// and scales with effort: s0 * (1+sg) / (1+tg).
inline double searched_fraction(double tg, double sg, double s0) {
  if (1.0 + tg <= 0.0)
    throw CalibrationError("searched_fraction: traffic growth " + detail::fmt(tg) +
                           " wipes out all traffic");
  const double f = s0 * (1.0 + sg) / (1.0 + tg);
  if (f < 0.0)
    throw CalibrationError("searched_fraction: negative share under sg=" + detail::fmt(sg));
  if (f > 1.0 + 1e-12)
    throw CalibrationError("searched_fraction: search fraction exceeds traffic (" +
                           detail::fmt(f) + " for tg=" + detail::fmt(tg) +
                           ", sg=" + detail::fmt(sg) + ")");
  return f;
}

// Conditional catch fractions along the three checks, derived from the anchor
// counts. d1 = share of all positives caught in France; d2 = share of the
// remainder caught at the UK shed; d3 = share of what is left caught at the
// UK berth. Chaining them over the positive total reproduces the four exit
// counts.
struct DetectionChain {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

inline DetectionChain baseline_detection_chain(const BaselineCounts& b) {
  const double total = b.total_positives();
  if (total <= 0.0)
    throw CalibrationError("baseline_detection_chain: no positive lorries in baseline");
  const double after_france = total - b.found_france;
  const double after_shed = after_france - b.found_uk_shed;
  if (after_france <= 0.0 || after_shed <= 0.0)
    throw CalibrationError("baseline_detection_chain: degenerate baseline, a stage empties "
                           "the positive population");
  return {b.found_france / total, b.found_uk_shed / after_france, b.found_uk_berth / after_shed};
}

// Expected yearly exit counts a scenario must reproduce.
struct ExitTargets {
  double france = 0.0;
  double shed = 0.0;
  double berth = 0.0;
  double missed = 0.0;

  double uk_total() const { return shed + berth; }
  double total_positives() const { return france + shed + berth + missed; }
};

// Branch probabilities shared by the decision tree and both simulation modes.
// The per-lorry chain drives the tree; the per-positive chain drives the
// simulator's detection thresholds. Both chain back to the same targets.
struct CalibratedRouting {
  double n_lorries = 0.0;  // expected yearly volume, N0 * (1+tg)

  // Per-lorry chain (any lorry, positive or not).
  double p_found_france = 0.0;
  double p_found_shed_given_past_france = 0.0;
  double p_found_berth_given_past_shed = 0.0;
  double p_missed_given_undetected = 0.0;
  double p_positive = 0.0;

  ExitTargets targets;

  // Per still-carrying-positive catch chain.
  double catch_france() const { return ratio(targets.france, targets.total_positives()); }
  double catch_shed() const {
    return ratio(targets.shed, targets.total_positives() - targets.france);
  }
  double catch_berth() const {
    return ratio(targets.berth, targets.total_positives() - targets.france - targets.shed);
  }

private:
  static double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }
};

// Maps a scenario onto routing probabilities. Positive exits scale with
// clandestine growth; UK finds additionally scale with the search ratio
// r = searched/s0 and misses with 1/r; French finds do not react to UKBA
// search effort. The UK total splits between shed and berth in the baseline
// ratio. Targets are authoritative: probabilities are whatever chained
// fractions reproduce them over the scenario's volume.
inline CalibratedRouting calibrate_routing(const Scenario& s, const BaselineCounts& b) {
  const double searched = searched_fraction(s.tg, s.sg, b.base_search_fraction);
  const double r = searched / b.base_search_fraction;
  if (s.cg < -1.0)
    throw CalibrationError("calibrate_routing: clandestine growth below -100%");

  CalibratedRouting out;
  out.n_lorries = b.total_lorries * (1.0 + s.tg);

  const double cg_scale = 1.0 + s.cg;
  out.targets.france = b.found_france * cg_scale;
  const double uk_total = b.found_uk_total() * cg_scale * r;
  const double uk_base = b.found_uk_total();
  out.targets.shed = uk_base > 0.0 ? uk_total * (b.found_uk_shed / uk_base) : 0.0;
  out.targets.berth = uk_total - out.targets.shed;
  if (r <= 0.0)
    throw CalibrationError("calibrate_routing: zero search share leaves misses unbounded");
  out.targets.missed = b.missed * cg_scale / r;

  double remaining = out.n_lorries;
  const auto chain = [&](double target, const char* branch) {
    if (remaining <= 0.0 || target < 0.0 || target > remaining + 1e-9)
      throw CalibrationError(std::string("calibrate_routing: branch '") + branch +
                             "' needs probability outside [0,1] (target " +
                             detail::fmt(target) + " of " + detail::fmt(remaining) +
                             " remaining lorries)");
    const double p = remaining > 0.0 ? target / remaining : 0.0;
    remaining -= target;
    return p;
  };
  out.p_found_france = chain(out.targets.france, "france");
  out.p_found_shed_given_past_france = chain(out.targets.shed, "uk_shed");
  out.p_found_berth_given_past_shed = chain(out.targets.berth, "uk_berth");
  out.p_missed_given_undetected = chain(out.targets.missed, "missed");

  out.p_positive = out.n_lorries > 0.0 ? out.targets.total_positives() / out.n_lorries : 0.0;
  if (out.p_positive > 1.0)
    throw CalibrationError("calibrate_routing: positives exceed traffic volume");
  return out;
}

}  // namespace portcba
