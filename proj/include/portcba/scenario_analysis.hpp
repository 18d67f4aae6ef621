#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "portcba/calibration.hpp"
#include "portcba/factors.hpp"

namespace portcba::sa {

/// Expected positive lorries found by UKBA under (tg, sg) with clandestine
/// growth cg: baseline UK total, scaled by the search ratio and prevalence.
inline double found_positives(double tg, double sg, double cg, const BaselineCounts& b) {
  const double r = searched_fraction(tg, sg, b.base_search_fraction) / b.base_search_fraction;
  return b.found_uk_total() * r * (1.0 + cg);
}

/// Expected positive lorries slipping through: baseline misses scale with the
/// inverse search ratio and with prevalence.
inline double missed_positives(double tg, double sg, double cg, const BaselineCounts& b) {
  const double searched = searched_fraction(tg, sg, b.base_search_fraction);
  if (searched <= 0.0)
    throw CalibrationError("missed_positives: searched share is zero, misses unbounded");
  return b.missed * (b.base_search_fraction / searched) * (1.0 + cg);
}

inline const SearchOption& find_option(const std::vector<SearchOption>& options, double sg) {
  for (const auto& opt : options)
    if (std::abs(opt.growth - sg) <= 1e-12) return opt;
  throw ConfigError("no search option with growth " + detail::fmt(sg));
}

/// Total expected cost of one scenario: miss cost plus the yearly cost of the
/// chosen search option.
inline double scenario_cost(double tg, double sg, double cg, const BaselineCounts& b,
                            const CostModel& costs, const std::vector<SearchOption>& options) {
  const SearchOption& opt = find_option(options, sg);
  return missed_positives(tg, sg, cg, b) * costs.cost_per_missed_lorry().pounds() +
         opt.annual_cost.pounds();
}

/// Probability-weighted cost of a search option over the whole factor grid.
inline double expected_cost(double sg, const ScenarioFactorGrid& grid, const BaselineCounts& b,
                            const CostModel& costs) {
  double total = 0.0;
  for (const auto& tg : grid.traffic_growth)
    for (const auto& cg : grid.clandestine_growth)
      total += tg.probability * cg.probability *
               scenario_cost(tg.value, sg, cg.value, b, costs, grid.search_growth);
  return total;
}

// One (tg, sg) grid for a fixed clandestine growth, row-major over tg.
struct SaGrid {
  double cg = 0.0;
  std::vector<double> tg_values;
  std::vector<double> sg_values;
  std::vector<std::vector<double>> searched;
  std::vector<std::vector<double>> found;
  std::vector<std::vector<double>> missed;
  std::vector<std::vector<double>> cost;  // pounds
};

inline SaGrid build_sa_grid(const ScenarioFactorGrid& grid, const BaselineCounts& b,
                            const CostModel& costs, double cg) {
  SaGrid out;
  out.cg = cg;
  for (const auto& t : grid.traffic_growth) out.tg_values.push_back(t.value);
  for (const auto& s : grid.search_growth) out.sg_values.push_back(s.growth);
  for (const auto& t : grid.traffic_growth) {
    std::vector<double> rs, rf, rm, rc;
    for (const auto& s : grid.search_growth) {
      rs.push_back(searched_fraction(t.value, s.growth, b.base_search_fraction));
      rf.push_back(found_positives(t.value, s.growth, cg, b));
      rm.push_back(missed_positives(t.value, s.growth, cg, b));
      rc.push_back(scenario_cost(t.value, s.growth, cg, b, costs, grid.search_growth));
    }
    out.searched.push_back(std::move(rs));
    out.found.push_back(std::move(rf));
    out.missed.push_back(std::move(rm));
    out.cost.push_back(std::move(rc));
  }
  return out;
}

struct BestOption {
  std::size_t index = 0;               // ties go to the lower index (smaller sg)
  std::vector<double> relative_costs;  // each entry minus the row minimum
};

inline BestOption best_option(std::span<const double> costs_per_option) {
  if (costs_per_option.empty()) throw ConfigError("best_option: no options to compare");
  BestOption out;
  double best = costs_per_option[0];
  for (std::size_t i = 1; i < costs_per_option.size(); ++i) {
    if (costs_per_option[i] < best) {
      best = costs_per_option[i];
      out.index = i;
    }
  }
  for (double c : costs_per_option) out.relative_costs.push_back(c - best);
  return out;
}

}  // namespace portcba::sa
