#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "portcba/errors.hpp"
#include "portcba/money.hpp"

namespace portcba {

inline constexpr double kProbabilitySumTolerance = 1e-12;

// One level of an uncertain growth factor, e.g. traffic +10% with p = 0.5.
struct GrowthLevel {
  double value = 0.0;        // dimensionless fraction; +0.10 means +10%
  double probability = 0.0;  // in [0,1]; levels of one factor sum to 1

  friend bool operator==(const GrowthLevel&, const GrowthLevel&) = default;
};

// One search-intensity response available to the agency, with its yearly cost.
struct SearchOption {
  double growth = 0.0;
  Money annual_cost;

  friend bool operator==(const SearchOption&, const SearchOption&) = default;
};

struct ScenarioFactorGrid {
  std::vector<GrowthLevel> traffic_growth;
  std::vector<GrowthLevel> clandestine_growth;
  std::vector<SearchOption> search_growth;

  double joint_probability(std::size_t tg_index, std::size_t cg_index) const {
    return traffic_growth.at(tg_index).probability *
           clandestine_growth.at(cg_index).probability;
  }

  void validate() const {
    validate_levels(traffic_growth, "traffic_growth", /*min_value=*/-1.0, /*inclusive=*/false);
    validate_levels(clandestine_growth, "clandestine_growth", -1.0, true);
    if (search_growth.empty()) throw ConfigError("factors.search_growth: no options given");
    for (const auto& opt : search_growth) {
      if (opt.growth <= -1.0)
        throw ConfigError("factors.search_growth: growth must be > -100%");
      if (opt.annual_cost.pence() < 0)
        throw ConfigError("factors.search_growth: negative annual cost");
    }
  }

  friend bool operator==(const ScenarioFactorGrid&, const ScenarioFactorGrid&) = default;

private:
  static void validate_levels(const std::vector<GrowthLevel>& levels, const std::string& name,
                              double min_value, bool inclusive) {
    if (levels.empty()) throw ConfigError("factors." + name + ": no levels given");
    double sum = 0.0;
    for (const auto& lv : levels) {
      if (lv.probability < 0.0 || lv.probability > 1.0)
        throw ConfigError("factors." + name + ": probability outside [0,1]");
      if (inclusive ? lv.value < min_value : lv.value <= min_value)
        throw ConfigError("factors." + name + ": growth below " +
                          std::to_string(min_value * 100.0) + "%");
      sum += lv.probability;
    }
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%g", sum);
      throw ConfigError("factors." + name + ": probabilities sum to " + buf);
    }
  }
};

// The anchor year of the case study: yearly volume, share of traffic
// searched, and where the positive lorries surfaced.
struct BaselineCounts {
  double total_lorries = 900000.0;
  double base_search_fraction = 0.33;
  double found_france = 1800.0;
  double found_uk_shed = 890.0;
  double found_uk_berth = 784.0;
  double missed = 150.0;

  double found_uk_total() const { return found_uk_shed + found_uk_berth; }
  double total_positives() const { return found_france + found_uk_total() + missed; }

  void validate() const {
    for (double v : {total_lorries, found_france, found_uk_shed, found_uk_berth, missed})
      if (v < 0.0 || !std::isfinite(v)) throw ConfigError("baseline: counts must be >= 0");
    if (!(base_search_fraction > 0.0 && base_search_fraction <= 1.0))
      throw ConfigError("baseline: base_search_fraction must be in (0,1]");
  }

  friend bool operator==(const BaselineCounts&, const BaselineCounts&) = default;
};

struct CostModel {
  Money cost_per_clandestine = Money::from_pounds(100000);
  std::int64_t clandestines_per_lorry = 4;

  Money cost_per_missed_lorry() const { return cost_per_clandestine * clandestines_per_lorry; }

  void validate() const {
    if (cost_per_clandestine.pence() < 0) throw ConfigError("costs: negative cost_per_clandestine");
    if (clandestines_per_lorry <= 0) throw ConfigError("costs: clandestines_per_lorry must be >= 1");
  }

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

// One point of the what-if space.
struct Scenario {
  double tg = 0.0;
  double cg = 0.0;
  double sg = 0.0;
};

}  // namespace portcba
