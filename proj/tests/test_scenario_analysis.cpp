#include <catch2/catch_amalgamated.hpp>

#include "portcba/config.hpp"
#include "portcba/rng.hpp"
#include "portcba/scenario_analysis.hpp"

using namespace portcba;

namespace {
const ToolConfig kCfg = ToolConfig::defaults();

// Golden grids for clandestine growth 0, rows over TG {0,10,20}%, columns
// over SG {0,10,20}%.
const double kSearched[3][3] = {{0.3300, 0.3630, 0.3960},
                                {0.3000, 0.3300, 0.3600},
                                {0.2750, 0.3025, 0.3300}};
const double kFound[3][3] = {{1674.0, 1841.4, 2008.8},
                             {1521.8181818, 1674.0, 1826.1818182},
                             {1395.0, 1534.5, 1674.0}};
const double kMissed[3][3] = {{150.0, 136.3636364, 125.0},
                              {165.0, 150.0, 137.5},
                              {180.0, 163.6363636, 150.0}};
const double kCost[3][3] = {{60000000.0, 59545454.55, 60000000.0},
                            {66000000.0, 65000000.0, 65000000.0},
                            {72000000.0, 70454545.45, 70000000.0}};
}  // namespace

TEST_CASE("found and missed positives match the golden cells") {
  CHECK(sa::found_positives(0.0, 0.10, 0.0, kCfg.baseline) == Catch::Approx(1841.4).margin(1e-9));
  CHECK(sa::found_positives(0.0, 0.0, 0.0, kCfg.baseline) == Catch::Approx(1674.0).margin(1e-9));
  // formula value; the coarse 2282.75 comes from multiplying the printed
  // one-decimal cell by 1.25
  CHECK(sa::found_positives(0.10, 0.20, 0.25, kCfg.baseline) ==
        Catch::Approx(2282.7272727).margin(1e-6));
  CHECK(sa::found_positives(0.10, 0.20, 0.25, kCfg.baseline) ==
        Catch::Approx(2282.75).margin(0.05));

  CHECK(sa::missed_positives(0.10, 0.0, 0.0, kCfg.baseline) == Catch::Approx(165.0).margin(1e-9));
  CHECK(sa::missed_positives(0.0, 0.0, 0.0, kCfg.baseline) == Catch::Approx(150.0).margin(1e-9));
  CHECK(sa::missed_positives(0.20, 0.0, -0.50, kCfg.baseline) == Catch::Approx(90.0).margin(1e-9));
}

TEST_CASE("full grids for cg=0 match the goldens") {
  const auto grid = sa::build_sa_grid(kCfg.factors, kCfg.baseline, kCfg.costs, 0.0);
  for (int t = 0; t < 3; ++t)
    for (int s = 0; s < 3; ++s) {
      CAPTURE(t, s);
      CHECK(grid.searched[t][s] == Catch::Approx(kSearched[t][s]).margin(1e-4));
      CHECK(grid.found[t][s] == Catch::Approx(kFound[t][s]).margin(1e-6));
      CHECK(grid.missed[t][s] == Catch::Approx(kMissed[t][s]).margin(1e-6));
      CHECK(grid.cost[t][s] == Catch::Approx(kCost[t][s]).margin(0.5));
    }
}

TEST_CASE("scenario cost adds the search option's yearly cost") {
  const auto& opts = kCfg.factors.search_growth;
  CHECK(sa::scenario_cost(0.0, 0.10, 0.0, kCfg.baseline, kCfg.costs, opts) ==
        Catch::Approx(59545455.0).margin(1.0));
  CHECK(sa::scenario_cost(0.0, 0.0, 0.0, kCfg.baseline, kCfg.costs, opts) ==
        Catch::Approx(60000000.0).margin(1.0));
  CHECK(sa::scenario_cost(0.20, 0.10, 0.0, kCfg.baseline, kCfg.costs, opts) ==
        Catch::Approx(70454545.0).margin(1.0));
  CHECK_THROWS_AS(sa::scenario_cost(0.0, 0.15, 0.0, kCfg.baseline, kCfg.costs, opts),
                  ConfigError);
}

TEST_CASE("expected costs per option reproduce the comparison row") {
  const double c0 = sa::expected_cost(0.0, kCfg.factors, kCfg.baseline, kCfg.costs);
  const double c1 = sa::expected_cost(0.10, kCfg.factors, kCfg.baseline, kCfg.costs);
  const double c2 = sa::expected_cost(0.20, kCfg.factors, kCfg.baseline, kCfg.costs);
  CHECK(c0 == Catch::Approx(60500000.0).margin(1.0));
  CHECK(c1 == Catch::Approx(60000000.0).margin(1.0));
  CHECK(c2 == Catch::Approx(60416667.0).margin(1.0));
}

TEST_CASE("summation agrees with the closed form over the grid") {
  // expected_cost(sg) = 400k * 150 * E[1+tg] * E[1+cg] / (1+sg) + option cost
  double e_tg = 0.0, e_cg = 0.0;
  for (const auto& lv : kCfg.factors.traffic_growth) e_tg += lv.probability * (1.0 + lv.value);
  for (const auto& lv : kCfg.factors.clandestine_growth) e_cg += lv.probability * (1.0 + lv.value);
  for (const auto& opt : kCfg.factors.search_growth) {
    const double closed = kCfg.costs.cost_per_missed_lorry().pounds() * kCfg.baseline.missed *
                              e_tg * e_cg / (1.0 + opt.growth) +
                          opt.annual_cost.pounds();
    const double summed = sa::expected_cost(opt.growth, kCfg.factors, kCfg.baseline, kCfg.costs);
    CHECK(summed == Catch::Approx(closed).margin(1.0));
  }
}

TEST_CASE("miss cost excluding the option fee strictly decreases with sg") {
  double previous = 0.0;
  bool first = true;
  for (const auto& opt : kCfg.factors.search_growth) {
    const double net = sa::expected_cost(opt.growth, kCfg.factors, kCfg.baseline, kCfg.costs) -
                       opt.annual_cost.pounds();
    if (!first) CHECK(net < previous);
    previous = net;
    first = false;
  }
}

TEST_CASE("found and missed ratios are exact reciprocals cell by cell") {
  rng::DrawKit kit{77};
  const double base_found = sa::found_positives(0.0, 0.0, 0.0, kCfg.baseline);
  const double base_missed = sa::missed_positives(0.0, 0.0, 0.0, kCfg.baseline);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double tg = kit.u(rng::Stream::selection, i) * 0.6;
    const double sg = kit.u(rng::Stream::detection, i) * 0.6;
    const double cg = kit.u(rng::Stream::positivity, i) * 1.5 - 0.75;
    const double found_ratio =
        sa::found_positives(tg, sg, cg, kCfg.baseline) / (base_found * (1.0 + cg));
    const double missed_ratio =
        sa::missed_positives(tg, sg, cg, kCfg.baseline) / (base_missed * (1.0 + cg));
    REQUIRE(found_ratio * missed_ratio == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("best option picks the smallest cost, ties toward smaller sg") {
  const std::vector<double> sa_row = {60500000.0, 60000000.0, 60416667.0};
  const auto best = sa::best_option(sa_row);
  CHECK(best.index == 1);
  CHECK(best.relative_costs[0] == Catch::Approx(500000.0).margin(1.0));
  CHECK(best.relative_costs[1] == 0.0);
  CHECK(best.relative_costs[2] == Catch::Approx(416667.0).margin(1.0));

  const std::vector<double> single = {42.0};
  CHECK(sa::best_option(single).index == 0);
  CHECK(sa::best_option(single).relative_costs[0] == 0.0);

  // The combined-feature simulation row prefers no extra searching.
  const std::vector<double> des3_row = {59817382.0, 60116618.0, 61624835.0};
  CHECK(sa::best_option(des3_row).index == 0);

  const std::vector<double> tied = {5.0, 5.0, 7.0};
  CHECK(sa::best_option(tied).index == 0);

  CHECK_THROWS_AS(sa::best_option(std::vector<double>{}), ConfigError);
}

TEST_CASE("missed positives rejects a zero searched share") {
  CHECK_THROWS_AS(sa::missed_positives(0.0, -1.0, 0.0, kCfg.baseline), CalibrationError);
}
