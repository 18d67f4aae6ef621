// Minimal library walk-through: price the search options three ways for a
// custom scenario grid, then run one seeded replication.
#include <cstdio>

#include "portcba/config.hpp"
#include "portcba/decision_tree.hpp"
#include "portcba/experiment.hpp"
#include "portcba/scenario_analysis.hpp"

int main() {
  using namespace portcba;
  ToolConfig cfg = ToolConfig::defaults();

  for (auto method : {Method::sa, Method::dt}) {
    const MethodResult res = run_grid(method, cfg);
    std::printf("%-5s cheapest option: SG %+.0f%%\n", method_label(method),
                cfg.factors.search_growth[res.cheapest].growth * 100.0);
    for (std::size_t i = 0; i < res.option_costs.size(); ++i)
      std::printf("  SG %+.0f%%  %s\n", cfg.factors.search_growth[i].growth * 100.0,
                  format_gbp(res.option_costs[i]).c_str());
  }

  const Scenario base{0.0, 0.0, 0.0};
  const CalibratedRouting routing = calibrate_routing(base, cfg.baseline);
  const RunConfig rc = make_run_config(Mode::mc, base, routing, cfg.network, cfg.arrivals,
                                       cfg.run.horizon_hours, 42);
  const RunStats stats = run_replication(rc, routing);
  std::printf("one MC replication: %llu arrivals, %llu found in the UK, %llu missed\n",
              static_cast<unsigned long long>(stats.arrivals),
              static_cast<unsigned long long>(stats.found_uk()),
              static_cast<unsigned long long>(stats.missed));
  return 0;
}
