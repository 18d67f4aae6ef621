#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "portcba/config.hpp"
#include "portcba/decision_tree.hpp"
#include "portcba/scenario_analysis.hpp"
#include "portcba/sim.hpp"
#include "portcba/stats.hpp"

namespace portcba {

enum class Method { sa, dt, mc, des0, des1, des2, des3 };

inline const char* method_label(Method m) {
  switch (m) {
    case Method::sa: return "SA";
    case Method::dt: return "DT";
    case Method::mc: return "MCS";
    case Method::des0: return "DES 0";
    case Method::des1: return "DES 1";
    case Method::des2: return "DES 2";
    case Method::des3: return "DES 3";
  }
  return "?";
}

inline bool is_simulation(Method m) {
  return m != Method::sa && m != Method::dt;
}

inline Mode mode_of(Method m) {
  switch (m) {
    case Method::mc: return Mode::mc;
    case Method::des0: return Mode::des0;
    case Method::des1: return Mode::des1;
    case Method::des2: return Mode::des2;
    case Method::des3: return Mode::des3;
    default: throw ConfigError("method has no simulation mode");
  }
}

inline Method method_of(Mode m) {
  switch (m) {
    case Mode::mc: return Method::mc;
    case Mode::des0: return Method::des0;
    case Mode::des1: return Method::des1;
    case Mode::des2: return Method::des2;
    case Mode::des3: return Method::des3;
  }
  throw ConfigError("unknown mode");
}

// One scenario cell of a simulated grid: its replications and their summary.
struct CellRun {
  Scenario scenario;
  std::size_t sg_index = 0, tg_index = 0, cg_index = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<RunStats> reps;
  ReplicationSummary missed;
  ReplicationSummary uk_found;
};

struct MethodResult {
  Method method = Method::sa;
  std::vector<double> option_costs;  // pounds per search option
  std::size_t cheapest = 0;
  // Mean UK found per (tg, sg) at clandestine growth 0, when the grid has
  // that level; analytic methods fill it from their expected counts.
  std::vector<std::vector<double>> found_cg0;
  std::vector<CellRun> cells;  // simulation methods only
};

namespace detail {

inline std::optional<std::size_t> cg_zero_index(const ScenarioFactorGrid& grid) {
  for (std::size_t i = 0; i < grid.clandestine_growth.size(); ++i)
    if (std::abs(grid.clandestine_growth[i].value) < 1e-12) return i;
  return std::nullopt;
}

// Runs fn(i) for i in [0, n) across worker threads, results landing wherever
// fn writes them; output slots are preallocated so ordering never matters.
// workers == 0 sizes the pool from the hardware.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned workers_requested = 0) {
  const unsigned hw = workers_requested > 0 ? workers_requested
                                            : std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Runs one method over the full factor grid and prices each search option:
/// analytic methods delegate to the closed forms and the tree, simulation
/// methods run every scenario cell for the configured replication count and
/// convert mean missed counts into cost.
inline MethodResult run_grid(Method method, const ToolConfig& cfg,
                             std::uint32_t replications_override = 0,
                             std::optional<std::uint64_t> root_seed_override = {}) {
  cfg.validate();
  MethodResult out;
  out.method = method;
  const auto& grid = cfg.factors;
  const auto cg0 = detail::cg_zero_index(grid);

  if (method == Method::sa) {
    for (const auto& opt : grid.search_growth)
      out.option_costs.push_back(sa::expected_cost(opt.growth, grid, cfg.baseline, cfg.costs));
    if (cg0) {
      for (const auto& tg : grid.traffic_growth) {
        std::vector<double> row;
        for (const auto& opt : grid.search_growth)
          row.push_back(sa::found_positives(tg.value, opt.growth, 0.0, cfg.baseline));
        out.found_cg0.push_back(std::move(row));
      }
    }
  } else if (method == Method::dt) {
    const auto tree = dt::build_tree(grid, cfg.baseline, cfg.costs);
    const dt::Rollback rolled = dt::rollback(*tree);
    for (const auto& [choice, value] : rolled.per_option) out.option_costs.push_back(value);
    if (cg0) {
      for (const auto& tg : grid.traffic_growth) {
        std::vector<double> row;
        for (const auto& opt : grid.search_growth)
          row.push_back(
              dt::end_counts({tg.value, 0.0, opt.growth}, cfg.baseline).uk_total());
        out.found_cg0.push_back(std::move(row));
      }
    }
  } else {
    const Mode mode = mode_of(method);
    const std::uint32_t reps =
        replications_override > 0 ? replications_override : cfg.run.replications;
    const std::uint64_t root = root_seed_override.value_or(cfg.run.root_seed);
    const std::uint64_t method_tag = static_cast<std::uint64_t>(method);

    for (std::size_t sg_i = 0; sg_i < grid.search_growth.size(); ++sg_i)
      for (std::size_t tg_i = 0; tg_i < grid.traffic_growth.size(); ++tg_i)
        for (std::size_t cg_i = 0; cg_i < grid.clandestine_growth.size(); ++cg_i) {
          CellRun cell;
          cell.sg_index = sg_i;
          cell.tg_index = tg_i;
          cell.cg_index = cg_i;
          cell.scenario = {grid.traffic_growth[tg_i].value,
                           grid.clandestine_growth[cg_i].value,
                           grid.search_growth[sg_i].growth};
          cell.reps.resize(reps);
          for (std::uint32_t r = 0; r < reps; ++r)
            cell.seeds.push_back(rng::replication_seed(root, method_tag, tg_i, cg_i, r));
          out.cells.push_back(std::move(cell));
        }

    detail::parallel_for(out.cells.size() * reps, [&](std::size_t task) {
      CellRun& cell = out.cells[task / reps];
      const std::size_t r = task % reps;
      const CalibratedRouting routing = calibrate_routing(cell.scenario, cfg.baseline);
      const RunConfig rc = make_run_config(mode, cell.scenario, routing, cfg.network,
                                           cfg.arrivals, cfg.run.horizon_hours, cell.seeds[r]);
      try {
        cell.reps[r] = run_replication(rc, routing);
      } catch (const SimulationFault& e) {
        throw SimulationFault(std::string(method_label(method)) + " cell (sg=" +
                                  detail::fmt(cell.scenario.sg) + ", tg=" +
                                  detail::fmt(cell.scenario.tg) + ", cg=" +
                                  detail::fmt(cell.scenario.cg) + ") rep " + std::to_string(r) +
                                  ": " + e.what(),
                              e.trace_tail());
      }
    });

    const double miss_cost = cfg.costs.cost_per_missed_lorry().pounds();
    for (auto& cell : out.cells) {
      std::vector<double> missed_values, found_values;
      for (const auto& stats : cell.reps) {
        missed_values.push_back(static_cast<double>(stats.missed));
        found_values.push_back(static_cast<double>(stats.found_uk()));
      }
      cell.missed = summarize(missed_values);
      cell.uk_found = summarize(found_values);
    }

    out.option_costs.assign(grid.search_growth.size(), 0.0);
    for (const auto& cell : out.cells) {
      const double weight = grid.joint_probability(cell.tg_index, cell.cg_index);
      double cell_cost = 0.0;
      if (cfg.run.cost_basis == RunPolicy::CostBasis::mean_counts) {
        cell_cost = cell.missed.mean * miss_cost;
      } else {
        // Price each replication, then average; identical for linear costs
        // but reported separately on request.
        for (const auto& stats : cell.reps)
          cell_cost += static_cast<double>(stats.missed) * miss_cost;
        cell_cost /= static_cast<double>(cell.reps.size());
      }
      out.option_costs[cell.sg_index] += weight * cell_cost;
    }
    for (std::size_t sg_i = 0; sg_i < grid.search_growth.size(); ++sg_i)
      out.option_costs[sg_i] += grid.search_growth[sg_i].annual_cost.pounds();

    if (cg0) {
      out.found_cg0.assign(grid.traffic_growth.size(),
                           std::vector<double>(grid.search_growth.size(), 0.0));
      for (const auto& cell : out.cells)
        if (cell.cg_index == *cg0)
          out.found_cg0[cell.tg_index][cell.sg_index] = cell.uk_found.mean;
    }
  }

  out.cheapest = sa::best_option(out.option_costs).index;
  return out;
}

/// Per-row differences from the row minimum (the relative comparison view).
inline std::vector<std::vector<double>> relative_costs(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ConfigError("relative_costs: no rows");
  std::vector<std::vector<double>> out;
  for (const auto& row : rows) out.push_back(sa::best_option(row).relative_costs);
  return out;
}

// DT expectation minus simulated mean, per (tg, sg) cell at cg = 0.
inline std::vector<std::vector<double>> error_grid_vs_tree(const ToolConfig& cfg,
                                                           const MethodResult& sim) {
  std::vector<std::vector<double>> out;
  if (sim.found_cg0.empty()) return out;
  for (std::size_t t = 0; t < cfg.factors.traffic_growth.size(); ++t) {
    std::vector<double> row;
    for (std::size_t s = 0; s < cfg.factors.search_growth.size(); ++s) {
      const Scenario sc{cfg.factors.traffic_growth[t].value, 0.0,
                        cfg.factors.search_growth[s].growth};
      row.push_back(dt::end_counts(sc, cfg.baseline).uk_total() - sim.found_cg0[t][s]);
    }
    out.push_back(std::move(row));
  }
  return out;
}

struct MethodComparison {
  std::vector<MethodResult> rows;
  std::vector<std::vector<double>> cost_matrix() const {
    std::vector<std::vector<double>> m;
    for (const auto& r : rows) m.push_back(r.option_costs);
    return m;
  }
};

/// The full cross-method comparison: SA, DT, Monte Carlo and the four
/// event-driven variants over the same grid.
inline MethodComparison compare_all(const ToolConfig& cfg,
                                    std::uint32_t replications_override = 0,
                                    std::optional<std::uint64_t> root_seed_override = {}) {
  MethodComparison out;
  for (Method m : {Method::sa, Method::dt, Method::mc, Method::des0, Method::des1, Method::des2,
                   Method::des3})
    out.rows.push_back(run_grid(m, cfg, replications_override, root_seed_override));
  return out;
}

}  // namespace portcba
