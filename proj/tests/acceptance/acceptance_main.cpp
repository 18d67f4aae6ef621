// Acceptance suite: runs every release criterion against the bundled Calais
// dataset and prints one PASS/FAIL line per criterion. Exit code is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "portcba/config.hpp"
#include "portcba/decision_tree.hpp"
#include "portcba/experiment.hpp"
#include "portcba/scenario_analysis.hpp"
#include "portcba/stats.hpp"
#include "portcba/tables.hpp"

using namespace portcba;

namespace {

int failures = 0;

void report(int number, const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %d. %s%s%s\n", ok ? "PASS" : "FAIL", number, name,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Golden grids for the bundled dataset, rows TG {0,10,20}%, columns
// SG {0,10,20}%, clandestine growth 0.
const double kSearchedGrid[3][3] = {{0.3300, 0.3630, 0.3960},
                                    {0.3000, 0.3300, 0.3600},
                                    {0.2750, 0.3025, 0.3300}};
const double kFoundGrid[3][3] = {{1674.0, 1841.4, 2008.8},
                                 {1521.8, 1674.0, 1826.2},
                                 {1395.0, 1534.5, 1674.0}};
const double kMissedGrid[3][3] = {{150.0, 136.4, 125.0},
                                  {165.0, 150.0, 137.5},
                                  {180.0, 163.6, 150.0}};
const double kCostGrid[3][3] = {{60000000.0, 59545455.0, 60000000.0},
                                {66000000.0, 65000000.0, 65000000.0},
                                {72000000.0, 70454545.0, 70000000.0}};
const double kSaTotals[3] = {60500000.0, 60000000.0, 60416667.0};
const double kTreeTotals[3] = {60497446.0, 60000000.0, 60418795.0};
const double kTreeCounts[3][3] = {{1674, 1841, 2008}, {1522, 1674, 1826}, {1395, 1534, 1674}};
const double kMcFoundGrid[3][3] = {{1678.75, 1846.25, 2027.75},
                                   {1531.30, 1674.15, 1827.50},
                                   {1404.25, 1540.90, 1670.70}};
const double kMcsTotals[3] = {60335818.0, 60058184.0, 60461341.0};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void criterion_1_sa_golden_tables(const ToolConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = sa::build_sa_grid(cfg.factors, cfg.baseline, cfg.costs, 0.0);
  bool ok = true;
  std::string detail;
  for (int t = 0; t < 3 && ok; ++t)
    for (int s = 0; s < 3 && ok; ++s) {
      if (std::abs(grid.searched[t][s] - kSearchedGrid[t][s]) > 1e-4) ok = false;
      if (std::abs(grid.found[t][s] - kFoundGrid[t][s]) > 0.1) ok = false;
      if (std::abs(grid.missed[t][s] - kMissedGrid[t][s]) > 0.1) ok = false;
      if (std::abs(grid.cost[t][s] - kCostGrid[t][s]) > 1.0) ok = false;
      if (!ok) detail = "first mismatch at tg index " + std::to_string(t) + ", sg index " +
                        std::to_string(s);
    }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 1.0) {
    ok = false;
    detail += " runtime " + std::to_string(elapsed) + "s";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3fs", elapsed);
  report(1, "scenario-analysis golden tables (searched/found/missed/cost)", ok,
         ok ? std::string(buf) : detail);
}

void criterion_2_sa_totals(const ToolConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const MethodResult res = run_grid(Method::sa, cfg);
  bool ok = res.option_costs.size() == 3 && res.cheapest == 1;
  for (int i = 0; i < 3; ++i)
    if (std::abs(res.option_costs[i] - kSaTotals[i]) > 1.0) ok = false;
  const double elapsed = seconds_since(t0);
  if (elapsed >= 1.0) ok = false;
  char buf[160];
  std::snprintf(buf, sizeof buf, "totals %.0f / %.0f / %.0f, cheapest option %zu, %.3fs",
                res.option_costs[0], res.option_costs[1], res.option_costs[2], res.cheapest + 1,
                elapsed);
  report(2, "scenario-analysis expected costs per search option", ok, buf);
}

void criterion_3_decision_tree(const ToolConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto tree = dt::build_tree(cfg.factors, cfg.baseline, cfg.costs);
  const auto rolled = dt::rollback(*tree);
  bool ok = rolled.per_option.size() == 3;
  for (int i = 0; ok && i < 3; ++i)
    if (std::abs(rolled.per_option[i].second - kTreeTotals[i]) / kTreeTotals[i] > 0.0005)
      ok = false;
  if (ok && rolled.value != rolled.per_option[1].second) ok = false;
  for (int t = 0; ok && t < 3; ++t)
    for (int s = 0; ok && s < 3; ++s) {
      const Scenario sc{cfg.factors.traffic_growth[t].value, 0.0,
                        cfg.factors.search_growth[s].growth};
      if (std::abs(dt::end_counts(sc, cfg.baseline).uk_total() - kTreeCounts[t][s]) > 1.0)
        ok = false;
    }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 1.0) ok = false;
  char buf[160];
  std::snprintf(buf, sizeof buf, "rollback %.0f / %.0f / %.0f, %.3fs", rolled.per_option[0].second,
                rolled.per_option[1].second, rolled.per_option[2].second, elapsed);
  report(3, "decision-tree rollback and end counts", ok, buf);
}

MethodResult criterion_4_monte_carlo(const ToolConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const MethodResult res = run_grid(Method::mc, cfg);
  const double elapsed = seconds_since(t0);
  bool ok = res.cheapest == 1;
  std::string detail;

  for (const auto& cell : res.cells) {
    if (std::abs(cfg.factors.clandestine_growth[cell.cg_index].value) > 1e-12) continue;
    const double se = cell.uk_found.stddev / std::sqrt(double(cell.reps.size()));
    const double gap = std::abs(cell.uk_found.mean - kMcFoundGrid[cell.tg_index][cell.sg_index]);
    if (!(se > 0.0) || gap > 3.0 * se) {
      ok = false;
      detail += " cell(tg" + std::to_string(cell.tg_index) + ",sg" +
                std::to_string(cell.sg_index) + ") off by " + std::to_string(gap);
    }
  }
  for (int i = 0; i < 3; ++i)
    if (std::abs(res.option_costs[i] - kMcsTotals[i]) / kMcsTotals[i] > 0.01) {
      ok = false;
      detail += " option " + std::to_string(i + 1) + " outside 1%";
    }

  // Tree-vs-simulation error grid stays within +-25 lorries, bracketing the
  // published -19.4..+3.0 spread.
  for (const auto& row : error_grid_vs_tree(cfg, res))
    for (double e : row)
      if (std::abs(e) > 25.0) {
        ok = false;
        detail += " error grid entry " + std::to_string(e);
      }

  // Per-option totals agree with the tree within 3 standard errors.
  {
    const MethodResult dt_row = run_grid(Method::dt, cfg);
    const double miss_cost = cfg.costs.cost_per_missed_lorry().pounds();
    std::vector<double> variance(3, 0.0);
    for (const auto& cell : res.cells) {
      const double w = cfg.factors.joint_probability(cell.tg_index, cell.cg_index);
      const double se_mean = cell.missed.stddev / std::sqrt(double(cell.reps.size()));
      variance[cell.sg_index] += w * w * miss_cost * miss_cost * se_mean * se_mean;
    }
    for (int i = 0; i < 3; ++i)
      if (std::abs(res.option_costs[i] - dt_row.option_costs[i]) >
          3.0 * std::sqrt(variance[i])) {
        ok = false;
        detail += " option " + std::to_string(i + 1) + " drifted from the tree";
      }
  }

  if (elapsed >= 60.0) {
    ok = false;
    detail += " runtime " + std::to_string(elapsed) + "s";
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "totals %.0f / %.0f / %.0f, cheapest %zu, %.1fs",
                res.option_costs[0], res.option_costs[1], res.option_costs[2], res.cheapest + 1,
                elapsed);
  report(4, "monte carlo grid: 10 reps x 27 cells, found grid within 3 SE, totals within 1%", ok,
         ok ? std::string(buf) : buf + detail);
  return res;
}

void criterion_5_mode_equivalence(const ToolConfig& cfg) {
  std::array<StationBase, 3> no_delay = cfg.network;
  for (auto& st : no_delay) st.service_time = Triangular::zero();
  bool ok = true;
  int compared = 0;
  for (const Scenario& s : {Scenario{0.0, 0.0, 0.0}, Scenario{0.20, 0.25, 0.10},
                            Scenario{0.10, -0.50, 0.20}}) {
    const auto routing = calibrate_routing(s, cfg.baseline);
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
      const std::uint64_t seed = rng::replication_seed(cfg.run.root_seed, 5000, 0, 0, rep);
      const RunConfig mc = make_run_config(Mode::mc, s, routing, cfg.network, cfg.arrivals,
                                           cfg.run.horizon_hours, seed);
      const RunConfig des0 = make_run_config(Mode::des0, s, routing, no_delay, cfg.arrivals,
                                             cfg.run.horizon_hours, seed);
      if (!(run_replication(mc, routing) == run_replication(des0, routing))) ok = false;
      ++compared;
    }
  }
  report(5, "mode equivalence: des0 with zero delays equals mc exactly", ok,
         std::to_string(compared) + " replication pairs compared");
}

std::vector<MethodResult> criterion_6_des_inversion(const ToolConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<MethodResult> rows;
  std::string detail;
  bool ok = true;
  const std::size_t expected[4] = {1, 1, 1, 0};
  const Method methods[4] = {Method::des0, Method::des1, Method::des2, Method::des3};
  for (int i = 0; i < 4; ++i) {
    rows.push_back(run_grid(methods[i], cfg));
    detail += std::string(i ? ", " : "") + method_label(methods[i]) + "->option " +
              std::to_string(rows.back().cheapest + 1);
    if (rows.back().cheapest != expected[i]) ok = false;
  }

  // Anchor cell for plain timed simulation: mean UK finds at
  // (tg +10%, sg +10%, cg 0) compatible with 1667.20 at 3 standard errors.
  for (const auto& cell : rows[0].cells) {
    if (cell.tg_index != 1 || cell.sg_index != 1 ||
        std::abs(cell.scenario.cg) > 1e-12)
      continue;
    const double se = cell.uk_found.stddev / std::sqrt(double(cell.reps.size()));
    if (!(se > 0.0) || std::abs(cell.uk_found.mean - 1667.20) > 3.0 * se) {
      ok = false;
      detail += " des0 anchor cell off (mean " + std::to_string(cell.uk_found.mean) + ")";
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.0fs)", seconds_since(t0));
  report(6, "des feature ladder: des0-2 prefer SG +10%, des3 prefers SG +0%", ok, detail + buf);
  return rows;
}

void criterion_7_property_suites(const ToolConfig& cfg, const MethodResult& mc,
                                 const std::vector<MethodResult>& des_rows) {
  bool ok = true;
  std::string detail;

  // Reciprocity of found/missed ratios over 1,000 random grid points.
  {
    rng::DrawKit kit{424242};
    const double base_found = sa::found_positives(0.0, 0.0, 0.0, cfg.baseline);
    const double base_missed = sa::missed_positives(0.0, 0.0, 0.0, cfg.baseline);
    for (std::uint64_t i = 0; i < 1000; ++i) {
      const double tg = kit.u(rng::Stream::selection, i) * 0.6;
      const double sg = kit.u(rng::Stream::detection, i) * 0.6;
      const double cg = kit.u(rng::Stream::positivity, i) * 1.5 - 0.75;
      const double fr = sa::found_positives(tg, sg, cg, cfg.baseline) / (base_found * (1 + cg));
      const double mr = sa::missed_positives(tg, sg, cg, cfg.baseline) / (base_missed * (1 + cg));
      if (std::abs(fr * mr - 1.0) > 1e-12) {
        ok = false;
        detail += " reciprocity broke";
        break;
      }
    }
  }

  // Conservation in every recorded replication of criteria 4 and 6.
  {
    std::size_t reps = 0;
    const auto check_rows = [&](const MethodResult& row) {
      for (const auto& cell : row.cells)
        for (const auto& stats : cell.reps) {
          ++reps;
          if (stats.arrivals != stats.exits() + stats.in_system) {
            ok = false;
            detail += " conservation broke";
          }
        }
    };
    check_rows(mc);
    for (const auto& row : des_rows) check_rows(row);
    detail += " " + std::to_string(reps) + " replications conserved;";
  }

  // Seed determinism: a rerun of the monte-carlo grid hashes identically.
  {
    const MethodResult again = run_grid(Method::mc, cfg);
    const std::uint64_t h1 = fnv1a(to_csv(replication_table(mc)));
    const std::uint64_t h2 = fnv1a(to_csv(replication_table(again)));
    char buf[64];
    std::snprintf(buf, sizeof buf, " csv hash %016llx;", (unsigned long long)h1);
    detail += buf;
    if (h1 != h2) {
      ok = false;
      detail += " determinism broke";
    }
  }

  // Triangular sampler against its analytic mean and variance at 1e6 draws.
  {
    const Triangular tri{2.0, 5.0, 11.0};
    rng::DrawKit kit{31415};
    double sum = 0.0, sq = 0.0;
    const std::size_t n = 1000000;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = tri.sample(kit.u(rng::Stream::service, i));
      sum += v;
      sq += v * v;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    if (std::abs(mean - tri.mean()) > 0.01 * tri.mean()) ok = false;
    if (std::abs(var - tri.variance()) > 0.01 * tri.variance() * 3.0) ok = false;
  }

  // Chance-node probability sums across the full tree.
  {
    const auto tree = dt::build_tree(cfg.factors, cfg.baseline, cfg.costs);
    const std::function<void(const dt::TreeNode&)> walk = [&](const dt::TreeNode& n) {
      if (n.kind == dt::NodeKind::chance) {
        double sum = 0.0;
        for (const auto& e : n.edges) sum += e.probability;
        if (std::abs(sum - 1.0) > 1e-9) {
          ok = false;
          detail += " chance sums broke";
        }
      }
      for (const auto& e : n.edges) walk(*e.child);
    };
    walk(*tree);
  }

  // Argmin invariance under constant cost shifts.
  {
    const auto tree = dt::build_tree(cfg.factors, cfg.baseline, cfg.costs);
    const auto before = dt::rollback(*tree);
    const std::function<void(dt::TreeNode&)> shift = [&](dt::TreeNode& n) {
      if (n.kind == dt::NodeKind::terminal) n.terminal_value += 9.9e6;
      for (auto& e : n.edges) shift(*e.child);
    };
    shift(*tree);
    const auto after = dt::rollback(*tree);
    std::size_t argmin_before = 0, argmin_after = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      if (before.per_option[i].second < before.per_option[argmin_before].second)
        argmin_before = i;
      if (after.per_option[i].second < after.per_option[argmin_after].second) argmin_after = i;
    }
    if (argmin_before != argmin_after) {
      ok = false;
      detail += " argmin shifted";
    }
    const auto rel = relative_costs({{5.0, 5.0, 5.0}});
    for (double v : rel[0])
      if (v != 0.0) ok = false;
  }

  report(7, "property suites (reciprocity, conservation, determinism, sampler, sums, argmin)",
         ok, detail);
}

void criterion_8_replication_methodology(const MethodResult& mc) {
  const CellRun* base_cell = nullptr;
  for (const auto& cell : mc.cells)
    if (cell.sg_index == 0 && std::abs(cell.scenario.tg) < 1e-12 &&
        std::abs(cell.scenario.cg) < 1e-12)
      base_cell = &cell;
  bool ok = base_cell != nullptr;
  std::string detail = "no base cell";
  if (base_cell) {
    const std::size_t needed = required_replications(base_cell->uk_found, 0.05);
    ok = needed <= 10;
    detail = "pilot mean " + std::to_string(base_cell->uk_found.mean) + ", required " +
             std::to_string(needed) + " replications (workflow floor 10)";
  }
  report(8, "replication methodology: pilot variability needs at most 10 replications", ok,
         detail);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const ToolConfig cfg = ToolConfig::defaults();
  std::printf("acceptance suite, root seed %llu, %u replications per cell\n",
              (unsigned long long)cfg.run.root_seed, cfg.run.replications);

  criterion_1_sa_golden_tables(cfg);
  criterion_2_sa_totals(cfg);
  criterion_3_decision_tree(cfg);
  const MethodResult mc = criterion_4_monte_carlo(cfg);
  criterion_5_mode_equivalence(cfg);
  const std::vector<MethodResult> des_rows = criterion_6_des_inversion(cfg);
  criterion_7_property_suites(cfg, mc, des_rows);
  criterion_8_replication_methodology(mc);

  std::printf("%s (%d criteria failed, %.0fs total)\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures, seconds_since(t0));
  return failures;
}
