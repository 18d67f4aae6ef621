// Command-line front end: batch what-if analysis over the screening network.
//
//   portcba sa                 scenario-analysis tables and option costs
//   portcba dtree              decision-tree rollback, counts and tree export
//   portcba sim --mode MODE    one simulation method over the full grid
//   portcba compare            all methods side by side
//   portcba validate-config    parse and check a configuration document
//
// Exit codes: 0 success, 2 configuration error, 3 runtime fault.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "portcba/config.hpp"
#include "portcba/decision_tree.hpp"
#include "portcba/experiment.hpp"
#include "portcba/scenario_analysis.hpp"
#include "portcba/tables.hpp"
#include "portcba/version.hpp"

namespace fs = std::filesystem;
using namespace portcba;

namespace {

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> reps;
  std::string out_dir;
  std::string format;
  std::string mode = "mc";
  std::string emit_defaults_path;
};

ToolConfig load_config(const CliOptions& opt) {
  nlohmann::json doc = nlohmann::json::object();
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot open config file " + opt.config_path);
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config is not well-formed JSON: " + std::string(e.what()));
    }
  }
  ToolConfig cfg = parse_config(doc);
  if (opt.seed) cfg.run.root_seed = *opt.seed;
  if (opt.reps) cfg.run.replications = *opt.reps;
  if (!opt.out_dir.empty()) {
    cfg.output.directory = opt.out_dir;
  } else if (const char* env = std::getenv("PORTCBA_OUT_DIR"); env && *env) {
    cfg.output.directory = env;
  }
  if (!opt.format.empty()) {
    if (opt.format == "csv")
      cfg.output.format = OutputPolicy::Format::csv;
    else if (opt.format == "md")
      cfg.output.format = OutputPolicy::Format::md;
    else
      throw ConfigError("--format: expected 'csv' or 'md'");
  }
  cfg.validate();
  return cfg;
}

std::string render(const Table& t, OutputPolicy::Format fmt) {
  return fmt == OutputPolicy::Format::csv ? to_csv(t) : to_markdown(t);
}

std::string extension(OutputPolicy::Format fmt) {
  return fmt == OutputPolicy::Format::csv ? ".csv" : ".md";
}

std::string cg_file_label(double cg) {
  return "cg" + std::to_string(static_cast<long long>(std::llround(cg * 100.0)));
}

void emit(const ToolConfig& cfg, const std::string& stem, const Table& t) {
  const fs::path path = fs::path(cfg.output.directory) / (stem + extension(cfg.output.format));
  write_file(path.string(), render(t, cfg.output.format));
  std::cout << "wrote " << path.string() << "\n";
}

void write_manifest(const ToolConfig& cfg, const std::string& command,
                    const std::vector<MethodResult>& results) {
  const fs::path path = fs::path(cfg.output.directory) / "manifest.json";
  write_file(path.string(), make_manifest(cfg, command, results).dump(2) + "\n");
  std::cout << "wrote " << path.string() << "\n";
}

std::vector<double> sg_values(const ToolConfig& cfg) {
  std::vector<double> v;
  for (const auto& opt : cfg.factors.search_growth) v.push_back(opt.growth);
  return v;
}

std::vector<double> tg_values(const ToolConfig& cfg) {
  std::vector<double> v;
  for (const auto& lv : cfg.factors.traffic_growth) v.push_back(lv.value);
  return v;
}

void run_sa(const ToolConfig& cfg) {
  fs::create_directories(cfg.output.directory);
  const auto fmt = cfg.output.format;

  std::vector<std::vector<double>> joint;
  for (std::size_t t = 0; t < cfg.factors.traffic_growth.size(); ++t) {
    std::vector<double> row;
    for (std::size_t c = 0; c < cfg.factors.clandestine_growth.size(); ++c)
      row.push_back(cfg.factors.joint_probability(t, c));
    joint.push_back(std::move(row));
  }
  std::vector<double> cg_vals;
  for (const auto& lv : cfg.factors.clandestine_growth) cg_vals.push_back(lv.value);
  {
    Table t;
    t.title = "Joint scenario probabilities";
    t.columns.push_back("TG vs. CG");
    for (double cg : cg_vals) t.columns.push_back("CG " + pct_label(cg));
    for (std::size_t r = 0; r < joint.size(); ++r) {
      std::vector<std::string> row{"TG " + pct_label(tg_values(cfg)[r])};
      for (double v : joint[r]) row.push_back(cell_fixed(v, 3));
      t.rows.push_back(std::move(row));
    }
    emit(cfg, "sa_joint_probabilities", t);
  }

  const auto grid0 = sa::build_sa_grid(cfg.factors, cfg.baseline, cfg.costs, 0.0);
  emit(cfg, "sa_searched",
       grid_table("Proportion of vehicles searched", grid0.tg_values, grid0.sg_values,
                  grid0.searched, 4));
  {
    // Found/missed relative to the no-growth cell, and the cost of the extra
    // searches; the two ratio grids are exact reciprocals.
    const double base_found = sa::found_positives(0.0, 0.0, 0.0, cfg.baseline);
    const double base_missed = sa::missed_positives(0.0, 0.0, 0.0, cfg.baseline);
    std::vector<std::vector<double>> found_ratio, missed_ratio, search_cost;
    for (std::size_t t = 0; t < grid0.tg_values.size(); ++t) {
      std::vector<double> fr, mr, sc;
      for (std::size_t s = 0; s < grid0.sg_values.size(); ++s) {
        fr.push_back(grid0.found[t][s] / base_found);
        mr.push_back(grid0.missed[t][s] / base_missed);
        sc.push_back(
            sa::find_option(cfg.factors.search_growth, grid0.sg_values[s]).annual_cost.pounds());
      }
      found_ratio.push_back(std::move(fr));
      missed_ratio.push_back(std::move(mr));
      search_cost.push_back(std::move(sc));
    }
    emit(cfg, "sa_found_ratio",
         grid_table("Found relative to the base scenario", grid0.tg_values, grid0.sg_values,
                    found_ratio, 6));
    emit(cfg, "sa_missed_ratio",
         grid_table("Missed relative to the base scenario", grid0.tg_values, grid0.sg_values,
                    missed_ratio, 2));
    emit(cfg, "sa_search_cost",
         money_grid_table("Cost of extra searches", grid0.tg_values, grid0.sg_values, search_cost,
                          fmt));
  }

  for (const auto& lv : cfg.factors.clandestine_growth) {
    const auto g = sa::build_sa_grid(cfg.factors, cfg.baseline, cfg.costs, lv.value);
    const std::string label = cg_file_label(lv.value);
    emit(cfg, "sa_found_" + label,
         grid_table("Positive lorries found, CG " + pct_label(lv.value), g.tg_values,
                    g.sg_values, g.found, 1));
    emit(cfg, "sa_missed_" + label,
         grid_table("Positive lorries missed, CG " + pct_label(lv.value), g.tg_values,
                    g.sg_values, g.missed, 1));
    emit(cfg, "sa_cost_" + label,
         money_grid_table("Expected costs, CG " + pct_label(lv.value), g.tg_values, g.sg_values,
                          g.cost, fmt));
  }

  const MethodResult res = run_grid(Method::sa, cfg);
  emit(cfg, "sa_option_costs",
       comparison_table("Expected cost per search option", {"SA"}, sg_values(cfg),
                        {res.option_costs}, {res.cheapest}, fmt));
  emit(cfg, "sa_relative_costs",
       comparison_table("Relative cost per search option", {"SA"}, sg_values(cfg),
                        relative_costs({res.option_costs}), {res.cheapest}, fmt));
}

void run_dtree(const ToolConfig& cfg) {
  fs::create_directories(cfg.output.directory);
  const auto fmt = cfg.output.format;
  const auto tree = dt::build_tree(cfg.factors, cfg.baseline, cfg.costs);
  const fs::path tree_path = fs::path(cfg.output.directory) / "dtree.txt";
  write_file(tree_path.string(), dt::to_indented_text(*tree));
  std::cout << "wrote " << tree_path.string() << "\n";
  const fs::path graph_path = fs::path(cfg.output.directory) / "dtree.dot";
  write_file(graph_path.string(), dt::to_graph_description(*tree));
  std::cout << "wrote " << graph_path.string() << "\n";

  const MethodResult res = run_grid(Method::dt, cfg);
  emit(cfg, "dtree_option_costs",
       comparison_table("Decision-tree expected cost per option", {"DT"}, sg_values(cfg),
                        {res.option_costs}, {res.cheapest}, fmt));
  emit(cfg, "dtree_relative_costs",
       comparison_table("Decision-tree relative cost per option", {"DT"}, sg_values(cfg),
                        relative_costs({res.option_costs}), {res.cheapest}, fmt));
  if (!res.found_cg0.empty())
    emit(cfg, "dtree_found_cg0",
         grid_table("Positive lorries found (CG 0%)", tg_values(cfg), sg_values(cfg),
                    res.found_cg0, 0));
}

void run_sim(const ToolConfig& cfg, const std::string& mode_name_arg) {
  const auto mode = mode_from_name(mode_name_arg);
  if (!mode) throw ConfigError("--mode: expected one of mc, des0, des1, des2, des3");
  fs::create_directories(cfg.output.directory);
  const auto fmt = cfg.output.format;
  const Method method = method_of(*mode);
  const MethodResult res = run_grid(method, cfg);

  emit(cfg, std::string("sim_") + mode_name_arg + "_replications", replication_table(res));
  if (!res.found_cg0.empty()) {
    emit(cfg, std::string("sim_") + mode_name_arg + "_found_cg0",
         grid_table("Mean positive lorries found (CG 0%)", tg_values(cfg), sg_values(cfg),
                    res.found_cg0, 2));
    const auto err = error_grid_vs_tree(cfg, res);
    emit(cfg, std::string("sim_") + mode_name_arg + "_error_vs_dtree",
         grid_table("Decision tree minus simulation (CG 0%)", tg_values(cfg), sg_values(cfg),
                    err, 1));
  }
  const std::string label = method_label(method);
  emit(cfg, std::string("sim_") + mode_name_arg + "_option_costs",
       comparison_table("Expected cost per search option", {label}, sg_values(cfg),
                        {res.option_costs}, {res.cheapest}, fmt));
  write_manifest(cfg, "sim --mode " + mode_name_arg, {res});
}

void run_compare(const ToolConfig& cfg) {
  fs::create_directories(cfg.output.directory);
  const auto fmt = cfg.output.format;
  const MethodComparison cmp = compare_all(cfg);

  std::vector<std::string> labels;
  std::vector<std::size_t> cheapest;
  for (const auto& row : cmp.rows) {
    labels.push_back(method_label(row.method));
    cheapest.push_back(row.cheapest);
  }
  emit(cfg, "comparison",
       comparison_table("Overall cost comparison of all methods", labels, sg_values(cfg),
                        cmp.cost_matrix(), cheapest, fmt));
  emit(cfg, "comparison_relative",
       comparison_table("Relative cost comparison of all methods", labels, sg_values(cfg),
                        relative_costs(cmp.cost_matrix()), cheapest, fmt));
  write_manifest(cfg, "compare", cmp.rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-benefit analysis for checkpoint screening networks"};
  app.set_version_flag("--version", std::string("portcba ") + kVersion);
  app.require_subcommand(1);

  CliOptions opt;
  const auto add_shared = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "configuration JSON document");
    sub->add_option("--seed", opt.seed, "root seed override");
    sub->add_option("--reps", opt.reps, "replications per scenario cell");
    sub->add_option("--out", opt.out_dir, "output directory (default from PORTCBA_OUT_DIR)");
    sub->add_option("--format", opt.format, "table format: csv or md");
  };

  CLI::App* sa_cmd = app.add_subcommand("sa", "scenario analysis tables");
  add_shared(sa_cmd);
  CLI::App* dt_cmd = app.add_subcommand("dtree", "decision-tree rollback");
  add_shared(dt_cmd);
  CLI::App* sim_cmd = app.add_subcommand("sim", "simulate one method over the grid");
  add_shared(sim_cmd);
  sim_cmd->add_option("--mode", opt.mode, "mc, des0, des1, des2 or des3")->required();
  CLI::App* cmp_cmd = app.add_subcommand("compare", "all methods side by side");
  add_shared(cmp_cmd);
  CLI::App* val_cmd = app.add_subcommand("validate-config", "check a configuration document");
  add_shared(val_cmd);
  val_cmd->add_option("--emit-defaults", opt.emit_defaults_path,
                      "write the built-in default configuration to this path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (val_cmd->parsed()) {
      if (!opt.emit_defaults_path.empty()) {
        write_file(opt.emit_defaults_path, to_json(ToolConfig::defaults()).dump(2) + "\n");
        std::cout << "wrote " << opt.emit_defaults_path << "\n";
      }
      const ToolConfig cfg = load_config(opt);
      char hash[32];
      std::snprintf(hash, sizeof hash, "%016llx",
                    static_cast<unsigned long long>(config_hash(cfg)));
      std::cout << "configuration OK (hash " << hash << ")\n";
      return 0;
    }
    const ToolConfig cfg = load_config(opt);
    if (sa_cmd->parsed()) run_sa(cfg);
    if (dt_cmd->parsed()) run_dtree(cfg);
    if (sim_cmd->parsed()) run_sim(cfg, opt.mode);
    if (cmp_cmd->parsed()) run_compare(cfg);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CalibrationError& e) {
    std::cerr << "calibration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime fault: " << e.what() << "\n";
    return 3;
  }
}
