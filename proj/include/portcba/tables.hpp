#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "portcba/config.hpp"
#include "portcba/errors.hpp"
#include "portcba/experiment.hpp"
#include "portcba/money.hpp"
#include "portcba/version.hpp"

namespace portcba {

// A rendered table: pre-formatted cells, one header row. CSV output follows
// RFC 4180; markdown output is pipe-aligned.
struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void check_shape() const {
    for (const auto& r : rows)
      if (r.size() != columns.size())
        throw ConfigError("table '" + title + "': row width " + std::to_string(r.size()) +
                          " does not match " + std::to_string(columns.size()) + " columns");
  }
};

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string to_csv(const Table& t) {
  t.check_shape();
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(t.columns[i]);
  }
  out += "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

// Code points, not bytes, so multi-byte currency signs do not skew padding.
inline std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

inline std::string to_markdown(const Table& t) {
  t.check_shape();
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = display_width(t.columns[i]);
  for (const auto& row : t.rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], display_width(row[i]));

  std::string out;
  if (!t.title.empty()) out += "### " + t.title + "\n\n";
  const auto emit_row = [&](const std::vector<std::string>& cells) {
    out += '|';
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out += ' ' + cells[i] + std::string(width[i] - display_width(cells[i]), ' ') + " |";
    }
    out += '\n';
  };
  emit_row(t.columns);
  out += '|';
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out += ' ' + std::string(width[i], '-') + " |";
  out += '\n';
  for (const auto& row : t.rows) emit_row(row);
  return out;
}

inline std::string cell_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string cell_money(double pounds, OutputPolicy::Format fmt) {
  if (fmt == OutputPolicy::Format::md) return format_gbp(pounds);
  return std::to_string(to_whole_pounds(pounds));
}

inline std::string pct_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+g%%", v * 100.0);
  return buf;
}

// (tg x sg) grid of plain numbers with a fixed decimal count.
inline Table grid_table(std::string title, const std::vector<double>& tg_values,
                        const std::vector<double>& sg_values,
                        const std::vector<std::vector<double>>& cells, int decimals) {
  if (cells.size() != tg_values.size())
    throw ConfigError("table '" + title + "': expected one row per traffic-growth level");
  Table t;
  t.title = std::move(title);
  t.columns.push_back("TG vs. SG");
  for (double sg : sg_values) t.columns.push_back("SG " + pct_label(sg));
  for (std::size_t r = 0; r < cells.size(); ++r) {
    if (cells[r].size() != sg_values.size())
      throw ConfigError("table '" + t.title + "': row width mismatch");
    std::vector<std::string> row{"TG " + pct_label(tg_values[r])};
    for (double v : cells[r]) row.push_back(cell_fixed(v, decimals));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table money_grid_table(std::string title, const std::vector<double>& tg_values,
                              const std::vector<double>& sg_values,
                              const std::vector<std::vector<double>>& cells,
                              OutputPolicy::Format fmt) {
  Table t = grid_table(std::move(title), tg_values, sg_values, cells, 0);
  for (std::size_t r = 0; r < cells.size(); ++r)
    for (std::size_t c = 0; c < cells[r].size(); ++c) t.rows[r][c + 1] = cell_money(cells[r][c], fmt);
  return t;
}

// Cross-method cost comparison (absolute or relative values).
inline Table comparison_table(std::string title, const std::vector<std::string>& row_labels,
                              const std::vector<double>& sg_values,
                              const std::vector<std::vector<double>>& costs,
                              const std::vector<std::size_t>& cheapest,
                              OutputPolicy::Format fmt) {
  if (row_labels.size() != costs.size() || cheapest.size() != costs.size())
    throw ConfigError("comparison table: row count mismatch");
  Table t;
  t.title = std::move(title);
  t.columns.push_back("Option");
  for (std::size_t i = 0; i < sg_values.size(); ++i)
    t.columns.push_back(std::to_string(i + 1) + ": SG " + pct_label(sg_values[i]));
  t.columns.push_back("Cheapest option");
  for (std::size_t r = 0; r < costs.size(); ++r) {
    if (costs[r].size() != sg_values.size())
      throw ConfigError("comparison table: row width mismatch");
    std::vector<std::string> row{row_labels[r]};
    for (double v : costs[r]) row.push_back(cell_money(v, fmt));
    row.push_back(std::to_string(cheapest[r] + 1));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// One CSV row per replication; header-only when no replications ran.
inline Table replication_table(const MethodResult& result) {
  Table t;
  t.title = std::string(method_label(result.method)) + " replications";
  t.columns = {"sg", "tg", "cg", "rep", "seed", "arrivals", "found_france", "found_shed",
               "found_berth", "missed", "negative_through", "in_system",
               "mean_time_in_system_hours"};
  for (const char* st : {"france", "shed", "berth"}) {
    t.columns.push_back(std::string(st) + "_utilization");
    t.columns.push_back(std::string(st) + "_max_queue");
    t.columns.push_back(std::string(st) + "_bypassed");
  }
  for (const auto& cell : result.cells) {
    for (std::size_t r = 0; r < cell.reps.size(); ++r) {
      const RunStats& s = cell.reps[r];
      std::vector<std::string> row;
      row.push_back(cell_fixed(cell.scenario.sg, 2));
      row.push_back(cell_fixed(cell.scenario.tg, 2));
      row.push_back(cell_fixed(cell.scenario.cg, 2));
      row.push_back(std::to_string(r));
      row.push_back(std::to_string(cell.seeds[r]));
      row.push_back(std::to_string(s.arrivals));
      row.push_back(std::to_string(s.found_france));
      row.push_back(std::to_string(s.found_shed));
      row.push_back(std::to_string(s.found_berth));
      row.push_back(std::to_string(s.missed));
      row.push_back(std::to_string(s.negative_through));
      row.push_back(std::to_string(s.in_system));
      row.push_back(cell_fixed(s.mean_time_in_system_hours, 6));
      for (const auto& station : s.station) {
        row.push_back(cell_fixed(station.utilization, 6));
        row.push_back(std::to_string(station.max_queue));
        row.push_back(std::to_string(station.bypassed));
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

inline nlohmann::json make_manifest(const ToolConfig& cfg, const std::string& command,
                                    const std::vector<MethodResult>& results) {
  nlohmann::json m;
  m["tool_version"] = kVersion;
  m["command"] = command;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  m["config_hash"] = hash;
  m["root_seed"] = cfg.run.root_seed;
  m["replications"] = cfg.run.replications;
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& res : results)
    for (const auto& cell : res.cells)
      for (std::size_t r = 0; r < cell.seeds.size(); ++r)
        seeds.push_back({{"method", method_label(res.method)},
                         {"sg", cell.scenario.sg},
                         {"tg", cell.scenario.tg},
                         {"cg", cell.scenario.cg},
                         {"rep", r},
                         {"seed", cell.seeds[r]}});
  m["seeds"] = seeds;
  return m;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
  if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace portcba
