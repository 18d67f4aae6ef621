#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "portcba/arrivals.hpp"
#include "portcba/errors.hpp"
#include "portcba/factors.hpp"
#include "portcba/sim.hpp"

namespace portcba {

struct RunPolicy {
  double horizon_hours = 8760.0;
  std::uint64_t root_seed = 12u;
  std::uint32_t replications = 10;
  double relative_precision = 0.05;
  enum class CostBasis { mean_counts, per_replication } cost_basis = CostBasis::mean_counts;

  friend bool operator==(const RunPolicy&, const RunPolicy&) = default;
};

struct OutputPolicy {
  std::string directory = "out";
  enum class Format { csv, md } format = Format::csv;

  friend bool operator==(const OutputPolicy&, const OutputPolicy&) = default;
};

inline bool operator==(const StationBase& a, const StationBase& b) {
  return a.name == b.name && a.base_selection == b.base_selection &&
         a.selection_tracks_search == b.selection_tracks_search &&
         a.queue_capacity == b.queue_capacity && a.servers == b.servers &&
         a.service_time == b.service_time;
}

// Everything a batch run needs, loadable from one JSON document. Every field
// has a default drawn from the Calais case-study dataset; the document only
// overrides what it names. Unknown keys are rejected.
struct ToolConfig {
  BaselineCounts baseline;
  CostModel costs;
  ScenarioFactorGrid factors;
  std::array<StationBase, 3> network;
  ArrivalProcess arrivals;
  RunPolicy run;
  OutputPolicy output;

  static ToolConfig defaults();
  void validate() const;

  friend bool operator==(const ToolConfig&, const ToolConfig&) = default;
};

inline ToolConfig ToolConfig::defaults() {
  ToolConfig cfg;

  cfg.factors.traffic_growth = {{0.0, 0.25}, {0.10, 0.50}, {0.20, 0.25}};
  cfg.factors.clandestine_growth = {{-0.50, 1.0 / 3.0}, {0.0, 1.0 / 3.0}, {0.25, 1.0 / 3.0}};
  cfg.factors.search_growth = {{0.0, Money::from_pounds(0)},
                               {0.10, Money::from_pounds(5'000'000)},
                               {0.20, Money::from_pounds(10'000'000)}};

  // Screening-station timings, staffing, capacities and the daily traffic
  // pattern are illustrative fixtures: operational values are not public.
  // docs/des-fixture.md records how these were chosen.
  cfg.network[0] = {"france", 0.60, false, kUnboundedQueue, 6, {0.015, 0.030, 0.060}};
  cfg.network[1] = {"uk_shed", 0.60, true, 15, 7, {0.030, 0.060, 0.120}};
  cfg.network[2] = {"uk_berth", 0.95, true, kUnboundedQueue, 4, {0.008, 0.012, 0.022}};

  cfg.arrivals.kind = ArrivalProcess::Kind::piecewise;
  cfg.arrivals.cycle_hours = 24.0;
  cfg.arrivals.blocks = {{0.0, 6.0, 0.5}, {6.0, 14.0, 2.0}, {14.0, 24.0, 0.5}};
  return cfg;
}

inline void ToolConfig::validate() const {
  baseline.validate();
  costs.validate();
  factors.validate();
  const std::array<const char*, 3> expected_names = {"france", "uk_shed", "uk_berth"};
  for (std::size_t k = 0; k < 3; ++k) {
    if (network[k].name != expected_names[k])
      throw ConfigError("network: station " + std::to_string(k) + " must be named '" +
                        expected_names[k] + "'");
    network[k].validate();
  }
  arrivals.validate(run.horizon_hours);
  if (run.horizon_hours < 0.0) throw ConfigError("run.horizon_hours must be >= 0");
  if (run.replications < 1) throw ConfigError("run.replications must be >= 1");
  if (run.relative_precision <= 0.0) throw ConfigError("run.relative_precision must be > 0");
  if (output.directory.empty()) throw ConfigError("output.directory must not be empty");
}

namespace cfgdetail {

using nlohmann::json;

inline void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

inline void expect_keys(const json& obj, const std::string& path,
                        std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ConfigError(path + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& path, T& into) {
  if (!obj.contains(key)) return;
  try {
    into = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

inline void read_money(const json& obj, const char* key, const std::string& path, Money& into) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected whole pounds");
  into = Money::from_pounds(v.get<std::int64_t>());
}

}  // namespace cfgdetail

inline ToolConfig parse_config(const nlohmann::json& doc) {
  using cfgdetail::expect_keys;
  using cfgdetail::expect_object;
  using cfgdetail::read;
  using cfgdetail::read_money;
  using nlohmann::json;

  ToolConfig cfg = ToolConfig::defaults();
  expect_object(doc, "config");
  expect_keys(doc, "config",
              {"baseline", "costs", "factors", "network", "arrivals", "run", "output"});

  if (doc.contains("baseline")) {
    const json& b = doc.at("baseline");
    expect_object(b, "baseline");
    expect_keys(b, "baseline",
                {"total_lorries", "base_search_fraction", "found_france", "found_uk_shed",
                 "found_uk_berth", "missed"});
    read(b, "total_lorries", "baseline", cfg.baseline.total_lorries);
    read(b, "base_search_fraction", "baseline", cfg.baseline.base_search_fraction);
    read(b, "found_france", "baseline", cfg.baseline.found_france);
    read(b, "found_uk_shed", "baseline", cfg.baseline.found_uk_shed);
    read(b, "found_uk_berth", "baseline", cfg.baseline.found_uk_berth);
    read(b, "missed", "baseline", cfg.baseline.missed);
  }

  if (doc.contains("costs")) {
    const json& c = doc.at("costs");
    expect_object(c, "costs");
    expect_keys(c, "costs",
                {"cost_per_clandestine_gbp", "clandestines_per_lorry", "cost_per_missed_lorry_gbp"});
    read_money(c, "cost_per_clandestine_gbp", "costs", cfg.costs.cost_per_clandestine);
    read(c, "clandestines_per_lorry", "costs", cfg.costs.clandestines_per_lorry);
    if (c.contains("cost_per_missed_lorry_gbp")) {
      Money given;
      read_money(c, "cost_per_missed_lorry_gbp", "costs", given);
      if (given != cfg.costs.cost_per_missed_lorry())
        throw ConfigError("costs.cost_per_missed_lorry_gbp: must equal cost_per_clandestine_gbp "
                          "x clandestines_per_lorry");
    }
  }

  if (doc.contains("factors")) {
    const json& f = doc.at("factors");
    expect_object(f, "factors");
    expect_keys(f, "factors", {"traffic_growth", "clandestine_growth", "search_growth"});
    const auto read_levels = [](const json& arr, const std::string& path) {
      if (!arr.is_array()) throw ConfigError(path + ": expected an array");
      std::vector<GrowthLevel> out;
      for (const json& e : arr) {
        expect_object(e, path);
        expect_keys(e, path, {"value", "probability"});
        GrowthLevel lv;
        read(e, "value", path, lv.value);
        read(e, "probability", path, lv.probability);
        out.push_back(lv);
      }
      return out;
    };
    if (f.contains("traffic_growth"))
      cfg.factors.traffic_growth = read_levels(f.at("traffic_growth"), "factors.traffic_growth");
    if (f.contains("clandestine_growth"))
      cfg.factors.clandestine_growth =
          read_levels(f.at("clandestine_growth"), "factors.clandestine_growth");
    if (f.contains("search_growth")) {
      const json& arr = f.at("search_growth");
      if (!arr.is_array()) throw ConfigError("factors.search_growth: expected an array");
      cfg.factors.search_growth.clear();
      for (const json& e : arr) {
        expect_object(e, "factors.search_growth");
        expect_keys(e, "factors.search_growth", {"growth", "annual_cost_gbp"});
        SearchOption opt;
        read(e, "growth", "factors.search_growth", opt.growth);
        read_money(e, "annual_cost_gbp", "factors.search_growth", opt.annual_cost);
        cfg.factors.search_growth.push_back(opt);
      }
    }
  }

  if (doc.contains("network")) {
    const json& arr = doc.at("network");
    if (!arr.is_array() || arr.size() != 3)
      throw ConfigError("network: expected exactly 3 stations (france, uk_shed, uk_berth)");
    for (std::size_t k = 0; k < 3; ++k) {
      const json& s = arr.at(k);
      const std::string path = "network[" + std::to_string(k) + "]";
      expect_object(s, path);
      expect_keys(s, path,
                  {"name", "base_selection", "selection_tracks_search", "queue_capacity",
                   "servers", "service_time"});
      StationBase& st = cfg.network[k];
      read(s, "name", path, st.name);
      read(s, "base_selection", path, st.base_selection);
      read(s, "selection_tracks_search", path, st.selection_tracks_search);
      read(s, "queue_capacity", path, st.queue_capacity);
      read(s, "servers", path, st.servers);
      if (s.contains("service_time")) {
        const json& t = s.at("service_time");
        expect_object(t, path + ".service_time");
        expect_keys(t, path + ".service_time", {"min_hours", "mode_hours", "max_hours"});
        read(t, "min_hours", path + ".service_time", st.service_time.min);
        read(t, "mode_hours", path + ".service_time", st.service_time.mode);
        read(t, "max_hours", path + ".service_time", st.service_time.max);
      }
    }
  }

  if (doc.contains("arrivals")) {
    const json& a = doc.at("arrivals");
    expect_object(a, "arrivals");
    expect_keys(a, "arrivals", {"kind", "cycle_hours", "blocks"});
    if (a.contains("kind")) {
      const std::string kind = a.at("kind").get<std::string>();
      if (kind == "homogeneous") {
        cfg.arrivals.kind = ArrivalProcess::Kind::homogeneous;
        cfg.arrivals.blocks.clear();
      } else if (kind == "piecewise") {
        cfg.arrivals.kind = ArrivalProcess::Kind::piecewise;
      } else {
        throw ConfigError("arrivals.kind: expected 'homogeneous' or 'piecewise'");
      }
    }
    read(a, "cycle_hours", "arrivals", cfg.arrivals.cycle_hours);
    if (a.contains("blocks")) {
      const json& arr = a.at("blocks");
      if (!arr.is_array()) throw ConfigError("arrivals.blocks: expected an array");
      cfg.arrivals.blocks.clear();
      for (const json& e : arr) {
        expect_object(e, "arrivals.blocks");
        expect_keys(e, "arrivals.blocks", {"start_hour", "end_hour", "factor"});
        ScheduleBlock b;
        read(e, "start_hour", "arrivals.blocks", b.start_hour);
        read(e, "end_hour", "arrivals.blocks", b.end_hour);
        read(e, "factor", "arrivals.blocks", b.factor);
        cfg.arrivals.blocks.push_back(b);
      }
    }
  }

  if (doc.contains("run")) {
    const json& r = doc.at("run");
    expect_object(r, "run");
    expect_keys(r, "run",
                {"horizon_hours", "root_seed", "replications", "relative_precision", "cost_basis"});
    read(r, "horizon_hours", "run", cfg.run.horizon_hours);
    read(r, "root_seed", "run", cfg.run.root_seed);
    read(r, "replications", "run", cfg.run.replications);
    read(r, "relative_precision", "run", cfg.run.relative_precision);
    if (r.contains("cost_basis")) {
      const std::string basis = r.at("cost_basis").get<std::string>();
      if (basis == "mean_counts")
        cfg.run.cost_basis = RunPolicy::CostBasis::mean_counts;
      else if (basis == "per_replication")
        cfg.run.cost_basis = RunPolicy::CostBasis::per_replication;
      else
        throw ConfigError("run.cost_basis: expected 'mean_counts' or 'per_replication'");
    }
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    expect_object(o, "output");
    expect_keys(o, "output", {"directory", "format"});
    read(o, "directory", "output", cfg.output.directory);
    if (o.contains("format")) {
      const std::string fmt = o.at("format").get<std::string>();
      if (fmt == "csv")
        cfg.output.format = OutputPolicy::Format::csv;
      else if (fmt == "md")
        cfg.output.format = OutputPolicy::Format::md;
      else
        throw ConfigError("output.format: expected 'csv' or 'md'");
    }
  }

  cfg.validate();
  return cfg;
}

inline nlohmann::json to_json(const ToolConfig& cfg) {
  using nlohmann::json;
  json doc;
  doc["baseline"] = {{"total_lorries", cfg.baseline.total_lorries},
                     {"base_search_fraction", cfg.baseline.base_search_fraction},
                     {"found_france", cfg.baseline.found_france},
                     {"found_uk_shed", cfg.baseline.found_uk_shed},
                     {"found_uk_berth", cfg.baseline.found_uk_berth},
                     {"missed", cfg.baseline.missed}};
  doc["costs"] = {{"cost_per_clandestine_gbp", cfg.costs.cost_per_clandestine.whole_pounds()},
                  {"clandestines_per_lorry", cfg.costs.clandestines_per_lorry},
                  {"cost_per_missed_lorry_gbp", cfg.costs.cost_per_missed_lorry().whole_pounds()}};
  json tg = json::array(), cg = json::array(), sg = json::array();
  for (const auto& lv : cfg.factors.traffic_growth)
    tg.push_back({{"value", lv.value}, {"probability", lv.probability}});
  for (const auto& lv : cfg.factors.clandestine_growth)
    cg.push_back({{"value", lv.value}, {"probability", lv.probability}});
  for (const auto& opt : cfg.factors.search_growth)
    sg.push_back({{"growth", opt.growth}, {"annual_cost_gbp", opt.annual_cost.whole_pounds()}});
  doc["factors"] = {{"traffic_growth", tg}, {"clandestine_growth", cg}, {"search_growth", sg}};
  json net = json::array();
  for (const auto& st : cfg.network)
    net.push_back({{"name", st.name},
                   {"base_selection", st.base_selection},
                   {"selection_tracks_search", st.selection_tracks_search},
                   {"queue_capacity", st.queue_capacity},
                   {"servers", st.servers},
                   {"service_time",
                    {{"min_hours", st.service_time.min},
                     {"mode_hours", st.service_time.mode},
                     {"max_hours", st.service_time.max}}}});
  doc["network"] = net;
  json blocks = json::array();
  for (const auto& b : cfg.arrivals.blocks)
    blocks.push_back({{"start_hour", b.start_hour}, {"end_hour", b.end_hour}, {"factor", b.factor}});
  doc["arrivals"] = {
      {"kind", cfg.arrivals.kind == ArrivalProcess::Kind::piecewise ? "piecewise" : "homogeneous"},
      {"cycle_hours", cfg.arrivals.cycle_hours},
      {"blocks", blocks}};
  doc["run"] = {{"horizon_hours", cfg.run.horizon_hours},
                {"root_seed", cfg.run.root_seed},
                {"replications", cfg.run.replications},
                {"relative_precision", cfg.run.relative_precision},
                {"cost_basis", cfg.run.cost_basis == RunPolicy::CostBasis::mean_counts
                                   ? "mean_counts"
                                   : "per_replication"}};
  doc["output"] = {{"directory", cfg.output.directory},
                   {"format", cfg.output.format == OutputPolicy::Format::csv ? "csv" : "md"}};
  return doc;
}

// FNV-1a over the canonical serialisation; recorded in run manifests so a
// result can be traced back to the exact configuration that produced it.
inline std::uint64_t config_hash(const ToolConfig& cfg) {
  const std::string dump = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace portcba
