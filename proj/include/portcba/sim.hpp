#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "portcba/arrivals.hpp"
#include "portcba/calibration.hpp"
#include "portcba/distributions.hpp"
#include "portcba/errors.hpp"
#include "portcba/factors.hpp"
#include "portcba/rng.hpp"

namespace portcba {

// "Unbounded" mirrors the practical convention of setting every queue size
// to one million.
inline constexpr std::uint32_t kUnboundedQueue = 1'000'000;

enum class Mode { mc, des0, des1, des2, des3 };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::mc: return "mc";
    case Mode::des0: return "des0";
    case Mode::des1: return "des1";
    case Mode::des2: return "des2";
    case Mode::des3: return "des3";
  }
  return "?";
}

inline std::optional<Mode> mode_from_name(const std::string& s) {
  for (Mode m : {Mode::mc, Mode::des0, Mode::des1, Mode::des2, Mode::des3})
    if (s == mode_name(m)) return m;
  return std::nullopt;
}

// A screening station as the engine sees it for one scenario: the share of
// traffic routed into the check, the catch probability for a checked positive
// lorry, and the queueing parameters.
struct StationConfig {
  std::string name;
  double selection_probability = 0.0;
  double detection_probability = 0.0;
  std::uint32_t queue_capacity = kUnboundedQueue;
  std::uint32_t servers = 1;
  Triangular service_time = Triangular::zero();

  void validate() const {
    if (selection_probability < 0.0 || selection_probability > 1.0)
      throw ConfigError("station " + name + ": selection probability outside [0,1]");
    if (detection_probability < 0.0 || detection_probability > 1.0)
      throw ConfigError("station " + name + ": detection probability outside [0,1]");
    service_time.validate("station " + name);
    if (!service_time.is_zero() && servers < 1)
      throw ConfigError("station " + name + ": a timed check needs at least one server");
  }
};

// Configuration-side station description, before a scenario is applied.
// base_selection is the share of traffic checked at baseline search
// intensity; stations run by UKBA scale that share with (1+sg)/(1+tg).
struct StationBase {
  std::string name;
  double base_selection = 0.0;
  bool selection_tracks_search = false;
  std::uint32_t queue_capacity = kUnboundedQueue;
  std::uint32_t servers = 1;
  Triangular service_time = Triangular::zero();

  void validate() const {
    if (base_selection < 0.0 || base_selection > 1.0)
      throw ConfigError("station " + name + ": base selection outside [0,1]");
    service_time.validate("station " + name);
    if (!service_time.is_zero() && servers < 1)
      throw ConfigError("station " + name + ": a timed check needs at least one server");
  }
};

struct RunConfig {
  Mode mode = Mode::mc;
  double horizon_hours = 8760.0;
  Scenario scenario;
  std::array<StationConfig, 3> network;  // france, uk_shed, uk_berth
  ArrivalProcess arrivals;
  double arrival_rate = 0.0;  // lorries per hour
  std::uint64_t seed = 0;
};

struct StationStats {
  std::uint64_t selected = 0;
  std::uint64_t checked = 0;
  std::uint64_t bypassed = 0;
  std::uint32_t max_queue = 0;
  double busy_hours = 0.0;
  double utilization = 0.0;

  friend bool operator==(const StationStats&, const StationStats&) = default;
};

struct RunStats {
  std::uint64_t arrivals = 0;
  std::uint64_t found_france = 0;
  std::uint64_t found_shed = 0;
  std::uint64_t found_berth = 0;
  std::uint64_t missed = 0;
  std::uint64_t negative_through = 0;
  std::uint64_t in_system = 0;  // still queued or in service at the horizon
  std::array<StationStats, 3> station;
  double mean_time_in_system_hours = 0.0;

  std::uint64_t exits() const {
    return found_france + found_shed + found_berth + missed + negative_through;
  }
  std::uint64_t found_uk() const { return found_shed + found_berth; }

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

enum class RouteOutcome : std::uint8_t { not_selected, bypassed, checked_clear, checked_found };

/// Pure routing decision at one station. Selection happens first; a selected
/// lorry facing a full queue bypasses unchecked; a checked positive lorry is
/// found with the station's detection probability.
inline RouteOutcome route_through_station(bool positive, const StationConfig& st,
                                          bool queue_full, double u_selection,
                                          double u_detection) {
  if (u_selection >= st.selection_probability) return RouteOutcome::not_selected;
  if (queue_full) return RouteOutcome::bypassed;
  if (positive && u_detection < st.detection_probability) return RouteOutcome::checked_found;
  return RouteOutcome::checked_clear;
}

/// Resolves a (mode, scenario) pair into a runnable configuration. The mode
/// masks the parameter set the way the original experiments switched
/// simulation types: mc zeroes every delay and unbounds every queue, des0/1
/// unbound queues, des2/3 honour the configured shed capacity, and only
/// des1/3 use the variable arrival pattern.
inline RunConfig make_run_config(Mode mode, const Scenario& scenario,
                                 const CalibratedRouting& routing,
                                 const std::array<StationBase, 3>& stations,
                                 const ArrivalProcess& pattern, double horizon_hours,
                                 std::uint64_t seed) {
  RunConfig cfg;
  cfg.mode = mode;
  cfg.horizon_hours = horizon_hours;
  cfg.scenario = scenario;
  cfg.seed = seed;
  cfg.arrival_rate = horizon_hours > 0.0 ? routing.n_lorries / horizon_hours : 0.0;

  const bool timed = mode != Mode::mc;
  const bool finite_queues = mode == Mode::des2 || mode == Mode::des3;
  const bool variable_arrivals = mode == Mode::des1 || mode == Mode::des3;

  cfg.arrivals = variable_arrivals ? pattern : ArrivalProcess{};

  const double r = (1.0 + scenario.sg) / (1.0 + scenario.tg);
  const std::array<double, 3> catch_chain = {routing.catch_france(), routing.catch_shed(),
                                             routing.catch_berth()};
  for (std::size_t k = 0; k < 3; ++k) {
    const StationBase& base = stations[k];
    base.validate();
    StationConfig& st = cfg.network[k];
    st.name = base.name;
    st.selection_probability =
        std::min(1.0, base.base_selection * (base.selection_tracks_search ? r : 1.0));
    const double q = catch_chain[k];
    if (q > st.selection_probability + 1e-12)
      throw CalibrationError("station " + base.name + ": calibrated catch fraction " +
                             detail::fmt(q) + " exceeds the selected share " +
                             detail::fmt(st.selection_probability) +
                             "; raise its base selection");
    st.detection_probability = st.selection_probability > 0.0
                                   ? std::min(1.0, q / st.selection_probability)
                                   : 0.0;
    st.queue_capacity = finite_queues ? base.queue_capacity : kUnboundedQueue;
    st.servers = base.servers;
    st.service_time = timed ? base.service_time : Triangular::zero();
    st.validate();
  }
  if (finite_queues && cfg.network[1].queue_capacity >= kUnboundedQueue)
    throw ConfigError(std::string(mode_name(mode)) +
                      " requires a finite queue capacity on uk_shed");
  return cfg;
}

namespace detail {

struct CompactLorry {
  std::uint32_t id = 0;
  bool positive = false;
  std::uint8_t bypass_mask = 0;
  double arrival_time = 0.0;
};

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  enum Kind : std::uint8_t { arrival, service_end } kind = arrival;
  std::uint8_t station = 0;
  CompactLorry lorry;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

// Ring buffer of recent events, dumped when an internal invariant breaks.
class TraceTail {
public:
  void record(double time, std::uint32_t lorry, int station, const char* what) {
    Entry& e = ring_[head_ % ring_.size()];
    e = {time, lorry, station, what};
    ++head_;
  }

  std::string render() const {
    std::string out;
    const std::size_t n = std::min<std::size_t>(head_, ring_.size());
    for (std::size_t i = head_ - n; i < head_; ++i) {
      const Entry& e = ring_[i % ring_.size()];
      char buf[128];
      std::snprintf(buf, sizeof buf, "  t=%.6f lorry=%u station=%d %s\n", e.time, e.lorry,
                    e.station, e.what);
      out += buf;
    }
    return out;
  }

private:
  struct Entry {
    double time = 0.0;
    std::uint32_t lorry = 0;
    int station = 0;
    const char* what = "";
  };
  std::array<Entry, 48> ring_{};
  std::size_t head_ = 0;
};

class ReplicationRun {
public:
  ReplicationRun(const RunConfig& cfg, const CalibratedRouting& routing)
      : cfg_(cfg), kit_{cfg.seed}, p_positive_(routing.p_positive) {}

  RunStats run() {
    ArrivalGenerator gen(cfg_.arrivals, cfg_.arrival_rate, kit_, cfg_.horizon_hours);
    schedule_arrival(gen);
    while (!calendar_.empty()) {
      const Event e = calendar_.top();
      calendar_.pop();
      if (e.time > cfg_.horizon_hours) break;
      if (e.time < now_ - 1e-9)
        fault("event calendar went backwards");
      now_ = e.time;
      if (e.kind == Event::arrival) {
        ++stats_.arrivals;
        CompactLorry lorry;
        lorry.id = next_id_++;
        lorry.positive = kit_.u(rng::Stream::positivity, lorry.id) < p_positive_;
        lorry.arrival_time = e.time;
        trace_.record(e.time, lorry.id, -1, "arrival");
        schedule_arrival(gen);
        advance(lorry, 0, e.time);
      } else {
        on_service_end(e);
      }
    }
    finalize();
    return stats_;
  }

private:
  void schedule_arrival(ArrivalGenerator& gen) {
    if (const auto t = gen.next()) push_event(*t, Event::arrival, 0, {});
  }

  void push_event(double time, Event::Kind kind, std::uint8_t station, CompactLorry lorry) {
    calendar_.push(Event{time, seq_++, kind, station, lorry});
  }

  // One uniform drives both the selection and the detection threshold at a
  // station: selected iff u < sigma, found iff u < sigma*d. The marginals are
  // unchanged (detection given checked is still d) but catch outcomes become
  // monotone across search-growth options sharing a seed, so option
  // comparisons are not buried in sampling noise.
  double detection_draw(int k, double u_sel) const {
    const double sigma = cfg_.network[static_cast<std::size_t>(k)].selection_probability;
    return sigma > 0.0 ? u_sel / sigma : 1.0;
  }

  void advance(CompactLorry lorry, int k, double now) {
    while (k < 3) {
      const StationConfig& st = cfg_.network[static_cast<std::size_t>(k)];
      StationStats& ss = stats_.station[static_cast<std::size_t>(k)];
      const double u_sel = kit_.u(rng::Stream::selection, lorry.id, static_cast<std::uint64_t>(k));
      const double u_det = detection_draw(k, u_sel);
      const bool timed = !st.service_time.is_zero();
      const bool queue_full = timed && busy_[static_cast<std::size_t>(k)] >= st.servers &&
                              waiting_[static_cast<std::size_t>(k)].size() >= st.queue_capacity;
      const RouteOutcome outcome = route_through_station(lorry.positive, st, queue_full, u_sel, u_det);
      switch (outcome) {
        case RouteOutcome::not_selected:
          ++k;
          continue;
        case RouteOutcome::bypassed:
          ++ss.selected;
          ++ss.bypassed;
          lorry.bypass_mask |= static_cast<std::uint8_t>(1u << k);
          trace_.record(now, lorry.id, k, "bypass");
          ++k;
          continue;
        case RouteOutcome::checked_found:
        case RouteOutcome::checked_clear:
          ++ss.selected;
          if (!timed) {
            // Instant check, the verdict is already in the outcome.
            ++ss.checked;
            if (outcome == RouteOutcome::checked_found) {
              exit_found(lorry, k, now);
              return;
            }
            ++k;
            continue;
          }
          if (busy_[static_cast<std::size_t>(k)] < st.servers) {
            start_service(lorry, k, now);
          } else {
            auto& q = waiting_[static_cast<std::size_t>(k)];
            q.push_back(lorry);
            if (q.size() > st.queue_capacity) fault("waiting line exceeded its capacity");
            ss.max_queue = std::max(ss.max_queue, static_cast<std::uint32_t>(q.size()));
          }
          return;
      }
    }
    // Past the last check: the lorry leaves the system.
    if (lorry.positive) {
      ++stats_.missed;
      trace_.record(now, lorry.id, 3, "exit missed");
    } else {
      ++stats_.negative_through;
      trace_.record(now, lorry.id, 3, "exit negative");
    }
    note_exit(lorry, now);
  }

  void start_service(const CompactLorry& lorry, int k, double now) {
    const StationConfig& st = cfg_.network[static_cast<std::size_t>(k)];
    const double u = kit_.u(rng::Stream::service, lorry.id, static_cast<std::uint64_t>(k));
    const double duration = st.service_time.sample(u);
    if (!(duration >= 0.0)) fault("negative service duration drawn");
    ++busy_[static_cast<std::size_t>(k)];
    if (busy_[static_cast<std::size_t>(k)] > st.servers) fault("more lorries in service than servers");
    stats_.station[static_cast<std::size_t>(k)].busy_hours +=
        std::min(now + duration, cfg_.horizon_hours) - now;
    trace_.record(now, lorry.id, k, "start service");
    push_event(now + duration, Event::service_end, static_cast<std::uint8_t>(k), lorry);
  }

  void on_service_end(const Event& e) {
    const int k = e.station;
    const StationConfig& st = cfg_.network[static_cast<std::size_t>(k)];
    StationStats& ss = stats_.station[static_cast<std::size_t>(k)];
    --busy_[static_cast<std::size_t>(k)];
    ++ss.checked;

    auto& q = waiting_[static_cast<std::size_t>(k)];
    if (!q.empty()) {
      const CompactLorry next = q.front();
      q.pop_front();
      start_service(next, k, e.time);
    }

    const CompactLorry& lorry = e.lorry;
    const double u_sel = kit_.u(rng::Stream::selection, lorry.id, static_cast<std::uint64_t>(k));
    const double u_det = detection_draw(k, u_sel);
    if (lorry.positive && u_det < st.detection_probability) {
      exit_found(lorry, k, e.time);
    } else {
      trace_.record(e.time, lorry.id, k, "checked clear");
      advance(lorry, k + 1, e.time);
    }
  }

  void exit_found(const CompactLorry& lorry, int k, double now) {
    switch (k) {
      case 0: ++stats_.found_france; break;
      case 1: ++stats_.found_shed; break;
      default: ++stats_.found_berth; break;
    }
    trace_.record(now, lorry.id, k, "exit found");
    note_exit(lorry, now);
  }

  void note_exit(const CompactLorry& lorry, double now) {
    time_in_system_sum_ += now - lorry.arrival_time;
    ++exited_;
  }

  void finalize() {
    const std::uint64_t exits = stats_.exits();
    if (exits != exited_ || exits > stats_.arrivals) fault("lorries were created or lost");
    stats_.in_system = stats_.arrivals - exits;
    stats_.mean_time_in_system_hours =
        exited_ > 0 ? time_in_system_sum_ / static_cast<double>(exited_) : 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const double span =
          static_cast<double>(cfg_.network[k].servers) * cfg_.horizon_hours;
      stats_.station[k].utilization = span > 0.0 ? stats_.station[k].busy_hours / span : 0.0;
      if (stats_.station[k].utilization > 1.0 + 1e-9) fault("station utilisation above 1");
    }
  }

  [[noreturn]] void fault(const std::string& what) {
    throw SimulationFault("simulation fault at t=" + portcba::detail::fmt(now_) + ": " + what,
                          trace_.render());
  }

  const RunConfig& cfg_;
  rng::DrawKit kit_;
  double p_positive_ = 0.0;

  std::priority_queue<Event, std::vector<Event>, EventAfter> calendar_;
  std::array<std::deque<CompactLorry>, 3> waiting_;
  std::array<std::uint32_t, 3> busy_{};
  std::uint64_t seq_ = 0;
  std::uint32_t next_id_ = 0;
  double now_ = 0.0;
  double time_in_system_sum_ = 0.0;
  std::uint64_t exited_ = 0;
  RunStats stats_;
  TraceTail trace_;
};

}  // namespace detail

/// One seeded replication. Deterministic: the same (config, routing, seed)
/// produces the same RunStats, independent of anything outside the call.
inline RunStats run_replication(const RunConfig& cfg, const CalibratedRouting& routing) {
  for (const auto& st : cfg.network) st.validate();
  cfg.arrivals.validate(cfg.horizon_hours);
  return detail::ReplicationRun(cfg, routing).run();
}

}  // namespace portcba
