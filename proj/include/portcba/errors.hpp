#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace portcba {

// Invalid configuration or input document. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A scenario that cannot be expressed as valid routing probabilities
// (e.g. the implied search fraction exceeds 1, or a branch probability
// falls outside [0,1]).
class CalibrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed tree handed to rollback.
class StructureError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Internal invariant violated while a replication was running. Carries the
// tail of the event trace so the offending sequence can be inspected.
// The CLI maps this to exit code 3.
class SimulationFault : public std::runtime_error {
public:
  SimulationFault(const std::string& what, std::string trace_tail)
      : std::runtime_error(what + "\nevent trace tail:\n" + trace_tail),
        trace_tail_(std::move(trace_tail)) {}

  const std::string& trace_tail() const { return trace_tail_; }

private:
  std::string trace_tail_;
};

}  // namespace portcba
