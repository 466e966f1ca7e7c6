#pragma once

#include <stdexcept>
#include <string>

#include "fqt/harness.hpp"

namespace fqt {

/// Raised for unreadable, malformed, or out-of-range experiment configs.
/// Messages name the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a JSON experiment config. Unknown keys are rejected.
ExperimentSpec parse_experiment_json(const std::string& text);
ExperimentSpec parse_experiment_file(const std::string& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// Deterministic report serialization: same spec and report, same bytes.
std::string report_to_json(const Report& report, const ExperimentSpec& spec);

/// CSV table for a parameter sweep: parameter, success_mean, success_stderr,
/// fidelity_mean; row order follows the sweep value list.
std::string sweep_csv(
    const std::vector<std::pair<double, Report>>& table);

/// One row per amplitude, sorted lexicographically by the printed labels.
std::string format_stage_table(const TwoPhotonState& state,
                               const std::string& stage_name);

}  // namespace fqt
