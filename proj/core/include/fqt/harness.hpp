#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fqt/oracle.hpp"
#include "fqt/protocol.hpp"

namespace fqt {

struct EnsembleMember {
  double weight;
  InputQubit input;
};

/// Restricts which post-selected events count as success. The default keeps
/// all four branches and both X outcomes; narrower filters exist for baseline
/// comparisons against restricted protocols.
struct PostSelectFilter {
  std::array<bool, 4> branches{true, true, true, true};  // kKeptBranches order
  std::array<bool, 2> outcomes{true, true};              // {plus_x, minus_x}

  bool pass(std::size_t branch_index, XOutcome outcome) const {
    return branches[branch_index] &&
           outcomes[outcome == XOutcome::PlusX ? 0 : 1];
  }
  bool is_all() const {
    return branches == std::array<bool, 4>{true, true, true, true} &&
           outcomes == std::array<bool, 2>{true, true};
  }
};

struct SweepSpec {
  enum class Parameter : std::uint8_t { Eta, T };
  Parameter parameter = Parameter::Eta;
  std::vector<double> values;
};

std::string to_string(SweepSpec::Parameter p);

struct ExperimentSpec {
  std::vector<EnsembleMember> input;  // one member == pure input
  NoiseFamily noise;
  DecoderConfig decoder;
  int trials = 1000;
  PostSelectFilter filter;
  bool oracle_check = false;
  bool per_trial_records = false;
  std::optional<SweepSpec> sweep;
  std::string output = "report.json";

  std::uint64_t seed() const { return noise.seed; }
  void validate() const;  // throws std::invalid_argument
};

struct Estimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};

struct TrialOutcomeRecord {
  BranchId branch;
  XOutcome outcome;
  Correction correction;
  double joint_probability;
  double fidelity;
};

struct PerTrialRecord {
  int trial = 0;
  double success_probability = 0.0;
  double mean_fidelity_kept = 0.0;
  std::array<double, 4> branch_probabilities{};
  double discard_probability = 0.0;
  double loss_probability = 0.0;
  std::vector<TrialOutcomeRecord> outcomes;
};

struct Report {
  int trials = 0;
  Estimate success_probability;
  Estimate mean_fidelity_kept;
  std::array<Estimate, 4> branch_probabilities;  // kKeptBranches order
  Estimate discard_probability;
  Estimate loss_probability;
  /// The discard weight counts labeled (distinguishable-slot) amplitudes;
  /// same-output bunching interference is not modeled for discarded events.
  std::string discard_model_note = "labeled-photon approximation";
  std::optional<double> oracle_max_deviation;
  std::vector<PerTrialRecord> per_trial;
};

/// Runs `spec.trials` independent trials. `jobs` is a parallelism hint only:
/// per-trial results are stored by trial index and reduced in order, so the
/// report does not depend on it.
Report run_experiment(const ExperimentSpec& spec, int jobs = 1);

/// One report per sweep value, in the order given by the value list.
/// Requires spec.sweep.
std::vector<std::pair<double, Report>> run_sweep(const ExperimentSpec& spec,
                                                 int jobs = 1);

}  // namespace fqt
