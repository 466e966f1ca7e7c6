#include "fqt/harness.hpp"

#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace fqt {

std::string to_string(SweepSpec::Parameter p) {
  return p == SweepSpec::Parameter::Eta ? "eta" : "t";
}

void ExperimentSpec::validate() const {
  if (input.empty())
    throw std::invalid_argument("experiment needs at least one input state");
  double total_weight = 0.0;
  for (const EnsembleMember& member : input) {
    if (member.weight < 0.0)
      throw std::invalid_argument("ensemble weights must be non-negative");
    total_weight += member.weight;
  }
  if (std::abs(total_weight - 1.0) > 1e-9) {
    std::ostringstream out;
    out << "ensemble weights must sum to 1 (got " << total_weight << ")";
    throw std::invalid_argument(out.str());
  }
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  decoder.validate();
  if (sweep) {
    if (sweep->values.empty())
      throw std::invalid_argument("sweep value list must not be empty");
    for (double value : sweep->values)
      if (value < 0.0 || value > 1.0) {
        std::ostringstream out;
        out << "sweep value out of domain [0, 1]: " << value;
        throw std::invalid_argument(out.str());
      }
  }
}

namespace {

struct TrialStats {
  double success = 0.0;
  double fidelity_weighted = 0.0;  // sum of joint x fidelity over the filter
  double kept_weight = 0.0;        // sum of joint over the filter
  std::array<double, 4> branch_probabilities{};
  double discard = 0.0;
  double loss = 0.0;
  double oracle_deviation = 0.0;
  std::vector<TrialOutcomeRecord> outcomes;
};

TrialStats run_trial(const ExperimentSpec& spec, int trial_index) {
  const NoiseUnitary u = sample(spec.noise, trial_index);
  TrialStats stats;
  std::array<std::array<double, 2>, 8> outcome_joint{};  // (branch, outcome)
  std::array<std::array<double, 2>, 8> outcome_fid_weighted{};

  for (const EnsembleMember& member : spec.input) {
    const PipelineResult pipeline =
        run_pipeline(member.input, u, spec.decoder);
    const PostSelection selection = post_select(pipeline.final_state);

    stats.discard += member.weight * selection.discard_probability;
    stats.loss += member.weight * (1.0 - selection.total_norm);

    for (std::size_t b = 0; b < selection.branches.size(); ++b) {
      const Branch& branch = selection.branches[b];
      stats.branch_probabilities[b] += member.weight * branch.probability;
      if (branch.probability <= 0.0) continue;
      const auto [plus, minus] = correct_and_score(branch, member.input);
      for (const TrialOutcome& outcome : {plus, minus}) {
        const std::size_t o = outcome.measurement == XOutcome::PlusX ? 0 : 1;
        const double joint = member.weight * outcome.joint_probability;
        outcome_joint[b][o] += joint;
        outcome_fid_weighted[b][o] += joint * outcome.fidelity;
        if (spec.filter.pass(b, outcome.measurement)) {
          stats.success += joint;
          stats.kept_weight += joint;
          stats.fidelity_weighted += joint * outcome.fidelity;
        }
      }
    }

    if (spec.oracle_check) {
      const DenseState dense = oracle_evolve(member.input, u, spec.decoder);
      const auto oracle_probs = oracle_branch_probabilities(dense);
      double deviation = max_componentwise_deviation(
          dense, dense_from_sparse(pipeline.final_state));
      for (std::size_t b = 0; b < oracle_probs.size(); ++b)
        deviation = std::max(
            deviation,
            std::abs(oracle_probs[b] - selection.branches[b].probability));
      stats.oracle_deviation = std::max(stats.oracle_deviation, deviation);
    }
  }

  if (spec.per_trial_records) {
    for (std::size_t b = 0; b < kKeptBranches.size(); ++b)
      for (XOutcome o : {XOutcome::PlusX, XOutcome::MinusX}) {
        const std::size_t oi = o == XOutcome::PlusX ? 0 : 1;
        const double joint = outcome_joint[b][oi];
        stats.outcomes.push_back(
            {kKeptBranches[b], o,
             o == XOutcome::PlusX ? Correction::SigmaX
                                  : Correction::MinusISigmaY,
             joint, joint > 0.0 ? outcome_fid_weighted[b][oi] / joint : 0.0});
      }
  }
  return stats;
}

Estimate estimate_over(const std::vector<double>& values) {
  Estimate e;
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    const double n = static_cast<double>(values.size());
    e.stderr_of_mean = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

}  // namespace

Report run_experiment(const ExperimentSpec& spec, int jobs) {
  spec.validate();
  const int n = spec.trials;
  std::vector<TrialStats> records(n);

  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) records[i] = run_trial(spec, i);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    const int chunk = (n + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
      const int begin = w * chunk;
      const int end = std::min(n, begin + chunk);
      workers.emplace_back([&, w, begin, end] {
        try {
          for (int i = begin; i < end; ++i) records[i] = run_trial(spec, i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& worker : workers) worker.join();
    for (const std::exception_ptr& error : errors)
      if (error) std::rethrow_exception(error);
  }

  // Aggregation walks the records in trial order regardless of how many
  // workers produced them.
  Report report;
  report.trials = n;
  std::vector<double> success, fidelity, discard, loss;
  std::array<std::vector<double>, 4> branches;
  success.reserve(n);
  double oracle_deviation = 0.0;
  for (int i = 0; i < n; ++i) {
    const TrialStats& stats = records[i];
    success.push_back(stats.success);
    if (stats.kept_weight > 0.0)
      fidelity.push_back(stats.fidelity_weighted / stats.kept_weight);
    discard.push_back(stats.discard);
    loss.push_back(stats.loss);
    for (std::size_t b = 0; b < 4; ++b)
      branches[b].push_back(stats.branch_probabilities[b]);
    oracle_deviation = std::max(oracle_deviation, stats.oracle_deviation);
    if (spec.per_trial_records) {
      PerTrialRecord record;
      record.trial = i;
      record.success_probability = stats.success;
      record.mean_fidelity_kept =
          stats.kept_weight > 0.0 ? stats.fidelity_weighted / stats.kept_weight
                                  : 0.0;
      record.branch_probabilities = stats.branch_probabilities;
      record.discard_probability = stats.discard;
      record.loss_probability = stats.loss;
      record.outcomes = stats.outcomes;
      report.per_trial.push_back(std::move(record));
    }
  }
  report.success_probability = estimate_over(success);
  report.mean_fidelity_kept = estimate_over(fidelity);
  report.discard_probability = estimate_over(discard);
  report.loss_probability = estimate_over(loss);
  for (std::size_t b = 0; b < 4; ++b)
    report.branch_probabilities[b] = estimate_over(branches[b]);
  if (spec.oracle_check) report.oracle_max_deviation = oracle_deviation;
  return report;
}

std::vector<std::pair<double, Report>> run_sweep(const ExperimentSpec& spec,
                                                 int jobs) {
  spec.validate();
  if (!spec.sweep)
    throw std::invalid_argument("run_sweep: spec has no sweep section");
  std::vector<std::pair<double, Report>> table;
  table.reserve(spec.sweep->values.size());
  for (double value : spec.sweep->values) {
    ExperimentSpec point = spec;
    point.sweep.reset();
    if (spec.sweep->parameter == SweepSpec::Parameter::Eta)
      point.decoder.fs_efficiency = value;
    else
      point.decoder.eraser_transmission = value;
    table.emplace_back(value, run_experiment(point, jobs));
  }
  return table;
}

}  // namespace fqt
