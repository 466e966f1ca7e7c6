// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fqt/closed_form.hpp"
#include "fqt/config.hpp"
#include "fqt/harness.hpp"
#include "fqt/validate.hpp"

using namespace fqt;

namespace {

struct CriterionResult {
  int number;
  std::string title;
  bool passed;
  std::string detail;
};

double entangled_pair_fidelity(const Branch& branch, const InputQubit& input) {
  const auto c = branch_pair_amplitudes(branch.conditional, branch.id);
  const Complex overlap =
      std::conj(input.beta) * c[0] + std::conj(input.alpha) * c[3];
  double norm2 = 0.0;
  for (const Complex& amp : c) norm2 += std::norm(amp);
  return std::norm(overlap) / norm2;
}

/// Criteria 1 and 2 share the same 20 inputs x 1000 Haar unitaries.
void criteria_success_and_faithfulness(std::vector<CriterionResult>& out) {
  const auto start = std::chrono::steady_clock::now();
  SplitMix64 stream(mix_seed(1, 0));
  std::vector<InputQubit> inputs;
  for (int i = 0; i < 20; ++i) inputs.push_back(random_input_qubit(stream));

  const DecoderConfig cfg;  // ideal frequency decoder
  double max_probability_error = 0.0;
  double max_infidelity = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const NoiseUnitary u = sample(NoiseFamily::haar(1), trial);
    for (const InputQubit& input : inputs) {
      const PostSelection selection =
          post_select(run_pipeline(input, u, cfg).final_state);
      max_probability_error = std::max(
          max_probability_error, std::abs(selection.kept_probability - 0.5));
      for (const Branch& branch : selection.branches) {
        if (branch.probability <= 1e-20) continue;
        const auto [plus, minus] = correct_and_score(branch, input);
        max_infidelity = std::max(max_infidelity, 1.0 - plus.fidelity);
        max_infidelity = std::max(max_infidelity, 1.0 - minus.fidelity);
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::ostringstream detail1;
  detail1 << "max |kept - 1/2| = " << max_probability_error
          << " over 20 inputs x 1000 Haar unitaries in " << seconds << " s";
  out.push_back({1, "ideal decoder success probability 1/2",
                 max_probability_error < 1e-12 && seconds < 10.0,
                 detail1.str()});

  std::ostringstream detail2;
  detail2 << "max |1 - fidelity| = " << max_infidelity
          << " over all branches and both X outcomes";
  out.push_back({2, "post-selected corrected fidelity 1",
                 max_infidelity < 1e-10, detail2.str()});
}

CriterionResult criterion_equation_regression() {
  SplitMix64 stream(mix_seed(3, 0));
  const DecoderConfig cfg;
  double min_fidelity = 1.0;
  for (int draw = 0; draw < 100; ++draw) {
    const InputQubit input = random_input_qubit(stream);
    const NoiseUnitary u = sample(NoiseFamily::haar(3), draw);
    const PipelineResult result = run_pipeline(input, u, cfg);
    for (const StageSnapshot& snapshot : result.trace) {
      if (snapshot.name == kStagePostPbs2)
        min_fidelity = std::min(
            min_fidelity,
            state_fidelity(snapshot.state, closed_form_post_pbs2(input, u)));
      else if (snapshot.name == kStagePreDecoder)
        min_fidelity = std::min(
            min_fidelity,
            state_fidelity(snapshot.state,
                           closed_form_pre_decoder(input, u, true)));
    }
    const PostSelection actual = post_select(result.final_state);
    const PostSelection expected =
        post_select(closed_form_final(input, u, cfg));
    for (std::size_t b = 0; b < kKeptBranches.size(); ++b) {
      if (expected.branches[b].probability <= 1e-20) continue;
      min_fidelity =
          std::min(min_fidelity,
                   state_fidelity(actual.branches[b].conditional,
                                  expected.branches[b].conditional));
    }
  }
  std::ostringstream detail;
  detail << "min stage/branch fidelity vs transcription = " << min_fidelity
         << " over 100 draws";
  return {3, "traced stages match the transcribed coefficient tables",
          min_fidelity > 1.0 - 1e-10, detail.str()};
}

CriterionResult criterion_fs_scaling() {
  SplitMix64 stream(mix_seed(4, 0));
  double max_error = 0.0;
  double at_065 = 0.0;
  for (double eta : {0.0, 0.25, 0.5, 0.65, 0.75, 1.0}) {
    for (int trial = 0; trial < 25; ++trial) {
      const InputQubit input = random_input_qubit(stream);
      const NoiseUnitary u = sample(NoiseFamily::haar(4), trial);
      DecoderConfig dual;
      dual.fs_efficiency = eta;
      const double dual_success =
          post_select(run_pipeline(input, u, dual).final_state)
              .kept_probability;
      max_error = std::max(max_error,
                           std::abs(dual_success - eta * eta / 2.0));
      if (eta == 0.65) at_065 = dual_success;
      DecoderConfig single;
      single.variant = DecoderVariant::FrequencySingleFs;
      single.fs_efficiency = eta;
      const double single_success =
          post_select(run_pipeline(input, u, single).final_state)
              .kept_probability;
      max_error = std::max(max_error, std::abs(single_success - eta / 2.0));
    }
  }
  std::ostringstream detail;
  detail << "max |success - law| = " << max_error
         << "; dual-FS at eta=0.65 gives " << at_065;
  return {4, "dual-FS success eta^2/2 and single-FS success eta/2",
          max_error < 1e-12 && std::abs(at_065 - 0.21125) < 1e-12,
          detail.str()};
}

CriterionResult criterion_temporal_baseline() {
  SplitMix64 stream(mix_seed(5, 0));
  DecoderConfig temporal;
  temporal.variant = DecoderVariant::TemporalEraser;

  double max_error_eighth = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const InputQubit input = random_input_qubit(stream);
    const NoiseUnitary u = sample(NoiseFamily::haar(5), trial);
    const double success =
        post_select(run_pipeline(input, u, temporal).final_state)
            .kept_probability;
    max_error_eighth = std::max(max_error_eighth, std::abs(success - 0.125));
  }

  // Restricted baseline: same-port branches, +x outcomes only, under
  // collective dephasing.
  ExperimentSpec baseline;
  baseline.input = {{1.0, InputQubit{Complex{0.6, 0.0}, Complex{0.0, 0.8}}}};
  baseline.noise = NoiseFamily::dephasing(0.7);
  baseline.decoder = temporal;
  baseline.trials = 5;
  baseline.filter.branches = {true, true, false, false};
  baseline.filter.outcomes = {true, false};
  const double sixteenth =
      run_experiment(baseline).success_probability.mean;

  ExperimentSpec frequency = baseline;
  frequency.noise = NoiseFamily::haar(5);
  frequency.decoder = DecoderConfig{};
  frequency.filter = PostSelectFilter{};
  const double frequency_success =
      run_experiment(frequency).success_probability.mean;

  const double ratio = frequency_success / sixteenth;
  std::ostringstream detail;
  detail << "max |success - 1/8| = " << max_error_eighth
         << "; restricted dephasing baseline = " << sixteenth
         << "; frequency/baseline ratio = " << ratio;
  return {5, "temporal eraser keeps 1/8; restricted baseline 1/16; ratio 8",
          max_error_eighth < 1e-12 && std::abs(sixteenth - 0.0625) < 1e-12 &&
              std::abs(ratio - 8.0) < 1e-9,
          detail.str()};
}

CriterionResult criterion_entangled_branches() {
  SplitMix64 stream(mix_seed(6, 0));
  double min_fidelity = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const InputQubit input = random_input_qubit(stream);
    const NoiseUnitary u = sample(NoiseFamily::haar(6), trial);
    DecoderConfig cfg;
    cfg.variant = static_cast<DecoderVariant>(trial % 3);
    cfg.fs_efficiency = 0.65;
    const PostSelection selection =
        post_select(run_pipeline(input, u, cfg).final_state);
    for (const Branch& branch : selection.branches) {
      if (branch.probability <= 1e-20) continue;
      min_fidelity =
          std::min(min_fidelity, entangled_pair_fidelity(branch, input));
    }
  }
  std::ostringstream detail;
  detail << "min branch fidelity with alpha|VV> + beta|HH> = " << min_fidelity;
  return {6, "kept branches are the entangled pair state",
          min_fidelity > 1.0 - 1e-10, detail.str()};
}

CriterionResult criterion_oracle_equivalence() {
  SplitMix64 stream(mix_seed(7, 0));
  double max_deviation = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const InputQubit input = random_input_qubit(stream);
    const NoiseUnitary u = sample(NoiseFamily::haar(7), trial);
    DecoderConfig cfg;
    cfg.variant = static_cast<DecoderVariant>(trial % 3);
    cfg.fs_efficiency = stream.next_double();
    cfg.eraser_transmission = stream.next_double();
    cfg.with_hwp0 = trial % 2 == 0;
    const PipelineResult result = run_pipeline(input, u, cfg);
    const PostSelection selection = post_select(result.final_state);
    const DenseState dense = oracle_evolve(input, u, cfg);
    const auto probs = oracle_branch_probabilities(dense);
    double deviation = max_componentwise_deviation(
        dense, dense_from_sparse(result.final_state));
    for (std::size_t b = 0; b < probs.size(); ++b)
      deviation = std::max(
          deviation,
          std::abs(probs[b] - selection.branches[b].probability));
    max_deviation = std::max(max_deviation, deviation);
  }
  std::ostringstream detail;
  detail << "max sparse/dense deviation = " << max_deviation
         << " over 100 random trials";
  return {7, "dense brute-force oracle matches the sparse pipeline",
          max_deviation < 1e-12, detail.str()};
}

CriterionResult criterion_determinism() {
  ExperimentSpec spec;
  spec.input = {{1.0, InputQubit{Complex{0.6, 0.0}, Complex{0.0, 0.8}}}};
  spec.noise = NoiseFamily::haar(99);
  spec.decoder.fs_efficiency = 0.65;
  spec.trials = 60;
  spec.oracle_check = true;
  spec.per_trial_records = true;

  const auto dir = std::filesystem::temp_directory_path() / "fqtsim_accept";
  std::filesystem::create_directories(dir);
  auto emit = [&](const char* name, int jobs) {
    const std::string content = report_to_json(run_experiment(spec, jobs), spec);
    std::ofstream out(dir / name, std::ios::binary);
    out << content;
    return content;
  };
  const std::string serial = emit("jobs1.json", 1);
  const std::string four = emit("jobs4.json", 4);
  const std::string eight = emit("jobs8.json", 8);

  std::ifstream a(dir / "jobs1.json", std::ios::binary);
  std::ifstream b(dir / "jobs4.json", std::ios::binary);
  std::stringstream file_a, file_b;
  file_a << a.rdbuf();
  file_b << b.rdbuf();

  const bool passed = serial == four && serial == eight &&
                      file_a.str() == file_b.str() && !serial.empty();
  std::ostringstream detail;
  detail << "report bytes identical for jobs in {1, 4, 8}: "
         << (passed ? "yes" : "no");
  return {8, "reports are byte-identical regardless of --jobs", passed,
          detail.str()};
}

}  // namespace

int main() {
  std::vector<CriterionResult> results;
  criteria_success_and_faithfulness(results);
  results.push_back(criterion_equation_regression());
  results.push_back(criterion_fs_scaling());
  results.push_back(criterion_temporal_baseline());
  results.push_back(criterion_entangled_branches());
  results.push_back(criterion_oracle_equivalence());
  results.push_back(criterion_determinism());

  bool all_passed = true;
  for (const CriterionResult& result : results) {
    std::printf("[%s] criterion %d: %s — %s\n",
                result.passed ? "PASS" : "FAIL", result.number,
                result.title.c_str(), result.detail.c_str());
    all_passed = all_passed && result.passed;
  }
  std::printf("%d/%zu acceptance criteria passed\n",
              static_cast<int>(
                  std::count_if(results.begin(), results.end(),
                                [](const auto& r) { return r.passed; })),
              results.size());
  return all_passed ? 0 : 1;
}
