#include "fqt/validate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fqt/closed_form.hpp"

namespace fqt {

InputQubit random_input_qubit(SplitMix64& stream) {
  const double polar = std::acos(1.0 - 2.0 * stream.next_double());
  const double phase_a = 2.0 * std::numbers::pi * stream.next_double();
  const double phase_b = 2.0 * std::numbers::pi * stream.next_double();
  const Complex alpha =
      std::cos(polar / 2.0) * std::exp(Complex{0.0, phase_a});
  const Complex beta = std::sin(polar / 2.0) * std::exp(Complex{0.0, phase_b});
  return {alpha, beta};
}

namespace {

std::string with_observed(const char* label, double value) {
  std::ostringstream out;
  out << label << " = " << value;
  return out.str();
}

CheckResult check_equation_regression() {
  SplitMix64 stream(mix_seed(11, 0));
  DecoderConfig cfg;  // ideal dual-FS with HWP0
  double min_fidelity = 1.0;
  for (int draw = 0; draw < 100; ++draw) {
    const InputQubit input = random_input_qubit(stream);
    const NoiseUnitary u = sample(NoiseFamily::haar(11), draw);
    const PipelineResult result = run_pipeline(input, u, cfg);
    for (const StageSnapshot& snapshot : result.trace) {
      if (snapshot.name == kStagePostPbs2)
        min_fidelity = std::min(
            min_fidelity,
            state_fidelity(snapshot.state, closed_form_post_pbs2(input, u)));
      else if (snapshot.name == kStagePreDecoder)
        min_fidelity =
            std::min(min_fidelity,
                     state_fidelity(snapshot.state,
                                    closed_form_pre_decoder(input, u, true)));
    }
    const TwoPhotonState reference = closed_form_final(input, u, cfg);
    const PostSelection expected = post_select(reference);
    const PostSelection actual = post_select(result.final_state);
    for (std::size_t b = 0; b < kKeptBranches.size(); ++b) {
      if (expected.branches[b].probability <= 1e-20) continue;
      min_fidelity =
          std::min(min_fidelity,
                   state_fidelity(actual.branches[b].conditional,
                                  expected.branches[b].conditional));
    }
  }
  return {"equation_regression", min_fidelity > 1.0 - 1e-10,
          with_observed("min stage/branch fidelity", min_fidelity)};
}

CheckResult check_success_half_and_faithfulness(bool faithfulness) {
  SplitMix64 stream(mix_seed(12, 0));
  DecoderConfig cfg;
  double max_probability_error = 0.0;
  double max_infidelity = 0.0;
  const InputQubit inputs[2] = {random_input_qubit(stream),
                                random_input_qubit(stream)};
  for (int trial = 0; trial < 1000; ++trial) {
    const NoiseUnitary u = sample(NoiseFamily::haar(12), trial);
    for (const InputQubit& input : inputs) {
      const PipelineResult result = run_pipeline(input, u, cfg);
      const PostSelection selection = post_select(result.final_state);
      max_probability_error = std::max(
          max_probability_error, std::abs(selection.kept_probability - 0.5));
      if (!faithfulness) continue;
      for (const Branch& branch : selection.branches) {
        if (branch.probability <= 1e-20) continue;
        const auto [plus, minus] = correct_and_score(branch, input);
        max_infidelity = std::max(max_infidelity, 1.0 - plus.fidelity);
        max_infidelity = std::max(max_infidelity, 1.0 - minus.fidelity);
      }
    }
  }
  if (faithfulness)
    return {"faithfulness", max_infidelity < 1e-10,
            with_observed("max |1 - fidelity|", max_infidelity)};
  return {"success_probability_half", max_probability_error < 1e-12,
          with_observed("max |kept - 0.5|", max_probability_error)};
}

CheckResult check_oracle_equivalence() {
  SplitMix64 stream(mix_seed(13, 0));
  double max_deviation = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const InputQubit input = random_input_qubit(stream);
    const NoiseUnitary u = sample(NoiseFamily::haar(13), trial);
    DecoderConfig cfg;
    switch (trial % 3) {
      case 0:
        cfg.variant = DecoderVariant::FrequencyDualFs;
        cfg.fs_efficiency = stream.next_double();
        break;
      case 1:
        cfg.variant = DecoderVariant::FrequencySingleFs;
        cfg.fs_efficiency = stream.next_double();
        break;
      default:
        cfg.variant = DecoderVariant::TemporalEraser;
        cfg.eraser_transmission = stream.next_double();
        break;
    }
    cfg.with_hwp0 = (trial % 2) == 0;
    const PipelineResult result = run_pipeline(input, u, cfg);
    const PostSelection selection = post_select(result.final_state);
    const DenseState dense = oracle_evolve(input, u, cfg);
    double deviation = max_componentwise_deviation(
        dense, dense_from_sparse(result.final_state));
    const auto oracle_probs = oracle_branch_probabilities(dense);
    for (std::size_t b = 0; b < oracle_probs.size(); ++b)
      deviation = std::max(
          deviation,
          std::abs(oracle_probs[b] - selection.branches[b].probability));
    max_deviation = std::max(max_deviation, deviation);
  }
  return {"oracle_equivalence", max_deviation < 1e-12,
          with_observed("max deviation", max_deviation)};
}

CheckResult check_haar_moments() {
  constexpr int kSamples = 100000;
  const NoiseFamily family = NoiseFamily::haar(14);
  double sum2 = 0.0, sum4 = 0.0, sumsq2 = 0.0, sumsq4 = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double p = std::norm(sample(family, i).delta1);
    sum2 += p;
    sum4 += p * p;
    sumsq2 += p * p;
    sumsq4 += p * p * p * p;
  }
  const double n = kSamples;
  const double m2 = sum2 / n;
  const double m4 = sum4 / n;
  const double se2 = std::sqrt((sumsq2 / n - m2 * m2) / n);
  const double se4 = std::sqrt((sumsq4 / n - m4 * m4) / n);
  const bool pass2 = std::abs(m2 - 0.5) < 3.0 * se2;
  const bool pass4 = std::abs(m4 - 1.0 / 3.0) < 4.0 * se4;
  std::ostringstream detail;
  detail << "E|delta1|^2 = " << m2 << " (se " << se2 << "), E|delta1|^4 = "
         << m4 << " (se " << se4 << ")";
  return {"haar_moments", pass2 && pass4, detail.str()};
}

CheckResult check_fs_scaling() {
  SplitMix64 stream(mix_seed(15, 0));
  double max_error = 0.0;
  for (double eta : {0.0, 0.25, 0.5, 0.65, 0.75, 1.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const InputQubit input = random_input_qubit(stream);
      const NoiseUnitary u = sample(NoiseFamily::haar(15), trial);
      DecoderConfig dual;
      dual.fs_efficiency = eta;
      const PostSelection dual_sel =
          post_select(run_pipeline(input, u, dual).final_state);
      max_error = std::max(
          max_error, std::abs(dual_sel.kept_probability - eta * eta / 2.0));
      DecoderConfig single;
      single.variant = DecoderVariant::FrequencySingleFs;
      single.fs_efficiency = eta;
      const PostSelection single_sel =
          post_select(run_pipeline(input, u, single).final_state);
      max_error = std::max(
          max_error, std::abs(single_sel.kept_probability - eta / 2.0));
    }
  }
  return {"fs_scaling", max_error < 1e-12,
          with_observed("max |success - law|", max_error)};
}

CheckResult check_temporal_eighth() {
  SplitMix64 stream(mix_seed(16, 0));
  DecoderConfig cfg;
  cfg.variant = DecoderVariant::TemporalEraser;
  double max_error = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const InputQubit input = random_input_qubit(stream);
    const NoiseUnitary u = sample(NoiseFamily::haar(16), trial);
    const PostSelection selection =
        post_select(run_pipeline(input, u, cfg).final_state);
    max_error =
        std::max(max_error, std::abs(selection.kept_probability - 0.125));
  }
  return {"temporal_eraser_eighth", max_error < 1e-12,
          with_observed("max |success - 1/8|", max_error)};
}

}  // namespace

std::vector<CheckResult> run_validation_suite() {
  return {
      check_equation_regression(),
      check_success_half_and_faithfulness(false),
      check_success_half_and_faithfulness(true),
      check_oracle_equivalence(),
      check_haar_moments(),
      check_fs_scaling(),
      check_temporal_eighth(),
  };
}

}  // namespace fqt
