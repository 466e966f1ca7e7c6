#include "fqt/protocol.hpp"

#include <cmath>
#include <sstream>

namespace fqt {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

const PathSet kChannelPaths{Path::Ch1, Path::Ch2};
const PathSet kPortPaths{Path::P3, Path::P4};
const PathSet kDecoderUpPaths{Path::P3Up, Path::P4Up};
const PathSet kDecoderAllPaths{Path::P3Up, Path::P3Down, Path::P4Up,
                               Path::P4Down};
const PathSet kOutputPaths{Path::Out3X, Path::Out3Y, Path::Out4X, Path::Out4Y};

void require_support(const TwoPhotonState& state, const PathSet& allowed,
                     const char* stage) {
  if (!state.supported_on(allowed)) {
    std::ostringstream out;
    out << stage << ": state occupies a path outside this stage's inputs";
    throw StageError(out.str());
  }
}

}  // namespace

InputQubit::InputQubit(Complex a, Complex b) : alpha(a), beta(b) {
  const double norm2 = std::norm(a) + std::norm(b);
  if (std::abs(norm2 - 1.0) > 1e-9) {
    std::ostringstream out;
    out << "input qubit must be normalized: |alpha|^2 + |beta|^2 = " << norm2;
    throw std::invalid_argument(out.str());
  }
}

std::string to_string(DecoderVariant v) {
  switch (v) {
    case DecoderVariant::FrequencyDualFs:
      return "frequency_dual_fs";
    case DecoderVariant::FrequencySingleFs:
      return "frequency_single_fs";
    case DecoderVariant::TemporalEraser:
      return "temporal_eraser";
  }
  return "?";
}

void DecoderConfig::validate() const {
  if (fs_efficiency < 0.0 || fs_efficiency > 1.0)
    throw std::invalid_argument("decoder eta must lie in [0, 1]");
  if (eraser_transmission < 0.0 || eraser_transmission > 1.0)
    throw std::invalid_argument("decoder t must lie in [0, 1]");
}

std::string to_string(Correction c) {
  switch (c) {
    case Correction::Identity:
      return "identity";
    case Correction::SigmaX:
      return "sigma_x";
    case Correction::MinusISigmaY:
      return "minus_i_sigma_y";
    case Correction::SigmaZ:
      return "sigma_z";
  }
  return "?";
}

SingleQubitOp correction_matrix(Correction c) {
  switch (c) {
    case Correction::Identity:
      return SingleQubitOp::identity();
    case Correction::SigmaX:
      return SingleQubitOp::sigma_x();
    case Correction::MinusISigmaY:
      return SingleQubitOp::minus_i_sigma_y();
    case Correction::SigmaZ:
      return SingleQubitOp::sigma_z();
  }
  throw std::invalid_argument("unknown correction");
}

std::string to_string(BranchId id) {
  auto short_name = [](Path p) -> std::string {
    switch (p) {
      case Path::Out3X:
        return "3x";
      case Path::Out3Y:
        return "3y";
      case Path::Out4X:
        return "4x";
      case Path::Out4Y:
        return "4y";
      default:
        return to_string(p);
    }
  };
  return short_name(id.x_out) + "_" + short_name(id.y_out);
}

TwoPhotonState encode(const InputQubit& input) {
  std::map<PhotonBasis, Complex> r_terms{
      {{Pol::H, Freq::OmegaR, Path::SourceR}, Complex{kInvSqrt2, 0.0}},
      {{Pol::V, Freq::OmegaR, Path::SourceR}, Complex{kInvSqrt2, 0.0}},
  };
  std::map<PhotonBasis, Complex> s_terms{
      {{Pol::H, Freq::OmegaS, Path::SourceS}, input.alpha},
      {{Pol::V, Freq::OmegaS, Path::SourceS}, input.beta},
  };
  TwoPhotonState state = TwoPhotonState::product(r_terms, s_terms);
  state = pbs(state, Path::SourceR, std::nullopt, {Path::Ch1, Path::Ch2},
              PathSet{Path::SourceS});
  state = pbs(state, Path::SourceS, std::nullopt, {Path::Ch1, Path::Ch2},
              PathSet{Path::Ch1, Path::Ch2});
  return state;
}

TwoPhotonState apply_collective_noise(const TwoPhotonState& state,
                                      const NoiseUnitary& u) {
  require_support(state, kChannelPaths, "apply_collective_noise");
  TwoPhotonState result =
      apply_single_photon_op(state, Slot::R, kChannelPaths, u.op());
  return apply_single_photon_op(result, Slot::S, kChannelPaths, u.op());
}

PipelineResult run_pipeline(const InputQubit& input, const NoiseUnitary& u,
                            const DecoderConfig& cfg) {
  cfg.validate();
  PipelineResult result;
  auto snapshot = [&result](const char* name, const TwoPhotonState& state) {
    result.trace.push_back({name, state});
  };

  TwoPhotonState state = encode(input);
  snapshot(kStageEncode, state);

  state = apply_collective_noise(state, u);
  snapshot(kStageNoise, state);

  state = pbs(state, Path::Ch1, Path::Ch2, {Path::P3, Path::P4});
  snapshot(kStagePostPbs2, state);

  if (cfg.with_hwp0) state = hwp(state, PathSet{Path::P3}, 45.0);
  snapshot(kStagePreDecoder, state);

  require_support(state, kPortPaths, "decoder");
  state = fbs(state, Path::P3, Path::P3Up, Path::P3Down);
  state = fbs(state, Path::P4, Path::P4Up, Path::P4Down);
  state = hwp(state, kDecoderUpPaths, 45.0);
  switch (cfg.variant) {
    case DecoderVariant::FrequencyDualFs:
      state = frequency_shifter(state, kDecoderAllPaths, cfg.fs_efficiency,
                                Freq::OmegaCommon);
      break;
    case DecoderVariant::FrequencySingleFs:
      // Only the reference photon is shifted, onto the payload's frequency.
      state = frequency_shifter(state, kDecoderUpPaths, cfg.fs_efficiency,
                                Freq::OmegaS);
      break;
    case DecoderVariant::TemporalEraser:
      state = temporal_eraser(state, kDecoderAllPaths,
                              cfg.eraser_transmission);
      break;
  }
  state = pbs(state, Path::P3Up, Path::P3Down, {Path::Out3Y, Path::Out3X},
              PathSet{Path::P4Up, Path::P4Down});
  state = pbs(state, Path::P4Up, Path::P4Down, {Path::Out4Y, Path::Out4X},
              PathSet{Path::Out3X, Path::Out3Y});
  require_support(state, kOutputPaths, "decoder output");
  if (state.squared_norm() > 1.0 + 1e-12)
    throw StageError("decoder output norm exceeds 1");
  snapshot(kStageFinal, state);

  result.final_state = std::move(state);
  return result;
}

PostSelection post_select(const TwoPhotonState& final_state) {
  require_support(final_state, kOutputPaths, "post_select");
  PostSelection selection;
  selection.total_norm = final_state.squared_norm();
  for (std::size_t i = 0; i < kKeptBranches.size(); ++i) {
    const BranchId id = kKeptBranches[i];
    ConditionalBranch cond = conditional_branch(
        final_state, [id](Path p) { return p == id.x_out; },
        [id](Path p) { return p == id.y_out; });
    selection.branches[i] = {id, cond.probability, std::move(cond.state)};
    selection.kept_probability += cond.probability;
  }
  selection.discard_probability =
      std::max(0.0, selection.total_norm - selection.kept_probability);
  return selection;
}

std::array<Complex, 4> branch_pair_amplitudes(const TwoPhotonState& state,
                                              BranchId id) {
  std::array<Complex, 4> c{};
  for (const auto& [key, amp] : state.amplitudes()) {
    int x_pol, y_pol;
    if (key.r.path == id.x_out && key.s.path == id.y_out) {
      x_pol = static_cast<int>(key.r.pol);
      y_pol = static_cast<int>(key.s.pol);
    } else if (key.r.path == id.y_out && key.s.path == id.x_out) {
      x_pol = static_cast<int>(key.s.pol);
      y_pol = static_cast<int>(key.r.pol);
    } else {
      throw StageError("branch_pair_amplitudes: amplitude outside branch " +
                       to_string(id));
    }
    c[2 * x_pol + y_pol] += amp;
  }
  return c;
}

namespace {

struct MeasuredBranch {
  double probability = 0.0;  // conditional on the branch
  PolVector kept{};          // normalized x-output photon state
};

MeasuredBranch measure_y_photon(const std::array<Complex, 4>& c,
                                XOutcome outcome) {
  const double sign = outcome == XOutcome::PlusX ? 1.0 : -1.0;
  MeasuredBranch result;
  PolVector projected{};
  for (int a = 0; a < 2; ++a)
    projected[a] = (c[2 * a + 0] + sign * c[2 * a + 1]) * kInvSqrt2;
  result.probability = squared_norm(projected);
  if (result.probability > 0.0) {
    const double scale = 1.0 / std::sqrt(result.probability);
    result.kept = {projected[0] * scale, projected[1] * scale};
  }
  return result;
}

TrialOutcome score_outcome(const Branch& branch, const InputQubit& input,
                           XOutcome outcome, Correction correction) {
  const auto c = branch_pair_amplitudes(branch.conditional, branch.id);
  const MeasuredBranch measured = measure_y_photon(c, outcome);
  TrialOutcome trial;
  trial.kept = true;
  trial.branch = branch.id;
  trial.measurement = outcome;
  trial.correction = correction;
  trial.joint_probability = branch.probability * measured.probability;
  if (measured.probability > 0.0) {
    trial.output_state = correction_matrix(correction).apply(measured.kept);
    trial.fidelity = fidelity_pure(input.vec(), trial.output_state);
  }
  return trial;
}

}  // namespace

std::pair<TrialOutcome, TrialOutcome> correct_and_score(
    const Branch& branch, const InputQubit& input) {
  return {
      score_outcome(branch, input, XOutcome::PlusX, Correction::SigmaX),
      score_outcome(branch, input, XOutcome::MinusX,
                    Correction::MinusISigmaY),
  };
}

std::pair<Correction, double> analyze_recoverability(
    const Branch& branch, XOutcome outcome, const InputQubit& input,
    std::span<const Correction> candidates) {
  if (candidates.empty())
    throw std::invalid_argument(
        "analyze_recoverability: candidate set must not be empty");
  Correction best = candidates.front();
  double best_fidelity = -1.0;
  for (Correction candidate : candidates) {
    const TrialOutcome trial = score_outcome(branch, input, outcome, candidate);
    if (trial.fidelity > best_fidelity + kAlgebraTol) {
      best = candidate;
      best_fidelity = trial.fidelity;
    }
  }
  return {best, std::max(best_fidelity, 0.0)};
}

}  // namespace fqt
