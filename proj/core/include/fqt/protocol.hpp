#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fqt/elements.hpp"
#include "fqt/noise.hpp"

namespace fqt {

/// The payload qubit alpha|H> + beta|V>. Throws std::invalid_argument unless
/// |alpha|^2 + |beta|^2 = 1 within 1e-9.
struct InputQubit {
  Complex alpha;
  Complex beta;

  InputQubit(Complex a, Complex b);

  PolVector vec() const { return {alpha, beta}; }
};

enum class DecoderVariant : std::uint8_t {
  FrequencyDualFs,
  FrequencySingleFs,
  TemporalEraser,
};

std::string to_string(DecoderVariant v);

struct DecoderConfig {
  DecoderVariant variant = DecoderVariant::FrequencyDualFs;
  /// Frequency-shifter efficiency; ignored by the temporal variant.
  double fs_efficiency = 1.0;
  /// Per-photon eraser transmission; ignored by the frequency variants.
  double eraser_transmission = 0.5;
  /// The extra half-wave plate on port 3 between PBS2 and the decoders.
  bool with_hwp0 = true;

  void validate() const;  // throws std::invalid_argument on bad parameters
};

enum class Correction : std::uint8_t { Identity, SigmaX, MinusISigmaY, SigmaZ };

std::string to_string(Correction c);
SingleQubitOp correction_matrix(Correction c);

/// A kept coincidence pattern: one photon in an x output, one in a y output.
struct BranchId {
  Path x_out;
  Path y_out;

  auto operator<=>(const BranchId&) const = default;
};

inline constexpr std::array<BranchId, 4> kKeptBranches = {{
    {Path::Out3X, Path::Out3Y},
    {Path::Out4X, Path::Out4Y},
    {Path::Out3X, Path::Out4Y},
    {Path::Out4X, Path::Out3Y},
}};

std::string to_string(BranchId id);  // e.g. "3x_3y"

/// Trace stage names, in pipeline order.
inline constexpr const char* kStageEncode = "encode";
inline constexpr const char* kStageNoise = "noise";
inline constexpr const char* kStagePostPbs2 = "post-pbs2";
inline constexpr const char* kStagePreDecoder = "pre-decoder";
inline constexpr const char* kStageFinal = "final";

struct StageSnapshot {
  std::string name;
  TwoPhotonState state;
};

struct PipelineResult {
  TwoPhotonState final_state;
  std::vector<StageSnapshot> trace;
};

/// Reference photon (H+V)/sqrt(2) at omega_r and payload photon at omega_s,
/// both split by PBS1 into the ch1/ch2 components.
TwoPhotonState encode(const InputQubit& input);

/// Applies the same unitary to both photons on both channels. Throws
/// StageError unless the state is supported on {ch1, ch2}.
TwoPhotonState apply_collective_noise(const TwoPhotonState& state,
                                      const NoiseUnitary& u);

/// encode -> noise -> PBS2 -> HWP0 -> decoder, with a snapshot after each
/// stage ("encode", "noise", "post-pbs2", "pre-decoder", "final").
PipelineResult run_pipeline(const InputQubit& input, const NoiseUnitary& u,
                            const DecoderConfig& cfg);

struct Branch {
  BranchId id;
  double probability = 0.0;
  TwoPhotonState conditional;  // renormalized; empty when probability is 0
};

struct PostSelection {
  std::array<Branch, 4> branches;
  double kept_probability = 0.0;
  double discard_probability = 0.0;
  double total_norm = 0.0;
};

/// Splits a final-stage state into the four x/y coincidence branches; the
/// rest of the norm is the discard weight.
PostSelection post_select(const TwoPhotonState& final_state);

struct TrialOutcome {
  bool kept = false;
  BranchId branch{};
  XOutcome measurement = XOutcome::PlusX;
  Correction correction = Correction::Identity;
  /// branch probability x conditional outcome probability.
  double joint_probability = 0.0;
  /// Polarization state of the surviving photon after correction.
  PolVector output_state{};
  double fidelity = 0.0;
};

/// Coherent polarization amplitudes of a kept branch, ordered by output port:
/// index 2*a + b holds the amplitude of |a> at the x output and |b> at the y
/// output. Slot assignments are merged; by this stage the decoder has erased
/// the photons' distinguishing label.
std::array<Complex, 4> branch_pair_amplitudes(const TwoPhotonState& state,
                                              BranchId id);

/// Measures the y-output photon in the X basis and applies the fixed
/// correction table (+x -> sigma_x, -x -> -i sigma_y) to the x-output photon.
std::pair<TrialOutcome, TrialOutcome> correct_and_score(
    const Branch& branch, const InputQubit& input);

/// Scores every candidate correction on the given measurement outcome and
/// returns the best (ties broken by candidate order).
std::pair<Correction, double> analyze_recoverability(
    const Branch& branch, XOutcome outcome, const InputQubit& input,
    std::span<const Correction> candidates);

}  // namespace fqt
