#pragma once

#include <optional>
#include <utility>

#include "fqt/state.hpp"

namespace fqt {

/// Collective-noise unitary of the channel, stored by its action columns:
/// |H> -> delta1|H> + eta1|V>,  |V> -> delta2|H> + eta2|V>.
struct NoiseUnitary {
  Complex delta1{1.0, 0.0};
  Complex eta1{0.0, 0.0};
  Complex delta2{0.0, 0.0};
  Complex eta2{1.0, 0.0};

  static NoiseUnitary identity() { return {}; }

  SingleQubitOp op() const {
    return SingleQubitOp{{delta1, delta2, eta1, eta2}};
  }

  double unitarity_defect() const { return op().unitarity_defect(); }

  /// Throws std::invalid_argument when U†U deviates from I beyond tol.
  void validate(double tol = 1e-10) const;
};

enum class XOutcome : std::uint8_t { PlusX, MinusX };

std::string to_string(XOutcome o);

struct MeasurementOutcome {
  XOutcome basis_vector;
  /// Absolute weight; the two outcomes sum to the pre-measurement norm.
  double probability = 0.0;
  /// Renormalized post-measurement state; empty when probability is 0.
  TwoPhotonState collapsed_state;
};

/// Polarizing beam splitter, phase-free, transmitting H and reflecting V.
/// With inputs (in1, in2) and outputs (out1, out2):
///   in1:H -> out1, in1:V -> out2, in2:H -> out2, in2:V -> out1.
/// Amplitudes on `passthrough` paths are left alone; any other occupied path
/// violates the stage contract and throws StageError.
TwoPhotonState pbs(const TwoPhotonState& state, Path in1,
                   std::optional<Path> in2, std::pair<Path, Path> out,
                   const PathSet& passthrough = {});

/// Half-wave plate at `theta_deg` degrees on the paths in `path_filter`:
/// [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
TwoPhotonState hwp(const TwoPhotonState& state, const PathSet& path_filter,
                   double theta_deg);

SingleQubitOp hwp_matrix(double theta_deg);

/// Frequency beam splitter on `in_path`: omega_r goes to `out_up`, omega_s
/// to `out_down`. A photon already at omega_common has no business here and
/// throws StageError.
TwoPhotonState fbs(const TwoPhotonState& state, Path in_path, Path out_up,
                   Path out_down);

/// Frequency shifter: photons on `path_filter` have their frequency label
/// rewritten to `target` and their amplitude multiplied by sqrt(efficiency).
TwoPhotonState frequency_shifter(const TwoPhotonState& state,
                                 const PathSet& path_filter, double efficiency,
                                 Freq target = Freq::OmegaCommon);

/// Temporal-distinguishability eraser: same subnormalization contract as the
/// frequency shifter (amplitude factor sqrt(transmission)) with no frequency
/// rewrite; the erased temporal label is not modeled explicitly.
TwoPhotonState temporal_eraser(const TwoPhotonState& state,
                               const PathSet& path_filter,
                               double transmission);

/// X-basis measurement of the photon occupying `path`. Every amplitude must
/// place exactly one photon there (the slot is resolved per amplitude, so a
/// branch may hold either photon at the measured port term by term).
/// Returns the (+x, -x) outcomes; probabilities sum to the input norm.
std::pair<MeasurementOutcome, MeasurementOutcome> x_measure(
    const TwoPhotonState& state, Path path);

}  // namespace fqt
