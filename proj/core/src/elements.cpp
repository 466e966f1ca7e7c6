#include "fqt/elements.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fqt {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

[[noreturn]] void throw_stage_error(const char* element, const PhotonBasis& b) {
  std::ostringstream out;
  out << element << ": amplitude found on path outside the element's inputs: "
      << to_string(b);
  throw StageError(out.str());
}

}  // namespace

void NoiseUnitary::validate(double tol) const {
  const double defect = unitarity_defect();
  if (defect > tol) {
    std::ostringstream out;
    out << "noise matrix is not unitary (max |U†U - I| = " << defect
        << ")";
    throw std::invalid_argument(out.str());
  }
}

std::string to_string(XOutcome o) {
  return o == XOutcome::PlusX ? "plus_x" : "minus_x";
}

TwoPhotonState pbs(const TwoPhotonState& state, Path in1,
                   std::optional<Path> in2, std::pair<Path, Path> out,
                   const PathSet& passthrough) {
  auto route = [&](const PhotonBasis& b) -> PhotonBasis {
    PhotonBasis image = b;
    if (b.path == in1) {
      image.path = b.pol == Pol::H ? out.first : out.second;
    } else if (in2 && b.path == *in2) {
      image.path = b.pol == Pol::H ? out.second : out.first;
    } else if (!passthrough.contains(b.path)) {
      throw_stage_error("pbs", b);
    }
    return image;
  };
  TwoPhotonState result = relabel(state, Slot::R, route);
  return relabel(result, Slot::S, route);
}

SingleQubitOp hwp_matrix(double theta_deg) {
  const double angle = 2.0 * theta_deg * std::numbers::pi / 180.0;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return SingleQubitOp{{c, s, s, -c}};
}

TwoPhotonState hwp(const TwoPhotonState& state, const PathSet& path_filter,
                   double theta_deg) {
  const SingleQubitOp op = hwp_matrix(theta_deg);
  TwoPhotonState result =
      apply_single_photon_op(state, Slot::R, path_filter, op);
  return apply_single_photon_op(result, Slot::S, path_filter, op);
}

TwoPhotonState fbs(const TwoPhotonState& state, Path in_path, Path out_up,
                   Path out_down) {
  auto route = [&](const PhotonBasis& b) -> PhotonBasis {
    if (b.path != in_path) return b;
    if (b.freq == Freq::OmegaCommon)
      throw StageError(
          "fbs: omega_common photon reached a frequency beam splitter at " +
          to_string(in_path));
    PhotonBasis image = b;
    image.path = b.freq == Freq::OmegaR ? out_up : out_down;
    return image;
  };
  TwoPhotonState result = relabel(state, Slot::R, route);
  return relabel(result, Slot::S, route);
}

namespace {

TwoPhotonState attenuate(const TwoPhotonState& state, const char* element,
                         const PathSet& path_filter, double value,
                         std::optional<Freq> target) {
  if (value < 0.0 || value > 1.0) {
    std::ostringstream out;
    out << element << ": parameter must lie in [0, 1] (got " << value << ")";
    throw std::invalid_argument(out.str());
  }
  const double factor = std::sqrt(value);
  auto rule =
      [&](const PhotonBasis& b) -> std::pair<PhotonBasis, Complex> {
    if (!path_filter.contains(b.path)) return {b, Complex{1.0, 0.0}};
    PhotonBasis image = b;
    if (target) image.freq = *target;
    return {image, Complex{factor, 0.0}};
  };
  TwoPhotonState result = transform_slot(state, Slot::R, rule);
  return transform_slot(result, Slot::S, rule);
}

}  // namespace

TwoPhotonState frequency_shifter(const TwoPhotonState& state,
                                 const PathSet& path_filter, double efficiency,
                                 Freq target) {
  return attenuate(state, "frequency_shifter", path_filter, efficiency,
                   target);
}

TwoPhotonState temporal_eraser(const TwoPhotonState& state,
                               const PathSet& path_filter,
                               double transmission) {
  return attenuate(state, "temporal_eraser", path_filter, transmission,
                   std::nullopt);
}

std::pair<MeasurementOutcome, MeasurementOutcome> x_measure(
    const TwoPhotonState& state, Path path) {
  auto project = [&](double sign) -> MeasurementOutcome {
    // <+-x|H> = 1/sqrt(2), <+-x|V> = +-1/sqrt(2).
    // Collapse coefficients are accumulated with the measured photon's
    // polarization cleared, so that H and V components of the same photon
    // interfere before the probability is taken.
    std::map<BasisPair, Complex> reduced;
    for (const auto& [key, amp] : state.amplitudes()) {
      const bool r_here = key.r.path == path;
      const bool s_here = key.s.path == path;
      if (r_here == s_here)
        throw StageError(
            "x_measure: each amplitude must place exactly one photon on " +
            to_string(path));
      const Slot measured = r_here ? Slot::R : Slot::S;
      const Pol pol = key.slot(measured).pol;
      const double coeff =
          pol == Pol::H ? kInvSqrt2 : sign * kInvSqrt2;
      BasisPair stripped = key;
      stripped.slot(measured).pol = Pol::H;
      reduced[stripped] += amp * coeff;
    }

    double probability = 0.0;
    for (const auto& [key, amp] : reduced) probability += std::norm(amp);

    MeasurementOutcome outcome;
    outcome.basis_vector = sign > 0 ? XOutcome::PlusX : XOutcome::MinusX;
    outcome.probability = probability;
    if (probability > 0.0) {
      const double scale = 1.0 / std::sqrt(probability);
      for (const auto& [key, amp] : reduced) {
        const Slot measured = key.r.path == path ? Slot::R : Slot::S;
        for (Pol pol : {Pol::H, Pol::V}) {
          BasisPair collapsed = key;
          collapsed.slot(measured).pol = pol;
          const double coeff =
              pol == Pol::H ? kInvSqrt2 : sign * kInvSqrt2;
          outcome.collapsed_state.add(collapsed, amp * coeff * scale);
        }
      }
    }
    return outcome;
  };

  return {project(+1.0), project(-1.0)};
}

}  // namespace fqt
