#pragma once

#include <cstdint>

#include "fqt/elements.hpp"

namespace fqt {

enum class NoiseKind : std::uint8_t { Haar, Dephasing, Rotation, BitFlip, Fixed };

std::string to_string(NoiseKind k);

/// A generator of collective-noise unitaries. Haar draws are counter-based:
/// the matrix for a trial depends only on (seed, trial_index), so parallel
/// execution cannot reorder the randomness. The other kinds are constant
/// across trials.
struct NoiseFamily {
  NoiseKind kind = NoiseKind::Haar;
  double phi = 0.0;             // dephasing phase, radians
  double theta = 0.0;           // rotation angle, radians
  NoiseUnitary fixed_matrix{};  // kind == Fixed
  std::uint64_t seed = 0;       // used by Haar only

  static NoiseFamily haar(std::uint64_t seed);
  static NoiseFamily dephasing(double phi);
  static NoiseFamily rotation(double theta);
  static NoiseFamily bitflip();
  /// Validates unitarity of the supplied matrix (std::invalid_argument).
  static NoiseFamily fixed(const NoiseUnitary& u);
};

/// Deterministic per-trial draw: same (family, trial_index) always yields the
/// same matrix, bitwise.
NoiseUnitary sample(const NoiseFamily& family, std::uint64_t trial_index);

/// SplitMix64 stream used for the Haar draws; exposed for tests.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next();

  /// Uniform double in [0, 1).
  double next_double();

  /// Uniform double in (0, 1].
  double next_double_open_zero();

 private:
  std::uint64_t state_;
};

/// Two finalizer rounds over (seed, counter); seeds the per-trial stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter);

}  // namespace fqt
