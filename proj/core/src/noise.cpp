#include "fqt/noise.hpp"

#include <cmath>
#include <numbers>

namespace fqt {

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::Haar:
      return "haar";
    case NoiseKind::Dephasing:
      return "dephasing";
    case NoiseKind::Rotation:
      return "rotation";
    case NoiseKind::BitFlip:
      return "bitflip";
    case NoiseKind::Fixed:
      return "fixed";
  }
  return "?";
}

NoiseFamily NoiseFamily::haar(std::uint64_t seed) {
  NoiseFamily f;
  f.kind = NoiseKind::Haar;
  f.seed = seed;
  return f;
}

NoiseFamily NoiseFamily::dephasing(double phi) {
  NoiseFamily f;
  f.kind = NoiseKind::Dephasing;
  f.phi = phi;
  return f;
}

NoiseFamily NoiseFamily::rotation(double theta) {
  NoiseFamily f;
  f.kind = NoiseKind::Rotation;
  f.theta = theta;
  return f;
}

NoiseFamily NoiseFamily::bitflip() {
  NoiseFamily f;
  f.kind = NoiseKind::BitFlip;
  return f;
}

NoiseFamily NoiseFamily::fixed(const NoiseUnitary& u) {
  u.validate();
  NoiseFamily f;
  f.kind = NoiseKind::Fixed;
  f.fixed_matrix = u;
  return f;
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_double_open_zero() {
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  auto finalize = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return finalize(finalize(seed + 0x9E3779B97F4A7C15ULL) ^
                  finalize(counter + 0xD1B54A32D192ED03ULL));
}

namespace {

/// Haar draw on SU(2): the first column (a, b) is uniform on the unit sphere
/// in C^2, obtained by normalizing four Box-Muller Gaussians.
NoiseUnitary sample_haar(std::uint64_t seed, std::uint64_t trial_index) {
  SplitMix64 stream(mix_seed(seed, trial_index));
  double g[4];
  double norm2 = 0.0;
  do {
    for (int i = 0; i < 4; i += 2) {
      const double u1 = stream.next_double_open_zero();
      const double u2 = stream.next_double();
      const double radius = std::sqrt(-2.0 * std::log(u1));
      g[i] = radius * std::cos(2.0 * std::numbers::pi * u2);
      g[i + 1] = radius * std::sin(2.0 * std::numbers::pi * u2);
    }
    norm2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
  } while (norm2 < 1e-30);
  const double inv = 1.0 / std::sqrt(norm2);
  const Complex a{g[0] * inv, g[1] * inv};
  const Complex b{g[2] * inv, g[3] * inv};
  NoiseUnitary u;
  u.delta1 = a;
  u.eta1 = b;
  u.delta2 = -std::conj(b);
  u.eta2 = std::conj(a);
  return u;
}

}  // namespace

NoiseUnitary sample(const NoiseFamily& family, std::uint64_t trial_index) {
  switch (family.kind) {
    case NoiseKind::Haar:
      return sample_haar(family.seed, trial_index);
    case NoiseKind::Dephasing: {
      NoiseUnitary u;
      u.delta1 = 1.0;
      u.eta1 = 0.0;
      u.delta2 = 0.0;
      u.eta2 = std::exp(Complex{0.0, family.phi});
      return u;
    }
    case NoiseKind::Rotation: {
      NoiseUnitary u;
      const double c = std::cos(family.theta);
      const double s = std::sin(family.theta);
      u.delta1 = c;
      u.eta1 = s;
      u.delta2 = -s;
      u.eta2 = c;
      return u;
    }
    case NoiseKind::BitFlip: {
      NoiseUnitary u;
      u.delta1 = 0.0;
      u.eta1 = 1.0;
      u.delta2 = 1.0;
      u.eta2 = 0.0;
      return u;
    }
    case NoiseKind::Fixed:
      return family.fixed_matrix;
  }
  throw std::invalid_argument("sample: unknown noise kind");
}

}  // namespace fqt
