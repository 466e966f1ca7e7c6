#include "fqt/state.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace fqt {

std::string to_string(Pol p) { return p == Pol::H ? "H" : "V"; }

std::string to_string(Freq f) {
  switch (f) {
    case Freq::OmegaR:
      return "omega_r";
    case Freq::OmegaS:
      return "omega_s";
    case Freq::OmegaCommon:
      return "omega_common";
  }
  return "?";
}

std::string to_string(Path p) {
  switch (p) {
    case Path::SourceR:
      return "source_r";
    case Path::SourceS:
      return "source_s";
    case Path::Ch1:
      return "ch1";
    case Path::Ch2:
      return "ch2";
    case Path::P3:
      return "p3";
    case Path::P4:
      return "p4";
    case Path::P3Up:
      return "p3_up";
    case Path::P3Down:
      return "p3_down";
    case Path::P4Up:
      return "p4_up";
    case Path::P4Down:
      return "p4_down";
    case Path::Out3X:
      return "out_3x";
    case Path::Out3Y:
      return "out_3y";
    case Path::Out4X:
      return "out_4x";
    case Path::Out4Y:
      return "out_4y";
  }
  return "?";
}

std::size_t basis_index(const PhotonBasis& b) {
  return (static_cast<std::size_t>(b.pol) * kFreqCount +
          static_cast<std::size_t>(b.freq)) *
             kPathCount +
         static_cast<std::size_t>(b.path);
}

PhotonBasis basis_from_index(std::size_t index) {
  PhotonBasis b;
  b.path = static_cast<Path>(index % kPathCount);
  index /= kPathCount;
  b.freq = static_cast<Freq>(index % kFreqCount);
  index /= kFreqCount;
  b.pol = static_cast<Pol>(index);
  return b;
}

std::string to_string(const PhotonBasis& b) {
  std::ostringstream out;
  out << "(" << to_string(b.pol) << "," << to_string(b.freq) << ","
      << to_string(b.path) << ")";
  return out.str();
}

SingleQubitOp SingleQubitOp::identity() { return {{1.0, 0.0, 0.0, 1.0}}; }

SingleQubitOp SingleQubitOp::sigma_x() { return {{0.0, 1.0, 1.0, 0.0}}; }

SingleQubitOp SingleQubitOp::sigma_z() { return {{1.0, 0.0, 0.0, -1.0}}; }

// -i sigma_y = |H><V| - |V><H|
SingleQubitOp SingleQubitOp::minus_i_sigma_y() {
  return {{0.0, 1.0, -1.0, 0.0}};
}

double SingleQubitOp::unitarity_defect() const {
  // U†U entries.
  const Complex g00 = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
  const Complex g01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
  const Complex g10 = std::conj(m[1]) * m[0] + std::conj(m[3]) * m[2];
  const Complex g11 = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
  double defect = std::abs(g00 - 1.0);
  defect = std::max(defect, std::abs(g01));
  defect = std::max(defect, std::abs(g10));
  defect = std::max(defect, std::abs(g11 - 1.0));
  return defect;
}

bool SingleQubitOp::is_unitary(double tol) const {
  return unitarity_defect() < tol;
}

SingleQubitOp SingleQubitOp::compose_after(const SingleQubitOp& first) const {
  SingleQubitOp out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.m[2 * i + j] = at(i, 0) * first.at(0, j) + at(i, 1) * first.at(1, j);
  return out;
}

std::array<Complex, 2> SingleQubitOp::apply(
    const std::array<Complex, 2>& v) const {
  return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

TwoPhotonState TwoPhotonState::product(
    const std::map<PhotonBasis, Complex>& r_terms,
    const std::map<PhotonBasis, Complex>& s_terms) {
  TwoPhotonState out;
  for (const auto& [rb, ra] : r_terms)
    for (const auto& [sb, sa] : s_terms) out.add({rb, sb}, ra * sa);
  return out;
}

void TwoPhotonState::add(const BasisPair& key, Complex amplitude) {
  auto it = amps_.find(key);
  if (it == amps_.end()) {
    if (std::abs(amplitude) >= kPruneThreshold) amps_.emplace(key, amplitude);
    return;
  }
  it->second += amplitude;
  if (std::abs(it->second) < kPruneThreshold) amps_.erase(it);
}

Complex TwoPhotonState::amplitude(const BasisPair& key) const {
  auto it = amps_.find(key);
  return it == amps_.end() ? Complex{0.0, 0.0} : it->second;
}

double TwoPhotonState::squared_norm() const {
  double total = 0.0;
  for (const auto& [key, amp] : amps_) total += std::norm(amp);
  return total;
}

TwoPhotonState TwoPhotonState::scaled(Complex factor) const {
  TwoPhotonState out;
  for (const auto& [key, amp] : amps_) out.add(key, amp * factor);
  return out;
}

TwoPhotonState TwoPhotonState::normalized() const {
  const double norm2 = squared_norm();
  if (norm2 <= 0.0) return {};
  return scaled(1.0 / std::sqrt(norm2));
}

bool TwoPhotonState::supported_on(const PathSet& allowed) const {
  for (const auto& [key, amp] : amps_) {
    (void)amp;
    if (!allowed.contains(key.r.path) || !allowed.contains(key.s.path))
      return false;
  }
  return true;
}

TwoPhotonState add_states(const TwoPhotonState& a, const TwoPhotonState& b) {
  TwoPhotonState out = a;
  for (const auto& [key, amp] : b.amplitudes()) out.add(key, amp);
  return out;
}

TwoPhotonState apply_single_photon_op(const TwoPhotonState& state, Slot which,
                                      const PathSet& path_filter,
                                      const SingleQubitOp& op) {
  if (path_filter.empty())
    throw std::invalid_argument(
        "apply_single_photon_op: path filter must not be empty");
  TwoPhotonState out;
  for (const auto& [key, amp] : state.amplitudes()) {
    const PhotonBasis& target = key.slot(which);
    if (!path_filter.contains(target.path)) {
      out.add(key, amp);
      continue;
    }
    const int col = target.pol == Pol::H ? 0 : 1;
    for (int row = 0; row < 2; ++row) {
      const Complex coeff = op.at(row, col);
      if (coeff == Complex{0.0, 0.0}) continue;
      BasisPair image = key;
      image.slot(which).pol = row == 0 ? Pol::H : Pol::V;
      out.add(image, amp * coeff);
    }
  }
  return out;
}

TwoPhotonState transform_slot(
    const TwoPhotonState& state, Slot which,
    const std::function<std::pair<PhotonBasis, Complex>(const PhotonBasis&)>&
        rule) {
  TwoPhotonState out;
  std::map<BasisPair, BasisPair> source_of;
  for (const auto& [key, amp] : state.amplitudes()) {
    const auto [image, factor] = rule(key.slot(which));
    BasisPair target = key;
    target.slot(which) = image;
    auto [it, inserted] = source_of.emplace(target, key);
    if (!inserted && it->second != key)
      throw StageError("relabel rule is not injective: " +
                       to_string(key.slot(which)) + " and " +
                       to_string(it->second.slot(which)) +
                       " both rewrite to " + to_string(image) +
                       ", which would silently merge distinct amplitudes");
    out.add(target, amp * factor);
  }
  return out;
}

TwoPhotonState relabel(
    const TwoPhotonState& state, Slot which,
    const std::function<PhotonBasis(const PhotonBasis&)>& rule) {
  return transform_slot(state, which, [&rule](const PhotonBasis& b) {
    return std::pair<PhotonBasis, Complex>{rule(b), Complex{1.0, 0.0}};
  });
}

double squared_norm(const PolVector& v) {
  return std::norm(v[0]) + std::norm(v[1]);
}

double fidelity_pure(const PolVector& a, const PolVector& b) {
  constexpr double kNormTol = 1e-9;
  if (std::abs(squared_norm(a) - 1.0) > kNormTol ||
      std::abs(squared_norm(b) - 1.0) > kNormTol)
    throw std::invalid_argument(
        "fidelity_pure: inputs must be normalized polarization states");
  const Complex overlap = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
  return std::norm(overlap);
}

double state_fidelity(const TwoPhotonState& a, const TwoPhotonState& b) {
  const double na = a.squared_norm();
  const double nb = b.squared_norm();
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  Complex overlap{0.0, 0.0};
  for (const auto& [key, amp] : a.amplitudes())
    overlap += std::conj(amp) * b.amplitude(key);
  return std::norm(overlap) / (na * nb);
}

ConditionalBranch conditional_branch(const TwoPhotonState& state,
                                     const PathPredicate& pattern_a,
                                     const PathPredicate& pattern_b) {
  TwoPhotonState selected;
  for (const auto& [key, amp] : state.amplitudes()) {
    const bool direct = pattern_a(key.r.path) && pattern_b(key.s.path);
    const bool swapped = pattern_a(key.s.path) && pattern_b(key.r.path);
    if (direct || swapped) selected.add(key, amp);
  }
  ConditionalBranch branch;
  branch.probability = selected.squared_norm();
  if (branch.probability > 0.0) branch.state = selected.normalized();
  return branch;
}

}  // namespace fqt
