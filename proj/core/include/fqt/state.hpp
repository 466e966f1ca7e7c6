#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>

namespace fqt {

using Complex = std::complex<double>;

/// Comparison tolerance for deterministic amplitude algebra.
inline constexpr double kAlgebraTol = 1e-12;

/// Entries with |amplitude| below this are dropped from sparse states.
inline constexpr double kPruneThreshold = 1e-15;

/// Thrown when a state reaches an element on a path the element does not
/// serve, or violates another pipeline-stage contract.
class StageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Pol : std::uint8_t { H, V };

enum class Freq : std::uint8_t { OmegaR, OmegaS, OmegaCommon };

enum class Path : std::uint8_t {
  SourceR,
  SourceS,
  Ch1,
  Ch2,
  P3,
  P4,
  P3Up,
  P3Down,
  P4Up,
  P4Down,
  Out3X,
  Out3Y,
  Out4X,
  Out4Y,
};

inline constexpr std::size_t kPolCount = 2;
inline constexpr std::size_t kFreqCount = 3;
inline constexpr std::size_t kPathCount = 14;

/// Dimension of the single-photon label space (pol x freq x path).
inline constexpr std::size_t kSingleDim = kPolCount * kFreqCount * kPathCount;

std::string to_string(Pol p);
std::string to_string(Freq f);
std::string to_string(Path p);

/// Photon slot in the first-quantized pair: r is the fixed reference photon,
/// s carries the payload polarization qubit.
enum class Slot : std::uint8_t { R, S };

/// Small value set of path labels, used to scope element action.
class PathSet {
 public:
  constexpr PathSet() = default;
  constexpr PathSet(std::initializer_list<Path> paths) {
    for (Path p : paths) insert(p);
  }

  constexpr void insert(Path p) { mask_ |= bit(p); }
  constexpr bool contains(Path p) const { return (mask_ & bit(p)) != 0; }
  constexpr bool empty() const { return mask_ == 0; }

 private:
  static constexpr std::uint16_t bit(Path p) {
    return static_cast<std::uint16_t>(1u << static_cast<unsigned>(p));
  }
  std::uint16_t mask_ = 0;
};

/// Complete label of one photon. All three labels are always present.
struct PhotonBasis {
  Pol pol;
  Freq freq;
  Path path;

  auto operator<=>(const PhotonBasis&) const = default;
};

std::size_t basis_index(const PhotonBasis& b);
PhotonBasis basis_from_index(std::size_t index);
std::string to_string(const PhotonBasis& b);

/// Basis label of the ordered (r, s) photon pair.
struct BasisPair {
  PhotonBasis r;
  PhotonBasis s;

  auto operator<=>(const BasisPair&) const = default;

  const PhotonBasis& slot(Slot which) const {
    return which == Slot::R ? r : s;
  }
  PhotonBasis& slot(Slot which) { return which == Slot::R ? r : s; }
};

/// 2x2 complex operator on the polarization subspace. Column k holds the
/// image of basis state k (H=0, V=1). Also reused by measurement projectors,
/// so general instances need not be unitary.
struct SingleQubitOp {
  // Row-major: m[0]=<H|U|H>, m[1]=<H|U|V>, m[2]=<V|U|H>, m[3]=<V|U|V>.
  std::array<Complex, 4> m{};

  static SingleQubitOp identity();
  static SingleQubitOp sigma_x();
  static SingleQubitOp sigma_z();
  static SingleQubitOp minus_i_sigma_y();

  Complex at(int row, int col) const { return m[2 * row + col]; }

  /// max |(U†U - I)_ij|
  double unitarity_defect() const;
  bool is_unitary(double tol = kAlgebraTol) const;

  /// Matrix product this * first (apply `first`, then this).
  SingleQubitOp compose_after(const SingleQubitOp& first) const;

  std::array<Complex, 2> apply(const std::array<Complex, 2>& v) const;
};

/// Sparse complex-amplitude map over labeled two-photon product states.
/// Values are immutable in use: every operation returns a new state.
class TwoPhotonState {
 public:
  using Map = std::map<BasisPair, Complex>;

  TwoPhotonState() = default;

  /// Tensor product of two single-photon superpositions.
  static TwoPhotonState product(
      const std::map<PhotonBasis, Complex>& r_terms,
      const std::map<PhotonBasis, Complex>& s_terms);

  /// Accumulates into the entry, pruning results below kPruneThreshold.
  void add(const BasisPair& key, Complex amplitude);

  const Map& amplitudes() const { return amps_; }
  bool empty() const { return amps_.empty(); }
  std::size_t size() const { return amps_.size(); }

  Complex amplitude(const BasisPair& key) const;

  double squared_norm() const;

  TwoPhotonState scaled(Complex factor) const;
  TwoPhotonState normalized() const;

  /// True when every occupied path (either slot) lies in `allowed`.
  bool supported_on(const PathSet& allowed) const;

 private:
  Map amps_;
};

/// Sum of two states (used by linearity checks and ensemble algebra).
TwoPhotonState add_states(const TwoPhotonState& a, const TwoPhotonState& b);

/// Applies `op` to the polarization of photon `which` wherever that photon's
/// path lies in `path_filter`; all other amplitudes pass through unchanged.
TwoPhotonState apply_single_photon_op(const TwoPhotonState& state, Slot which,
                                      const PathSet& path_filter,
                                      const SingleQubitOp& op);

/// Per-basis rewrite of one slot's labels. `rule` must be injective on the
/// occupied support; a rewrite that would merge two distinct amplitudes
/// throws StageError.
TwoPhotonState relabel(
    const TwoPhotonState& state, Slot which,
    const std::function<PhotonBasis(const PhotonBasis&)>& rule);

/// Like relabel but each rewritten amplitude is also multiplied by the
/// returned factor. Shared mechanism behind the lossy elements.
TwoPhotonState transform_slot(
    const TwoPhotonState& state, Slot which,
    const std::function<std::pair<PhotonBasis, Complex>(const PhotonBasis&)>&
        rule);

/// Normalized single-photon polarization vector (H component, V component).
using PolVector = std::array<Complex, 2>;

double squared_norm(const PolVector& v);

/// |<a|b>|^2 for normalized single-photon polarization states.
/// Throws std::invalid_argument when either input is unnormalized (1e-9).
double fidelity_pure(const PolVector& a, const PolVector& b);

/// |<a|b>|^2 between two sparse states, normalizing both. Global phase is
/// irrelevant by construction. Returns 0 when either state is empty.
double state_fidelity(const TwoPhotonState& a, const TwoPhotonState& b);

using PathPredicate = std::function<bool(Path)>;

struct ConditionalBranch {
  double probability = 0.0;
  TwoPhotonState state;  // renormalized; empty when probability is 0
};

/// Selects the sub-state whose two paths match (pattern_a, pattern_b) in
/// either slot assignment, returning its weight and the renormalized state.
ConditionalBranch conditional_branch(const TwoPhotonState& state,
                                     const PathPredicate& pattern_a,
                                     const PathPredicate& pattern_b);

}  // namespace fqt
