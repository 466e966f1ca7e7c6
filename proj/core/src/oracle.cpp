#include "fqt/oracle.hpp"

#include <cmath>

namespace fqt {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr std::size_t kDim = kSingleDim;

/// Dense single-photon stage matrix, row-major kDim x kDim.
using StageMatrix = std::vector<Complex>;

StageMatrix zero_matrix() { return StageMatrix(kDim * kDim, Complex{}); }

void set_entry(StageMatrix& m, const PhotonBasis& to, const PhotonBasis& from,
               Complex value) {
  m[basis_index(to) * kDim + basis_index(from)] = value;
}

/// Starts from the identity and lets the builder overwrite the columns of
/// the labels an element actually serves.
template <typename Fn>
StageMatrix build_matrix(Fn&& per_label) {
  StageMatrix m = zero_matrix();
  for (std::size_t i = 0; i < kDim; ++i) {
    const PhotonBasis b = basis_from_index(i);
    if (!per_label(m, b)) m[i * kDim + i] = 1.0;
  }
  return m;
}

StageMatrix pbs1_matrix() {
  return build_matrix([](StageMatrix& m, const PhotonBasis& b) {
    if (b.path != Path::SourceR && b.path != Path::SourceS) return false;
    PhotonBasis to = b;
    to.path = b.pol == Pol::H ? Path::Ch1 : Path::Ch2;
    set_entry(m, to, b, 1.0);
    return true;
  });
}

StageMatrix noise_matrix(const NoiseUnitary& u) {
  return build_matrix([&u](StageMatrix& m, const PhotonBasis& b) {
    if (b.path != Path::Ch1 && b.path != Path::Ch2) return false;
    PhotonBasis h = b, v = b;
    h.pol = Pol::H;
    v.pol = Pol::V;
    if (b.pol == Pol::H) {
      set_entry(m, h, b, u.delta1);
      set_entry(m, v, b, u.eta1);
    } else {
      set_entry(m, h, b, u.delta2);
      set_entry(m, v, b, u.eta2);
    }
    return true;
  });
}

StageMatrix pbs2_matrix() {
  return build_matrix([](StageMatrix& m, const PhotonBasis& b) {
    if (b.path != Path::Ch1 && b.path != Path::Ch2) return false;
    PhotonBasis to = b;
    if (b.path == Path::Ch1)
      to.path = b.pol == Pol::H ? Path::P3 : Path::P4;
    else
      to.path = b.pol == Pol::H ? Path::P4 : Path::P3;
    set_entry(m, to, b, 1.0);
    return true;
  });
}

StageMatrix sigma_x_on_paths(const PathSet& paths) {
  return build_matrix([&paths](StageMatrix& m, const PhotonBasis& b) {
    if (!paths.contains(b.path)) return false;
    PhotonBasis to = b;
    to.pol = b.pol == Pol::H ? Pol::V : Pol::H;
    set_entry(m, to, b, 1.0);
    return true;
  });
}

StageMatrix fbs_matrix() {
  return build_matrix([](StageMatrix& m, const PhotonBasis& b) {
    if (b.path != Path::P3 && b.path != Path::P4) return false;
    if (b.freq == Freq::OmegaCommon) return false;
    PhotonBasis to = b;
    if (b.path == Path::P3)
      to.path = b.freq == Freq::OmegaR ? Path::P3Up : Path::P3Down;
    else
      to.path = b.freq == Freq::OmegaR ? Path::P4Up : Path::P4Down;
    set_entry(m, to, b, 1.0);
    return true;
  });
}

StageMatrix shifter_matrix(const DecoderConfig& cfg) {
  const PathSet up{Path::P3Up, Path::P4Up};
  const PathSet down{Path::P3Down, Path::P4Down};
  return build_matrix([&](StageMatrix& m, const PhotonBasis& b) {
    const bool in_up = up.contains(b.path);
    const bool in_down = down.contains(b.path);
    if (!in_up && !in_down) return false;
    PhotonBasis to = b;
    switch (cfg.variant) {
      case DecoderVariant::FrequencyDualFs:
        to.freq = Freq::OmegaCommon;
        set_entry(m, to, b, std::sqrt(cfg.fs_efficiency));
        return true;
      case DecoderVariant::FrequencySingleFs:
        if (!in_up) return false;
        to.freq = Freq::OmegaS;
        set_entry(m, to, b, std::sqrt(cfg.fs_efficiency));
        return true;
      case DecoderVariant::TemporalEraser:
        set_entry(m, to, b, std::sqrt(cfg.eraser_transmission));
        return true;
    }
    return false;
  });
}

StageMatrix output_pbs_matrix() {
  return build_matrix([](StageMatrix& m, const PhotonBasis& b) {
    PhotonBasis to = b;
    switch (b.path) {
      case Path::P3Up:
        to.path = b.pol == Pol::V ? Path::Out3X : Path::Out3Y;
        break;
      case Path::P3Down:
        to.path = b.pol == Pol::H ? Path::Out3X : Path::Out3Y;
        break;
      case Path::P4Up:
        to.path = b.pol == Pol::V ? Path::Out4X : Path::Out4Y;
        break;
      case Path::P4Down:
        to.path = b.pol == Pol::H ? Path::Out4X : Path::Out4Y;
        break;
      default:
        return false;
    }
    set_entry(m, to, b, 1.0);
    return true;
  });
}

/// Applies the same single-photon matrix to both slots.
DenseState apply_to_both(const StageMatrix& m, const DenseState& v) {
  DenseState mid(kDim * kDim, Complex{});
  // Slot r: out[i, j] = sum_k m[i, k] v[k, j].
  for (std::size_t i = 0; i < kDim; ++i)
    for (std::size_t k = 0; k < kDim; ++k) {
      const Complex coeff = m[i * kDim + k];
      if (coeff == Complex{}) continue;
      for (std::size_t j = 0; j < kDim; ++j)
        mid[i * kDim + j] += coeff * v[k * kDim + j];
    }
  DenseState out(kDim * kDim, Complex{});
  // Slot s: out[i, j] = sum_k m[j, k] mid[i, k].
  for (std::size_t j = 0; j < kDim; ++j)
    for (std::size_t k = 0; k < kDim; ++k) {
      const Complex coeff = m[j * kDim + k];
      if (coeff == Complex{}) continue;
      for (std::size_t i = 0; i < kDim; ++i)
        out[i * kDim + j] += coeff * mid[i * kDim + k];
    }
  return out;
}

}  // namespace

DenseState oracle_evolve(const InputQubit& input, const NoiseUnitary& u,
                         const DecoderConfig& cfg) {
  cfg.validate();
  DenseState v(kDim * kDim, Complex{});
  const PhotonBasis r_h{Pol::H, Freq::OmegaR, Path::SourceR};
  const PhotonBasis r_v{Pol::V, Freq::OmegaR, Path::SourceR};
  const PhotonBasis s_h{Pol::H, Freq::OmegaS, Path::SourceS};
  const PhotonBasis s_v{Pol::V, Freq::OmegaS, Path::SourceS};
  const Complex r_amp{kInvSqrt2, 0.0};
  v[basis_index(r_h) * kDim + basis_index(s_h)] = r_amp * input.alpha;
  v[basis_index(r_h) * kDim + basis_index(s_v)] = r_amp * input.beta;
  v[basis_index(r_v) * kDim + basis_index(s_h)] = r_amp * input.alpha;
  v[basis_index(r_v) * kDim + basis_index(s_v)] = r_amp * input.beta;

  v = apply_to_both(pbs1_matrix(), v);
  v = apply_to_both(noise_matrix(u), v);
  v = apply_to_both(pbs2_matrix(), v);
  if (cfg.with_hwp0) v = apply_to_both(sigma_x_on_paths({Path::P3}), v);
  v = apply_to_both(fbs_matrix(), v);
  v = apply_to_both(sigma_x_on_paths({Path::P3Up, Path::P4Up}), v);
  v = apply_to_both(shifter_matrix(cfg), v);
  v = apply_to_both(output_pbs_matrix(), v);
  return v;
}

std::array<double, 4> oracle_branch_probabilities(const DenseState& v) {
  std::array<double, 4> probs{};
  for (std::size_t i = 0; i < kDim; ++i) {
    const Path pi = basis_from_index(i).path;
    for (std::size_t j = 0; j < kDim; ++j) {
      const Complex amp = v[i * kDim + j];
      if (amp == Complex{}) continue;
      const Path pj = basis_from_index(j).path;
      for (std::size_t b = 0; b < kKeptBranches.size(); ++b) {
        const BranchId id = kKeptBranches[b];
        if ((pi == id.x_out && pj == id.y_out) ||
            (pi == id.y_out && pj == id.x_out))
          probs[b] += std::norm(amp);
      }
    }
  }
  return probs;
}

double oracle_total_norm(const DenseState& v) {
  double total = 0.0;
  for (const Complex& amp : v) total += std::norm(amp);
  return total;
}

DenseState dense_from_sparse(const TwoPhotonState& state) {
  DenseState v(kDim * kDim, Complex{});
  for (const auto& [key, amp] : state.amplitudes())
    v[basis_index(key.r) * kDim + basis_index(key.s)] += amp;
  return v;
}

double max_componentwise_deviation(const DenseState& a, const DenseState& b) {
  double deviation = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    deviation = std::max(deviation, std::abs(a[i] - b[i]));
  return deviation;
}

}  // namespace fqt
