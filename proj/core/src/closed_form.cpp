#include "fqt/closed_form.hpp"

#include <cmath>

namespace fqt {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

struct Term {
  Complex coefficient;
  Pol r_pol;
  Path r_path;
  Pol s_pol;
  Path s_path;
};

TwoPhotonState assemble(const std::vector<Term>& terms, Freq r_freq,
                        Freq s_freq, Complex scale) {
  TwoPhotonState state;
  for (const Term& t : terms) {
    state.add({{t.r_pol, r_freq, t.r_path}, {t.s_pol, s_freq, t.s_path}},
              t.coefficient * scale);
  }
  return state;
}

}  // namespace

TwoPhotonState closed_form_post_pbs2(const InputQubit& input,
                                     const NoiseUnitary& u) {
  const Complex a = input.alpha, b = input.beta;
  const Complex d1 = u.delta1, d2 = u.delta2, e1 = u.eta1, e2 = u.eta2;
  const std::vector<Term> terms{
      {a * d1 * d1, Pol::H, Path::P3, Pol::H, Path::P3},
      {b * e2 * e2, Pol::V, Path::P3, Pol::V, Path::P3},
      {a * d1 * e2, Pol::V, Path::P3, Pol::H, Path::P3},
      {b * d1 * e2, Pol::H, Path::P3, Pol::V, Path::P3},
      {a * e1 * e1, Pol::V, Path::P4, Pol::V, Path::P4},
      {b * d2 * d2, Pol::H, Path::P4, Pol::H, Path::P4},
      {a * e1 * d2, Pol::H, Path::P4, Pol::V, Path::P4},
      {b * e1 * d2, Pol::V, Path::P4, Pol::H, Path::P4},
      {a * d1 * e1, Pol::H, Path::P3, Pol::V, Path::P4},
      {a * d1 * e1, Pol::V, Path::P4, Pol::H, Path::P3},
      {a * d1 * d2, Pol::H, Path::P4, Pol::H, Path::P3},
      {b * d1 * d2, Pol::H, Path::P3, Pol::H, Path::P4},
      {b * d2 * e2, Pol::H, Path::P4, Pol::V, Path::P3},
      {b * d2 * e2, Pol::V, Path::P3, Pol::H, Path::P4},
      {a * e1 * e2, Pol::V, Path::P3, Pol::V, Path::P4},
      {b * e1 * e2, Pol::V, Path::P4, Pol::V, Path::P3},
  };
  return assemble(terms, Freq::OmegaR, Freq::OmegaS, Complex{kInvSqrt2, 0.0});
}

TwoPhotonState closed_form_pre_decoder(const InputQubit& input,
                                       const NoiseUnitary& u, bool with_hwp0) {
  if (!with_hwp0) return closed_form_post_pbs2(input, u);
  const Complex a = input.alpha, b = input.beta;
  const Complex d1 = u.delta1, d2 = u.delta2, e1 = u.eta1, e2 = u.eta2;
  const std::vector<Term> terms{
      {a * d1 * d1, Pol::V, Path::P3, Pol::V, Path::P3},
      {b * e2 * e2, Pol::H, Path::P3, Pol::H, Path::P3},
      {a * e1 * e1, Pol::V, Path::P4, Pol::V, Path::P4},
      {b * d2 * d2, Pol::H, Path::P4, Pol::H, Path::P4},
      {a * d1 * e1, Pol::V, Path::P3, Pol::V, Path::P4},
      {a * d1 * e1, Pol::V, Path::P4, Pol::V, Path::P3},
      {b * d2 * e2, Pol::H, Path::P3, Pol::H, Path::P4},
      {b * d2 * e2, Pol::H, Path::P4, Pol::H, Path::P3},
      {a * d1 * e2, Pol::H, Path::P3, Pol::V, Path::P3},
      {b * d1 * e2, Pol::V, Path::P3, Pol::H, Path::P3},
      {a * e1 * d2, Pol::H, Path::P4, Pol::V, Path::P4},
      {b * e1 * d2, Pol::V, Path::P4, Pol::H, Path::P4},
      {a * d1 * d2, Pol::H, Path::P4, Pol::V, Path::P3},
      {b * d1 * d2, Pol::V, Path::P3, Pol::H, Path::P4},
      {a * e1 * e2, Pol::H, Path::P3, Pol::V, Path::P4},
      {b * e1 * e2, Pol::V, Path::P4, Pol::H, Path::P3},
  };
  return assemble(terms, Freq::OmegaR, Freq::OmegaS, Complex{kInvSqrt2, 0.0});
}

TwoPhotonState closed_form_final(const InputQubit& input,
                                 const NoiseUnitary& u,
                                 const DecoderConfig& cfg) {
  if (!cfg.with_hwp0)
    throw std::invalid_argument(
        "closed_form_final: only the HWP0 layout is transcribed");
  cfg.validate();
  const Complex a = input.alpha, b = input.beta;
  const Complex d1 = u.delta1, d2 = u.delta2, e1 = u.eta1, e2 = u.eta2;
  const std::vector<Term> terms{
      {a * d1 * d1, Pol::H, Path::Out3Y, Pol::V, Path::Out3Y},
      {b * e2 * e2, Pol::V, Path::Out3X, Pol::H, Path::Out3X},
      {a * e1 * e1, Pol::H, Path::Out4Y, Pol::V, Path::Out4Y},
      {b * d2 * d2, Pol::V, Path::Out4X, Pol::H, Path::Out4X},
      {a * d1 * e1, Pol::H, Path::Out3Y, Pol::V, Path::Out4Y},
      {a * d1 * e1, Pol::H, Path::Out4Y, Pol::V, Path::Out3Y},
      {b * d2 * e2, Pol::V, Path::Out3X, Pol::H, Path::Out4X},
      {b * d2 * e2, Pol::V, Path::Out4X, Pol::H, Path::Out3X},
      {a * d1 * e2, Pol::V, Path::Out3X, Pol::V, Path::Out3Y},
      {b * d1 * e2, Pol::H, Path::Out3Y, Pol::H, Path::Out3X},
      {a * e1 * d2, Pol::V, Path::Out4X, Pol::V, Path::Out4Y},
      {b * e1 * d2, Pol::H, Path::Out4Y, Pol::H, Path::Out4X},
      {a * d1 * d2, Pol::V, Path::Out4X, Pol::V, Path::Out3Y},
      {b * d1 * d2, Pol::H, Path::Out3Y, Pol::H, Path::Out4X},
      {a * e1 * e2, Pol::V, Path::Out3X, Pol::V, Path::Out4Y},
      {b * e1 * e2, Pol::H, Path::Out4Y, Pol::H, Path::Out3X},
  };

  Freq r_freq = Freq::OmegaCommon;
  Freq s_freq = Freq::OmegaCommon;
  double loss_factor = 1.0;
  switch (cfg.variant) {
    case DecoderVariant::FrequencyDualFs:
      loss_factor = cfg.fs_efficiency;  // sqrt(eta) per photon
      break;
    case DecoderVariant::FrequencySingleFs:
      r_freq = Freq::OmegaS;
      s_freq = Freq::OmegaS;
      loss_factor = std::sqrt(cfg.fs_efficiency);
      break;
    case DecoderVariant::TemporalEraser:
      r_freq = Freq::OmegaR;
      s_freq = Freq::OmegaS;
      loss_factor = cfg.eraser_transmission;  // sqrt(t) per photon
      break;
  }
  return assemble(terms, r_freq, s_freq,
                  Complex{kInvSqrt2 * loss_factor, 0.0});
}

}  // namespace fqt
