#pragma once

#include "fqt/protocol.hpp"

namespace fqt {

/// Hand-written coefficient tables for the traced pipeline stages, built
/// directly from the protocol's closed-form state expressions rather than
/// from the element machinery. They exist so the pipeline can be regressed
/// term by term against an independent transcription.

/// 16-term state on ports 3/4 right after PBS2.
TwoPhotonState closed_form_post_pbs2(const InputQubit& input,
                                     const NoiseUnitary& u);

/// State immediately before the decoders; equals the post-PBS2 table with
/// port 3 polarization flipped when HWP0 is present.
TwoPhotonState closed_form_pre_decoder(const InputQubit& input,
                                       const NoiseUnitary& u, bool with_hwp0);

/// 16-term output-port state for a decoder preceded by HWP0. Requires
/// cfg.with_hwp0; the no-HWP0 layout has no transcribed closed form.
TwoPhotonState closed_form_final(const InputQubit& input,
                                 const NoiseUnitary& u,
                                 const DecoderConfig& cfg);

}  // namespace fqt
