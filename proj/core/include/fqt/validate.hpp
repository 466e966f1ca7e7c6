#pragma once

#include <string>
#include <vector>

#include "fqt/harness.hpp"

namespace fqt {

/// Bloch-uniform random qubit with a random overall phase, for regression
/// sweeps over inputs.
InputQubit random_input_qubit(SplitMix64& stream);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // observed value(s)
};

/// The built-in invariant suite behind `fqtsim validate`: stage-equation
/// regressions, the per-trial success constants, oracle equivalence, Haar
/// moments, and the decoder scaling laws. Deterministic (fixed seeds).
std::vector<CheckResult> run_validation_suite();

}  // namespace fqt
