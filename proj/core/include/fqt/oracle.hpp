#pragma once

#include <vector>

#include "fqt/protocol.hpp"

namespace fqt {

/// Dense two-photon state over the full 84 x 84 labeled product space,
/// indexed r-major: v[basis_index(r) * kSingleDim + basis_index(s)].
using DenseState = std::vector<Complex>;

/// Brute-force evolution through the whole pipeline using explicit dense
/// stage matrices. Deliberately built from the stage descriptions alone, not
/// from the sparse element implementations, so the two routes can be checked
/// against each other.
DenseState oracle_evolve(const InputQubit& input, const NoiseUnitary& u,
                         const DecoderConfig& cfg);

/// Probabilities of the four kept branches, in kKeptBranches order.
std::array<double, 4> oracle_branch_probabilities(const DenseState& v);

double oracle_total_norm(const DenseState& v);

DenseState dense_from_sparse(const TwoPhotonState& state);

double max_componentwise_deviation(const DenseState& a, const DenseState& b);

}  // namespace fqt
