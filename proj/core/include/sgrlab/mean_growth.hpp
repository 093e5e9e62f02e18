#pragma once

#include <cstdint>

#include "sgrlab/model.hpp"

namespace sgrlab {

/// Mean environmental matrix sum_eta pi_eta A_eta under the stationary pi.
ProjectionMatrix mean_matrix(const ModelSpec& model);

/// R0 = f + s F of a 2x2 Leslie mean matrix [[f, F], [s, 0]].
/// Throws StructuralError for any other shape.
double net_reproductive_value(const ProjectionMatrix& mean);

/// Evolution operator of the vectors E[z(t) 1{tau_t = xi}]: an nr x nr block
/// matrix whose block (xi, eta) is p(eta -> xi) A_xi.
Matrix markov_mean_operator(const ModelSpec& model);

/// log mu. IID chains use log rho(mean matrix); Markov chains use
/// log rho(markov_mean_operator).
double mean_growth_rate(const ModelSpec& model);

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

/// E|z(t)|_1 by enumerating every environment sequence of length t, with the
/// chain started from its stationary distribution. Throws BudgetError when
/// r^t exceeds `cap`.
double exact_mean_norm(const ModelSpec& model, int t, std::uint64_t cap = kDefaultEnumerationCap);

/// Second-order small-noise approximation
///   log lambda_T = log lambda - tau^2 / (2 lambda^2),
/// lambda = rho(mean matrix), tau^2 the variance over pi of sum_ij S_ij A_ij
/// with sensitivities S_ij = w_i v_j / <w, v>. IID chains only.
double tuljapurkar_approx(const ModelSpec& model);

}  // namespace sgrlab
