#pragma once

#include "sgrlab/model.hpp"

namespace sgrlab {

struct PowerIterationOptions {
  double tol = 1e-12;
  int max_iterations = 100000;
};

/// Spectral radius of a nonnegative square matrix.
///
/// 1x1 and 2x2 inputs use the closed-form root of the characteristic
/// polynomial. Larger inputs run power iteration on M + I (the shift makes
/// the iteration aperiodic) and stop once successive Rayleigh quotients
/// agree to `tol` relative to max(1, rho). Throws NumericalError with the
/// last iterates when the cap is reached.
double spectral_radius(const Matrix& m, const PowerIterationOptions& opts = {});
double spectral_radius(const ProjectionMatrix& m, const PowerIterationOptions& opts = {});

/// Dominant eigenvalue with right (v) and left (w) eigenvectors, both
/// nonnegative and scaled to unit 1-norm.
struct PerronTriple {
  double value = 0.0;
  Vector right;
  Vector left;
};

PerronTriple perron_triple(const Matrix& m, const PowerIterationOptions& opts = {});

/// True when the directed graph of the support of `m` is strongly connected.
bool is_irreducible(const Pattern& support);

/// True when some power of the (irreducible) pattern is all-positive.
/// Uses Wielandt's bound (r-1)^2 + 1 on the exponent.
bool is_primitive(const Pattern& support);

/// Boolean matrix product over the (or, and) semiring.
Pattern boolean_product(const Pattern& a, const Pattern& b);

/// Stationary distribution of the environmental chain. IID chains return pi
/// unchanged; Markov chains solve pi P = pi, sum(pi) = 1 directly for up to
/// 64 states and by power iteration above that.
Vector stationary_distribution(const EnvironmentChain& chain);

}  // namespace sgrlab
