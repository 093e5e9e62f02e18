#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "sgrlab/model.hpp"

namespace sgrlab {

/// Lower/upper pair on the extended real line (-inf allowed).
struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
};

/// phi^j = sum_i M^ij.
Vector column_sums(const ProjectionMatrix& m);

/// Cohen's bounds: sum_eta pi_eta log(min / max column sum of A_eta).
/// A zero minimum column sum with positive weight gives lower = -inf.
BoundPair cohen_bounds(const EnvironmentSet& envs, const Vector& pi);

/// log rho of the entrywise min and max matrices; independent of pi.
BoundPair maxmin_bounds(const EnvironmentSet& envs);

/// Relative perturbation extremes W_m(eta), W_M(eta) of each A_eta against
/// its reference.
struct PerturbationProfile {
  std::vector<double> w_min;
  std::vector<double> w_max;
};

/// W^ij = (A^ij - B^ij) / B^ij on the support and 0 on structural zeros.
/// With support_only = false the extremes run over all n^2 entries, which
/// clamps 1 + W_m <= 1 <= 1 + W_M whenever a structural zero exists; with
/// support_only = true they run over the support only.
/// Throws StructuralError when the incidence pattern of B differs from any A_eta.
PerturbationProfile perturbation_profile(const EnvironmentSet& envs, const ProjectionMatrix& ref,
                                         bool support_only = false);

/// log rho(B) + sum_eta pi_eta log(1 + W_m / W_M(eta)).
BoundPair perturbation_bounds(const EnvironmentSet& envs, const Vector& pi,
                              const ProjectionMatrix& ref, bool support_only = false);

/// Reference B = mean matrix, entrywise max and entrywise min respectively.
BoundPair bounds_II(const EnvironmentSet& envs, const Vector& pi, bool support_only = false);
BoundPair bounds_III(const EnvironmentSet& envs, const Vector& pi, bool support_only = false);
BoundPair bounds_IV(const EnvironmentSet& envs, const Vector& pi, bool support_only = false);

/// Offsets relating two systems driven by the same environmental process:
///   log lambda_S(B) + lower <= log lambda_S(A) <= log lambda_S(B) + upper.
/// Patterns must match environment by environment.
BoundPair general_perturbation_relation(const EnvironmentSet& envs_a,
                                        const EnvironmentSet& envs_b, const Vector& pi,
                                        bool support_only = false);

/// Long-run bounds delta <= z2/z1 <= kappa for the two-class Leslie model and
/// the induced bounds l <= z/|z|_1 <= u on the normalized structure.
struct StructureBand {
  double delta = 0.0;
  double kappa = 0.0;
  Vector lower;  // l = (1/(1+kappa), delta/(1+kappa))
  Vector upper;  // u = (1/(1+delta), kappa/(1+delta))
};

/// delta is the fixed point ratio of X_min X_max and kappa that of
/// X_max X_min, with X_min = [[1, eps_M], [gamma_m, 0]] and
/// X_max = [[1, eps_m], [gamma_M, 0]], eps = F/f, gamma = s/f.
StructureBand leslie2_structure_band(const Leslie2Params& params);

/// c_V = sum pi log(sum_j l^j phi^j), C_V = sum pi log(sum_j u^j phi^j).
/// Throws DomainError for negative or mis-sized l, u.
BoundPair structure_informed_bounds(const EnvironmentSet& envs, const Vector& pi,
                                    const Vector& lower, const Vector& upper);
BoundPair structure_informed_bounds(const EnvironmentSet& envs, const Vector& pi,
                                    const StructureBand& band);

enum class BoundName {
  c_I, c_II, c_III, c_IV, c_V, c_min,
  C_I, C_II, C_III, C_IV, C_V, C_max, log_mu,
};

inline constexpr std::array<BoundName, 6> kLowerBounds = {
    BoundName::c_I, BoundName::c_II, BoundName::c_III,
    BoundName::c_IV, BoundName::c_V, BoundName::c_min};
inline constexpr std::array<BoundName, 7> kUpperBounds = {
    BoundName::C_I, BoundName::C_II, BoundName::C_III, BoundName::C_IV,
    BoundName::C_V, BoundName::C_max, BoundName::log_mu};

std::string_view to_string(BoundName name);

struct BoundEntry {
  BoundName name;
  std::optional<double> value;  // nullopt = not applicable
};

struct BoundsOptions {
  bool support_only = false;
  /// User-supplied structure bounds l, u; enables c_V / C_V for any model.
  std::optional<std::pair<Vector, Vector>> structure;
  bool include_lambda_T = true;
};

/// Every closed-form bound for one model.
struct BoundsReport {
  std::vector<BoundEntry> lower;  // order of kLowerBounds
  std::vector<BoundEntry> upper;  // order of kUpperBounds
  /// Small-noise approximation; reported alongside, never used as a bound.
  std::optional<double> log_lambda_T;
  std::optional<StructureBand> band;
  BoundEntry best_lower{BoundName::c_I, std::nullopt};
  BoundEntry best_upper{BoundName::C_I, std::nullopt};

  std::optional<double> value(BoundName name) const;
};

/// Computes every applicable bound. Perturbation bounds need a common
/// incidence pattern, c_V / C_V need Leslie-2 structure or user l, u, and
/// lambda_T needs an IID chain. Best values are the max lower / min upper,
/// ties resolved by declaration order.
BoundsReport all_bounds(const ModelSpec& model, const BoundsOptions& opts = {});

}  // namespace sgrlab
