#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgrlab/bounds.hpp"
#include "sgrlab/model.hpp"
#include "sgrlab/simulation.hpp"

namespace sgrlab {

/// Two-environment Leslie model: environment 1 is [[f, F], [s, 0]] and the
/// poor environment 2 has adult fertility F - Delta. IID with P(env 1) = pi1.
struct RichPoorSpec {
  double f = 0.0;
  double F = 0.0;
  double s = 0.0;
  double pi1 = 0.5;
  double Delta = 0.0;

  /// Throws DomainError unless f, F > 0, 0 < s <= 1, 0 < pi1 < 1, the rich
  /// environment grows (f + s F > 1) and 0 <= Delta <= F - kDeltaMargin.
  void validate() const;
  RichPoorSpec with_delta(double delta) const;
};

/// Delta is kept at least this far below F so environment 2 stays ergodic.
inline constexpr double kDeltaMargin = 1e-12;

enum class ReferenceCase { A, B, C };

/// A: pi1=0.5, F=1.35, f=0.55, s=0.45; B: pi1=0.9, F=1.3, f=0.5, s=0.5;
/// C: pi1=0.5, F=1.1, f=0.7, s=0.4. Delta = 0.
RichPoorSpec reference_case(ReferenceCase which);

ModelSpec rich_poor_model(const RichPoorSpec& spec);

enum class RichPoorBound { I, II, III, IV, V };
std::string_view to_string(RichPoorBound b);

/// Lower bound of the given family at Delta, computed by the general bound
/// routines on the expanded model (not by the closed forms below).
double rich_poor_lower_bound(const RichPoorSpec& spec, RichPoorBound bound, double delta);

struct DeltaThreshold {
  double value = 0.0;
  /// False when the bound is already <= 0 at Delta = 0 (value clamped to 0).
  bool certifies = false;
};

/// Closed-form thresholds:
///   I   F > 1, f+s <= F:  F - (f+s)^(pi1/(pi1-1))
///       otherwise (min column sum of env 1 is F):  F (1 - F^(1/(pi1-1)))
///       F == 1: bisection on c_I
///   III F (1 - rho(A_1)^(1/(pi1-1)))
///   IV  F - (1 - f)/s
/// Results are clamped to [0, F - kDeltaMargin]. Only I, III and IV have
/// closed forms; other families throw DomainError.
DeltaThreshold delta_threshold_closed(const RichPoorSpec& spec, RichPoorBound family);

/// Largest Delta in [0, F) with bound(Delta) > 0 for a bound that is
/// nonincreasing in Delta, found by bisection to absolute tolerance `tol`.
/// Returns 0 when bound(0) <= 0 and F - kDeltaMargin when no root exists.
DeltaThreshold delta_threshold_numeric(const RichPoorSpec& spec,
                                       const std::function<double(double)>& bound,
                                       double tol = 1e-9);
DeltaThreshold delta_threshold_numeric(const RichPoorSpec& spec, RichPoorBound family,
                                       double tol = 1e-9);

/// Threshold of the simulated log lambda_S. Every Delta reuses the same
/// seeds, so the environment paths are shared and the estimate is monotone.
DeltaThreshold delta_threshold_simulated(const RichPoorSpec& spec, const SimParams& sim,
                                         double tol = 1e-6);

struct DeltaAnalysis {
  DeltaThreshold delta_I;
  DeltaThreshold delta_III;
  DeltaThreshold delta_IV;
  DeltaThreshold delta_II_numeric;
  DeltaThreshold delta_V_numeric;
  std::optional<DeltaThreshold> delta_sim;
  /// Family with the largest certified threshold (first in I..V order on ties).
  RichPoorBound winner = RichPoorBound::I;
  /// Every family within `tie_tolerance` of the winning threshold.
  std::vector<RichPoorBound> tied_winners;

  const DeltaThreshold& threshold(RichPoorBound b) const;
};

DeltaAnalysis analyze_delta(const RichPoorSpec& spec, double tol = 1e-9,
                            const std::optional<SimParams>& sim = std::nullopt,
                            double tie_tolerance = 1e-9);

enum class Verdict { growth, extinction, indeterminate };
const char* to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::indeterminate;
  /// Bound that decided the verdict.
  std::optional<BoundEntry> basis;
  /// Net reproductive value of the mean matrix for Leslie-2 IID models;
  /// r0 < 1 is sufficient for extinction.
  std::optional<double> r0;
  std::optional<SgrEstimate> sgr;
};

/// Growth if best_lower > 0, extinction if best_upper < 0. lambda_T never
/// takes part.
Classification classify(const ModelSpec& model, const BoundsReport& report,
                        const std::optional<SgrEstimate>& sgr = std::nullopt);

}  // namespace sgrlab
