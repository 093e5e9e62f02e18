#include "sgrlab/extinction.hpp"

#include <cmath>
#include <sstream>

#include "sgrlab/error.hpp"
#include "sgrlab/mean_growth.hpp"
#include "sgrlab/spectral.hpp"

namespace sgrlab {

void RichPoorSpec::validate() const {
  std::ostringstream os;
  if (!(f > 0.0) || !(F > 0.0) || !(s > 0.0) || s > 1.0) {
    os << "rich/poor model needs f > 0, F > 0 and 0 < s <= 1 (got f=" << f << ", F=" << F
       << ", s=" << s << ")";
    throw DomainError(os.str());
  }
  if (!(pi1 > 0.0) || !(pi1 < 1.0)) {
    os << "pi1 must lie in (0, 1), got " << pi1;
    throw DomainError(os.str());
  }
  if (!(f + s * F > 1.0)) {
    os << "the rich environment must grow: f + s F = " << f + s * F << " is not > 1";
    throw DomainError(os.str());
  }
  if (!(Delta >= 0.0) || Delta > F - kDeltaMargin) {
    os << "Delta must lie in [0, F) with F - Delta > 0, got Delta=" << Delta << ", F=" << F;
    throw DomainError(os.str());
  }
}

RichPoorSpec RichPoorSpec::with_delta(double delta) const {
  RichPoorSpec out = *this;
  out.Delta = delta;
  return out;
}

RichPoorSpec reference_case(ReferenceCase which) {
  switch (which) {
    case ReferenceCase::A: return {0.55, 1.35, 0.45, 0.5, 0.0};
    case ReferenceCase::B: return {0.5, 1.3, 0.5, 0.9, 0.0};
    case ReferenceCase::C: return {0.7, 1.1, 0.4, 0.5, 0.0};
  }
  throw DomainError("unknown reference case");
}

ModelSpec rich_poor_model(const RichPoorSpec& spec) {
  spec.validate();
  Vector pi(2);
  pi << spec.pi1, 1.0 - spec.pi1;
  return leslie2_iid_model({{spec.f, spec.F, spec.s}, {spec.f, spec.F - spec.Delta, spec.s}}, pi);
}

std::string_view to_string(RichPoorBound b) {
  switch (b) {
    case RichPoorBound::I: return "I";
    case RichPoorBound::II: return "II";
    case RichPoorBound::III: return "III";
    case RichPoorBound::IV: return "IV";
    case RichPoorBound::V: return "V";
  }
  return "?";
}

double rich_poor_lower_bound(const RichPoorSpec& spec, RichPoorBound bound, double delta) {
  const ModelSpec model = rich_poor_model(spec.with_delta(delta));
  const auto& envs = model.envs();
  const Vector& pi = model.stationary();
  switch (bound) {
    case RichPoorBound::I: return cohen_bounds(envs, pi).lower;
    case RichPoorBound::II: return bounds_II(envs, pi).lower;
    case RichPoorBound::III: return bounds_III(envs, pi).lower;
    case RichPoorBound::IV: return bounds_IV(envs, pi).lower;
    case RichPoorBound::V:
      return structure_informed_bounds(envs, pi, leslie2_structure_band(*as_leslie2(envs))).lower;
  }
  throw DomainError("unknown bound family");
}

namespace {

DeltaThreshold clamp_threshold(const RichPoorSpec& spec, double value, double bound_at_zero) {
  // A bound exactly at 0 for Delta = 0 (f + s = 1 in family I) still reports
  // its formula value.
  if (bound_at_zero < -1e-12 || !(value > 0.0)) return {0.0, false};
  return {std::min(value, spec.F - kDeltaMargin), true};
}

}  // namespace

DeltaThreshold delta_threshold_closed(const RichPoorSpec& spec, RichPoorBound family) {
  const RichPoorSpec base = spec.with_delta(0.0);
  base.validate();
  const double f = base.f, F = base.F, s = base.s, pi1 = base.pi1;
  auto at_zero = [&] { return rich_poor_lower_bound(base, family, 0.0); };
  switch (family) {
    case RichPoorBound::I: {
      if (F == 1.0) return delta_threshold_numeric(base, RichPoorBound::I);
      if (F > 1.0 && f + s <= F) {
        return clamp_threshold(base, F - std::pow(f + s, pi1 / (pi1 - 1.0)), at_zero());
      }
      return clamp_threshold(base, F * (1.0 - std::pow(F, 1.0 / (pi1 - 1.0))), at_zero());
    }
    case RichPoorBound::III: {
      const double rho1 = spectral_radius(ProjectionMatrix::leslie2(f, F, s));
      return clamp_threshold(base, F * (1.0 - std::pow(rho1, 1.0 / (pi1 - 1.0))), at_zero());
    }
    case RichPoorBound::IV:
      return clamp_threshold(base, F - (1.0 - f) / s, at_zero());
    default:
      throw DomainError("closed-form Delta thresholds exist only for bounds I, III and IV");
  }
}

DeltaThreshold delta_threshold_numeric(const RichPoorSpec& spec,
                                       const std::function<double(double)>& bound, double tol) {
  spec.with_delta(0.0).validate();
  if (!(tol > 0.0)) throw DomainError("bisection tolerance must be positive");
  if (!(bound(0.0) > 0.0)) return {0.0, false};
  double lo = 0.0;
  double hi = spec.F - kDeltaMargin;
  if (bound(hi) > 0.0) return {hi, true};
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (bound(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, true};
}

DeltaThreshold delta_threshold_numeric(const RichPoorSpec& spec, RichPoorBound family, double tol) {
  return delta_threshold_numeric(
      spec, [&](double d) { return rich_poor_lower_bound(spec, family, d); }, tol);
}

DeltaThreshold delta_threshold_simulated(const RichPoorSpec& spec, const SimParams& sim,
                                         double tol) {
  return delta_threshold_numeric(
      spec,
      [&](double d) { return estimate_sgr(rich_poor_model(spec.with_delta(d)), sim).log_sgr_mean; },
      tol);
}

const DeltaThreshold& DeltaAnalysis::threshold(RichPoorBound b) const {
  switch (b) {
    case RichPoorBound::I: return delta_I;
    case RichPoorBound::II: return delta_II_numeric;
    case RichPoorBound::III: return delta_III;
    case RichPoorBound::IV: return delta_IV;
    case RichPoorBound::V: return delta_V_numeric;
  }
  return delta_I;
}

DeltaAnalysis analyze_delta(const RichPoorSpec& spec, double tol,
                            const std::optional<SimParams>& sim, double tie_tolerance) {
  DeltaAnalysis out;
  out.delta_I = delta_threshold_closed(spec, RichPoorBound::I);
  out.delta_III = delta_threshold_closed(spec, RichPoorBound::III);
  out.delta_IV = delta_threshold_closed(spec, RichPoorBound::IV);
  out.delta_II_numeric = delta_threshold_numeric(spec, RichPoorBound::II, tol);
  out.delta_V_numeric = delta_threshold_numeric(spec, RichPoorBound::V, tol);
  if (sim) out.delta_sim = delta_threshold_simulated(spec, *sim);

  constexpr RichPoorBound order[] = {RichPoorBound::I, RichPoorBound::II, RichPoorBound::III,
                                     RichPoorBound::IV, RichPoorBound::V};
  double best = -1.0;
  for (auto b : order) {
    if (out.threshold(b).value > best) {
      best = out.threshold(b).value;
      out.winner = b;
    }
  }
  for (auto b : order) {
    if (out.threshold(b).value >= best - tie_tolerance) out.tied_winners.push_back(b);
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::growth: return "growth";
    case Verdict::extinction: return "extinction";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

Classification classify(const ModelSpec& model, const BoundsReport& report,
                        const std::optional<SgrEstimate>& sgr) {
  Classification c;
  c.sgr = sgr;
  if (report.best_lower.value && *report.best_lower.value > 0.0) {
    c.verdict = Verdict::growth;
    c.basis = report.best_lower;
  } else if (report.best_upper.value && *report.best_upper.value < 0.0) {
    c.verdict = Verdict::extinction;
    c.basis = report.best_upper;
  }
  if (model.chain().is_iid() && as_leslie2(model.envs())) {
    c.r0 = net_reproductive_value(mean_matrix(model));
  }
  return c;
}

}  // namespace sgrlab
