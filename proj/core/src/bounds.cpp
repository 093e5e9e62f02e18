#include "sgrlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sgrlab/error.hpp"
#include "sgrlab/mean_growth.hpp"
#include "sgrlab/spectral.hpp"

namespace sgrlab {
namespace {

void require_weights(const EnvironmentSet& envs, const Vector& pi) {
  if (static_cast<std::size_t>(pi.size()) != envs.size()) {
    throw ValidationError("probability vector length does not match the number of environments");
  }
}

// sum_eta pi_eta log(x_eta), skipping zero-weight environments.
template <class F>
double weighted_log_sum(const Vector& pi, F&& term) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < pi.size(); ++k) {
    if (pi(k) == 0.0) continue;
    acc += pi(k) * std::log(term(static_cast<std::size_t>(k)));
  }
  return acc;
}

struct Extremes {
  double w_min;
  double w_max;
};

Extremes relative_extremes(const Matrix& a, const Matrix& b, bool support_only) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      double w = 0.0;
      if (b(i, j) != 0.0) {
        w = (a(i, j) - b(i, j)) / b(i, j);
      } else if (support_only) {
        continue;
      }
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
  }
  // An all-zero reference has no support; treat it as unperturbed.
  if (lo > hi) lo = hi = 0.0;
  return {lo, hi};
}

void require_same_pattern(const ProjectionMatrix& a, const ProjectionMatrix& b, std::size_t env) {
  if (a.dim() != b.dim() || (a.pattern() != b.pattern()).any()) {
    std::ostringstream os;
    os << "incidence pattern of environment " << env
       << " differs from the reference matrix; perturbation bounds need matching zeros";
    throw StructuralError(os.str());
  }
}

}  // namespace

Vector column_sums(const ProjectionMatrix& m) { return m.matrix().colwise().sum().transpose(); }

BoundPair cohen_bounds(const EnvironmentSet& envs, const Vector& pi) {
  require_weights(envs, pi);
  std::vector<double> mins, maxs;
  for (const auto& a : envs) {
    const Vector phi = column_sums(a);
    mins.push_back(phi.minCoeff());
    maxs.push_back(phi.maxCoeff());
  }
  return {weighted_log_sum(pi, [&](std::size_t k) { return mins[k]; }),
          weighted_log_sum(pi, [&](std::size_t k) { return maxs[k]; })};
}

BoundPair maxmin_bounds(const EnvironmentSet& envs) {
  return {std::log(spectral_radius(envs.entrywise_min())),
          std::log(spectral_radius(envs.entrywise_max()))};
}

PerturbationProfile perturbation_profile(const EnvironmentSet& envs, const ProjectionMatrix& ref,
                                         bool support_only) {
  PerturbationProfile profile;
  for (std::size_t k = 0; k < envs.size(); ++k) {
    require_same_pattern(envs[k], ref, k);
    const auto e = relative_extremes(envs[k].matrix(), ref.matrix(), support_only);
    profile.w_min.push_back(e.w_min);
    profile.w_max.push_back(e.w_max);
  }
  return profile;
}

BoundPair perturbation_bounds(const EnvironmentSet& envs, const Vector& pi,
                              const ProjectionMatrix& ref, bool support_only) {
  require_weights(envs, pi);
  const auto profile = perturbation_profile(envs, ref, support_only);
  const double base = std::log(spectral_radius(ref));
  return {base + weighted_log_sum(pi, [&](std::size_t k) { return 1.0 + profile.w_min[k]; }),
          base + weighted_log_sum(pi, [&](std::size_t k) { return 1.0 + profile.w_max[k]; })};
}

BoundPair bounds_II(const EnvironmentSet& envs, const Vector& pi, bool support_only) {
  require_weights(envs, pi);
  Matrix mean = Matrix::Zero(envs.dim(), envs.dim());
  for (std::size_t k = 0; k < envs.size(); ++k) {
    mean += pi(static_cast<Eigen::Index>(k)) * envs[k].matrix();
  }
  return perturbation_bounds(envs, pi, ProjectionMatrix(std::move(mean)), support_only);
}

BoundPair bounds_III(const EnvironmentSet& envs, const Vector& pi, bool support_only) {
  return perturbation_bounds(envs, pi, envs.entrywise_max(), support_only);
}

BoundPair bounds_IV(const EnvironmentSet& envs, const Vector& pi, bool support_only) {
  return perturbation_bounds(envs, pi, envs.entrywise_min(), support_only);
}

BoundPair general_perturbation_relation(const EnvironmentSet& envs_a,
                                        const EnvironmentSet& envs_b, const Vector& pi,
                                        bool support_only) {
  require_weights(envs_a, pi);
  if (envs_a.size() != envs_b.size()) {
    throw StructuralError("both systems must have the same number of environments");
  }
  std::vector<Extremes> ext;
  for (std::size_t k = 0; k < envs_a.size(); ++k) {
    require_same_pattern(envs_a[k], envs_b[k], k);
    ext.push_back(relative_extremes(envs_a[k].matrix(), envs_b[k].matrix(), support_only));
  }
  return {weighted_log_sum(pi, [&](std::size_t k) { return 1.0 + ext[k].w_min; }),
          weighted_log_sum(pi, [&](std::size_t k) { return 1.0 + ext[k].w_max; })};
}

StructureBand leslie2_structure_band(const Leslie2Params& params) {
  double eps_m = std::numeric_limits<double>::infinity(), eps_M = 0.0;
  double gam_m = std::numeric_limits<double>::infinity(), gam_M = 0.0;
  for (const auto& r : params.rates()) {
    if (!(r.f > 0.0 && r.F > 0.0 && r.s > 0.0)) {
      throw DomainError("structure band needs strictly positive f, F and s");
    }
    eps_m = std::min(eps_m, r.F / r.f);
    eps_M = std::max(eps_M, r.F / r.f);
    gam_m = std::min(gam_m, r.s / r.f);
    gam_M = std::max(gam_M, r.s / r.f);
  }
  const double a = eps_M * gam_M;
  const double b = eps_m * gam_m;
  const double root = std::sqrt(1.0 + (a - b) * (a - b) + 2.0 * (a + b));

  StructureBand band;
  band.delta = 2.0 * gam_m / (1.0 - b + a + root);
  band.kappa = 2.0 * gam_M / (1.0 - a + b + root);
  band.lower = Vector(2);
  band.upper = Vector(2);
  band.lower << 1.0 / (1.0 + band.kappa), band.delta / (1.0 + band.kappa);
  band.upper << 1.0 / (1.0 + band.delta), band.kappa / (1.0 + band.delta);
  return band;
}

BoundPair structure_informed_bounds(const EnvironmentSet& envs, const Vector& pi,
                                    const Vector& lower, const Vector& upper) {
  require_weights(envs, pi);
  if (lower.size() != envs.dim() || upper.size() != envs.dim()) {
    throw DomainError("structure bounds l and u must have one entry per class");
  }
  if ((lower.array() < 0.0).any() || (upper.array() < 0.0).any()) {
    throw DomainError("structure bounds l and u must be nonnegative");
  }
  std::vector<Vector> phi;
  for (const auto& a : envs) phi.push_back(column_sums(a));
  return {weighted_log_sum(pi, [&](std::size_t k) { return lower.dot(phi[k]); }),
          weighted_log_sum(pi, [&](std::size_t k) { return upper.dot(phi[k]); })};
}

BoundPair structure_informed_bounds(const EnvironmentSet& envs, const Vector& pi,
                                    const StructureBand& band) {
  return structure_informed_bounds(envs, pi, band.lower, band.upper);
}

std::string_view to_string(BoundName name) {
  switch (name) {
    case BoundName::c_I: return "c_I";
    case BoundName::c_II: return "c_II";
    case BoundName::c_III: return "c_III";
    case BoundName::c_IV: return "c_IV";
    case BoundName::c_V: return "c_V";
    case BoundName::c_min: return "c_min";
    case BoundName::C_I: return "C_I";
    case BoundName::C_II: return "C_II";
    case BoundName::C_III: return "C_III";
    case BoundName::C_IV: return "C_IV";
    case BoundName::C_V: return "C_V";
    case BoundName::C_max: return "C_max";
    case BoundName::log_mu: return "log_mu";
  }
  return "?";
}

std::optional<double> BoundsReport::value(BoundName name) const {
  for (const auto* list : {&lower, &upper}) {
    for (const auto& e : *list) {
      if (e.name == name) return e.value;
    }
  }
  return std::nullopt;
}

BoundsReport all_bounds(const ModelSpec& model, const BoundsOptions& opts) {
  const auto& envs = model.envs();
  const Vector& pi = model.stationary();

  std::optional<BoundPair> cohen = cohen_bounds(envs, pi);
  std::optional<BoundPair> maxmin = maxmin_bounds(envs);
  std::optional<BoundPair> II, III, IV, V;
  if (envs.has_common_pattern()) {
    II = bounds_II(envs, pi, opts.support_only);
    III = bounds_III(envs, pi, opts.support_only);
    IV = bounds_IV(envs, pi, opts.support_only);
  }

  BoundsReport report;
  if (opts.structure) {
    V = structure_informed_bounds(envs, pi, opts.structure->first, opts.structure->second);
  } else if (auto leslie = as_leslie2(envs)) {
    report.band = leslie2_structure_band(*leslie);
    V = structure_informed_bounds(envs, pi, *report.band);
  }
  const double log_mu = mean_growth_rate(model);
  if (opts.include_lambda_T && model.chain().is_iid()) report.log_lambda_T = tuljapurkar_approx(model);

  auto lo = [](const std::optional<BoundPair>& p) {
    return p ? std::optional<double>(p->lower) : std::nullopt;
  };
  auto hi = [](const std::optional<BoundPair>& p) {
    return p ? std::optional<double>(p->upper) : std::nullopt;
  };
  report.lower = {{BoundName::c_I, lo(cohen)},  {BoundName::c_II, lo(II)},
                  {BoundName::c_III, lo(III)},  {BoundName::c_IV, lo(IV)},
                  {BoundName::c_V, lo(V)},      {BoundName::c_min, lo(maxmin)}};
  report.upper = {{BoundName::C_I, hi(cohen)},  {BoundName::C_II, hi(II)},
                  {BoundName::C_III, hi(III)},  {BoundName::C_IV, hi(IV)},
                  {BoundName::C_V, hi(V)},      {BoundName::C_max, hi(maxmin)},
                  {BoundName::log_mu, log_mu}};

  for (const auto& e : report.lower) {
    if (e.value && (!report.best_lower.value || *e.value > *report.best_lower.value)) {
      report.best_lower = e;
    }
  }
  for (const auto& e : report.upper) {
    if (e.value && (!report.best_upper.value || *e.value < *report.best_upper.value)) {
      report.best_upper = e;
    }
  }
  return report;
}

}  // namespace sgrlab
