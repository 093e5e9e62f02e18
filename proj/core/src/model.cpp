#include "sgrlab/model.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "sgrlab/error.hpp"
#include "sgrlab/spectral.hpp"

namespace sgrlab {

ProjectionMatrix::ProjectionMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    std::ostringstream os;
    os << "projection matrix must be square and nonempty, got " << m_.rows() << "x"
       << m_.cols();
    throw ValidationError(os.str());
  }
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      const double v = m_(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream os;
        os << "projection matrix entry (" << i << "," << j << ") = " << v
           << " is not a finite nonnegative number";
        throw ValidationError(os.str());
      }
    }
  }
}

ProjectionMatrix ProjectionMatrix::leslie2(double f, double F, double s) {
  Matrix m(2, 2);
  m << f, F, s, 0.0;
  return ProjectionMatrix(std::move(m));
}

EnvironmentSet::EnvironmentSet(std::vector<ProjectionMatrix> envs,
                               std::vector<std::string> labels)
    : envs_(std::move(envs)), labels_(std::move(labels)) {
  if (envs_.empty()) throw ValidationError("environment set must contain at least one matrix");
  if (!labels_.empty() && labels_.size() != envs_.size()) {
    throw ValidationError("environment labels must match the number of environments");
  }
  const auto n = envs_.front().dim();
  const Pattern first = envs_.front().pattern();
  for (std::size_t k = 1; k < envs_.size(); ++k) {
    if (envs_[k].dim() != n) {
      std::ostringstream os;
      os << "environment " << k << " has dimension " << envs_[k].dim() << ", expected " << n;
      throw ValidationError(os.str());
    }
    if ((envs_[k].pattern() != first).any()) common_pattern_ = false;
  }
}

ProjectionMatrix EnvironmentSet::entrywise_min() const {
  Matrix m = envs_.front().matrix();
  for (const auto& a : envs_) m = m.cwiseMin(a.matrix());
  return ProjectionMatrix(std::move(m));
}

ProjectionMatrix EnvironmentSet::entrywise_max() const {
  Matrix m = envs_.front().matrix();
  for (const auto& a : envs_) m = m.cwiseMax(a.matrix());
  return ProjectionMatrix(std::move(m));
}

EnvironmentChain EnvironmentChain::iid(Vector pi) {
  if (pi.size() < 1) throw ValidationError("IID distribution must have at least one state");
  for (Eigen::Index i = 0; i < pi.size(); ++i) {
    if (!std::isfinite(pi(i)) || pi(i) < 0.0) {
      std::ostringstream os;
      os << "IID probability pi[" << i << "] = " << pi(i) << " is negative or not finite";
      throw ValidationError(os.str());
    }
  }
  if (std::abs(pi.sum() - 1.0) > kProbabilityTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "IID probabilities sum to " << pi.sum() << ", expected 1";
    throw ValidationError(os.str());
  }
  EnvironmentChain c;
  c.kind_ = ChainKind::iid;
  c.pi_ = std::move(pi);
  return c;
}

EnvironmentChain EnvironmentChain::markov(Matrix P) {
  if (P.rows() < 1 || P.rows() != P.cols()) {
    throw ValidationError("Markov transition matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      if (!std::isfinite(P(i, j)) || P(i, j) < 0.0) {
        std::ostringstream os;
        os << "transition probability P(" << i << "," << j << ") = " << P(i, j)
           << " is negative or not finite";
        throw ValidationError(os.str());
      }
    }
    const double row = P.row(i).sum();
    if (std::abs(row - 1.0) > kProbabilityTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << i << " of the transition matrix sums to " << row << ", expected 1";
      throw ValidationError(os.str());
    }
  }
  const Pattern support = P.array() > 0.0;
  if (!is_irreducible(support)) throw ValidationError("Markov chain is not irreducible");
  if (!is_primitive(support)) throw ValidationError("Markov chain is periodic (not aperiodic)");
  EnvironmentChain c;
  c.kind_ = ChainKind::markov;
  c.P_ = std::move(P);
  return c;
}

std::size_t EnvironmentChain::states() const {
  return static_cast<std::size_t>(is_iid() ? pi_.size() : P_.rows());
}

Matrix EnvironmentChain::transition_matrix() const {
  if (!is_iid()) return P_;
  return Vector::Ones(pi_.size()) * pi_.transpose();
}

ModelSpec::ModelSpec(EnvironmentSet envs, EnvironmentChain chain, std::optional<Vector> z0)
    : envs_(std::move(envs)), chain_(std::move(chain)), z0_(std::move(z0)) {
  if (chain_.states() != envs_.size()) {
    std::ostringstream os;
    os << "chain has " << chain_.states() << " states but there are " << envs_.size()
       << " environments";
    throw ValidationError(os.str());
  }
  if (z0_) {
    if (z0_->size() != envs_.dim()) {
      std::ostringstream os;
      os << "z0 has length " << z0_->size() << ", expected " << envs_.dim();
      throw ValidationError(os.str());
    }
    bool positive = false;
    for (Eigen::Index i = 0; i < z0_->size(); ++i) {
      const double v = (*z0_)(i);
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("z0 must be nonnegative and finite");
      positive = positive || v > 0.0;
    }
    if (!positive) throw ValidationError("z0 must have at least one positive entry");
  }
  stationary_ = stationary_distribution(chain_);
}

Vector ModelSpec::initial_population() const {
  if (z0_) return *z0_;
  const auto n = envs_.dim();
  return Vector::Constant(n, 1.0 / static_cast<double>(n));
}

Leslie2Params::Leslie2Params(std::vector<LeslieRates> rates) : rates_(std::move(rates)) {
  if (rates_.empty()) throw ValidationError("Leslie-2 parameters need at least one environment");
  for (std::size_t k = 0; k < rates_.size(); ++k) {
    const auto& r = rates_[k];
    const bool ok = std::isfinite(r.f) && std::isfinite(r.F) && std::isfinite(r.s) && r.f > 0.0 &&
                    r.F > 0.0 && r.s > 0.0 && r.s <= 1.0;
    if (!ok) {
      std::ostringstream os;
      os << "Leslie-2 environment " << k << " (f=" << r.f << ", F=" << r.F << ", s=" << r.s
         << ") requires f > 0, F > 0 and 0 < s <= 1";
      throw ValidationError(os.str());
    }
  }
}

EnvironmentSet Leslie2Params::to_environment_set() const {
  std::vector<ProjectionMatrix> envs;
  envs.reserve(rates_.size());
  for (const auto& r : rates_) envs.push_back(ProjectionMatrix::leslie2(r.f, r.F, r.s));
  return EnvironmentSet(std::move(envs));
}

std::optional<Leslie2Params> as_leslie2(const EnvironmentSet& envs) {
  if (envs.dim() != 2) return std::nullopt;
  std::vector<LeslieRates> rates;
  rates.reserve(envs.size());
  for (const auto& a : envs) {
    const LeslieRates r{a(0, 0), a(0, 1), a(1, 0)};
    if (a(1, 1) != 0.0 || !(r.f > 0.0) || !(r.F > 0.0) || !(r.s > 0.0) || r.s > 1.0) {
      return std::nullopt;
    }
    rates.push_back(r);
  }
  return Leslie2Params(std::move(rates));
}

ModelSpec leslie2_iid_model(const std::vector<LeslieRates>& rates, const Vector& pi) {
  return ModelSpec(Leslie2Params(rates).to_environment_set(), EnvironmentChain::iid(pi));
}

}  // namespace sgrlab
