#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sgrlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Pattern = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Square nonnegative matrix of per-step vital rates.
class ProjectionMatrix {
 public:
  /// Throws ValidationError unless `m` is square, nonempty, finite and >= 0.
  explicit ProjectionMatrix(Matrix m);

  /// [[f, F], [s, 0]]
  static ProjectionMatrix leslie2(double f, double F, double s);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  Pattern pattern() const { return m_.array() > 0.0; }

  friend bool operator==(const ProjectionMatrix& a, const ProjectionMatrix& b) {
    return a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

/// Finite ordered set of environment matrices of a common dimension.
///
/// The common incidence pattern is not required at construction; it is
/// recorded so that the perturbation bounds can report themselves as not
/// applicable when the pattern differs between environments.
class EnvironmentSet {
 public:
  explicit EnvironmentSet(std::vector<ProjectionMatrix> envs,
                          std::vector<std::string> labels = {});

  std::size_t size() const { return envs_.size(); }
  Eigen::Index dim() const { return envs_.front().dim(); }
  const ProjectionMatrix& operator[](std::size_t i) const { return envs_[i]; }
  const std::vector<ProjectionMatrix>& matrices() const { return envs_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool has_common_pattern() const { return common_pattern_; }
  /// Incidence pattern of the first environment.
  Pattern pattern() const { return envs_.front().pattern(); }

  /// Entrywise minimum and maximum over environments.
  ProjectionMatrix entrywise_min() const;
  ProjectionMatrix entrywise_max() const;

  auto begin() const { return envs_.begin(); }
  auto end() const { return envs_.end(); }

 private:
  std::vector<ProjectionMatrix> envs_;
  std::vector<std::string> labels_;
  bool common_pattern_ = true;
};

enum class ChainKind { iid, markov };

/// Environmental process: IID draws from `pi`, or a homogeneous Markov chain
/// with row-stochastic transition matrix `P`.
class EnvironmentChain {
 public:
  static EnvironmentChain iid(Vector pi);
  /// Validates row sums, irreducibility and aperiodicity.
  static EnvironmentChain markov(Matrix P);

  ChainKind kind() const { return kind_; }
  bool is_iid() const { return kind_ == ChainKind::iid; }
  std::size_t states() const;

  /// Only meaningful for IID chains.
  const Vector& pi() const { return pi_; }
  /// Only meaningful for Markov chains.
  const Matrix& transition() const { return P_; }

  /// One-step transition matrix; for IID chains every row equals pi.
  Matrix transition_matrix() const;

 private:
  EnvironmentChain() = default;
  ChainKind kind_ = ChainKind::iid;
  Vector pi_;
  Matrix P_;
};

inline constexpr double kProbabilityTolerance = 1e-12;

/// Environment set, environmental chain and optional initial population.
/// Immutable after construction; the stationary distribution is cached.
class ModelSpec {
 public:
  ModelSpec(EnvironmentSet envs, EnvironmentChain chain,
            std::optional<Vector> z0 = std::nullopt);

  const EnvironmentSet& envs() const { return envs_; }
  const EnvironmentChain& chain() const { return chain_; }
  const std::optional<Vector>& z0() const { return z0_; }
  Eigen::Index dim() const { return envs_.dim(); }

  /// z0 when given, the uniform vector (1/n per class) otherwise.
  Vector initial_population() const;
  const Vector& stationary() const { return stationary_; }

 private:
  EnvironmentSet envs_;
  EnvironmentChain chain_;
  std::optional<Vector> z0_;
  Vector stationary_;
};

/// Juvenile fertility f, adult fertility F and juvenile survival s.
struct LeslieRates {
  double f = 0.0;
  double F = 0.0;
  double s = 0.0;
};

/// Per-environment rates of the two-age-class Leslie model.
class Leslie2Params {
 public:
  /// Throws ValidationError unless f > 0, F > 0 and 0 < s <= 1 everywhere.
  explicit Leslie2Params(std::vector<LeslieRates> rates);

  std::size_t size() const { return rates_.size(); }
  const LeslieRates& operator[](std::size_t i) const { return rates_[i]; }
  const std::vector<LeslieRates>& rates() const { return rates_; }

  EnvironmentSet to_environment_set() const;

 private:
  std::vector<LeslieRates> rates_;
};

/// Recovers Leslie-2 rates when every environment has the form
/// [[f, F], [s, 0]] with valid rates; nullopt otherwise.
std::optional<Leslie2Params> as_leslie2(const EnvironmentSet& envs);

/// Builds a model from Leslie-2 rates and an IID distribution.
ModelSpec leslie2_iid_model(const std::vector<LeslieRates>& rates, const Vector& pi);

}  // namespace sgrlab
