#include "sgrlab/mean_growth.hpp"

#include <cmath>
#include <sstream>

#include "sgrlab/error.hpp"
#include "sgrlab/spectral.hpp"

namespace sgrlab {

ProjectionMatrix mean_matrix(const ModelSpec& model) {
  const Vector& pi = model.stationary();
  Matrix mean = Matrix::Zero(model.dim(), model.dim());
  for (std::size_t k = 0; k < model.envs().size(); ++k) {
    mean += pi(static_cast<Eigen::Index>(k)) * model.envs()[k].matrix();
  }
  return ProjectionMatrix(std::move(mean));
}

double net_reproductive_value(const ProjectionMatrix& mean) {
  if (mean.dim() != 2 || mean(1, 1) != 0.0) {
    throw StructuralError("net reproductive value needs a 2x2 Leslie matrix [[f, F], [s, 0]]");
  }
  return mean(0, 0) + mean(1, 0) * mean(0, 1);
}

Matrix markov_mean_operator(const ModelSpec& model) {
  const Matrix P = model.chain().transition_matrix();
  const auto n = model.dim();
  const auto r = static_cast<Eigen::Index>(model.envs().size());
  Matrix D = Matrix::Zero(n * r, n * r);
  for (Eigen::Index xi = 0; xi < r; ++xi) {
    const Matrix& a = model.envs()[static_cast<std::size_t>(xi)].matrix();
    for (Eigen::Index eta = 0; eta < r; ++eta) {
      D.block(xi * n, eta * n, n, n) = P(eta, xi) * a;
    }
  }
  return D;
}

double mean_growth_rate(const ModelSpec& model) {
  if (model.chain().is_iid()) return std::log(spectral_radius(mean_matrix(model)));
  return std::log(spectral_radius(markov_mean_operator(model)));
}

namespace {

double enumerate_paths(const ModelSpec& model, const Matrix& P, const Vector& z,
                       std::size_t state, int remaining) {
  if (remaining == 0) return z.sum();
  double total = 0.0;
  for (std::size_t next = 0; next < model.envs().size(); ++next) {
    const double p = P(static_cast<Eigen::Index>(state), static_cast<Eigen::Index>(next));
    if (p == 0.0) continue;
    total += p * enumerate_paths(model, P, model.envs()[next].matrix() * z, next, remaining - 1);
  }
  return total;
}

}  // namespace

double exact_mean_norm(const ModelSpec& model, int t, std::uint64_t cap) {
  if (t < 0) throw ValidationError("time must be nonnegative");
  const std::uint64_t r = model.envs().size();
  std::uint64_t budget = 1;
  for (int i = 0; i < t; ++i) {
    if (budget > cap / r) {
      std::ostringstream os;
      os << "enumerating " << r << "^" << t << " environment paths exceeds the cap of " << cap;
      throw BudgetError(os.str());
    }
    budget *= r;
  }
  if (budget > cap) {
    std::ostringstream os;
    os << "enumeration needs " << budget << " paths, cap is " << cap;
    throw BudgetError(os.str());
  }

  const Vector z0 = model.initial_population();
  if (t == 0) return z0.sum();
  const Matrix P = model.chain().transition_matrix();
  const Vector& pi = model.stationary();
  double total = 0.0;
  for (std::size_t first = 0; first < model.envs().size(); ++first) {
    const double p = pi(static_cast<Eigen::Index>(first));
    if (p == 0.0) continue;
    total += p * enumerate_paths(model, P, model.envs()[first].matrix() * z0, first, t - 1);
  }
  return total;
}

double tuljapurkar_approx(const ModelSpec& model) {
  if (!model.chain().is_iid()) {
    throw ValidationError(
        "Tuljapurkar's approximation is implemented for IID environments only");
  }
  const ProjectionMatrix mean = mean_matrix(model);
  const PerronTriple perron = perron_triple(mean.matrix());
  const double lambda = perron.value;
  const Matrix S = perron.left * perron.right.transpose() / perron.left.dot(perron.right);

  const Vector& pi = model.stationary();
  double tau2 = 0.0;
  for (std::size_t k = 0; k < model.envs().size(); ++k) {
    const double deviation = S.cwiseProduct(model.envs()[k].matrix() - mean.matrix()).sum();
    tau2 += pi(static_cast<Eigen::Index>(k)) * deviation * deviation;
  }
  return std::log(lambda) - tau2 / (2.0 * lambda * lambda);
}

}  // namespace sgrlab
