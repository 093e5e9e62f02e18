#include "sgrlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "sgrlab/error.hpp"

namespace sgrlab {
namespace {

double closed_form_2x2(const Matrix& m) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const double half_diff = 0.5 * (a - d);
  return 0.5 * (a + d) + std::sqrt(half_diff * half_diff + b * c);
}

// Nonnegative eigenvector of a nonnegative 2x2 matrix for its dominant root.
Vector eigenvector_2x2(const Matrix& m, double lambda) {
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  Vector u(2), w(2);
  u << b, std::max(0.0, lambda - a);
  w << std::max(0.0, lambda - d), c;
  Vector v = u.sum() >= w.sum() ? u : w;
  if (v.sum() <= 0.0) v = Vector::Ones(2);
  return v / v.sum();
}

struct PowerResult {
  double value;
  Vector vector;
};

PowerResult shifted_power_iteration(const Matrix& m, const PowerIterationOptions& opts) {
  const auto n = m.rows();
  Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  double previous = std::numeric_limits<double>::quiet_NaN();
  double current = previous;
  for (int it = 0; it < opts.max_iterations; ++it) {
    Vector y = m * x + x;
    current = x.dot(y) / x.squaredNorm() - 1.0;
    const double norm = y.lpNorm<1>();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw NumericalError("power iteration produced a degenerate iterate");
    }
    x = y / norm;
    if (it > 0 && std::abs(current - previous) < opts.tol * std::max(1.0, std::abs(current))) {
      return {std::max(0.0, current), x};
    }
    previous = current;
  }
  std::ostringstream os;
  os.precision(17);
  os << "power iteration did not converge in " << opts.max_iterations
     << " iterations (last Rayleigh quotients " << previous << ", " << current << ")";
  throw NumericalError(os.str());
}

void require_square(const Matrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw ValidationError("spectral computations need a nonempty square matrix");
  }
}

}  // namespace

double spectral_radius(const Matrix& m, const PowerIterationOptions& opts) {
  require_square(m);
  if (m.rows() == 1) return std::abs(m(0, 0));
  if (m.rows() == 2) return closed_form_2x2(m);
  return shifted_power_iteration(m, opts).value;
}

double spectral_radius(const ProjectionMatrix& m, const PowerIterationOptions& opts) {
  return spectral_radius(m.matrix(), opts);
}

PerronTriple perron_triple(const Matrix& m, const PowerIterationOptions& opts) {
  require_square(m);
  PerronTriple t;
  if (m.rows() == 1) {
    t.value = std::abs(m(0, 0));
    t.right = t.left = Vector::Ones(1);
  } else if (m.rows() == 2) {
    t.value = closed_form_2x2(m);
    t.right = eigenvector_2x2(m, t.value);
    const Matrix mt = m.transpose();
    t.left = eigenvector_2x2(mt, t.value);
  } else {
    auto right = shifted_power_iteration(m, opts);
    auto left = shifted_power_iteration(m.transpose(), opts);
    t.value = right.value;
    t.right = std::move(right.vector);
    t.left = std::move(left.vector);
  }
  return t;
}

Pattern boolean_product(const Pattern& a, const Pattern& b) {
  Pattern out = Pattern::Constant(a.rows(), b.cols(), false);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (!a(i, k)) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j) out(i, j) = out(i, j) || b(k, j);
    }
  }
  return out;
}

bool is_irreducible(const Pattern& support) {
  const auto r = support.rows();
  // Strongly connected iff every node reaches every other from node 0 in the
  // graph and in its transpose.
  auto reaches_all = [r](const Pattern& g) {
    std::vector<char> seen(static_cast<std::size_t>(r), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const auto i = stack.back();
      stack.pop_back();
      for (Eigen::Index j = 0; j < r; ++j) {
        if (g(i, j) && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = 1;
          stack.push_back(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reaches_all(support) && reaches_all(support.transpose());
}

bool is_primitive(const Pattern& support) {
  if (!is_irreducible(support)) return false;
  const auto r = static_cast<long long>(support.rows());
  long long exponent = (r - 1) * (r - 1) + 1;
  Pattern result = Pattern::Constant(support.rows(), support.cols(), false);
  for (Eigen::Index i = 0; i < support.rows(); ++i) result(i, i) = true;
  Pattern base = support;
  while (exponent > 0) {
    if (exponent & 1) result = boolean_product(result, base);
    exponent >>= 1;
    if (exponent > 0) base = boolean_product(base, base);
  }
  return result.all();
}

Vector stationary_distribution(const EnvironmentChain& chain) {
  if (chain.is_iid()) return chain.pi();
  const Matrix& P = chain.transition();
  const auto r = P.rows();
  Vector pi;
  if (r <= 64) {
    Matrix system = P.transpose() - Matrix::Identity(r, r);
    system.row(r - 1).setOnes();
    Vector rhs = Vector::Zero(r);
    rhs(r - 1) = 1.0;
    pi = system.fullPivLu().solve(rhs);
  } else {
    pi = Vector::Constant(r, 1.0 / static_cast<double>(r));
    constexpr int kMaxIterations = 1000000;
    int it = 0;
    for (; it < kMaxIterations; ++it) {
      Vector next = P.transpose() * pi;
      next /= next.sum();
      const double change = (next - pi).lpNorm<Eigen::Infinity>();
      pi = std::move(next);
      if (change < 1e-15) break;
    }
    if (it == kMaxIterations) {
      throw NumericalError("stationary distribution power iteration did not converge");
    }
  }
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

}  // namespace sgrlab
