#include "sgrlab/simulation.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "sgrlab/error.hpp"

namespace sgrlab {
namespace {

// Inverse-CDF sampler over environment indices.
class EnvironmentSampler {
 public:
  explicit EnvironmentSampler(const ModelSpec& model)
      : states_(model.envs().size()), iid_(model.chain().is_iid()) {
    initial_ = cumulative(model.stationary());
    if (!iid_) {
      const Matrix& P = model.chain().transition();
      for (Eigen::Index i = 0; i < P.rows(); ++i) rows_.push_back(cumulative(P.row(i).transpose()));
    }
  }

  template <class Rng>
  std::size_t first(Rng& rng) {
    return draw(initial_, rng);
  }

  template <class Rng>
  std::size_t next(std::size_t current, Rng& rng) {
    return iid_ ? draw(initial_, rng) : draw(rows_[current], rng);
  }

 private:
  static std::vector<double> cumulative(const Vector& p) {
    std::vector<double> c(static_cast<std::size_t>(p.size()));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) c[static_cast<std::size_t>(i)] = acc += p(i);
    // Rounding must never leave u >= last threshold unmatched; the last
    // state with positive mass absorbs the remainder.
    for (auto i = c.size(); i-- > 0;) {
      if (p(static_cast<Eigen::Index>(i)) > 0.0) {
        c[i] = 2.0;
        break;
      }
    }
    return c;
  }

  template <class Rng>
  std::size_t draw(const std::vector<double>& cum, Rng& rng) {
    const double u = uniform_(rng);
    std::size_t k = 0;
    while (k + 1 < cum.size() && !(u < cum[k])) ++k;
    return k;
  }

  std::size_t states_;
  bool iid_;
  std::vector<double> initial_;
  std::vector<std::vector<double>> rows_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Row-major copy of every environment for the inner loop.
struct FlatEnvironments {
  explicit FlatEnvironments(const EnvironmentSet& envs) : n(envs.dim()) {
    const auto nn = static_cast<std::size_t>(n * n);
    data.resize(envs.size() * nn);
    for (std::size_t k = 0; k < envs.size(); ++k) {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          data[k * nn + static_cast<std::size_t>(i * n + j)] = envs[k](i, j);
        }
      }
    }
  }
  const double* operator[](std::size_t k) const { return data.data() + k * static_cast<std::size_t>(n * n); }

  Eigen::Index n;
  std::vector<double> data;
};

// y = A z, returns |y|_1 (entries are nonnegative).
inline double apply(const double* a, const double* z, double* y, Eigen::Index n) {
  if (n == 2) {
    y[0] = a[0] * z[0] + a[1] * z[1];
    y[1] = a[2] * z[0] + a[3] * z[1];
    return y[0] + y[1];
  }
  double norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += a[i * n + j] * z[j];
    y[i] = acc;
    norm += acc;
  }
  return norm;
}

[[noreturn]] void degenerate(std::int64_t step, double norm) {
  std::ostringstream os;
  os << "population degenerated at step " << step << " (|z|_1 = " << norm << ")";
  throw NumericalError(os.str());
}

template <class Visitor>
void run_trajectory(const ModelSpec& model, std::int64_t steps, std::uint64_t seed,
                    Visitor&& visit) {
  const FlatEnvironments flat(model.envs());
  EnvironmentSampler sampler(model);
  std::mt19937_64 rng(seed);

  const auto n = flat.n;
  Vector z0 = model.initial_population();
  std::vector<double> z(z0.data(), z0.data() + n);
  std::vector<double> y(static_cast<std::size_t>(n));
  const double norm0 = z0.sum();
  for (auto& v : z) v /= norm0;

  std::size_t env = sampler.first(rng);
  for (std::int64_t t = 1; t <= steps; ++t) {
    if (t > 1) env = sampler.next(env, rng);
    const double growth = apply(flat[env], z.data(), y.data(), n);
    if (!(growth > 0.0) || !std::isfinite(growth)) degenerate(t, growth);
    for (Eigen::Index i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / growth;
    visit(t, growth, z);
  }
}

}  // namespace

void SimParams::validate() const {
  if (samples < 1) throw ValidationError("number of trajectories must be at least 1");
  if (burn_in < 0) throw ValidationError("burn-in must be nonnegative");
  if (steps <= burn_in) throw ValidationError("steps must exceed burn-in");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t x = base + 0x9E3779B97F4A7C15ull * (index + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double simulate_log_growth(const ModelSpec& model, std::int64_t steps, std::int64_t burn_in,
                           std::uint64_t seed) {
  if (burn_in < 0 || steps <= burn_in) throw ValidationError("steps must exceed burn-in >= 0");

  // Growth factors are multiplied and only folded into the log sum when the
  // running product leaves [1e-150, 1e150].
  double log_sum = 0.0;
  double product = 1.0;
  run_trajectory(model, steps, seed, [&](std::int64_t t, double growth, const std::vector<double>&) {
    if (t <= burn_in) return;
    product *= growth;
    if (product > 1e150 || product < 1e-150) {
      log_sum += std::log(product);
      product = 1.0;
    }
  });
  log_sum += std::log(product);
  return log_sum / static_cast<double>(steps - burn_in);
}

SgrEstimate estimate_sgr(const ModelSpec& model, const SimParams& params, unsigned workers) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.samples);
  std::vector<double> values(n);
  parallel_for(
      n,
      [&](std::size_t k) {
        values[k] = simulate_log_growth(model, params.steps, params.burn_in,
                                        derive_seed(params.seed, k));
      },
      workers);

  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;

  return {mean, se, params.samples, params.steps, params.burn_in, params.seed};
}

Matrix simulate_structure(const ModelSpec& model, std::int64_t steps, std::uint64_t seed) {
  if (steps < 0) throw ValidationError("steps must be nonnegative");
  Matrix out(model.dim(), steps + 1);
  Vector z0 = model.initial_population();
  out.col(0) = z0 / z0.sum();
  run_trajectory(model, steps, seed, [&](std::int64_t t, double, const std::vector<double>& z) {
    for (Eigen::Index i = 0; i < model.dim(); ++i) out(i, t) = z[static_cast<std::size_t>(i)];
  });
  return out;
}

}  // namespace sgrlab
