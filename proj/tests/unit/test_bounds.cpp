#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sgrlab/bounds.hpp"
#include "sgrlab/error.hpp"
#include "sgrlab/mean_growth.hpp"
#include "sgrlab/simulation.hpp"
#include "test_support.hpp"

using namespace sgrlab;
using namespace sgrlab::testing;

namespace {

// Leslie-2 closed forms written out entry by entry, used as oracles for the
// general matrix routines.
struct LeslieOracle {
  std::vector<LeslieRates> r;
  Vector pi;

  double fmax() const { return ext([](auto& x) { return x.f; }, true); }
  double fmin() const { return ext([](auto& x) { return x.f; }, false); }
  double Fmax() const { return ext([](auto& x) { return x.F; }, true); }
  double Fmin() const { return ext([](auto& x) { return x.F; }, false); }
  double smax() const { return ext([](auto& x) { return x.s; }, true); }
  double smin() const { return ext([](auto& x) { return x.s; }, false); }

  template <class G>
  double ext(G g, bool hi) const {
    double v = g(r[0]);
    for (const auto& x : r) v = hi ? std::max(v, g(x)) : std::min(v, g(x));
    return v;
  }
  template <class G>
  double avg(G g) const {
    double v = 0;
    for (std::size_t k = 0; k < r.size(); ++k) v += pi(k) * g(r[k]);
    return v;
  }
  template <class G>
  double expect_log(G g) const {
    double v = 0;
    for (std::size_t k = 0; k < r.size(); ++k) v += pi(k) * std::log(g(r[k]));
    return v;
  }

  double c_I() const { return expect_log([](auto& x) { return std::min(x.f + x.s, x.F); }); }
  double C_I() const { return expect_log([](auto& x) { return std::max(x.f + x.s, x.F); }); }
  double c_min() const { return std::log(leslie_rho(fmin(), Fmin(), smin())); }
  double C_max() const { return std::log(leslie_rho(fmax(), Fmax(), smax())); }
  double log_mu() const {
    return std::log(leslie_rho(avg([](auto& x) { return x.f; }), avg([](auto& x) { return x.F; }),
                               avg([](auto& x) { return x.s; })));
  }
  double c_II() const {
    const double fb = avg([](auto& x) { return x.f; }), Fb = avg([](auto& x) { return x.F; }),
                 sb = avg([](auto& x) { return x.s; });
    return log_mu() + expect_log([&](auto& x) {
             return std::min({1.0, x.f / fb, x.F / Fb, x.s / sb});
           });
  }
  double C_II() const {
    const double fb = avg([](auto& x) { return x.f; }), Fb = avg([](auto& x) { return x.F; }),
                 sb = avg([](auto& x) { return x.s; });
    return log_mu() + expect_log([&](auto& x) {
             return std::max({1.0, x.f / fb, x.F / Fb, x.s / sb});
           });
  }
  double c_III() const {
    return C_max() + expect_log([&](auto& x) {
             return std::min({1.0, x.f / fmax(), x.F / Fmax(), x.s / smax()});
           });
  }
  double C_IV() const {
    return c_min() + expect_log([&](auto& x) {
             return std::max({1.0, x.f / fmin(), x.F / Fmin(), x.s / smin()});
           });
  }
  std::pair<double, double> delta_kappa() const {
    const double eM = ext([](auto& x) { return x.F / x.f; }, true);
    const double em = ext([](auto& x) { return x.F / x.f; }, false);
    const double gM = ext([](auto& x) { return x.s / x.f; }, true);
    const double gm = ext([](auto& x) { return x.s / x.f; }, false);
    const double a = eM * gM, b = em * gm;
    const double root = std::sqrt(1 + (a - b) * (a - b) + 2 * (a + b));
    return {2 * gm / (1 - b + a + root), 2 * gM / (1 - a + b + root)};
  }
  double c_V() const {
    const auto [d, k] = delta_kappa();
    return expect_log([&](auto& x) { return (x.f + x.s + x.F * d) / (1 + k); });
  }
  double C_V() const {
    const auto [d, k] = delta_kappa();
    return expect_log([&](auto& x) { return (x.f + x.s + x.F * k) / (1 + d); });
  }
};

ModelSpec single(const Matrix& a) {
  return ModelSpec(EnvironmentSet({ProjectionMatrix(a)}), EnvironmentChain::iid(Vector::Ones(1)));
}

}  // namespace

TEST(ColumnSums, Examples) {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0;
  EXPECT_EQ(column_sums(ProjectionMatrix(m)), (Vector(2) << 1.0, 0.5).finished());
  const Vector phi = column_sums(ProjectionMatrix::leslie2(0.3, 2.0, 0.6));
  EXPECT_DOUBLE_EQ(phi(0), 0.3 + 0.6);
  EXPECT_DOUBLE_EQ(phi(1), 2.0);
  EXPECT_EQ(column_sums(ProjectionMatrix(Matrix::Zero(3, 3))), Vector::Zero(3));
}

TEST(Cohen, SingleLeslie) {
  const EnvironmentSet envs({ProjectionMatrix::leslie2(0.5, 0.5, 0.5)});
  const BoundPair b = cohen_bounds(envs, Vector::Ones(1));
  EXPECT_NEAR(b.lower, std::log(0.5), 1e-15);
  EXPECT_NEAR(b.upper, 0.0, 1e-15);
}

TEST(Cohen, ExactForScaledColumnStochastic) {
  Matrix P(3, 3);
  P << 0.2, 0.5, 0.1, 0.3, 0.5, 0.6, 0.5, 0.0, 0.3;
  const EnvironmentSet envs({ProjectionMatrix(Matrix(2.0 * P)), ProjectionMatrix(Matrix(0.5 * P))});
  const BoundPair b = cohen_bounds(envs, pi2(0.5));
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_EQ(b.upper, 0.0);
  const BoundPair c = cohen_bounds(envs, pi2(0.3));
  const double want = 0.3 * std::log(2.0) + 0.7 * std::log(0.5);
  EXPECT_NEAR(c.lower, want, 1e-15);
  EXPECT_NEAR(c.upper, want, 1e-15);
}

TEST(Cohen, CaseBAtDeltaPointTwo) {
  const EnvironmentSet envs({ProjectionMatrix::leslie2(0.5, 1.3, 0.5),
                             ProjectionMatrix::leslie2(0.5, 1.1, 0.5)});
  EXPECT_EQ(cohen_bounds(envs, pi2(0.9)).lower, 0.0);
}

TEST(Cohen, ZeroColumnGivesMinusInfinity) {
  Matrix z(2, 2);
  z << 1, 0, 1, 0;
  const EnvironmentSet envs({ProjectionMatrix(Matrix::Ones(2, 2)), ProjectionMatrix(z)});
  EXPECT_EQ(cohen_bounds(envs, pi2(0.5)).lower, -std::numeric_limits<double>::infinity());
  // Zero-weight environments do not contribute.
  EXPECT_NEAR(cohen_bounds(envs, pi2(1.0)).lower, std::log(2.0), 1e-15);
}

TEST(MaxMin, Examples) {
  const EnvironmentSet caseA({ProjectionMatrix::leslie2(0.55, 1.35, 0.45),
                              ProjectionMatrix::leslie2(0.55, 1.15, 0.45)});
  EXPECT_NEAR(maxmin_bounds(caseA).lower, 0.044156, 1e-6);
  EXPECT_NEAR(std::exp(maxmin_bounds(caseA).lower), 1.04515, 1e-5);

  const Matrix a = ProjectionMatrix::leslie2(0.2, 0.5, 0.3).matrix();
  const Matrix b = ProjectionMatrix::leslie2(0.4, 1.5, 0.6).matrix();
  const BoundPair ordered = maxmin_bounds(EnvironmentSet({ProjectionMatrix(a), ProjectionMatrix(b)}));
  EXPECT_NEAR(ordered.lower, std::log(eigen_rho(a)), 1e-14);
  EXPECT_NEAR(ordered.upper, std::log(eigen_rho(b)), 1e-14);
}

TEST(Perturbation, ProfileExamples) {
  const auto a = ProjectionMatrix::leslie2(0.5, 1.3, 0.5);
  const PerturbationProfile zero = perturbation_profile(EnvironmentSet({a}), a);
  EXPECT_EQ(zero.w_min[0], 0.0);
  EXPECT_EQ(zero.w_max[0], 0.0);

  const EnvironmentSet envs({ProjectionMatrix::leslie2(0.5, 1.3, 0.5),
                             ProjectionMatrix::leslie2(0.7, 0.3, 0.2)});
  const PerturbationProfile at_max = perturbation_profile(envs, envs.entrywise_max());
  EXPECT_EQ(at_max.w_max[0], 0.0);
  EXPECT_EQ(at_max.w_max[1], 0.0);

  const auto doubled = ProjectionMatrix::leslie2(1.0, 1.3, 0.5);
  const PerturbationProfile two = perturbation_profile(EnvironmentSet({doubled}), a);
  EXPECT_DOUBLE_EQ(two.w_max[0], 1.0);
}

TEST(Perturbation, SupportOnlyIsTighter) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelSpec m = random_leslie_iid(rng);
    for (auto fn : {&bounds_II, &bounds_III, &bounds_IV}) {
      const BoundPair loose = fn(m.envs(), m.stationary(), false);
      const BoundPair tight = fn(m.envs(), m.stationary(), true);
      EXPECT_GE(tight.lower, loose.lower - 1e-14);
      EXPECT_LE(tight.upper, loose.upper + 1e-14);
    }
  }
}

TEST(Perturbation, PatternMismatchIsStructuralError) {
  Matrix full = Matrix::Ones(2, 2);
  const EnvironmentSet envs({ProjectionMatrix::leslie2(0.5, 1.3, 0.5)});
  EXPECT_THROW(perturbation_profile(envs, ProjectionMatrix(full)), StructuralError);
  const EnvironmentSet other({ProjectionMatrix(full)});
  EXPECT_THROW(general_perturbation_relation(envs, other, Vector::Ones(1)), StructuralError);
}

TEST(Perturbation, CaseBExamples) {
  const double rho1 = leslie_rho(0.5, 1.3, 0.5);
  EXPECT_NEAR(std::log(rho1), 0.0899274, 1e-5);
  const EnvironmentSet envs({ProjectionMatrix::leslie2(0.5, 1.3, 0.5),
                             ProjectionMatrix::leslie2(0.5, 1.0, 0.5)});
  const double c3 = bounds_III(envs, pi2(0.9)).lower;
  EXPECT_NEAR(c3, std::log(rho1) + 0.1 * std::log(1.0 / 1.3), 1e-14);
  EXPECT_NEAR(c3, 0.0636, 1e-4);
  EXPECT_NEAR(bounds_IV(envs, pi2(0.9)).lower, 0.0, 1e-15);
}

TEST(Perturbation, LeslieClosedForms) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 500; ++trial) {
    const auto r1 = random_rates(rng), r2 = random_rates(rng);
    const Vector pi = pi2(random_unit(rng, 0.05, 0.95));
    const ModelSpec m = leslie2_iid_model({r1, r2}, pi);
    const LeslieOracle o{{r1, r2}, pi};
    const BoundsReport rep = all_bounds(m);
    EXPECT_NEAR(*rep.value(BoundName::c_I), o.c_I(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::C_I), o.C_I(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::c_II), o.c_II(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::C_II), o.C_II(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::c_III), o.c_III(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::C_III), o.C_max(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::c_IV), o.c_min(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::C_IV), o.C_IV(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::c_V), o.c_V(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::C_V), o.C_V(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::c_min), o.c_min(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::C_max), o.C_max(), 1e-12);
    EXPECT_NEAR(*rep.value(BoundName::log_mu), o.log_mu(), 1e-12);
  }
}

TEST(GeneralRelation, Examples) {
  std::mt19937_64 rng(53);
  const ModelSpec m = random_leslie_iid(rng);
  const BoundPair same = general_perturbation_relation(m.envs(), m.envs(), m.stationary());
  EXPECT_EQ(same.lower, 0.0);
  EXPECT_EQ(same.upper, 0.0);

  std::vector<ProjectionMatrix> doubled;
  for (const auto& a : m.envs()) doubled.emplace_back(Matrix(2.0 * a.matrix()));
  const EnvironmentSet envs2(doubled);
  const BoundPair two = general_perturbation_relation(envs2, m.envs(), m.stationary(), true);
  EXPECT_NEAR(two.lower, std::log(2.0), 1e-15);
  EXPECT_NEAR(two.upper, std::log(2.0), 1e-15);
  const BoundPair half = general_perturbation_relation(m.envs(), envs2, m.stationary(), true);
  EXPECT_NEAR(half.lower, -two.upper, 1e-15);
  EXPECT_NEAR(half.upper, -two.lower, 1e-15);

  SimParams p;
  p.samples = 100;
  p.steps = 300;
  const double a = estimate_sgr(ModelSpec(envs2, m.chain()), p).log_sgr_mean;
  const double b = estimate_sgr(m, p).log_sgr_mean;
  EXPECT_NEAR(a, b + std::log(2.0), 1e-12);
}

TEST(StructureBand, DeterministicFibonacci) {
  const StructureBand band = leslie2_structure_band(Leslie2Params({{1, 1, 1}}));
  EXPECT_NEAR(band.delta, 2.0 / (1.0 + std::sqrt(5.0)), 1e-15);
  EXPECT_NEAR(band.kappa, 0.6180340, 1e-7);
  const BoundPair v = structure_informed_bounds(
      EnvironmentSet({ProjectionMatrix::leslie2(1, 1, 1)}), Vector::Ones(1), band);
  EXPECT_NEAR(v.lower, 0.4812118, 1e-7);
  EXPECT_NEAR(v.upper, 0.4812118, 1e-7);
}

TEST(StructureBand, DeterministicRatioIsSOverRho) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 500; ++trial) {
    const auto r = random_rates(rng);
    const StructureBand band = leslie2_structure_band(Leslie2Params({r}));
    const double want = r.s / leslie_rho(r.f, r.F, r.s);
    EXPECT_NEAR(band.delta, want, 1e-12);
    EXPECT_NEAR(band.kappa, want, 1e-12);
  }
}

TEST(StructureBand, InvariantsAndLayout) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    const Leslie2Params p({random_rates(rng), random_rates(rng)});
    const StructureBand b = leslie2_structure_band(p);
    EXPECT_GT(b.delta, 0.0);
    EXPECT_LE(b.delta, b.kappa);
    EXPECT_NEAR(b.lower(0), 1 / (1 + b.kappa), 1e-15);
    EXPECT_NEAR(b.lower(1), b.delta / (1 + b.kappa), 1e-15);
    EXPECT_NEAR(b.upper(0), 1 / (1 + b.delta), 1e-15);
    EXPECT_NEAR(b.upper(1), b.kappa / (1 + b.delta), 1e-15);
    EXPECT_TRUE((b.lower.array() <= b.upper.array()).all());
  }
}

TEST(StructureBand, ContainsSimulatedRatioWhenOnlySurvivalVaries) {
  const ModelSpec m = leslie2_iid_model({{1, 1, 0.4}, {1, 1, 0.5}}, pi2(0.5));
  const StructureBand b = leslie2_structure_band(*as_leslie2(m.envs()));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix z = simulate_structure(m, 600, seed);
    for (Eigen::Index t = 50; t <= 600; ++t) {
      const double ratio = z(1, t) / z(0, t);
      ASSERT_GE(ratio, b.delta - 1e-12) << "seed " << seed << " t " << t;
      ASSERT_LE(ratio, b.kappa + 1e-12) << "seed " << seed << " t " << t;
    }
  }
}

TEST(StructureInformed, UserBandsAndErrors) {
  Matrix a(3, 3);
  a << 0.2, 1.1, 2.0, 0.6, 0, 0, 0, 0.7, 0.8;
  const EnvironmentSet envs({ProjectionMatrix(a)});
  const Vector v = eigen_perron_vector(a);
  const BoundPair exact = structure_informed_bounds(envs, Vector::Ones(1), v, v);
  EXPECT_NEAR(exact.lower, std::log(eigen_rho(a)), 1e-12);
  EXPECT_NEAR(exact.upper, std::log(eigen_rho(a)), 1e-12);
  EXPECT_THROW(structure_informed_bounds(envs, Vector::Ones(1), -v, v), DomainError);
  EXPECT_THROW(structure_informed_bounds(envs, Vector::Ones(1), Vector::Ones(2), v), DomainError);

  BoundsOptions opts;
  opts.structure = std::make_pair(v, v);
  const BoundsReport rep = all_bounds(single(a), opts);
  EXPECT_NEAR(*rep.value(BoundName::c_V), std::log(eigen_rho(a)), 1e-12);
}

TEST(AllBounds, PropertyP) {
  std::mt19937_64 rng(56);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = random_rates(rng);
    const ModelSpec m = leslie2_iid_model({r, r}, pi2(random_unit(rng)));
    const double want = std::log(leslie_rho(r.f, r.F, r.s));
    const BoundsReport rep = all_bounds(m);
    for (auto n : {BoundName::c_II, BoundName::c_III, BoundName::c_IV, BoundName::c_V,
                   BoundName::c_min, BoundName::C_II, BoundName::C_III, BoundName::C_IV,
                   BoundName::C_V, BoundName::C_max, BoundName::log_mu}) {
      EXPECT_NEAR(*rep.value(n), want, 1e-10) << to_string(n);
    }
    EXPECT_NEAR(*rep.log_lambda_T, want, 1e-10);
  }
}

TEST(AllBounds, Applicability) {
  Matrix a(3, 3), b(3, 3);
  a << 0.2, 1.1, 2.0, 0.6, 0, 0, 0, 0.7, 0.8;
  b << 0.3, 0.0, 1.0, 0.5, 0, 0, 0, 0.6, 0.9;
  Matrix P(2, 2);
  P << 0.9, 0.1, 0.3, 0.7;
  const ModelSpec m(EnvironmentSet({ProjectionMatrix(a), ProjectionMatrix(b)}),
                    EnvironmentChain::markov(P));
  const BoundsReport rep = all_bounds(m);
  for (auto n : {BoundName::c_II, BoundName::c_III, BoundName::c_IV, BoundName::c_V,
                 BoundName::C_II, BoundName::C_III, BoundName::C_IV, BoundName::C_V}) {
    EXPECT_FALSE(rep.value(n)) << to_string(n);
  }
  for (auto n : {BoundName::c_I, BoundName::c_min, BoundName::C_I, BoundName::C_max,
                 BoundName::log_mu}) {
    EXPECT_TRUE(rep.value(n)) << to_string(n);
  }
  EXPECT_FALSE(rep.log_lambda_T);
  EXPECT_FALSE(rep.band);
}

TEST(AllBounds, BestValuesAndConsistency) {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 500; ++trial) {
    const ModelSpec m = random_leslie_iid(rng);
    const BoundsReport rep = all_bounds(m);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& e : rep.lower) lo = std::max(lo, e.value.value());
    for (const auto& e : rep.upper) hi = std::min(hi, e.value.value());
    EXPECT_EQ(*rep.best_lower.value, lo);
    EXPECT_EQ(*rep.best_upper.value, hi);
    EXPECT_LE(lo, hi + 1e-12);
  }
}

TEST(AllBounds, CaseABestLowerIsCIV) {
  const ModelSpec m = leslie2_iid_model({{0.55, 1.35, 0.45}, {0.55, 1.15, 0.45}}, pi2(0.5));
  const BoundsReport rep = all_bounds(m);
  EXPECT_EQ(rep.best_lower.name, BoundName::c_IV);
}

TEST(AllBounds, SandwichAgainstSimulation) {
  std::mt19937_64 rng(58);
  SimParams p;
  p.samples = 200;
  p.steps = 400;
  for (int trial = 0; trial < 40; ++trial) {
    const ModelSpec m = random_leslie_iid(rng);
    const SgrEstimate e = estimate_sgr(m, p);
    for (bool support_only : {false, true}) {
      BoundsOptions opts;
      opts.support_only = support_only;
      const BoundsReport rep = all_bounds(m, opts);
      for (const auto& b : rep.lower) EXPECT_LE(*b.value, e.log_sgr_mean + 3 * e.std_error);
      for (const auto& b : rep.upper) EXPECT_GE(*b.value, e.log_sgr_mean - 3 * e.std_error);
    }
  }
}
