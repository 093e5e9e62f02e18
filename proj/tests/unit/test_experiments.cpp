#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sgrlab/csv.hpp"
#include "sgrlab/error.hpp"
#include "sgrlab/experiments.hpp"
#include "test_support.hpp"

using namespace sgrlab;
using namespace sgrlab::testing;

namespace {

SimParams small_sim() {
  SimParams p;
  p.samples = 30;
  p.steps = 150;
  p.burn_in = 30;
  p.seed = 3;
  return p;
}

SweepGrid tiny_grid() {
  SweepGrid g;
  g.pi1_values = {0.5};
  g.step = 1.2;
  return g;
}

double table_sum(const WinTable& t) {
  double total = t.tie_share();
  for (std::size_t i = 0; i < t.names.size(); ++i) total += t.share(i);
  return total;
}

}  // namespace

TEST(SweepGrid, ValuesAndSize) {
  SweepGrid g;
  EXPECT_EQ(g.values(g.f).size(), 8u);   // 0.1 .. 2.9
  EXPECT_EQ(g.values(g.F).size(), 13u);  // 0.1 .. 4.9
  EXPECT_EQ(g.values(g.s).size(), 3u);   // 0.1, 0.5, 0.9
  EXPECT_EQ(g.size(), 3u * 312u * 312u);
  for (double v : g.values(g.s)) {
    EXPECT_GE(v, g.s.lo);
    EXPECT_LE(v, g.s.hi + 1e-9);
  }
}

TEST(SweepGrid, PointOrder) {
  SweepGrid g;
  const GridPoint first = g.point(0);
  EXPECT_DOUBLE_EQ(first.pi1, 0.1);
  EXPECT_DOUBLE_EQ(first.env1.f, 0.1);
  EXPECT_DOUBLE_EQ(first.env2.s, 0.1);
  const GridPoint second = g.point(1);
  EXPECT_NEAR(second.env2.s, 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(second.env1.s, 0.1);
  const GridPoint last = g.point(g.size() - 1);
  EXPECT_DOUBLE_EQ(last.pi1, 0.9);
  EXPECT_NEAR(last.env1.F, 4.9, 1e-12);
  EXPECT_NEAR(last.env2.f, 2.9, 1e-12);
}

TEST(SweepGrid, Validation) {
  SweepGrid g;
  g.step = 0;
  EXPECT_THROW(g.validate(), ValidationError);
  g = {};
  g.pi1_values = {};
  EXPECT_THROW(g.validate(), ValidationError);
  g = {};
  g.pi1_values = {1.0};
  EXPECT_THROW(g.validate(), ValidationError);
  g = {};
  g.s = {0.1, 1.5};
  EXPECT_THROW(g.validate(), ValidationError);
}

TEST(RelativeVariation, Examples) {
  GridPoint p{0.5, {1, 2, 0.5}, {1, 2, 0.5}};
  EXPECT_EQ(relative_variation(p), 0.0);
  p.env2 = {2, 4, 0.25};
  EXPECT_NEAR(relative_variation(p), 100.0 * (1 + 2 + 0.25) / (2 + 4 + 0.5), 1e-12);
}

TEST(Sweep, DegenerateGridTiesEverywhere) {
  SweepGrid g;
  g.pi1_values = {0.3, 0.7};
  g.f = {0.9, 0.9};
  g.F = {1.7, 1.7};
  g.s = {0.6, 0.6};
  const SweepResult r = sweep_winners(g, small_sim(), 2);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_DOUBLE_EQ(r.upper_table.tie_share(), 100.0);
  EXPECT_DOUBLE_EQ(r.lower_table.tie_share(), 100.0);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.error_upper, 0.0, 1e-8);
    EXPECT_NEAR(row.error_lower, 0.0, 1e-8);
  }
}

TEST(Sweep, TablesSumToHundredAndRowsAreSandwiched) {
  // Rows with identical environments have SE = 0, so the burn-in must be
  // long enough for the structure transient to vanish.
  SimParams sim = small_sim();
  sim.steps = 2000;
  sim.burn_in = 500;
  const SweepResult r = sweep_winners(tiny_grid(), sim, 2);
  EXPECT_EQ(r.rows.size(), tiny_grid().size());
  EXPECT_NEAR(table_sum(r.lower_table), 100.0, 0.01);
  EXPECT_NEAR(table_sum(r.upper_table), 100.0, 0.01);
  double broken = 0;
  for (std::size_t i = 0; i < r.upper_table.names.size(); ++i) broken += r.upper_table.share_tie_broken(i);
  EXPECT_NEAR(broken, 100.0, 0.01);
  for (const auto& row : r.rows) {
    ASSERT_TRUE(row.ok);
    EXPECT_LE(*row.best_lower.value, row.sgr.log_sgr_mean + 3 * row.sgr.std_error + 1e-9);
    EXPECT_GE(*row.best_upper.value, row.sgr.log_sgr_mean - 3 * row.sgr.std_error - 1e-9);
  }
}

TEST(Sweep, IndependentOfWorkerCount) {
  std::ostringstream a, b;
  write_sweep_csv(a, sweep_winners(tiny_grid(), small_sim(), 1));
  write_sweep_csv(b, sweep_winners(tiny_grid(), small_sim(), 3));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, CsvHeaderIsFixed) {
  std::ostringstream os;
  write_sweep_csv(os, sweep_winners(tiny_grid(), small_sim(), 1));
  const std::string header = os.str().substr(0, os.str().find('\n'));
  EXPECT_EQ(header,
            "index,pi1,f1,F1,s1,f2,F2,s2,c_I,c_II,c_III,c_IV,c_V,C_I,C_II,C_III,C_IV,C_V,log_mu,"
            "log_lambda_T,best_lower,best_lower_value,best_upper,best_upper_value,winner_lower,"
            "winner_lower_tie_broken,winner_upper,winner_upper_tie_broken,log_sgr,std_error,"
            "variation,error_upper,error_lower,status");
}

TEST(ErrorCurve, BinsAndSinglePoint) {
  EXPECT_THROW(error_vs_variation(SweepResult{}, 0), ValidationError);

  // Case A at Delta = 0.2 as a one-point grid.
  SweepGrid g;
  g.pi1_values = {0.5};
  g.f = {0.55, 0.55};
  g.s = {0.45, 0.45};
  g.F = {1.15, 1.35};
  g.step = 0.2;
  const SweepResult r = sweep_winners(g, small_sim(), 1);
  const auto bins = error_vs_variation(r, 4);
  ASSERT_EQ(bins.size(), 4u);
  std::size_t total = 0;
  for (const auto& b : bins) {
    total += b.count;
    EXPECT_TRUE(std::isfinite(b.mean_upper));
    EXPECT_TRUE(std::isfinite(b.mean_lower));
  }
  EXPECT_EQ(total, r.rows.size());
  for (const auto& row : r.rows) {
    EXPECT_TRUE(std::isfinite(row.error_upper));
    EXPECT_TRUE(std::isfinite(row.error_lower));
  }
}

TEST(DeltaCurves, CaseAColumns) {
  const RichPoorSpec a = reference_case(ReferenceCase::A);
  std::vector<double> deltas;
  for (int k = 0; k <= 7; ++k) deltas.push_back(0.05 * k);
  const auto rows = delta_curves(a, deltas, small_sim(), 2);
  ASSERT_EQ(rows.size(), deltas.size());
  const double rho1 = std::log(leslie_rho(0.55, 1.35, 0.45));
  // c_II .. c_V satisfy Property P at Delta = 0.
  for (std::size_t i = 1; i < 5; ++i) EXPECT_NEAR(rows[0].lower[i], rho1, 1e-12);
  for (std::size_t k = 4; k < rows.size(); ++k) {
    const auto& r = rows[k];
    EXPECT_GE(r.lower[3], *std::max_element(r.lower.begin(), r.lower.end()) - 1e-12)
        << "Delta " << r.delta;
  }
}

TEST(DeltaCurves, CaseCCohenMatchesIII) {
  const RichPoorSpec c = reference_case(ReferenceCase::C);
  const auto rows = delta_curves(c, {0.0, 0.1, 0.3, 0.6, 1.0}, small_sim(), 1);
  for (const auto& r : rows) EXPECT_NEAR(r.lower[0], r.lower[2], 1e-12) << r.delta;
}

TEST(DeltaCurves, RejectsDeltaAtOrAboveF) {
  EXPECT_THROW(delta_curves(reference_case(ReferenceCase::C), {0.0, 1.1}, small_sim(), 1),
               DomainError);
}

TEST(Csv, Formatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_number(std::optional<double>{}), "n/a");
  std::ostringstream os;
  write_csv_row(os, {"a", "b,c", "say \"hi\""});
  EXPECT_EQ(os.str(), "a,\"b,c\",\"say \"\"hi\"\"\"\n");
}
