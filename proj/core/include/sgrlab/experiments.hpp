#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sgrlab/bounds.hpp"
#include "sgrlab/extinction.hpp"
#include "sgrlab/parallel.hpp"
#include "sgrlab/simulation.hpp"

namespace sgrlab {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct GridPoint {
  double pi1 = 0.5;
  LeslieRates env1;
  LeslieRates env2;
};

/// Two-environment Leslie-2 IID grid. Each rate takes the values
/// lo, lo + step, ... <= hi, independently for both environments.
struct SweepGrid {
  std::vector<double> pi1_values{0.1, 0.5, 0.9};
  Range f{0.1, 3.0};
  Range F{0.1, 5.0};
  Range s{0.1, 0.9};
  double step = 0.4;

  void validate() const;
  std::vector<double> values(const Range& r) const;
  std::size_t size() const;
  /// Order: pi1 outermost, then f1, F1, s1, f2, F2, s2.
  GridPoint point(std::size_t index) const;
};

/// Relative environmental variation in percent:
/// 100 (|f2-f1| + |s2-s1| + |F2-F1|) / (max f + max s + max F).
double relative_variation(const GridPoint& p);

/// Column order of the win tables.
inline constexpr std::array<BoundName, 5> kLowerTable = {
    BoundName::c_I, BoundName::c_II, BoundName::c_III, BoundName::c_IV, BoundName::c_V};
inline constexpr std::array<BoundName, 6> kUpperTable = {
    BoundName::C_I, BoundName::C_II, BoundName::C_III,
    BoundName::C_IV, BoundName::C_V, BoundName::log_mu};

/// Bounds within this absolute distance of the winning value count as tied.
inline constexpr double kTieTolerance = 1e-12;

struct SweepRow {
  std::size_t index = 0;
  GridPoint point;
  bool ok = true;
  std::string failure;

  std::array<std::optional<double>, kLowerTable.size()> lower{};
  std::array<std::optional<double>, kUpperTable.size()> upper{};
  std::optional<double> log_lambda_T;
  BoundEntry best_lower{BoundName::c_I, std::nullopt};
  BoundEntry best_upper{BoundName::C_I, std::nullopt};

  /// Index into the table columns; nullopt when several bounds tie.
  std::optional<std::size_t> lower_winner;
  std::optional<std::size_t> upper_winner;
  /// First tied column in table order (equals the winner when there is no tie).
  std::size_t lower_winner_tie_broken = 0;
  std::size_t upper_winner_tie_broken = 0;

  SgrEstimate sgr;
  double variation = 0.0;
  double error_upper = 0.0;  // 100 |lambda_S - exp(best_upper)| / lambda_S
  double error_lower = 0.0;
};

struct WinTable {
  std::vector<std::string> names;
  std::vector<std::size_t> wins;             // unique winners
  std::size_t ties = 0;                      // points with several winners
  std::vector<std::size_t> wins_tie_broken;  // ties credited to the first name
  std::size_t total = 0;

  double share(std::size_t column) const;
  double tie_share() const;
  double share_tie_broken(std::size_t column) const;
  std::optional<std::size_t> column(std::string_view name) const;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  WinTable lower_table;
  WinTable upper_table;
  std::size_t failures = 0;
};

/// Bounds and simulated SGR on every grid point. Point k is simulated with
/// seed derive_seed(sim.seed, k); rows are reduced in grid order.
SweepResult sweep_winners(const SweepGrid& grid, const SimParams& sim,
                          unsigned workers = default_workers());

struct ErrorBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double mean_upper = 0.0;
  double sd_upper = 0.0;
  double mean_lower = 0.0;
  double sd_lower = 0.0;
};

/// Equal-width bins of relative variation over [0, 100].
std::vector<ErrorBin> error_vs_variation(const SweepResult& sweep, int n_bins);
std::vector<ErrorBin> error_vs_variation(const SweepGrid& grid, const SimParams& sim, int n_bins,
                                         unsigned workers = default_workers());

struct DeltaCurveRow {
  double delta = 0.0;
  SgrEstimate sgr;
  std::array<double, 5> lower{};  // c_I, c_II, c_III, c_IV, c_V
  double log_lambda_T = 0.0;
};

/// log lambda_S estimate and the five lower bounds along a Delta grid. All
/// Delta values share the simulation seed.
std::vector<DeltaCurveRow> delta_curves(const RichPoorSpec& base, const std::vector<double>& deltas,
                                        const SimParams& sim, unsigned workers = default_workers());

void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
void write_win_tables_csv(std::ostream& out, const SweepResult& sweep);
void write_error_curve_csv(std::ostream& out, const std::vector<ErrorBin>& bins);
void write_delta_curves_csv(std::ostream& out, const std::vector<DeltaCurveRow>& rows);

}  // namespace sgrlab
