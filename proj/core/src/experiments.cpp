#include "sgrlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgrlab/csv.hpp"
#include "sgrlab/error.hpp"
#include "sgrlab/mean_growth.hpp"

namespace sgrlab {
namespace {

constexpr double kGridSlack = 1e-9;

template <std::size_t N>
WinTable make_table(const std::array<BoundName, N>& names) {
  WinTable t;
  for (auto n : names) t.names.emplace_back(to_string(n));
  t.wins.assign(N, 0);
  t.wins_tie_broken.assign(N, 0);
  return t;
}

// Winner among the table columns: largest value for lower bounds, smallest
// for upper bounds.
template <std::size_t N>
void pick_winner(const std::array<std::optional<double>, N>& values, bool largest,
                 std::optional<std::size_t>& unique, std::size_t& tie_broken) {
  std::optional<double> best;
  for (const auto& v : values) {
    if (v && (!best || (largest ? *v > *best : *v < *best))) best = v;
  }
  unique.reset();
  if (!best) return;
  std::size_t count = 0;
  bool first = true;
  for (std::size_t i = 0; i < N; ++i) {
    if (values[i] && std::abs(*values[i] - *best) <= kTieTolerance) {
      ++count;
      if (first) {
        tie_broken = i;
        first = false;
      }
    }
  }
  if (count == 1) unique = tie_broken;
}

double relative_error(double log_sgr, const std::optional<double>& log_bound) {
  if (!log_bound) return std::numeric_limits<double>::quiet_NaN();
  // 100 |lambda_S - e^c| / lambda_S = 100 |1 - e^(c - log lambda_S)|
  return 100.0 * std::abs(std::expm1(*log_bound - log_sgr));
}

SweepRow evaluate_point(const SweepGrid& grid, std::size_t index, const SimParams& sim) {
  SweepRow row;
  row.index = index;
  row.point = grid.point(index);
  row.variation = relative_variation(row.point);
  try {
    Vector pi(2);
    pi << row.point.pi1, 1.0 - row.point.pi1;
    const ModelSpec model = leslie2_iid_model({row.point.env1, row.point.env2}, pi);
    const BoundsReport report = all_bounds(model);
    for (std::size_t i = 0; i < kLowerTable.size(); ++i) row.lower[i] = report.value(kLowerTable[i]);
    for (std::size_t i = 0; i < kUpperTable.size(); ++i) row.upper[i] = report.value(kUpperTable[i]);
    row.log_lambda_T = report.log_lambda_T;
    row.best_lower = report.best_lower;
    row.best_upper = report.best_upper;
    pick_winner(row.lower, true, row.lower_winner, row.lower_winner_tie_broken);
    pick_winner(row.upper, false, row.upper_winner, row.upper_winner_tie_broken);

    SimParams point_sim = sim;
    point_sim.seed = derive_seed(sim.seed, index);
    row.sgr = estimate_sgr(model, point_sim, 1);
    row.error_upper = relative_error(row.sgr.log_sgr_mean, row.best_upper.value);
    row.error_lower = relative_error(row.sgr.log_sgr_mean, row.best_lower.value);
  } catch (const NumericalError& e) {
    row.ok = false;
    row.failure = e.what();
  }
  return row;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

void SweepGrid::validate() const {
  if (pi1_values.empty()) throw ValidationError("sweep grid needs at least one pi1 value");
  for (double p : pi1_values) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("pi1 values must lie in (0, 1)");
  }
  if (!(step > 0.0)) throw ValidationError("grid step must be positive");
  for (const Range* r : {&f, &F, &s}) {
    if (!(r->lo > 0.0) || r->hi < r->lo) {
      throw ValidationError("grid ranges need 0 < lo <= hi");
    }
  }
  if (s.hi > 1.0) throw ValidationError("survival range must stay within (0, 1]");
}

std::vector<double> SweepGrid::values(const Range& r) const {
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double v = r.lo + static_cast<double>(k) * step;
    if (v > r.hi + kGridSlack) break;
    out.push_back(v);
  }
  return out;
}

std::size_t SweepGrid::size() const {
  const auto per_env = values(f).size() * values(F).size() * values(s).size();
  return pi1_values.size() * per_env * per_env;
}

GridPoint SweepGrid::point(std::size_t index) const {
  const auto fv = values(f), Fv = values(F), sv = values(s);
  // Innermost first: s2, F2, f2, s1, F1, f1, pi1.
  auto take = [&index](std::size_t radix) {
    const std::size_t d = index % radix;
    index /= radix;
    return d;
  };
  GridPoint p;
  p.env2.s = sv[take(sv.size())];
  p.env2.F = Fv[take(Fv.size())];
  p.env2.f = fv[take(fv.size())];
  p.env1.s = sv[take(sv.size())];
  p.env1.F = Fv[take(Fv.size())];
  p.env1.f = fv[take(fv.size())];
  p.pi1 = pi1_values.at(take(pi1_values.size()));
  return p;
}

double relative_variation(const GridPoint& p) {
  const double num = std::abs(p.env2.f - p.env1.f) + std::abs(p.env2.s - p.env1.s) +
                     std::abs(p.env2.F - p.env1.F);
  const double den = std::max(p.env1.f, p.env2.f) + std::max(p.env1.s, p.env2.s) +
                     std::max(p.env1.F, p.env2.F);
  return 100.0 * num / den;
}

double WinTable::share(std::size_t column) const {
  return total ? 100.0 * static_cast<double>(wins.at(column)) / static_cast<double>(total) : 0.0;
}

double WinTable::tie_share() const {
  return total ? 100.0 * static_cast<double>(ties) / static_cast<double>(total) : 0.0;
}

double WinTable::share_tie_broken(std::size_t column) const {
  return total ? 100.0 * static_cast<double>(wins_tie_broken.at(column)) / static_cast<double>(total)
               : 0.0;
}

std::optional<std::size_t> WinTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

SweepResult sweep_winners(const SweepGrid& grid, const SimParams& sim, unsigned workers) {
  grid.validate();
  sim.validate();
  SweepResult result;
  result.rows.resize(grid.size());
  parallel_for(
      result.rows.size(),
      [&](std::size_t k) { result.rows[k] = evaluate_point(grid, k, sim); }, workers);

  result.lower_table = make_table(kLowerTable);
  result.upper_table = make_table(kUpperTable);
  for (const auto& row : result.rows) {
    if (!row.ok) {
      ++result.failures;
      continue;
    }
    auto tally = [](WinTable& t, const std::optional<std::size_t>& unique, std::size_t broken) {
      ++t.total;
      if (unique) {
        ++t.wins[*unique];
      } else {
        ++t.ties;
      }
      ++t.wins_tie_broken[broken];
    };
    tally(result.lower_table, row.lower_winner, row.lower_winner_tie_broken);
    tally(result.upper_table, row.upper_winner, row.upper_winner_tie_broken);
  }
  return result;
}

std::vector<ErrorBin> error_vs_variation(const SweepResult& sweep, int n_bins) {
  if (n_bins < 1) throw ValidationError("number of bins must be at least 1");
  const double width = 100.0 / n_bins;
  std::vector<std::vector<double>> up(static_cast<std::size_t>(n_bins));
  std::vector<std::vector<double>> lo(static_cast<std::size_t>(n_bins));
  for (const auto& row : sweep.rows) {
    if (!row.ok) continue;
    const auto b = std::min<std::size_t>(static_cast<std::size_t>(row.variation / width),
                                         static_cast<std::size_t>(n_bins - 1));
    up[b].push_back(row.error_upper);
    lo[b].push_back(row.error_lower);
  }
  std::vector<ErrorBin> bins;
  for (int b = 0; b < n_bins; ++b) {
    ErrorBin bin;
    bin.lo = b * width;
    bin.hi = (b + 1) * width;
    const auto& u = up[static_cast<std::size_t>(b)];
    const auto& l = lo[static_cast<std::size_t>(b)];
    bin.count = u.size();
    bin.mean_upper = mean_of(u);
    bin.sd_upper = sd_of(u, bin.mean_upper);
    bin.mean_lower = mean_of(l);
    bin.sd_lower = sd_of(l, bin.mean_lower);
    bins.push_back(bin);
  }
  return bins;
}

std::vector<ErrorBin> error_vs_variation(const SweepGrid& grid, const SimParams& sim, int n_bins,
                                         unsigned workers) {
  return error_vs_variation(sweep_winners(grid, sim, workers), n_bins);
}

std::vector<DeltaCurveRow> delta_curves(const RichPoorSpec& base, const std::vector<double>& deltas,
                                        const SimParams& sim, unsigned workers) {
  sim.validate();
  std::vector<DeltaCurveRow> rows(deltas.size());
  for (double d : deltas) base.with_delta(d).validate();
  parallel_for(
      deltas.size(),
      [&](std::size_t k) {
        const RichPoorSpec spec = base.with_delta(deltas[k]);
        const ModelSpec model = rich_poor_model(spec);
        DeltaCurveRow& row = rows[k];
        row.delta = deltas[k];
        row.sgr = estimate_sgr(model, sim, 1);
        const BoundsReport report = all_bounds(model);
        for (std::size_t i = 0; i < kLowerTable.size(); ++i) {
          row.lower[i] = report.value(kLowerTable[i]).value();
        }
        row.log_lambda_T = report.log_lambda_T.value();
      },
      workers);
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  std::vector<std::string> header{"index", "pi1", "f1", "F1", "s1", "f2", "F2", "s2"};
  for (auto n : kLowerTable) header.emplace_back(to_string(n));
  for (auto n : kUpperTable) header.emplace_back(to_string(n));
  for (const char* h : {"log_lambda_T", "best_lower", "best_lower_value", "best_upper",
                        "best_upper_value", "winner_lower", "winner_lower_tie_broken",
                        "winner_upper", "winner_upper_tie_broken", "log_sgr", "std_error",
                        "variation", "error_upper", "error_lower", "status"}) {
    header.emplace_back(h);
  }
  write_csv_row(out, header);

  const WinTable lower_names = make_table(kLowerTable);
  const WinTable upper_names = make_table(kUpperTable);
  for (const auto& r : sweep.rows) {
    std::vector<std::string> f{std::to_string(r.index), format_number(r.point.pi1),
                               format_number(r.point.env1.f), format_number(r.point.env1.F),
                               format_number(r.point.env1.s), format_number(r.point.env2.f),
                               format_number(r.point.env2.F), format_number(r.point.env2.s)};
    if (!r.ok) {
      f.resize(header.size(), "n/a");
      f.back() = "failed: " + r.failure;
      write_csv_row(out, f);
      continue;
    }
    for (const auto& v : r.lower) f.push_back(format_number(v));
    for (const auto& v : r.upper) f.push_back(format_number(v));
    f.push_back(format_number(r.log_lambda_T));
    f.emplace_back(to_string(r.best_lower.name));
    f.push_back(format_number(r.best_lower.value));
    f.emplace_back(to_string(r.best_upper.name));
    f.push_back(format_number(r.best_upper.value));
    f.push_back(r.lower_winner ? lower_names.names[*r.lower_winner] : "tie");
    f.push_back(lower_names.names[r.lower_winner_tie_broken]);
    f.push_back(r.upper_winner ? upper_names.names[*r.upper_winner] : "tie");
    f.push_back(upper_names.names[r.upper_winner_tie_broken]);
    f.push_back(format_number(r.sgr.log_sgr_mean));
    f.push_back(format_number(r.sgr.std_error));
    f.push_back(format_number(r.variation));
    f.push_back(format_number(r.error_upper));
    f.push_back(format_number(r.error_lower));
    f.emplace_back("ok");
    write_csv_row(out, f);
  }
}

void write_win_tables_csv(std::ostream& out, const SweepResult& sweep) {
  write_csv_row(out, {"table", "bound", "wins", "share_percent", "wins_tie_broken",
                      "share_tie_broken_percent"});
  auto emit = [&](const char* table, const WinTable& t) {
    for (std::size_t i = 0; i < t.names.size(); ++i) {
      write_csv_row(out, {table, t.names[i], std::to_string(t.wins[i]), format_number(t.share(i)),
                          std::to_string(t.wins_tie_broken[i]),
                          format_number(t.share_tie_broken(i))});
    }
    write_csv_row(out, {table, "tie", std::to_string(t.ties), format_number(t.tie_share()), "0",
                        "0"});
  };
  emit("lower", sweep.lower_table);
  emit("upper", sweep.upper_table);
}

void write_error_curve_csv(std::ostream& out, const std::vector<ErrorBin>& bins) {
  write_csv_row(out, {"variation_lo", "variation_hi", "count", "mean_error_upper",
                      "sd_error_upper", "mean_error_lower", "sd_error_lower"});
  for (const auto& b : bins) {
    write_csv_row(out, {format_number(b.lo), format_number(b.hi), std::to_string(b.count),
                        format_number(b.mean_upper), format_number(b.sd_upper),
                        format_number(b.mean_lower), format_number(b.sd_lower)});
  }
}

void write_delta_curves_csv(std::ostream& out, const std::vector<DeltaCurveRow>& rows) {
  write_csv_row(out, {"Delta", "log_sgr", "std_error", "c_I", "c_II", "c_III", "c_IV", "c_V",
                      "log_lambda_T"});
  for (const auto& r : rows) {
    std::vector<std::string> f{format_number(r.delta), format_number(r.sgr.log_sgr_mean),
                               format_number(r.sgr.std_error)};
    for (double v : r.lower) f.push_back(format_number(v));
    f.push_back(format_number(r.log_lambda_T));
    write_csv_row(out, f);
  }
}

}  // namespace sgrlab
