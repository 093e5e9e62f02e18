// sgrlab: command-line front end for the stochastic growth rate library.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgrlab/bounds.hpp"
#include "sgrlab/csv.hpp"
#include "sgrlab/ergodic.hpp"
#include "sgrlab/error.hpp"
#include "sgrlab/experiments.hpp"
#include "sgrlab/extinction.hpp"
#include "sgrlab/mean_growth.hpp"
#include "sgrlab/model_io.hpp"
#include "sgrlab/simulation.hpp"

using json = nlohmann::ordered_json;
using namespace sgrlab;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string model_path;
  std::string out_path;
  std::string format = "json";
  SimParams sim;
};

void add_sim_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.sim.seed, "Base RNG seed")->capture_default_str();
  cmd->add_option("--samples", c.sim.samples, "Trajectories N")->capture_default_str();
  cmd->add_option("--steps", c.sim.steps, "Steps per trajectory T")->capture_default_str();
  cmd->add_option("--burn-in", c.sim.burn_in, "Discarded initial steps")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out_path, "Write output here instead of stdout");
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

void add_model_flag(CLI::App* cmd, Common& c) {
  cmd->add_option("--model", c.model_path, "Model JSON file")->required();
}

// Numbers that JSON cannot carry become strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

json num(const std::optional<double>& v) { return v ? num(*v) : json("n/a"); }

json sgr_json(const SgrEstimate& e) {
  return {{"log_sgr", num(e.log_sgr_mean)}, {"std_error", num(e.std_error)},
          {"samples", e.samples},          {"steps", e.steps},
          {"burn_in", e.burn_in},          {"seed", e.seed}};
}

json bounds_json(const BoundsReport& r) {
  json out;
  json lower, upper;
  for (const auto& b : r.lower) lower[std::string(to_string(b.name))] = num(b.value);
  for (const auto& b : r.upper) upper[std::string(to_string(b.name))] = num(b.value);
  out["lower"] = lower;
  out["upper"] = upper;
  out["log_lambda_T"] = num(r.log_lambda_T);
  out["best_lower"] = {{"name", std::string(to_string(r.best_lower.name))},
                       {"value", num(r.best_lower.value)}};
  out["best_upper"] = {{"name", std::string(to_string(r.best_upper.name))},
                       {"value", num(r.best_upper.value)}};
  if (r.band) {
    out["structure_band"] = {{"delta", num(r.band->delta)}, {"kappa", num(r.band->kappa)}};
  }
  return out;
}

void bounds_csv(std::ostream& os, const BoundsReport& r) {
  write_csv_row(os, {"bound", "kind", "value"});
  for (const auto& b : r.lower) write_csv_row(os, {std::string(to_string(b.name)), "lower", format_number(b.value)});
  for (const auto& b : r.upper) write_csv_row(os, {std::string(to_string(b.name)), "upper", format_number(b.value)});
  write_csv_row(os, {"log_lambda_T", "approximation", format_number(r.log_lambda_T)});
}

json classification_json(const Classification& c) {
  json out{{"verdict", to_string(c.verdict)}};
  if (c.basis) {
    out["basis"] = {{"name", std::string(to_string(c.basis->name))}, {"value", num(c.basis->value)}};
  } else {
    out["basis"] = "n/a";
  }
  out["r0"] = num(c.r0);
  if (c.sgr) out["sgr"] = sgr_json(*c.sgr);
  return out;
}

json threshold_json(const DeltaThreshold& t) {
  return {{"value", num(t.value)}, {"certifies", t.certifies}};
}

// Runs `emit` against --out or stdout.
template <class Emit>
void with_output(const Common& c, Emit&& emit) {
  if (c.out_path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) throw ValidationError("cannot open output file " + c.out_path);
  emit(file);
  if (!file) throw ValidationError("failed writing " + c.out_path);
}

void print_json(const Common& c, const json& j) {
  with_output(c, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ValidationError("not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

struct GridFlags {
  std::string pi1 = "0.1,0.5,0.9";
  double step = 0.4;
  std::vector<double> f{0.1, 3.0};
  std::vector<double> F{0.1, 5.0};
  std::vector<double> s{0.1, 0.9};

  SweepGrid grid() const {
    SweepGrid g;
    g.pi1_values = parse_list(pi1);
    g.step = step;
    g.f = {f[0], f[1]};
    g.F = {F[0], F[1]};
    g.s = {s[0], s[1]};
    g.validate();
    return g;
  }
};

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--pi1", g.pi1, "Comma-separated probabilities of environment 1")
      ->capture_default_str();
  cmd->add_option("--step", g.step, "Grid step for every vital rate")->capture_default_str();
  cmd->add_option("--f-range", g.f, "lo hi for juvenile fertility")->expected(2);
  cmd->add_option("--F-range", g.F, "lo hi for adult fertility")->expected(2);
  cmd->add_option("--s-range", g.s, "lo hi for juvenile survival")->expected(2);
}

SimParams desk_scale() {
  SimParams p;
  p.samples = 200;
  p.steps = 300;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic growth rate estimation and bounds for matrix population models"};
  app.require_subcommand(1);

  Common analyze_c, sgr_c, bounds_c, delta_c, classify_c, sweep_c, curve_c, dcurve_c;
  sweep_c.format = curve_c.format = dcurve_c.format = "csv";
  sweep_c.sim = curve_c.sim = desk_scale();

  auto* analyze = app.add_subcommand("analyze", "Model summary, bounds, classification and SGR estimate");
  add_model_flag(analyze, analyze_c);
  add_sim_flags(analyze, analyze_c);
  add_output_flags(analyze, analyze_c);

  auto* sgr = app.add_subcommand("sgr", "Monte-Carlo estimate of log lambda_S");
  add_model_flag(sgr, sgr_c);
  add_sim_flags(sgr, sgr_c);
  add_output_flags(sgr, sgr_c);

  bool support_only = false;
  auto* bounds = app.add_subcommand("bounds", "Every closed-form bound on log lambda_S");
  add_model_flag(bounds, bounds_c);
  add_output_flags(bounds, bounds_c);
  bounds->add_flag("--support-only", support_only,
                   "Take perturbation extremes over the support only");

  RichPoorSpec rp;
  double tol = 1e-9;
  bool delta_simulate = false;
  auto* delta = app.add_subcommand("delta", "Delta thresholds of the rich/poor model");
  delta->add_option("--f", rp.f, "Juvenile fertility")->required();
  delta->add_option("--F", rp.F, "Adult fertility of the rich environment")->required();
  delta->add_option("--s", rp.s, "Juvenile survival")->required();
  delta->add_option("--pi1", rp.pi1, "Probability of the rich environment")->required();
  delta->add_option("--tol", tol, "Bisection tolerance")->capture_default_str();
  delta->add_flag("--simulate", delta_simulate, "Also bisect the simulated SGR");
  add_sim_flags(delta, delta_c);
  add_output_flags(delta, delta_c);

  bool classify_simulate = false;
  auto* classify_cmd = app.add_subcommand("classify", "Growth / extinction verdict from certified bounds");
  add_model_flag(classify_cmd, classify_c);
  classify_cmd->add_flag("--simulate", classify_simulate, "Attach a simulated SGR estimate");
  add_sim_flags(classify_cmd, classify_c);
  add_output_flags(classify_cmd, classify_c);

  GridFlags sweep_grid;
  std::string tables_out;
  auto* sweep = app.add_subcommand("sweep", "Bound win tables over a two-environment Leslie grid");
  add_grid_flags(sweep, sweep_grid);
  add_sim_flags(sweep, sweep_c);
  add_output_flags(sweep, sweep_c);
  sweep->add_option("--tables-out", tables_out, "Also write the win tables as CSV");

  GridFlags curve_grid;
  int bins = 10;
  auto* curve = app.add_subcommand("error-curve", "Relative bound error against environmental variation");
  add_grid_flags(curve, curve_grid);
  curve->add_option("--bins", bins, "Number of variation bins")->capture_default_str();
  add_sim_flags(curve, curve_c);
  add_output_flags(curve, curve_c);

  std::string case_name;
  RichPoorSpec dc;
  std::string deltas_text;
  double delta_step = 0.05;
  auto* dcurve = app.add_subcommand("delta-curves", "SGR and lower bounds along a Delta grid");
  dcurve->add_option("--case", case_name, "Reference case")->check(CLI::IsMember({"A", "B", "C"}));
  auto* o_f = dcurve->add_option("--f", dc.f, "Juvenile fertility");
  auto* o_F = dcurve->add_option("--F", dc.F, "Adult fertility of the rich environment");
  auto* o_s = dcurve->add_option("--s", dc.s, "Juvenile survival");
  auto* o_pi = dcurve->add_option("--pi1", dc.pi1, "Probability of the rich environment");
  dcurve->add_option("--deltas", deltas_text, "Comma-separated Delta values");
  dcurve->add_option("--delta-step", delta_step, "Step of the default grid 0, step, ... < F")
      ->capture_default_str();
  add_sim_flags(dcurve, dcurve_c);
  add_output_flags(dcurve, dcurve_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*analyze) {
      if (analyze_c.format != "json") throw ValidationError("analyze emits JSON only");
      analyze_c.sim.validate();
      const ModelSpec model = load_model(analyze_c.model_path);
      const auto ergodic = check_ergodic_set(model.envs());
      const BoundsReport report = all_bounds(model);
      const SgrEstimate est = estimate_sgr(model, analyze_c.sim);
      json out;
      out["dim"] = model.dim();
      out["environments"] = model.envs().size();
      out["chain"] = model.chain().is_iid() ? "iid" : "markov";
      out["stationary"] = std::vector<double>(model.stationary().begin(), model.stationary().end());
      out["ergodicity"] = {{"status", to_string(ergodic.status)},
                           {"witness_length", ergodic.witness_length ? json(*ergodic.witness_length)
                                                                     : json("n/a")}};
      out["log_mu"] = num(mean_growth_rate(model));
      out["sgr"] = sgr_json(est);
      out["bounds"] = bounds_json(report);
      out["classification"] = classification_json(classify(model, report, est));
      print_json(analyze_c, out);
    } else if (*sgr) {
      sgr_c.sim.validate();
      const SgrEstimate est = estimate_sgr(load_model(sgr_c.model_path), sgr_c.sim);
      if (sgr_c.format == "json") {
        print_json(sgr_c, sgr_json(est));
      } else {
        with_output(sgr_c, [&](std::ostream& os) {
          write_csv_row(os, {"log_sgr", "std_error", "samples", "steps", "burn_in", "seed"});
          write_csv_row(os, {format_number(est.log_sgr_mean), format_number(est.std_error),
                             std::to_string(est.samples), std::to_string(est.steps),
                             std::to_string(est.burn_in), std::to_string(est.seed)});
        });
      }
    } else if (*bounds) {
      BoundsOptions opts;
      opts.support_only = support_only;
      const BoundsReport report = all_bounds(load_model(bounds_c.model_path), opts);
      if (bounds_c.format == "json") {
        print_json(bounds_c, bounds_json(report));
      } else {
        with_output(bounds_c, [&](std::ostream& os) { bounds_csv(os, report); });
      }
    } else if (*delta) {
      rp.Delta = 0.0;
      rp.validate();
      std::optional<SimParams> sim;
      if (delta_simulate) {
        delta_c.sim.validate();
        sim = delta_c.sim;
      }
      const DeltaAnalysis a = analyze_delta(rp, tol, sim);
      const std::pair<const char*, const DeltaThreshold*> rows[] = {
          {"Delta_I", &a.delta_I},
          {"Delta_II_numeric", &a.delta_II_numeric},
          {"Delta_III", &a.delta_III},
          {"Delta_IV", &a.delta_IV},
          {"Delta_V_numeric", &a.delta_V_numeric}};
      std::vector<std::string> tied;
      for (auto b : a.tied_winners) tied.emplace_back(to_string(b));
      if (delta_c.format == "json") {
        json out;
        for (const auto& [name, t] : rows) out[name] = threshold_json(*t);
        out["Delta_sim"] = a.delta_sim ? threshold_json(*a.delta_sim) : json("n/a");
        out["winner"] = std::string(to_string(a.winner));
        out["tied_winners"] = tied;
        print_json(delta_c, out);
      } else {
        with_output(delta_c, [&](std::ostream& os) {
          write_csv_row(os, {"threshold", "value", "certifies"});
          for (const auto& [name, t] : rows) {
            write_csv_row(os, {name, format_number(t->value), t->certifies ? "true" : "false"});
          }
          if (a.delta_sim) {
            write_csv_row(os, {"Delta_sim", format_number(a.delta_sim->value),
                               a.delta_sim->certifies ? "true" : "false"});
          }
          std::string joined;
          for (const auto& t : tied) joined += (joined.empty() ? "" : ";") + t;
          write_csv_row(os, {"winner", std::string(to_string(a.winner)), joined});
        });
      }
    } else if (*classify_cmd) {
      const ModelSpec model = load_model(classify_c.model_path);
      const BoundsReport report = all_bounds(model);
      std::optional<SgrEstimate> est;
      if (classify_simulate) {
        classify_c.sim.validate();
        est = estimate_sgr(model, classify_c.sim);
      }
      const Classification c = classify(model, report, est);
      if (classify_c.format == "json") {
        json out = classification_json(c);
        out["log_lambda_T"] = num(report.log_lambda_T);
        print_json(classify_c, out);
      } else {
        with_output(classify_c, [&](std::ostream& os) {
          write_csv_row(os, {"verdict", "basis", "basis_value", "r0", "log_sgr", "std_error"});
          write_csv_row(os, {to_string(c.verdict),
                             c.basis ? std::string(to_string(c.basis->name)) : "n/a",
                             c.basis ? format_number(c.basis->value) : "n/a",
                             format_number(c.r0),
                             est ? format_number(est->log_sgr_mean) : "n/a",
                             est ? format_number(est->std_error) : "n/a"});
        });
      }
    } else if (*sweep) {
      const SweepResult result = sweep_winners(sweep_grid.grid(), sweep_c.sim);
      if (!tables_out.empty()) {
        Common t = sweep_c;
        t.out_path = tables_out;
        with_output(t, [&](std::ostream& os) { write_win_tables_csv(os, result); });
      }
      if (sweep_c.format == "csv") {
        with_output(sweep_c, [&](std::ostream& os) { write_sweep_csv(os, result); });
      } else {
        auto table = [](const WinTable& t) {
          json out;
          for (std::size_t i = 0; i < t.names.size(); ++i) {
            out[t.names[i]] = {{"wins", t.wins[i]},
                               {"share_percent", num(t.share(i))},
                               {"wins_tie_broken", t.wins_tie_broken[i]},
                               {"share_tie_broken_percent", num(t.share_tie_broken(i))}};
          }
          out["tie"] = {{"wins", t.ties}, {"share_percent", num(t.tie_share())}};
          return out;
        };
        print_json(sweep_c, {{"points", result.rows.size()},
                             {"failures", result.failures},
                             {"lower", table(result.lower_table)},
                             {"upper", table(result.upper_table)}});
      }
    } else if (*curve) {
      const auto result = error_vs_variation(curve_grid.grid(), curve_c.sim, bins);
      if (curve_c.format == "csv") {
        with_output(curve_c, [&](std::ostream& os) { write_error_curve_csv(os, result); });
      } else {
        json out = json::array();
        for (const auto& b : result) {
          out.push_back({{"variation_lo", num(b.lo)}, {"variation_hi", num(b.hi)},
                         {"count", b.count}, {"mean_error_upper", num(b.mean_upper)},
                         {"sd_error_upper", num(b.sd_upper)},
                         {"mean_error_lower", num(b.mean_lower)},
                         {"sd_error_lower", num(b.sd_lower)}});
        }
        print_json(curve_c, out);
      }
    } else if (*dcurve) {
      const bool explicit_rates = o_f->count() + o_F->count() + o_s->count() + o_pi->count() > 0;
      if (!case_name.empty() && explicit_rates) {
        throw ValidationError("give either --case or --f/--F/--s/--pi1, not both");
      }
      RichPoorSpec base = dc;
      if (!case_name.empty()) {
        base = reference_case(case_name == "A"   ? ReferenceCase::A
                              : case_name == "B" ? ReferenceCase::B
                                                 : ReferenceCase::C);
      } else if (o_f->count() + o_F->count() + o_s->count() + o_pi->count() != 4) {
        throw ValidationError("delta-curves needs --case or all of --f, --F, --s, --pi1");
      }
      std::vector<double> deltas;
      if (!deltas_text.empty()) {
        deltas = parse_list(deltas_text);
      } else {
        if (!(delta_step > 0.0)) throw ValidationError("--delta-step must be positive");
        for (int k = 0; k * delta_step < base.F - 1e-9; ++k) deltas.push_back(k * delta_step);
      }
      const auto rows = delta_curves(base, deltas, dcurve_c.sim);
      if (dcurve_c.format == "csv") {
        with_output(dcurve_c, [&](std::ostream& os) { write_delta_curves_csv(os, rows); });
      } else {
        json out = json::array();
        for (const auto& r : rows) {
          json row{{"Delta", num(r.delta)}, {"log_sgr", num(r.sgr.log_sgr_mean)},
                   {"std_error", num(r.sgr.std_error)}};
          for (std::size_t i = 0; i < kLowerTable.size(); ++i) {
            row[std::string(to_string(kLowerTable[i]))] = num(r.lower[i]);
          }
          row["log_lambda_T"] = num(r.log_lambda_T);
          out.push_back(row);
        }
        print_json(dcurve_c, out);
      }
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
