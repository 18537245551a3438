// Copyright 2026 The phasekit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phasekit/phasekit.hpp"

namespace phasekit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

namespace detail {

struct Options {
  std::string format = "csv";
  bool quote_tolerances = false;
  std::string out_path;

  std::optional<double> alpha2;
  std::optional<double> beta2;
  bool asymptotic = false;
  double tail_tol = kDefaultTailTol;
  double optimum_tail_tol = kDefaultHelstromTailTol;

  std::optional<double> phi_over_pi;
  bool optimize = false;
  std::size_t grid_points = 256;

  std::string method = "exact";
  std::uint64_t ceiling = kDefaultPhotonCeiling;

  std::string rule = "ml";
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  bool random_phase = false;

  int figure_id = 0;
  std::vector<double> alpha2_grid;
  std::vector<double> beta2_list;
  std::vector<double> beta2_grid;
  std::size_t n_angles = scan::kDefaultAngles;
  std::optional<double> cross_check_alpha2;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw UsageError(std::string(flag) + " is required");
  return *v;
}

inline void add_pulse_flags(CLI::App* cmd, Options& o, bool beta_required) {
  cmd->add_option("--alpha2", o.alpha2, "Mean photon number of the signal")
      ->required()
      ->check(CLI::NonNegativeNumber);
  auto* beta = cmd->add_option("--beta2", o.beta2,
                               "Mean photon number of the reference")
                   ->check(CLI::NonNegativeNumber);
  if (beta_required) beta->required();
}

inline void add_result_columns(Table& t, const Options& o,
                               const DiscriminationResult& r) {
  if (!o.quote_tolerances) return;
  t.columns.insert(t.columns.end(), {"tail_tol", "truncation_bound", "neglected_mass"});
  t.rows.back().insert(t.rows.back().end(),
                       {r.tail_tol, r.truncation_bound, r.neglected_mass});
}

inline Cell optional_cell(const std::optional<double>& v) {
  if (v) return *v;
  return Null{};
}

inline Table receiver_table(const Options& o, const DiscriminationResult& r,
                            std::optional<double> beta2) {
  Table t;
  t.columns = {"method", "alpha2", "beta2", "P", "D"};
  t.rows.push_back({r.method, *o.alpha2, optional_cell(beta2),
                    r.error_probability, r.distinguishability});
  add_result_columns(t, o, r);
  return t;
}

inline Table run_kennedy_or_homodyne(const Options& o, bool kennedy) {
  const double alpha2 = require(o.alpha2, "--alpha2");
  if (o.asymptotic) {
    if (o.beta2) throw UsageError("--asymptotic takes no --beta2");
    return receiver_table(
        o, kennedy ? p_kennedy_asymptotic(alpha2) : p_homodyne_asymptotic(alpha2),
        std::nullopt);
  }
  const PulsePair p{alpha2, require(o.beta2, "--beta2")};
  return receiver_table(
      o, kennedy ? p_kennedy_generalized(p) : p_homodyne_generalized(p, o.tail_tol),
      o.beta2);
}

inline Table run_bsclass(const Options& o) {
  const PulsePair p{require(o.alpha2, "--alpha2"), require(o.beta2, "--beta2")};
  if (o.optimize == o.phi_over_pi.has_value())
    throw UsageError("bsclass needs exactly one of --phi-over-pi or --optimize");
  Table t;
  t.columns = {"method", "alpha2", "beta2", "phi_over_pi", "P", "D"};
  DiscriminationResult r;
  double x = 0.0;
  if (o.optimize) {
    auto best = best_angle(p, o.grid_points, o.tail_tol);
    r = best.result;
    x = best.splitter.phi_over_pi();
    r.method = "beamsplitter_ml_optimized";
  } else {
    x = *o.phi_over_pi;
    r = p_beamsplitter_ml(p, Beamsplitter::from_phi_over_pi(x), o.tail_tol);
  }
  t.rows.push_back({r.method, p.alpha2(), p.beta2(), x, r.error_probability,
                    r.distinguishability});
  add_result_columns(t, o, r);
  return t;
}

inline Table run_optimum(const Options& o) {
  const PulsePair p{require(o.alpha2, "--alpha2"), require(o.beta2, "--beta2")};
  Table t;
  DiscriminationResult r;
  if (o.method == "exact") {
    r = p_err_optimal(p, o.optimum_tail_tol, 0, o.ceiling);
    t.columns = {"method", "alpha2", "beta2", "P_err", "D_err", "N_max"};
  } else {
    r = p_err_small_alpha(p);
    t.columns = {"method", "alpha2", "beta2", "P_err", "D_err", "n_cut"};
  }
  t.rows.push_back({r.method, p.alpha2(), p.beta2(), r.error_probability,
                    r.distinguishability, static_cast<std::int64_t>(r.cutoff)});
  add_result_columns(t, o, r);
  return t;
}

inline DecisionRule parse_rule(const std::string& s) {
  if (s == "ml") return DecisionRule::ml_joint;
  if (s == "kennedy") return DecisionRule::kennedy_single_port;
  return DecisionRule::homodyne_compare;
}

inline Table run_montecarlo(const Options& o) {
  TrialConfig cfg;
  cfg.pulses = PulsePair{require(o.alpha2, "--alpha2"), require(o.beta2, "--beta2")};
  cfg.rule = parse_rule(o.rule);
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.random_common_phase = o.random_phase;
  if (o.phi_over_pi) {
    cfg.splitter = Beamsplitter::from_phi_over_pi(*o.phi_over_pi);
  } else if (cfg.rule == DecisionRule::kennedy_single_port) {
    try {
      cfg.splitter = kennedy_angle(cfg.pulses);
    } catch (const domain_error& e) {
      throw config_error(std::string("kennedy rule: ") + e.what());
    }
  } else if (cfg.rule == DecisionRule::homodyne_compare) {
    cfg.splitter = Beamsplitter::fifty_fifty();
  } else {
    throw UsageError("--phi-over-pi is required for --rule ml");
  }
  const auto est = run_trials(cfg);
  Table t;
  t.columns = {"alpha2", "beta2", "phi_over_pi", "rule", "trials", "seed",
               "errors", "error_rate", "std_error", "ci99_low", "ci99_high"};
  t.rows.push_back({cfg.pulses.alpha2(), cfg.pulses.beta2(),
                    cfg.splitter.phi_over_pi(), o.rule,
                    static_cast<std::int64_t>(est.trials),
                    // Seeds above 2^63 print as their two's-complement value.
                    static_cast<std::int64_t>(est.seed),
                    static_cast<std::int64_t>(est.errors), est.rate,
                    est.std_error, est.ci_low, est.ci_high});
  return t;
}

inline Table run_figure(const Options& o) {
  const auto alpha2_grid = o.alpha2_grid.empty() ? scan::default_alpha2_grid() : o.alpha2_grid;
  const auto beta2_list = o.beta2_list.empty() ? scan::default_beta2_list() : o.beta2_list;
  switch (o.figure_id) {
    case 1:
      return scan::figure_kennedy_ratios(alpha2_grid, beta2_list);
    case 2:
      return scan::figure_homodyne_ratios(alpha2_grid, beta2_list, o.tail_tol);
    case 3:
    case 4: {
      const PulsePair p{o.alpha2.value_or(0.1),
                        o.beta2.value_or(o.figure_id == 3 ? 1.0 : 10.0)};
      auto t = scan::figure_angle_sweep(p, o.n_angles, o.tail_tol);
      t.metadata["figure"] = o.figure_id;
      return t;
    }
    default: {
      scan::OptimalRatioOptions opts;
      if (o.cross_check_alpha2) {
        opts.alpha2 = *o.cross_check_alpha2;
        opts.exact_column = true;
      }
      opts.tail_tol = o.optimum_tail_tol;
      opts.ceiling = o.ceiling;
      return scan::figure_optimal_ratio(
          o.beta2_grid.empty() ? scan::default_reference_grid() : o.beta2_grid, opts);
    }
  }
}

}  // namespace detail

/// Parses args (without the program name), runs one subcommand and writes its
/// table to `out` (or --out). Diagnostics go to `err`. Returns 0, 2 for
/// argument errors, 3 for numerical-resource errors.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  using detail::Options;
  Options o;
  CLI::App app{"Error probabilities for phase discrimination of weak coherent "
               "pulses against a finite reference pulse",
               "phasekit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--quote-tolerances", o.quote_tolerances,
               "Add truncation bounds to the output");

  auto* kennedy = app.add_subcommand("kennedy", "Generalized Kennedy receiver");
  auto* homodyne = app.add_subcommand("homodyne", "Generalized homodyne receiver");
  for (auto* cmd : {kennedy, homodyne}) {
    detail::add_pulse_flags(cmd, o, false);
    cmd->add_flag("--asymptotic", o.asymptotic, "Infinite reference (omit --beta2)");
  }
  homodyne->add_option("--tail-tol", o.tail_tol, "Neglected Poisson mass")
      ->check(CLI::Range(1e-300, 0.5));

  auto* bsclass = app.add_subcommand("bsclass", "Beamsplitter receiver family, ML decision");
  detail::add_pulse_flags(bsclass, o, true);
  bsclass->add_option("--phi-over-pi", o.phi_over_pi, "Splitter angle / pi in [0, 1/4]")
      ->check(CLI::Range(0.0, 0.25));
  bsclass->add_flag("--optimize", o.optimize, "Search the best angle");
  bsclass->add_option("--grid-points", o.grid_points, "Angle grid size for --optimize")
      ->check(CLI::Range(16, 1 << 20));
  bsclass->add_option("--tail-tol", o.tail_tol, "Neglected Poisson mass")
      ->check(CLI::Range(1e-300, 0.5));

  auto* optimum = app.add_subcommand("optimum", "Minimum-error (Helstrom) bound");
  detail::add_pulse_flags(optimum, o, true);
  optimum->add_option("--tail-tol", o.optimum_tail_tol, "Neglected Poisson mass")
      ->check(CLI::Range(1e-300, 0.5));
  optimum->add_option("--method", o.method, "exact or small-alpha")
      ->check(CLI::IsMember({"exact", "small-alpha"}));
  optimum->add_option("--max-photons", o.ceiling, "Ceiling on the total photon number");

  auto* montecarlo = app.add_subcommand("montecarlo", "Simulated detection trials");
  detail::add_pulse_flags(montecarlo, o, true);
  montecarlo->add_option("--phi-over-pi", o.phi_over_pi, "Splitter angle / pi in [0, 1/4]")
      ->check(CLI::Range(0.0, 0.25));
  montecarlo->add_option("--rule", o.rule, "ml, kennedy or homodyne")
      ->check(CLI::IsMember({"ml", "kennedy", "homodyne"}));
  montecarlo->add_option("--trials", o.trials, "Number of trials")
      ->check(CLI::PositiveNumber);
  montecarlo->add_option("--seed", o.seed, "64-bit seed");
  montecarlo->add_flag("--random-phase", o.random_phase,
                       "Draw a random common optical phase per trial");

  auto* figure = app.add_subcommand("figure", "Data tables for the figures");
  figure->add_option("--id", o.figure_id, "Figure number")
      ->required()
      ->check(CLI::Range(1, 5));
  figure->add_option("--alpha2-grid", o.alpha2_grid, "Signal intensities (figures 1, 2)")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  figure->add_option("--beta2-list", o.beta2_list, "Reference intensities (figures 1, 2)")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  figure->add_option("--alpha2", o.alpha2, "Signal intensity (figures 3, 4)")
      ->check(CLI::NonNegativeNumber);
  figure->add_option("--beta2", o.beta2, "Reference intensity (figures 3, 4)")
      ->check(CLI::NonNegativeNumber);
  figure->add_option("--n-angles", o.n_angles, "Angles in the sweep (figures 3, 4)")
      ->check(CLI::Range(64, 1 << 20));
  figure->add_option("--beta2-grid", o.beta2_grid, "Reference intensities (figure 5)")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  figure->add_option("--cross-check-alpha2", o.cross_check_alpha2,
                     "Add the exact trace-norm column at this alpha2 (figure 5)")
      ->check(CLI::PositiveNumber);
  figure->add_option("--tail-tol", o.tail_tol, "Neglected Poisson mass")
      ->check(CLI::Range(1e-300, 0.5));
  figure->add_option("--out", o.out_path, "Output file (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Table table;
  try {
    if (kennedy->parsed()) {
      table = detail::run_kennedy_or_homodyne(o, true);
    } else if (homodyne->parsed()) {
      table = detail::run_kennedy_or_homodyne(o, false);
    } else if (bsclass->parsed()) {
      table = detail::run_bsclass(o);
    } else if (optimum->parsed()) {
      table = detail::run_optimum(o);
    } else if (montecarlo->parsed()) {
      table = detail::run_montecarlo(o);
    } else {
      table = detail::run_figure(o);
    }
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const resource_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const convergence_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.out_path.empty()) {
    file.open(o.out_path);
    if (!file) {
      err << "error: cannot open " << o.out_path << " for writing\n";
      return kExitUsage;
    }
    sink = &file;
  }
  if (o.format == "json")
    write_json(table, *sink);
  else
    write_csv(table, *sink);
  return kExitOk;
}

}  // namespace phasekit::cli
