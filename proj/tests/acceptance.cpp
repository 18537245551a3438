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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "phasekit/phasekit.hpp"

namespace {

using namespace phasekit;

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fails]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::vector<double> kGrid{0.05, 0.1, 0.5, 1.0, 4.0};

double ratio_d(double tilde_p, double p) { return (1 - 2 * tilde_p) / (1 - 2 * p); }

Check kennedy_anchor() {
  Check c;
  const double v = p_kennedy_generalized({0.1, 1.0}).error_probability;
  c.require(std::abs(v - 0.3476) <= 0.0005, "P_Ken_tilde(0.1,1) = " + fmt("%.10f", v));
  c.require(std::abs(v - 0.35) <= 0.01, "within 0.01 of 0.35");
  return c;
}

Check homodyne_anchor() {
  Check c;
  const double v = p_homodyne_generalized({0.1, 1.0}).error_probability;
  c.require(std::abs(v - 0.30) <= 0.01, "P_hom_tilde(0.1,1) = " + fmt("%.10f", v));
  return c;
}

Check homodyne_asymptote() {
  Check c;
  const double v = p_homodyne_asymptotic(0.1).error_probability;
  c.require(std::abs(v - 0.26) <= 0.005, "P_hom(0.1) = " + fmt("%.10f", v));
  return c;
}

Check angle_optimum() {
  Check c;
  const auto sweep = scan::figure_angle_sweep({0.1, 10.0}, 256);
  double lowest = 1.0;
  for (const auto& row : sweep.rows)
    if (std::get<std::string>(row[0]) == "sweep") lowest = std::min(lowest, std::get<double>(row[2]));
  const double refined = best_angle({0.1, 10.0}, 256).result.error_probability;
  const double hom = p_homodyne_asymptotic(0.1).error_probability;
  c.require(std::abs(lowest - 0.25) <= 0.005, "256-point sweep min = " + fmt("%.6f", lowest));
  c.require(std::abs(refined - 0.25) <= 0.005, "refined min = " + fmt("%.6f", refined));
  c.require(lowest < hom - 0.005, "below P_hom - 0.005 = " + fmt("%.6f", hom - 0.005));
  return c;
}

Check kennedy_reference_strength() {
  Check c;
  const double pk = p_kennedy_asymptotic(0.1).error_probability;
  const double ten = ratio_d(p_kennedy_generalized({0.1, 10.0}).error_probability, pk);
  const double one = ratio_d(p_kennedy_generalized({0.1, 1.0}).error_probability, pk);
  c.require(ten >= 0.99, "D ratio at beta2=10 = " + fmt("%.6f", ten) + " >= 0.99");
  c.require(one >= 0.93, "D ratio at beta2=1 = " + fmt("%.6f", one) + " >= 0.93");
  return c;
}

Check homodyne_reference_strength() {
  Check c;
  const double ph = p_homodyne_asymptotic(0.1).error_probability;
  const double ten = ratio_d(p_homodyne_generalized({0.1, 10.0}).error_probability, ph);
  const double one = ratio_d(p_homodyne_generalized({0.1, 1.0}).error_probability, ph);
  c.require(ten >= 0.99, "D ratio at beta2=10 = " + fmt("%.6f", ten) + " >= 0.99");
  c.require(one >= 0.83 && one <= 0.88,
            "D ratio at beta2=1 = " + fmt("%.6f", one) + " in [0.83, 0.88]");
  return c;
}

Check symmetry() {
  Check c;
  double worst_ken = 0.0, worst_hom = 0.0;
  for (double a : kGrid)
    for (double b : kGrid) {
      worst_ken = std::max(worst_ken, std::abs(p_kennedy_generalized({a, b}).error_probability -
                                               p_kennedy_generalized({b, a}).error_probability));
      worst_hom = std::max(worst_hom, std::abs(p_homodyne_generalized({a, b}).error_probability -
                                               p_homodyne_generalized({b, a}).error_probability));
    }
  c.require(worst_ken < 1e-10, "max Kennedy asymmetry = " + fmt("%.3g", worst_ken));
  c.require(worst_hom < 1e-10, "max homodyne asymmetry = " + fmt("%.3g", worst_hom));
  return c;
}

Check family_consistency() {
  Check c;
  double worst_hom = 0.0, worst_ken = -1.0;
  for (double a : kGrid)
    for (double b : kGrid) {
      const PulsePair p{a, b};
      worst_hom = std::max(
          worst_hom, std::abs(p_beamsplitter_ml(p, Beamsplitter::fifty_fifty()).error_probability -
                              p_homodyne_generalized(p).error_probability));
      // The Kennedy angle lies inside [0, pi/4] only when beta2 >= alpha2; the
      // other half of the grid is the swapped pair, on which both sides agree.
      const PulsePair q = b >= a ? p : p.swapped();
      const double excess = p_beamsplitter_ml(q, kennedy_angle(q)).error_probability -
                            p_kennedy_generalized(p).error_probability;
      worst_ken = std::max(worst_ken, excess);
    }
  c.require(worst_hom <= 1e-12, "max |P(pi/4) - P_hom_tilde| = " + fmt("%.3g", worst_hom));
  c.require(worst_ken <= 1e-12,
            "max P(Kennedy angle) - P_Ken_tilde = " + fmt("%.3g", worst_ken));
  return c;
}

Check gaussian_limit() {
  Check c;
  const double d = std::abs(p_homodyne_generalized({0.1, 2000.0}).error_probability -
                            p_homodyne_asymptotic(0.1).error_probability);
  c.require(d < 0.005, "|P_hom_tilde(0.1,2000) - P_hom(0.1)| = " + fmt("%.3g", d));
  return c;
}

Check monte_carlo() {
  Check c;
  for (double b2 : {1.0, 10.0}) {
    const PulsePair p{0.1, b2};
    for (auto rule : {DecisionRule::kennedy_single_port, DecisionRule::homodyne_compare,
                      DecisionRule::ml_joint}) {
      TrialConfig cfg;
      cfg.pulses = p;
      cfg.rule = rule;
      cfg.trials = 1000000;
      cfg.seed = 20260101;
      cfg.splitter = rule == DecisionRule::kennedy_single_port ? kennedy_angle(p)
                     : rule == DecisionRule::homodyne_compare  ? Beamsplitter::fifty_fifty()
                                                               : best_angle(p).splitter;
      const auto e = run_trials(cfg);
      const double exact = analytic_error(cfg).error_probability;
      c.require(e.contains(exact), std::string(to_string(rule)) + " beta2=" + fmt("%g", b2) +
                                       ": " + fmt("%.5f", exact) + " in [" +
                                       fmt("%.5f", e.ci_low) + ", " + fmt("%.5f", e.ci_high) +
                                       "]");
    }
  }
  return c;
}

Check helstrom_dominance() {
  Check c;
  double worst = -1.0;
  for (double a : kGrid)
    for (double b : kGrid) {
      const PulsePair p{a, b};
      const double bound = std::min({p_homodyne_generalized(p).error_probability,
                                     p_kennedy_generalized(p).error_probability,
                                     best_angle(p).result.error_probability});
      worst = std::max(worst, p_err_optimal(p).error_probability - bound);
    }
  c.require(worst <= 1e-9, "max P_err - best receiver = " + fmt("%.3g", worst));
  const double strong = p_err_optimal({0.1, 25.0}).error_probability;
  const double pmin = p_min_pure(0.1).error_probability;
  c.require(std::abs(strong - pmin) <= 0.02,
            "P_err(0.1,25) = " + fmt("%.6f", strong) + " vs P_min = " + fmt("%.6f", pmin));
  return c;
}

Check small_alpha_cross_oracle() {
  Check c;
  std::vector<double> rel;
  for (double a2 : {1e-2, 1e-3, 1e-4}) {
    const PulsePair p{a2, 1.0};
    const double series = d_err_small_alpha(p).value;
    rel.push_back(std::abs(p_err_optimal(p).distinguishability - series) / series);
  }
  c.require(rel[1] < 0.05, "relative difference at 1e-3 = " + fmt("%.4g", rel[1]));
  c.require(rel[0] > rel[1] && rel[1] > rel[2],
            "decreasing: " + fmt("%.4g", rel[0]) + ", " + fmt("%.4g", rel[1]) + ", " +
                fmt("%.4g", rel[2]));
  const std::vector<double> grid{1.0};
  const auto t = scan::figure_optimal_ratio(grid);
  const double ordinate = std::get<double>(t.rows[0][1]);
  c.require(std::abs(ordinate - 0.773) <= 0.002, "D_err/D_min at beta2=1 = " + fmt("%.6f", ordinate));
  return c;
}

Check conclusions_range() {
  Check c;
  const PulsePair p{0.1, 1.0};
  const double ken = ratio_d(p_kennedy_generalized(p).error_probability,
                             p_kennedy_asymptotic(0.1).error_probability);
  const double hom = ratio_d(p_homodyne_generalized(p).error_probability,
                             p_homodyne_asymptotic(0.1).error_probability);
  const double opt = p_err_optimal(p).distinguishability / p_min_pure(0.1).distinguishability;
  for (auto [name, v] : std::array<std::pair<const char*, double>, 3>{
           {{"Kennedy", ken}, {"homodyne", hom}, {"optimum", opt}}})
    c.require(v >= 0.75 && v <= 0.95, std::string(name) + " D ratio = " + fmt("%.6f", v));
  return c;
}

std::string capture(const std::string& args) {
  const std::string cmd = std::string(PHASEKIT_CLI_PATH) + " " + args + " 2>&1";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {};
  std::string out;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  pclose(pipe);
  return out;
}

Check determinism() {
  Check c;
  for (const char* args :
       {"montecarlo --alpha2 0.1 --beta2 1 --rule kennedy --trials 200000 --seed 77",
        "figure --id 3 --format json", "kennedy --alpha2 0.1 --beta2 1 --quote-tolerances"}) {
    const auto a = capture(args), b = capture(args);
    c.require(!a.empty() && a == b, std::string("'") + args + "' identical");
  }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
      {"generalized Kennedy anchor", kennedy_anchor},
      {"generalized homodyne anchor", homodyne_anchor},
      {"asymptotic homodyne anchor", homodyne_asymptote},
      {"angle-family optimum", angle_optimum},
      {"reference strength, Kennedy", kennedy_reference_strength},
      {"reference strength, homodyne", homodyne_reference_strength},
      {"signal/reference symmetry", symmetry},
      {"family consistency", family_consistency},
      {"Gaussian limit", gaussian_limit},
      {"Monte Carlo oracle", monte_carlo},
      {"optimum dominance and limit", helstrom_dominance},
      {"small-alpha cross-oracle", small_alpha_cross_oracle},
      {"distinguishability range at (0.1, 1)", conclusions_range},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const Check c = criteria[i].second();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!c.pass) ++failed;
    std::printf("%s %2zu %s: %s (%.2fs)\n", c.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                c.detail.c_str(), secs);
  }
  std::printf("%zu/%zu criteria pass\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
