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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "phasekit/model.hpp"
#include "phasekit/numerics.hpp"
#include "phasekit/parallel.hpp"

namespace phasekit {

inline constexpr double kDefaultTailTol = 1e-12;

/// Log-likelihoods closer than this are treated as a tie.
inline constexpr double kLogTieTolerance = 1e-12;

namespace detail {
inline void require_alpha2(double alpha2) {
  if (!(alpha2 >= 0.0) || std::isnan(alpha2))
    throw domain_error("alpha2 must be non-negative, got " + std::to_string(alpha2));
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Infinite-reference baselines.

/// Helstrom bound for the pure states |alpha> and |-alpha>.
inline DiscriminationResult p_min_pure(double alpha2) {
  detail::require_alpha2(alpha2);
  // 1 - sqrt(1 - x) rewritten as x / (1 + sqrt(1 - x)) to keep precision at
  // both ends.
  const double overlap = std::exp(-4.0 * alpha2);
  const double p = 0.5 * overlap / (1.0 + std::sqrt(-std::expm1(-4.0 * alpha2)));
  return DiscriminationResult::make(p, "min_pure");
}

inline DiscriminationResult p_kennedy_asymptotic(double alpha2) {
  detail::require_alpha2(alpha2);
  return DiscriminationResult::make(0.5 * std::exp(-4.0 * alpha2),
                                    "kennedy_asymptotic");
}

inline DiscriminationResult p_homodyne_asymptotic(double alpha2) {
  detail::require_alpha2(alpha2);
  return DiscriminationResult::make(
      numerics::gaussian_upper_tail(2.0 * std::sqrt(alpha2)),
      "homodyne_asymptotic");
}

// ---------------------------------------------------------------------------
// Finite reference.

/// Kennedy receiver with the splitter tuned so port 2 is dark under PLUS:
/// P = exp(-4 alpha^2 beta^2 / (alpha^2 + beta^2)) / 2. Symmetric in
/// (alpha^2, beta^2).
inline DiscriminationResult p_kennedy_generalized(const PulsePair& p) {
  const double total = p.total();
  if (total == 0.0) {
    auto r = DiscriminationResult::make(0.5, "kennedy_generalized");
    r.degenerate = true;
    return r;
  }
  const double exponent = 4.0 * p.alpha2() * p.beta2() / total;
  return DiscriminationResult::make(0.5 * std::exp(-exponent),
                                    "kennedy_generalized");
}

namespace detail {

// Poisson pmf tabulated over a window.
struct PmfWindow {
  numerics::PoissonWindow window;
  std::vector<double> pmf;

  PmfWindow(double mean, double tail_tol)
      : window(numerics::poisson_window(mean, tail_tol)) {
    pmf.reserve(window.hi - window.lo + 1);
    for (std::uint64_t n = window.lo; n <= window.hi; ++n)
      pmf.push_back(numerics::poisson_pmf(n, mean));
  }

  double operator()(std::uint64_t n) const {
    if (n < window.lo || n > window.hi) return 0.0;
    return pmf[n - window.lo];
  }
};

}  // namespace detail

/// 50/50 splitter, guess the port with more counts, fair coin on equal
/// counts:
///   P = sum_{n<m} P+(n) P-(m) + 1/2 sum_n P+(n) P-(n),
/// with P+- Poisson at (beta +- alpha)^2 / 2. Each distribution is cut to a
/// window leaving out less than tail_tol of its mass.
inline DiscriminationResult p_homodyne_generalized(
    const PulsePair& p, double tail_tol = kDefaultTailTol) {
  numerics::detail::require_tail(tail_tol);
  const OutputMeans means = output_means(p, Beamsplitter::fifty_fifty());
  const detail::PmfWindow bright(means.n1_plus, tail_tol);
  const detail::PmfWindow dim(means.n1_minus, tail_tol);

  // suffix[k] = sum of dim pmf over [lo + k, hi]
  const std::size_t len = dim.pmf.size();
  std::vector<double> suffix(len + 1, 0.0);
  {
    numerics::NeumaierSum acc;
    for (std::size_t k = len; k-- > 0;) {
      acc += dim.pmf[k];
      suffix[k] = acc.value();
    }
  }
  auto mass_above = [&](std::uint64_t n) -> double {
    const std::uint64_t from = std::max(n + 1, dim.window.lo);
    if (from > dim.window.hi) return 0.0;
    return suffix[from - dim.window.lo];
  };

  numerics::NeumaierSum total;
  for (std::uint64_t n = bright.window.lo; n <= bright.window.hi; ++n) {
    const double pn = bright(n);
    total += pn * (mass_above(n) + 0.5 * dim(n));
  }

  auto r = DiscriminationResult::make(total.value(), "homodyne_generalized");
  r.tail_tol = tail_tol;
  r.neglected_mass = bright.window.neglected() + dim.window.neglected();
  r.truncation_bound = r.neglected_mass;
  r.cutoff = std::max(bright.window.hi, dim.window.hi);
  r.degenerate = p.total() == 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Decision rules over joint outcomes.

enum class DecisionRule : std::uint8_t {
  /// Larger joint likelihood wins.
  ml_joint,
  /// Any click in port 2 means MINUS; valid at the Kennedy angle only.
  kennedy_single_port,
  /// More counts in port 1 means PLUS; valid at pi/4 only.
  homodyne_compare,
};

inline std::string to_string(DecisionRule rule) {
  switch (rule) {
    case DecisionRule::ml_joint:
      return "ml";
    case DecisionRule::kennedy_single_port:
      return "kennedy";
    case DecisionRule::homodyne_compare:
      return "homodyne";
  }
  return "?";
}

enum class Verdict : std::uint8_t { plus, minus, tie };

namespace detail {
inline Verdict compare_log_likelihoods(double log_plus, double log_minus) {
  // An outcome impossible under one hypothesis decides for the other without
  // touching log arithmetic.
  const bool plus_impossible = log_plus == numerics::kNegInf;
  const bool minus_impossible = log_minus == numerics::kNegInf;
  if (plus_impossible && minus_impossible) return Verdict::tie;
  if (plus_impossible) return Verdict::minus;
  if (minus_impossible) return Verdict::plus;
  const double diff = log_plus - log_minus;
  if (std::abs(diff) < kLogTieTolerance) return Verdict::tie;
  return diff > 0.0 ? Verdict::plus : Verdict::minus;
}
}  // namespace detail

inline double joint_log_likelihood(const OutputMeans& means, Hypothesis h,
                                   const ClickOutcome& c) {
  return numerics::log_poisson_pmf(c.n, means.port1(h)) +
         numerics::log_poisson_pmf(c.m, means.port2(h));
}

inline Verdict decide(DecisionRule rule, const OutputMeans& means,
                      const ClickOutcome& c) {
  switch (rule) {
    case DecisionRule::ml_joint:
      return detail::compare_log_likelihoods(
          joint_log_likelihood(means, Hypothesis::plus, c),
          joint_log_likelihood(means, Hypothesis::minus, c));
    case DecisionRule::kennedy_single_port:
      return c.m > 0 ? Verdict::minus : Verdict::plus;
    case DecisionRule::homodyne_compare:
      if (c.n == c.m) return Verdict::tie;
      return c.n > c.m ? Verdict::plus : Verdict::minus;
  }
  return Verdict::tie;
}

namespace detail {

struct JointGrid {
  std::uint64_t n_lo, n_hi, m_lo, m_hi;
  double neglected;
  std::vector<double> log1_plus, log1_minus, log2_plus, log2_minus;
};

// Count box covering every port/hypothesis window, with log pmfs tabulated.
inline JointGrid joint_grid(const OutputMeans& means, double tail_tol) {
  using numerics::poisson_window;
  const auto w1p = poisson_window(means.n1_plus, tail_tol);
  const auto w1m = poisson_window(means.n1_minus, tail_tol);
  const auto w2p = poisson_window(means.n2_plus, tail_tol);
  const auto w2m = poisson_window(means.n2_minus, tail_tol);
  JointGrid g{std::min(w1p.lo, w1m.lo),
              std::max(w1p.hi, w1m.hi),
              std::min(w2p.lo, w2m.lo),
              std::max(w2p.hi, w2m.hi),
              w1p.neglected() + w1m.neglected() + w2p.neglected() +
                  w2m.neglected(),
              {},
              {},
              {},
              {}};
  for (std::uint64_t n = g.n_lo; n <= g.n_hi; ++n) {
    g.log1_plus.push_back(numerics::log_poisson_pmf(n, means.n1_plus));
    g.log1_minus.push_back(numerics::log_poisson_pmf(n, means.n1_minus));
  }
  for (std::uint64_t m = g.m_lo; m <= g.m_hi; ++m) {
    g.log2_plus.push_back(numerics::log_poisson_pmf(m, means.n2_plus));
    g.log2_minus.push_back(numerics::log_poisson_pmf(m, means.n2_minus));
  }
  return g;
}

inline DiscriminationResult finish_joint(double p, std::string method,
                                         const JointGrid& g, double tail_tol,
                                         bool degenerate) {
  auto r = DiscriminationResult::make(p, std::move(method));
  r.tail_tol = tail_tol;
  r.neglected_mass = g.neglected;
  // Each hypothesis enters with weight 1/2.
  r.truncation_bound = 0.5 * g.neglected;
  r.cutoff = std::max(g.n_hi, g.m_hi);
  r.degenerate = degenerate;
  return r;
}

}  // namespace detail

/// Error probability of the maximum-likelihood decision over joint counts
/// (n, m) behind a splitter at angle bs.phi():
///   P = 1/2 sum_{P- > P+} P+(n,m) + 1/2 sum_{P+ > P-} P-(n,m)
///       + 1/2 sum_{ties} (P+ + P-)/2.
/// Ties are log-likelihoods within kLogTieTolerance.
inline DiscriminationResult p_beamsplitter_ml(const PulsePair& p,
                                              const Beamsplitter& bs,
                                              double tail_tol = kDefaultTailTol) {
  numerics::detail::require_tail(tail_tol);
  const auto g = detail::joint_grid(output_means(p, bs), tail_tol);
  numerics::NeumaierSum total;
  for (std::size_t i = 0; i < g.log1_plus.size(); ++i) {
    for (std::size_t j = 0; j < g.log2_plus.size(); ++j) {
      const double lp = g.log1_plus[i] + g.log2_plus[j];
      const double lm = g.log1_minus[i] + g.log2_minus[j];
      switch (detail::compare_log_likelihoods(lp, lm)) {
        case Verdict::plus:
          if (lm != numerics::kNegInf) total += 0.5 * std::exp(lm);
          break;
        case Verdict::minus:
          if (lp != numerics::kNegInf) total += 0.5 * std::exp(lp);
          break;
        case Verdict::tie:
          if (lp != numerics::kNegInf)
            total += 0.25 * (std::exp(lp) + std::exp(lm));
          break;
      }
    }
  }
  return detail::finish_joint(total.value(), "beamsplitter_ml", g, tail_tol,
                              p.total() == 0.0);
}

/// Error probability of an arbitrary fixed rule on the same outcome
/// distribution as p_beamsplitter_ml. Angle restrictions of the rule are
/// not checked here.
inline DiscriminationResult p_decision_rule(const PulsePair& p,
                                            const Beamsplitter& bs,
                                            DecisionRule rule,
                                            double tail_tol = kDefaultTailTol) {
  numerics::detail::require_tail(tail_tol);
  const OutputMeans means = output_means(p, bs);
  const auto g = detail::joint_grid(means, tail_tol);
  numerics::NeumaierSum total;
  for (std::size_t i = 0; i < g.log1_plus.size(); ++i) {
    for (std::size_t j = 0; j < g.log2_plus.size(); ++j) {
      const double pp = std::exp(g.log1_plus[i] + g.log2_plus[j]);
      const double pm = std::exp(g.log1_minus[i] + g.log2_minus[j]);
      const ClickOutcome c{g.n_lo + i, g.m_lo + j};
      switch (decide(rule, means, c)) {
        case Verdict::plus:
          total += 0.5 * pm;
          break;
        case Verdict::minus:
          total += 0.5 * pp;
          break;
        case Verdict::tie:
          total += 0.25 * (pp + pm);
          break;
      }
    }
  }
  return detail::finish_joint(total.value(), "rule_" + to_string(rule), g,
                              tail_tol, p.total() == 0.0);
}

// ---------------------------------------------------------------------------
// Angle search.

struct AngleOptimum {
  Beamsplitter splitter;
  DiscriminationResult result;
};

inline constexpr double kAngleTolerance = 1e-6;

/// Minimum of p_beamsplitter_ml over [0, pi/4]: a uniform grid of
/// grid_points angles, then golden-section search on the two grid cells
/// around the best grid point. The curve has kinks where decision regions
/// flip, so the refined point is kept only if it beats the grid.
inline AngleOptimum best_angle(const PulsePair& p, std::size_t grid_points = 256,
                               double tail_tol = kDefaultTailTol,
                               unsigned threads = 0) {
  if (grid_points < 16)
    throw domain_error("best_angle needs at least 16 grid points");
  const double step = kQuarterPi / static_cast<double>(grid_points - 1);
  auto angle_at = [&](std::size_t i) {
    return i + 1 == grid_points ? kQuarterPi : step * static_cast<double>(i);
  };

  std::vector<DiscriminationResult> grid(grid_points);
  parallel_for(
      grid_points,
      [&](std::size_t i) {
        grid[i] = p_beamsplitter_ml(p, Beamsplitter::from_angle(angle_at(i)),
                                    tail_tol);
      },
      threads);
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid_points; ++i)
    if (grid[i].error_probability < grid[best].error_probability) best = i;

  auto eval = [&](double phi) {
    return p_beamsplitter_ml(p, Beamsplitter::from_angle(phi), tail_tol)
        .error_probability;
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = angle_at(best == 0 ? 0 : best - 1);
  double hi = angle_at(std::min(best + 1, grid_points - 1));
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = eval(x1), f2 = eval(x2);
  while (hi - lo > kAngleTolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = eval(x2);
    }
  }
  const double refined_phi = f1 <= f2 ? x1 : x2;
  const auto refined_bs = Beamsplitter::from_angle(refined_phi);
  auto refined = p_beamsplitter_ml(p, refined_bs, tail_tol);
  if (refined.error_probability < grid[best].error_probability)
    return {refined_bs, refined};
  return {Beamsplitter::from_angle(angle_at(best)), grid[best]};
}

}  // namespace phasekit
