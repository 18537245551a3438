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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "phasekit/model.hpp"
#include "phasekit/numerics.hpp"
#include "phasekit/parallel.hpp"

namespace phasekit {

inline constexpr double kDefaultHelstromTailTol = 1e-10;
/// Largest total photon number build_rho_diff will allocate a block for.
inline constexpr std::uint64_t kDefaultPhotonCeiling = 400;
/// Extra blocks kept past the Poisson cutoff of the total intensity.
inline constexpr std::uint64_t kPhotonSafetyMargin = 10;

/// rho_1 - rho_0 for the phase-averaged pulse pairs, stored as one block per
/// total photon number N = n_ref + n_sig. Row k of block N is the basis state
/// (n_ref = k, n_sig = N - k).
struct TruncatedOperator {
  std::uint64_t max_total = 0;
  std::vector<numerics::SymmetricMatrix> blocks;
  /// P(total photon number > max_total) under either hypothesis.
  double neglected_mass = 0.0;

  double trace() const {
    double t = 0.0;
    for (const auto& b : blocks) t += b.trace();
    return t;
  }
};

namespace detail {
// k * log(x) with 0 * log(0) = 0.
inline double log_power(double log_x, std::uint64_t k) {
  return k == 0 ? 0.0 : static_cast<double>(k) * log_x;
}
}  // namespace detail

/// Matrix element between (n_ref = n, n_sig = p) and (m, q), n + p = m + q:
///   e^{-a^2-b^2} (1 - (-1)^{p+q}) b^{n+m} a^{p+q} / sqrt(n! m! p! q!)
/// Entries with equal signal parity vanish; the rest are formed in log space.
inline double rho_diff_element(const PulsePair& pulses, std::uint64_t n,
                               std::uint64_t p, std::uint64_t m,
                               std::uint64_t q) {
  if (n + p != m + q || (p + q) % 2 == 0) return 0.0;
  using numerics::log_factorial;
  const double log_value =
      std::log(2.0) - pulses.total() +
      detail::log_power(std::log(pulses.beta()), n + m) +
      detail::log_power(std::log(pulses.alpha()), p + q) -
      0.5 * (log_factorial(n) + log_factorial(m) + log_factorial(p) +
             log_factorial(q));
  return std::exp(log_value);
}

inline TruncatedOperator build_rho_diff(
    const PulsePair& pulses, double tail_tol = kDefaultHelstromTailTol,
    std::uint64_t ceiling = kDefaultPhotonCeiling) {
  const std::uint64_t max_total =
      numerics::poisson_tail_cutoff(pulses.total(), tail_tol) +
      kPhotonSafetyMargin;
  if (max_total > ceiling)
    throw resource_error("truncation needs total photon number " +
                         std::to_string(max_total) + " but the ceiling is " +
                         std::to_string(ceiling) +
                         "; raise the ceiling or lower the intensities");
  TruncatedOperator op;
  op.max_total = max_total;
  op.neglected_mass = numerics::poisson_upper_tail(pulses.total(), max_total);
  op.blocks.reserve(max_total + 1);
  for (std::uint64_t total = 0; total <= max_total; ++total) {
    numerics::SymmetricMatrix block(total + 1);
    for (std::uint64_t n = 0; n <= total; ++n)
      for (std::uint64_t m = n + 1; m <= total; m += 2)
        block.set(n, m,
                  rho_diff_element(pulses, n, total - n, m, total - m));
    op.blocks.push_back(std::move(block));
  }
  return op;
}

/// Trace norm of the operator, one eigensolve per block. The reduction runs
/// in block order, so the value does not depend on the thread count.
inline double trace_norm(const TruncatedOperator& op, unsigned threads = 0) {
  std::vector<double> per_block(op.blocks.size(), 0.0);
  parallel_for(
      op.blocks.size(),
      [&](std::size_t i) {
        per_block[i] = numerics::eigenvalues_symmetric(op.blocks[i]).trace_norm();
      },
      threads);
  numerics::NeumaierSum sum;
  for (double v : per_block) sum += v;
  return sum.value();
}

/// Minimum error probability for the phase-averaged pair,
/// P = 1/2 - Tr|rho_1 - rho_0| / 4.
inline DiscriminationResult p_err_optimal(
    const PulsePair& pulses, double tail_tol = kDefaultHelstromTailTol,
    unsigned threads = 0, std::uint64_t ceiling = kDefaultPhotonCeiling) {
  const auto op = build_rho_diff(pulses, tail_tol, ceiling);
  auto r = DiscriminationResult::make(0.5 - 0.25 * trace_norm(op, threads),
                                      "helstrom_exact");
  r.tail_tol = tail_tol;
  r.neglected_mass = op.neglected_mass;
  // Tr|rho_1 - rho_0| restricted to the dropped blocks is at most twice the
  // dropped probability.
  r.truncation_bound = 0.5 * op.neglected_mass;
  r.cutoff = op.max_total;
  r.degenerate = pulses.total() == 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Leading order in alpha.

struct FockIndex {
  std::uint64_t n_ref = 0;
  std::uint64_t n_sig = 0;
};

/// Eigenpair level n: eigenvectors (|n,1> +- |n+1,0>) / sqrt(2) with
/// eigenvalues lambda_plus = -lambda_minus.
struct SmallAlphaLevel {
  std::uint64_t n = 0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  FockIndex first;   // (n, 1)
  FockIndex second;  // (n + 1, 0); coefficient sign +1 for lambda_plus, -1 for lambda_minus
};

struct SmallAlphaSpectrum {
  std::vector<SmallAlphaLevel> levels;
  /// Bound on sum_{n > n_cut} |lambda_n^+|.
  double tail_bound = 0.0;
};

namespace detail {

// log[beta^(2n+1) e^{-beta^2} / sqrt(n! (n+1)!)]
inline double log_series_term(double beta2, std::uint64_t n) {
  if (beta2 == 0.0) return numerics::kNegInf;
  return 0.5 * static_cast<double>(2 * n + 1) * std::log(beta2) - beta2 -
         0.5 * (numerics::log_factorial(n) + numerics::log_factorial(n + 1));
}

// Successive terms have ratio beta^2 / sqrt((n+1)(n+2)), decreasing in n.
// Once it is below one the rest of the series is bounded by a geometric tail.
inline double series_tail_bound(double beta2, std::uint64_t n, double term) {
  const double ratio =
      beta2 / std::sqrt(static_cast<double>(n + 1) * static_cast<double>(n + 2));
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return term * ratio / (1.0 - ratio);
}

inline constexpr double kSeriesRelTol = 1e-12;

// Smallest n_cut whose neglected tail is below kSeriesRelTol of the partial
// sum (alpha-independent).
inline std::uint64_t auto_series_cut(double beta2) {
  if (beta2 == 0.0) return 0;
  double partial = 0.0;
  for (std::uint64_t n = 0;; ++n) {
    const double term = std::exp(log_series_term(beta2, n));
    partial += term;
    if (series_tail_bound(beta2, n, term) < kSeriesRelTol * partial) return n;
  }
}

}  // namespace detail

/// lambda_n^{+-} = +-2 beta^(2n+1) alpha e^{-beta^2} / sqrt(n! (n+1)!), the
/// spectrum of the part of rho_1 - rho_0 linear in alpha. Without n_cut the
/// series is cut once its tail is below 1e-12 of the partial sum.
inline SmallAlphaSpectrum small_alpha_spectrum(
    const PulsePair& pulses, std::optional<std::uint64_t> n_cut = std::nullopt) {
  const double beta2 = pulses.beta2();
  const std::uint64_t cut = n_cut.value_or(detail::auto_series_cut(beta2));
  const double scale = 2.0 * pulses.alpha();
  SmallAlphaSpectrum s;
  s.levels.reserve(cut + 1);
  double last = 0.0;
  for (std::uint64_t n = 0; n <= cut; ++n) {
    last = scale * std::exp(detail::log_series_term(beta2, n));
    s.levels.push_back({n, last, -last, {n, 1}, {n + 1, 0}});
  }
  s.tail_bound =
      scale == 0.0 ? 0.0 : detail::series_tail_bound(beta2, cut, last);
  return s;
}

struct SeriesValue {
  double value = 0.0;
  double tail_bound = 0.0;
  std::uint64_t terms = 0;
};

/// D_err = 1/2 sum |lambda_n^{+-}| = 2 alpha e^{-beta^2} sum_n
/// beta^(2n+1) / sqrt(n! (n+1)!).
inline SeriesValue d_err_small_alpha(const PulsePair& pulses) {
  const auto spectrum = small_alpha_spectrum(pulses);
  numerics::NeumaierSum sum;
  for (const auto& level : spectrum.levels) sum += level.lambda_plus;
  return {sum.value(), spectrum.tail_bound, spectrum.levels.size()};
}

inline DiscriminationResult p_err_small_alpha(const PulsePair& pulses) {
  const auto d = d_err_small_alpha(pulses);
  auto r = DiscriminationResult::make(0.5 - 0.5 * d.value, "helstrom_small_alpha");
  r.truncation_bound = 0.5 * d.tail_bound;
  r.cutoff = d.terms == 0 ? 0 : d.terms - 1;
  r.degenerate = pulses.total() == 0.0;
  return r;
}

}  // namespace phasekit
