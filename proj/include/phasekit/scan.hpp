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
#include <span>
#include <string>
#include <vector>

#include "phasekit/errors.hpp"
#include "phasekit/helstrom.hpp"
#include "phasekit/model.hpp"
#include "phasekit/parallel.hpp"
#include "phasekit/receivers.hpp"
#include "phasekit/table_io.hpp"

namespace phasekit::scan {

/// 64 log-spaced signal intensities in [1e-3, 1].
inline std::vector<double> default_alpha2_grid() {
  std::vector<double> grid(64);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = std::pow(10.0, -3.0 + 3.0 * static_cast<double>(i) / 63.0);
  grid.back() = 1.0;
  return grid;
}

inline std::vector<double> default_beta2_list() { return {1.0, 2.0, 4.0, 10.0}; }

/// 0 to 20 in steps of 1/4.
inline std::vector<double> default_reference_grid() {
  std::vector<double> grid(81);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 0.25 * static_cast<double>(i);
  return grid;
}

inline constexpr std::size_t kDefaultAngles = 256;

namespace detail {

inline void require_grid(std::span<const double> grid, const char* name) {
  if (grid.empty()) throw domain_error(std::string(name) + " grid is empty");
  for (double v : grid)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw domain_error(std::string(name) + " grid values must be finite and >= 0");
}

inline Cell ratio(double num, double den) {
  if (den == 0.0) return Null{};
  return num / den;
}

inline nlohmann::ordered_json grid_json(std::span<const double> grid) {
  return nlohmann::ordered_json(std::vector<double>(grid.begin(), grid.end()));
}

// Rows for every (beta2, alpha2) pair, beta2 outer, computed in parallel but
// stored in grid order.
template <class RowFn>
std::vector<std::vector<Cell>> ratio_rows(std::span<const double> alpha2_grid,
                                          std::span<const double> beta2_list,
                                          RowFn&& row, unsigned threads) {
  std::vector<std::vector<Cell>> rows(alpha2_grid.size() * beta2_list.size());
  parallel_for(
      rows.size(),
      [&](std::size_t k) {
        const double beta2 = beta2_list[k / alpha2_grid.size()];
        const double alpha2 = alpha2_grid[k % alpha2_grid.size()];
        rows[k] = row(alpha2, beta2);
      },
      threads);
  return rows;
}

inline std::vector<Cell> ratio_row(double alpha2, double beta2,
                                   const DiscriminationResult& infinite,
                                   const DiscriminationResult& finite) {
  return {alpha2,
          beta2,
          infinite.error_probability,
          finite.error_probability,
          ratio(finite.error_probability, infinite.error_probability),
          infinite.distinguishability,
          finite.distinguishability,
          ratio(finite.distinguishability, infinite.distinguishability)};
}

}  // namespace detail

/// Kennedy receiver with finite vs. infinite reference.
inline Table figure_kennedy_ratios(std::span<const double> alpha2_grid,
                                   std::span<const double> beta2_list,
                                   unsigned threads = 0) {
  detail::require_grid(alpha2_grid, "alpha2");
  detail::require_grid(beta2_list, "beta2");
  Table t;
  t.columns = {"alpha2", "beta2", "P_Ken", "P_Ken_tilde",
               "ratio_P", "D_Ken", "D_Ken_tilde", "ratio_D"};
  t.rows = detail::ratio_rows(
      alpha2_grid, beta2_list,
      [](double a2, double b2) {
        return detail::ratio_row(a2, b2, p_kennedy_asymptotic(a2),
                                 p_kennedy_generalized({a2, b2}));
      },
      threads);
  t.metadata["figure"] = 1;
  t.metadata["alpha2_grid"] = detail::grid_json(alpha2_grid);
  t.metadata["beta2_list"] = detail::grid_json(beta2_list);
  return t;
}

/// Homodyne receiver with finite vs. infinite reference.
inline Table figure_homodyne_ratios(std::span<const double> alpha2_grid,
                                    std::span<const double> beta2_list,
                                    double tail_tol = kDefaultTailTol,
                                    unsigned threads = 0) {
  detail::require_grid(alpha2_grid, "alpha2");
  detail::require_grid(beta2_list, "beta2");
  Table t;
  t.columns = {"alpha2", "beta2", "P_hom", "P_hom_tilde",
               "ratio_P", "D_hom", "D_hom_tilde", "ratio_D"};
  t.rows = detail::ratio_rows(
      alpha2_grid, beta2_list,
      [&](double a2, double b2) {
        return detail::ratio_row(a2, b2, p_homodyne_asymptotic(a2),
                                 p_homodyne_generalized({a2, b2}, tail_tol));
      },
      threads);
  t.metadata["figure"] = 2;
  t.metadata["tail_tol"] = tail_tol;
  t.metadata["alpha2_grid"] = detail::grid_json(alpha2_grid);
  t.metadata["beta2_list"] = detail::grid_json(beta2_list);
  return t;
}

/// ML error probability over n_angles equally spaced angles phi/pi in
/// [0, 1/4] (series "sweep"), followed by one reference row each for the
/// generalized Kennedy (at its angle, null when outside the family) and
/// homodyne (at 1/4) receivers.
inline Table figure_angle_sweep(const PulsePair& pulses,
                                std::size_t n_angles = kDefaultAngles,
                                double tail_tol = kDefaultTailTol,
                                unsigned threads = 0) {
  if (n_angles < 64) throw domain_error("angle sweep needs at least 64 angles");
  Table t;
  t.columns = {"series", "phi_over_pi", "P_tilde"};
  t.rows.resize(n_angles);
  parallel_for(
      n_angles,
      [&](std::size_t i) {
        const double x = i + 1 == n_angles
                             ? 0.25
                             : 0.25 * static_cast<double>(i) /
                                   static_cast<double>(n_angles - 1);
        const auto bs = i + 1 == n_angles ? Beamsplitter::fifty_fifty()
                                          : Beamsplitter::from_phi_over_pi(x);
        t.rows[i] = {std::string("sweep"), x,
                     p_beamsplitter_ml(pulses, bs, tail_tol).error_probability};
      },
      threads);

  Cell kennedy_x = Null{};
  if (pulses.total() > 0.0 && pulses.beta2() >= pulses.alpha2())
    kennedy_x = kennedy_angle(pulses).phi_over_pi();
  t.rows.push_back({std::string("P_Ken_tilde"), kennedy_x,
                    p_kennedy_generalized(pulses).error_probability});
  t.rows.push_back({std::string("P_hom_tilde"), 0.25,
                    p_homodyne_generalized(pulses, tail_tol).error_probability});

  t.metadata["figure"] = "angle_sweep";
  t.metadata["alpha2"] = pulses.alpha2();
  t.metadata["beta2"] = pulses.beta2();
  t.metadata["n_angles"] = n_angles;
  t.metadata["tail_tol"] = tail_tol;
  return t;
}

struct OptimalRatioOptions {
  /// Signal intensity at which both D_err values are evaluated; the series
  /// ratio does not depend on it.
  double alpha2 = 1e-4;
  /// Add a column from the full trace-norm computation.
  bool exact_column = false;
  double tail_tol = kDefaultHelstromTailTol;
  std::uint64_t ceiling = kDefaultPhotonCeiling;
};

/// D_err / D_min with D_min = 2 alpha, from the small-alpha series and,
/// optionally, from the truncated trace norm.
inline Table figure_optimal_ratio(std::span<const double> beta2_grid,
                                  const OptimalRatioOptions& opts = {},
                                  unsigned threads = 0) {
  detail::require_grid(beta2_grid, "beta2");
  if (!(opts.alpha2 > 0.0))
    throw domain_error("optimal-ratio figure needs alpha2 > 0");
  const double d_min = 2.0 * std::sqrt(opts.alpha2);
  Table t;
  t.columns = {"beta2", "D_err_over_D_min"};
  if (opts.exact_column) t.columns.push_back("D_err_exact_over_D_min");
  t.rows.resize(beta2_grid.size());
  // The exact column parallelizes over blocks internally.
  const unsigned outer = opts.exact_column ? 1 : threads;
  parallel_for(
      beta2_grid.size(),
      [&](std::size_t i) {
        const PulsePair p{opts.alpha2, beta2_grid[i]};
        std::vector<Cell> row{beta2_grid[i], d_err_small_alpha(p).value / d_min};
        if (opts.exact_column)
          row.push_back(
              p_err_optimal(p, opts.tail_tol, threads, opts.ceiling).distinguishability /
              d_min);
        t.rows[i] = std::move(row);
      },
      outer);
  t.metadata["figure"] = 5;
  t.metadata["alpha2"] = opts.alpha2;
  if (opts.exact_column) {
    t.metadata["tail_tol"] = opts.tail_tol;
    t.metadata["photon_ceiling"] = opts.ceiling;
  }
  t.metadata["beta2_grid"] = detail::grid_json(beta2_grid);
  return t;
}

}  // namespace phasekit::scan
