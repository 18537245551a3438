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
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "phasekit/errors.hpp"

namespace phasekit::numerics {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Compensated (Neumaier) summation.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  NeumaierSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// ln(n!) for n <= max_n, accumulated in long double. Lookups past max_n fall
/// back to std::lgamma.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::size_t max_n) : table_(max_n + 1) {
    long double acc = 0.0L;
    table_[0] = 0.0;
    for (std::size_t n = 1; n <= max_n; ++n) {
      acc += std::log(static_cast<long double>(n));
      table_[n] = static_cast<double>(acc);
    }
  }

  std::size_t max_n() const { return table_.size() - 1; }

  double operator()(std::uint64_t n) const {
    if (n >= table_.size()) return std::lgamma(static_cast<double>(n) + 1.0);
    return table_.data()[n];
  }

  /// Shared process-wide table, built on first use and read-only afterwards.
  static const LogFactorialTable& shared() {
    static const LogFactorialTable table(std::size_t{1} << 17);
    return table;
  }

 private:
  std::vector<double> table_;
};

inline double log_factorial(std::uint64_t n) {
  return LogFactorialTable::shared()(n);
}

namespace detail {
inline void require_mean(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw domain_error("Poisson mean must be finite and non-negative, got " +
                       std::to_string(mean));
}
inline void require_tail(double tail_mass) {
  if (!(tail_mass > 0.0 && tail_mass < 1.0))
    throw domain_error("tail mass must lie in (0, 1), got " +
                       std::to_string(tail_mass));
}
}  // namespace detail

/// ln[e^-mean mean^n / n!]. A zero mean is a point mass at n = 0; the log of
/// zero probability is -infinity.
inline double log_poisson_pmf(std::uint64_t n, double mean) {
  detail::require_mean(mean);
  if (mean == 0.0) return n == 0 ? 0.0 : kNegInf;
  if (n == 0) return -mean;
  return static_cast<double>(n) * std::log(mean) - mean - log_factorial(n);
}

inline double poisson_pmf(std::uint64_t n, double mean) {
  return std::exp(log_poisson_pmf(n, mean));
}

/// Count range [lo, hi] carrying all but lower_mass + upper_mass of a Poisson
/// distribution; lower_mass = P(X < lo), upper_mass = P(X > hi).
struct PoissonWindow {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  double lower_mass = 0.0;
  double upper_mass = 0.0;

  double neglected() const { return lower_mass + upper_mass; }
};

namespace detail {

// Steps of ~sqrt(mean) until the pmf is e^-60 below the target tail. Past the
// mode the pmf decays at least geometrically, so the mass beyond is negligible.
inline std::uint64_t upper_scan_start(double mean, double log_tail) {
  auto step = static_cast<std::uint64_t>(std::max(1.0, std::sqrt(mean)));
  auto n = static_cast<std::uint64_t>(std::ceil(mean)) + 1;
  while (log_poisson_pmf(n, mean) > log_tail - 60.0) n += step;
  return n;
}

inline std::uint64_t lower_scan_start(double mean, double log_tail) {
  auto step = static_cast<std::uint64_t>(std::max(1.0, std::sqrt(mean)));
  auto n = static_cast<std::uint64_t>(std::floor(mean));
  while (n > 0 && log_poisson_pmf(n, mean) > log_tail - 60.0)
    n = n > step ? n - step : 0;
  return n;
}

// Smallest N with P(X > N) < tail_mass; also returns P(X > N).
inline std::pair<std::uint64_t, double> upper_cutoff(double mean,
                                                     double tail_mass) {
  if (mean == 0.0) return {0, 0.0};
  std::uint64_t n = upper_scan_start(mean, std::log(tail_mass));
  // beyond = P(X > n) as the loop walks n downward.
  NeumaierSum beyond;
  while (n > 0) {
    double below = beyond.value();
    beyond += poisson_pmf(n, mean);
    if (beyond.value() >= tail_mass) return {n, below};
    --n;
  }
  return {0, beyond.value()};
}

// Largest L with P(X < L) < tail_mass; also returns P(X < L).
inline std::pair<std::uint64_t, double> lower_cutoff(double mean,
                                                     double tail_mass) {
  if (mean == 0.0) return {0, 0.0};
  std::uint64_t n = lower_scan_start(mean, std::log(tail_mass));
  NeumaierSum below;
  for (;; ++n) {
    double mass = below.value();
    below += poisson_pmf(n, mean);
    if (below.value() >= tail_mass) return {n, mass};
  }
}

}  // namespace detail

/// Smallest N such that the Poisson mass above N is below tail_mass.
inline std::uint64_t poisson_tail_cutoff(double mean, double tail_mass) {
  detail::require_mean(mean);
  detail::require_tail(tail_mass);
  return detail::upper_cutoff(mean, tail_mass).first;
}

/// Two-sided window; each side leaves out less than tail_mass / 2.
inline PoissonWindow poisson_window(double mean, double tail_mass) {
  detail::require_mean(mean);
  detail::require_tail(tail_mass);
  auto [hi, upper] = detail::upper_cutoff(mean, 0.5 * tail_mass);
  auto [lo, lower] = detail::lower_cutoff(mean, 0.5 * tail_mass);
  return {lo, hi, lower, upper};
}

/// P(X > n) for X ~ Poisson(mean), summed directly.
inline double poisson_upper_tail(double mean, std::uint64_t n) {
  detail::require_mean(mean);
  if (mean == 0.0) return 0.0;
  NeumaierSum tail;
  for (std::uint64_t k = n + 1;; ++k) {
    const double term = poisson_pmf(k, mean);
    tail += term;
    if (static_cast<double>(k) > mean && term <= 1e-17 * tail.value()) break;
  }
  return tail.value();
}

/// Q(x) = P(Z > x) for a standard normal Z.
inline double gaussian_upper_tail(double x) {
  if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
  return 0.5 * std::erfc(x * (1.0 / std::numbers::sqrt2));
}

}  // namespace phasekit::numerics
