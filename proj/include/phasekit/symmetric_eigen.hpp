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
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "phasekit/errors.hpp"

namespace phasekit::numerics {

/// Dense real symmetric matrix. set() writes both triangles, so
/// (i, j) == (j, i) holds exactly.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {
    if (dim == 0) throw domain_error("SymmetricMatrix dimension must be >= 1");
  }

  std::size_t dim() const { return dim_; }

  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * dim_ + j];
  }

  void set(std::size_t i, std::size_t j, double value) {
    a_[i * dim_ + j] = value;
    a_[j * dim_ + i] = value;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
  }

  /// Row-major storage, dim() * dim() entries.
  std::span<const double> data() const { return a_; }

 private:
  std::size_t dim_;
  std::vector<double> a_;
};

struct Spectrum {
  /// Ascending.
  std::vector<double> eigenvalues;
  /// Off-diagonal row norm left in the rotated matrix, per eigenvalue; a
  /// Gershgorin bound on how far the eigenvalue can be from the exact one.
  std::vector<double> residuals;
  int sweeps = 0;
  double off_norm = 0.0;

  double sum() const {
    return std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
  }
  double trace_norm() const {
    double s = 0.0;
    for (double v : eigenvalues) s += std::abs(v);
    return s;
  }
};

namespace detail {
inline double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
  return std::sqrt(2.0 * s);
}
}  // namespace detail

/// Cyclic Jacobi eigenvalue iteration. Stops once the off-diagonal Frobenius
/// norm drops below rel_tol * ||A||_F; throws convergence_error after
/// max_sweeps sweeps.
inline Spectrum eigenvalues_symmetric(const SymmetricMatrix& m,
                                      int max_sweeps = 100,
                                      double rel_tol = 1e-12) {
  const std::size_t n = m.dim();
  for (double v : m.data())
    if (!std::isfinite(v))
      throw domain_error("eigenvalues_symmetric: non-finite matrix entry");

  std::vector<double> a(m.data().begin(), m.data().end());
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  const double target = rel_tol * m.frobenius_norm();
  Spectrum out;
  double off = detail::off_diagonal_norm(a, n);
  while (off > target) {
    if (out.sweeps == max_sweeps)
      throw convergence_error(
          "Jacobi iteration did not converge in " + std::to_string(max_sweeps) +
              " sweeps (off-diagonal norm " + std::to_string(off) + ")",
          off);
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double g = at(r, p);
          const double h = at(r, q);
          const double rp = g - s * (h + g * tau);
          const double rq = h + s * (g - h * tau);
          at(r, p) = at(p, r) = rp;
          at(r, q) = at(q, r) = rq;
        }
      }
    }
    off = detail::off_diagonal_norm(a, n);
  }
  out.off_norm = off;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return at(i, i) < at(j, j); });
  out.eigenvalues.reserve(n);
  out.residuals.reserve(n);
  for (std::size_t i : order) {
    out.eigenvalues.push_back(at(i, i));
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) r += at(i, j) * at(i, j);
    out.residuals.push_back(std::sqrt(r));
  }
  return out;
}

}  // namespace phasekit::numerics
