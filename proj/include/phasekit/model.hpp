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
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "phasekit/errors.hpp"

namespace phasekit {

/// Signal and reference intensities as mean photon numbers (alpha^2, beta^2).
/// Amplitudes are the non-negative square roots.
class PulsePair {
 public:
  PulsePair(double alpha2, double beta2) : alpha2_(alpha2), beta2_(beta2) {
    if (!(alpha2 >= 0.0) || !std::isfinite(alpha2) || !(beta2 >= 0.0) ||
        !std::isfinite(beta2))
      throw domain_error("photon numbers must be finite and non-negative (alpha2=" +
                         std::to_string(alpha2) +
                         ", beta2=" + std::to_string(beta2) + ")");
  }

  double alpha2() const { return alpha2_; }
  double beta2() const { return beta2_; }
  double alpha() const { return std::sqrt(alpha2_); }
  double beta() const { return std::sqrt(beta2_); }
  double total() const { return alpha2_ + beta2_; }

  /// Signal and reference exchanged.
  PulsePair swapped() const { return {beta2_, alpha2_}; }

  friend bool operator==(const PulsePair&, const PulsePair&) = default;

 private:
  double alpha2_;
  double beta2_;
};

/// Relative phase of signal to reference: PLUS is 0, MINUS is pi. Both are a
/// priori equally likely.
enum class Hypothesis : std::uint8_t { plus, minus };

inline constexpr std::array<Hypothesis, 2> kHypotheses{Hypothesis::plus,
                                                       Hypothesis::minus};
inline constexpr double kPrior = 0.5;

inline constexpr double relative_phase(Hypothesis h) {
  return h == Hypothesis::plus ? 0.0 : std::numbers::pi;
}

inline constexpr Hypothesis other(Hypothesis h) {
  return h == Hypothesis::plus ? Hypothesis::minus : Hypothesis::plus;
}

inline std::string to_string(Hypothesis h) {
  return h == Hypothesis::plus ? "PLUS" : "MINUS";
}

inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

/// Lossless splitter with reflection r = cos(phi) and transmission
/// t = sin(phi), 0 <= phi <= pi/4.
class Beamsplitter {
 public:
  static Beamsplitter from_angle(double phi) {
    // atan/atan2 round-trips may land an ulp past pi/4.
    constexpr double slack = 4.0 * std::numeric_limits<double>::epsilon();
    if (!(phi >= 0.0 && phi <= kQuarterPi + slack))
      throw domain_error("beamsplitter angle must lie in [0, pi/4], got " +
                         std::to_string(phi));
    phi = std::min(phi, kQuarterPi);
    if (phi == kQuarterPi) return fifty_fifty();
    return {phi, std::cos(phi), std::sin(phi)};
  }

  static Beamsplitter from_phi_over_pi(double x) {
    return from_angle(x * std::numbers::pi);
  }

  /// r = t = 1/sqrt(2) exactly equal, so the two ports are mirror images.
  static Beamsplitter fifty_fifty() {
    return {kQuarterPi, std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
  }

  double phi() const { return phi_; }
  double phi_over_pi() const { return phi_ / std::numbers::pi; }
  double r() const { return r_; }
  double t() const { return t_; }

 private:
  friend Beamsplitter kennedy_angle(const PulsePair& p);

  Beamsplitter(double phi, double r, double t) : phi_(phi), r_(r), t_(t) {}

  double phi_;
  double r_;
  double t_;
};

/// Mean photon counts in output ports 1 and 2 under each hypothesis.
struct OutputMeans {
  double n1_plus = 0.0;
  double n1_minus = 0.0;
  double n2_plus = 0.0;
  double n2_minus = 0.0;

  double port1(Hypothesis h) const {
    return h == Hypothesis::plus ? n1_plus : n1_minus;
  }
  double port2(Hypothesis h) const {
    return h == Hypothesis::plus ? n2_plus : n2_minus;
  }
};

namespace detail {
// x - y, with differences at the rounding level of the operands taken as an
// exact cancellation.
inline double cancelling_difference(double x, double y) {
  double d = x - y;
  if (std::abs(d) <=
      4.0 * std::numeric_limits<double>::epsilon() * (std::abs(x) + std::abs(y)))
    return 0.0;
  return d;
}
}  // namespace detail

/// Port 1 carries r*beta +- t*alpha, port 2 carries t*beta -+ r*alpha. Total
/// intensity alpha^2 + beta^2 is conserved under both hypotheses.
inline OutputMeans output_means(const PulsePair& p, const Beamsplitter& bs) {
  const double a = p.alpha(), b = p.beta(), r = bs.r(), t = bs.t();
  const double p1_plus = r * b + t * a;
  const double p1_minus = detail::cancelling_difference(r * b, t * a);
  const double p2_plus = detail::cancelling_difference(t * b, r * a);
  const double p2_minus = t * b + r * a;
  return {p1_plus * p1_plus, p1_minus * p1_minus, p2_plus * p2_plus,
          p2_minus * p2_minus};
}

/// Port means for one hypothesis when both pulses carry a common optical
/// phase. Only the relative phase enters |.|^2, so the result equals
/// output_means for every common_phase; the phase-averaged mixture therefore
/// has the same click statistics as the fixed-phase pair.
inline std::pair<double, double> port_means_with_common_phase(
    const PulsePair& p, const Beamsplitter& bs, Hypothesis h,
    double common_phase) {
  const std::complex<double> ref = std::polar(p.beta(), common_phase);
  const std::complex<double> sig =
      std::polar(p.alpha(), common_phase + relative_phase(h));
  const std::complex<double> out1 = bs.r() * ref + bs.t() * sig;
  const std::complex<double> out2 = bs.t() * ref - bs.r() * sig;
  return {std::norm(out1), std::norm(out2)};
}

/// Angle at which port 2 is dark under PLUS: tan(phi) = alpha / beta, so
/// r^2 = beta^2 / (alpha^2 + beta^2). A reference weaker than the signal
/// puts the angle above pi/4 and is rejected.
inline Beamsplitter kennedy_angle(const PulsePair& p) {
  const double total = p.total();
  if (!(total > 0.0))
    throw domain_error("Kennedy angle undefined without light (alpha2 + beta2 = 0)");
  if (p.beta2() < p.alpha2())
    throw out_of_family_error(
        "Kennedy angle exceeds pi/4 when beta2 < alpha2; swap signal and "
        "reference");
  const double r = std::sqrt(p.beta2() / total);
  const double t = std::sqrt(p.alpha2() / total);
  const double phi = std::min(std::atan2(p.alpha(), p.beta()), kQuarterPi);
  return {phi, r, t};
}

/// A detection event: n counts at detector 1, m at detector 2.
struct ClickOutcome {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
};

/// Error probability P in [0, 1/2] and distinguishability D = 1 - 2P, with the
/// numerical bookkeeping that produced them.
struct DiscriminationResult {
  double error_probability = 0.5;
  double distinguishability = 0.0;
  std::string method;
  /// Tail tolerance used for truncated sums; 0 for closed forms.
  double tail_tol = 0.0;
  /// Bound on |P - P_untruncated| from the truncation.
  double truncation_bound = 0.0;
  /// Probability mass left outside the truncated outcome space.
  double neglected_mass = 0.0;
  /// Largest photon number kept (N_max, window top, or series terms).
  std::uint64_t cutoff = 0;
  bool degenerate = false;

  static DiscriminationResult make(double p, std::string method) {
    DiscriminationResult r;
    r.error_probability = std::clamp(p, 0.0, 0.5);
    r.distinguishability = 1.0 - 2.0 * r.error_probability;
    r.method = std::move(method);
    return r;
  }
};

}  // namespace phasekit
