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
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "phasekit/errors.hpp"
#include "phasekit/model.hpp"
#include "phasekit/numerics.hpp"
#include "phasekit/parallel.hpp"
#include "phasekit/receivers.hpp"

namespace phasekit {

/// Two-sided 99% normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

/// Trials per independent RNG stream.
inline constexpr std::uint64_t kTrialsPerBlock = 1 << 16;

struct TrialConfig {
  PulsePair pulses{0.0, 0.0};
  Beamsplitter splitter = Beamsplitter::fifty_fifty();
  DecisionRule rule = DecisionRule::ml_joint;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  /// Draw a uniform common optical phase per trial (the phase-averaged
  /// mixture) instead of the fixed-phase pair.
  bool random_common_phase = false;
};

struct EstimateResult {
  double rate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  bool contains(double p) const { return ci_low <= p && p <= ci_high; }
};

/// Counts to rate, standard error sqrt(rate (1 - rate) / trials) and the
/// normal-approximation 99% interval clipped to [0, 1].
inline EstimateResult make_estimate(std::uint64_t errors, std::uint64_t trials,
                                    std::uint64_t seed) {
  EstimateResult e;
  e.errors = errors;
  e.trials = trials;
  e.seed = seed;
  e.rate = static_cast<double>(errors) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.rate * (1.0 - e.rate) / static_cast<double>(trials));
  e.ci_low = std::max(0.0, e.rate - kZ99 * e.std_error);
  e.ci_high = std::min(1.0, e.rate + kZ99 * e.std_error);
  return e;
}

// ---------------------------------------------------------------------------
// Random numbers.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Engine for stream `block` of run `seed`: mt19937_64 seeded with a
/// SplitMix64 hash of both, so streams are reproducible and uncorrelated.
inline std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~block)));
}

/// Uniform on [0, 1) from the top 53 bits.
template <class Engine>
double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

inline constexpr double kInversionMeanLimit = 30.0;

/// Poisson draw. Below kInversionMeanLimit: sequential CDF inversion with one
/// uniform. Above: std::poisson_distribution.
template <class Engine>
std::uint64_t sample_poisson(double mean, Engine& engine) {
  numerics::detail::require_mean(mean);
  if (mean == 0.0) return 0;
  if (mean >= kInversionMeanLimit)
    return std::poisson_distribution<std::uint64_t>(mean)(engine);
  const double u = uniform01(engine);
  std::uint64_t k = 0;
  double pk = std::exp(-mean);
  double cdf = pk;
  while (u > cdf) {
    ++k;
    pk *= mean / static_cast<double>(k);
    const double next = cdf + pk;
    if (next == cdf) break;  // u sits in the rounding gap below 1
    cdf = next;
  }
  return k;
}

// ---------------------------------------------------------------------------

/// Throws config_error unless the rule matches the splitter angle.
inline void validate(const TrialConfig& cfg) {
  if (cfg.trials == 0) throw config_error("trial count must be at least 1");
  switch (cfg.rule) {
    case DecisionRule::ml_joint:
      break;
    case DecisionRule::homodyne_compare:
      if (std::abs(cfg.splitter.phi() - kQuarterPi) > 1e-12)
        throw config_error("homodyne rule requires the 50/50 splitter (phi = pi/4)");
      break;
    case DecisionRule::kennedy_single_port: {
      double kennedy = 0.0;
      try {
        kennedy = kennedy_angle(cfg.pulses).phi();
      } catch (const domain_error& e) {
        throw config_error(std::string("kennedy rule: ") + e.what());
      }
      if (std::abs(cfg.splitter.phi() - kennedy) > 1e-9)
        throw config_error("kennedy rule requires the Kennedy angle phi = atan(alpha/beta)");
      break;
    }
  }
}

namespace detail {

inline std::uint64_t run_block(const TrialConfig& cfg, const OutputMeans& means,
                               std::uint64_t block, std::uint64_t count) {
  auto engine = block_engine(cfg.seed, block);
  std::uint64_t errors = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const Hypothesis truth =
        (engine() >> 63) != 0 ? Hypothesis::minus : Hypothesis::plus;
    double mean1 = means.port1(truth);
    double mean2 = means.port2(truth);
    if (cfg.random_common_phase) {
      const double phase = 2.0 * std::numbers::pi * uniform01(engine);
      std::tie(mean1, mean2) =
          port_means_with_common_phase(cfg.pulses, cfg.splitter, truth, phase);
    }
    const ClickOutcome c{sample_poisson(mean1, engine),
                         sample_poisson(mean2, engine)};
    Verdict v = decide(cfg.rule, means, c);
    // The coin is only drawn on ties; whether a tie occurs is itself a
    // deterministic function of the counts.
    if (v == Verdict::tie)
      v = (engine() >> 63) != 0 ? Verdict::minus : Verdict::plus;
    const Hypothesis guess = v == Verdict::plus ? Hypothesis::plus : Hypothesis::minus;
    if (guess != truth) ++errors;
  }
  return errors;
}

}  // namespace detail

/// Simulates cfg.trials detection rounds and tallies wrong guesses. Trials are
/// split into blocks of kTrialsPerBlock, each with its own stream; block
/// counts are summed, so the result is the same for any thread count.
inline EstimateResult run_trials(const TrialConfig& cfg, unsigned threads = 0) {
  validate(cfg);
  const OutputMeans means = output_means(cfg.pulses, cfg.splitter);
  const std::uint64_t blocks = (cfg.trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<std::uint64_t> errors(blocks, 0);
  parallel_for(
      blocks,
      [&](std::size_t b) {
        const std::uint64_t first = b * kTrialsPerBlock;
        const std::uint64_t count = std::min(kTrialsPerBlock, cfg.trials - first);
        errors[b] = detail::run_block(cfg, means, b, count);
      },
      threads);
  std::uint64_t total = 0;
  for (auto e : errors) total += e;
  return make_estimate(total, cfg.trials, cfg.seed);
}

/// Exact error probability of cfg's rule, for comparison with run_trials.
inline DiscriminationResult analytic_error(const TrialConfig& cfg,
                                           double tail_tol = kDefaultTailTol) {
  switch (cfg.rule) {
    case DecisionRule::ml_joint:
      return p_beamsplitter_ml(cfg.pulses, cfg.splitter, tail_tol);
    case DecisionRule::kennedy_single_port:
      return p_kennedy_generalized(cfg.pulses);
    case DecisionRule::homodyne_compare:
      return p_homodyne_generalized(cfg.pulses, tail_tol);
  }
  return {};
}

}  // namespace phasekit
