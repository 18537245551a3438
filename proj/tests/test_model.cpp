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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "phasekit/model.hpp"

namespace phasekit {
namespace {

TEST(PulsePair, RejectsNegativeOrNonFinite) {
  EXPECT_THROW(PulsePair(-0.1, 1.0), domain_error);
  EXPECT_THROW(PulsePair(0.1, -1.0), domain_error);
  EXPECT_THROW(PulsePair(std::numeric_limits<double>::infinity(), 1.0), domain_error);
  EXPECT_THROW(PulsePair(0.1, std::nan("")), domain_error);
  const PulsePair p{0.25, 4.0};
  EXPECT_DOUBLE_EQ(p.alpha(), 0.5);
  EXPECT_DOUBLE_EQ(p.beta(), 2.0);
  EXPECT_EQ(p.swapped(), PulsePair(4.0, 0.25));
}

TEST(Hypothesis, PhasesAndPriors) {
  EXPECT_EQ(relative_phase(Hypothesis::plus), 0.0);
  EXPECT_EQ(relative_phase(Hypothesis::minus), std::numbers::pi);
  EXPECT_EQ(other(Hypothesis::plus), Hypothesis::minus);
  EXPECT_EQ(kPrior * kHypotheses.size(), 1.0);
}

TEST(Beamsplitter, UnitNormAcrossTheFamily) {
  for (int i = 0; i <= 100; ++i) {
    const auto bs = Beamsplitter::from_angle(kQuarterPi * i / 100.0);
    EXPECT_NEAR(bs.r() * bs.r() + bs.t() * bs.t(), 1.0, 1e-14);
    EXPECT_GE(bs.r(), bs.t());
  }
}

TEST(Beamsplitter, RejectsAnglesOutsideFamily) {
  EXPECT_THROW(Beamsplitter::from_angle(-1e-9), domain_error);
  EXPECT_THROW(Beamsplitter::from_angle(kQuarterPi + 1e-9), domain_error);
  EXPECT_THROW(Beamsplitter::from_phi_over_pi(0.3), domain_error);
  EXPECT_EQ(Beamsplitter::from_phi_over_pi(0.25).r(),
            Beamsplitter::from_phi_over_pi(0.25).t());
}

TEST(OutputMeans, FiftyFiftyExample) {
  const auto m = output_means({0.1, 1.0}, Beamsplitter::fifty_fifty());
  EXPECT_NEAR(m.n1_plus, 0.86622776601683793, 1e-14);
  EXPECT_NEAR(m.n1_minus, 0.23377223398316207, 1e-14);
  EXPECT_NEAR(m.n2_plus, 0.23377223398316207, 1e-14);
  EXPECT_NEAR(m.n2_minus, 0.86622776601683793, 1e-14);
}

TEST(OutputMeans, NoSignalMeansNoInformation) {
  for (double beta2 : {0.0, 0.5, 3.0})
    for (double phi : {0.0, 0.3, kQuarterPi}) {
      const auto m = output_means({0.0, beta2}, Beamsplitter::from_angle(phi));
      EXPECT_EQ(m.n1_plus, m.n1_minus);
      EXPECT_EQ(m.n2_plus, m.n2_minus);
    }
}

TEST(OutputMeans, KennedyAngleDarkensPortTwoExactly) {
  for (auto [a2, b2] : {std::pair{0.1, 1.0}, {0.05, 4.0}, {0.2, 10.0}, {1.0, 1.0}, {0.3, 7.7}}) {
    const PulsePair p{a2, b2};
    EXPECT_EQ(output_means(p, kennedy_angle(p)).n2_plus, 0.0);
    const auto by_angle =
        Beamsplitter::from_angle(std::atan(std::sqrt(a2) / std::sqrt(b2)));
    EXPECT_EQ(output_means(p, by_angle).n2_plus, 0.0);
  }
}

TEST(OutputMeans, ConservesEnergy) {
  for (double a2 : {0.0, 0.01, 0.3, 2.0})
    for (double b2 : {0.0, 1.0, 10.0, 100.0})
      for (int k = 0; k <= 8; ++k) {
        const auto m = output_means({a2, b2}, Beamsplitter::from_angle(kQuarterPi * k / 8));
        EXPECT_NEAR(m.n1_plus + m.n2_plus, a2 + b2, 1e-12 * std::max(1.0, a2 + b2));
        EXPECT_NEAR(m.n1_minus + m.n2_minus, a2 + b2, 1e-12 * std::max(1.0, a2 + b2));
      }
}

TEST(OutputMeans, CommonPhaseDoesNotChangeClickStatistics) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const PulsePair p{0.1, 1.0};
  for (int k = 0; k <= 4; ++k) {
    const auto bs = Beamsplitter::from_angle(kQuarterPi * k / 4);
    const auto m = output_means(p, bs);
    for (int i = 0; i < 50; ++i) {
      const double theta = phase(rng);
      for (auto h : kHypotheses) {
        auto [n1, n2] = port_means_with_common_phase(p, bs, h, theta);
        EXPECT_NEAR(n1, m.port1(h), 1e-13);
        EXPECT_NEAR(n2, m.port2(h), 1e-13);
      }
    }
  }
}

// Exchanging signal and reference at a fixed splitter swaps the ports and
// relabels the hypotheses: n1'(+-) = n2(-+), n2'(+-) = n1(-+).
TEST(OutputMeans, SwappingPulsesSwapsPortsAndHypotheses) {
  for (double a2 : {0.05, 0.1, 0.5, 1.0, 4.0})
    for (double b2 : {0.05, 0.1, 0.5, 1.0, 4.0})
      for (int k = 0; k <= 4; ++k) {
        const auto bs = Beamsplitter::from_angle(kQuarterPi * k / 4);
        const auto m = output_means({a2, b2}, bs);
        const auto s = output_means({b2, a2}, bs);
        EXPECT_NEAR(s.n1_plus, m.n2_minus, 1e-13);
        EXPECT_NEAR(s.n1_minus, m.n2_plus, 1e-13);
        EXPECT_NEAR(s.n2_plus, m.n1_minus, 1e-13);
        EXPECT_NEAR(s.n2_minus, m.n1_plus, 1e-13);
      }
}

TEST(KennedyAngle, Examples) {
  EXPECT_DOUBLE_EQ(kennedy_angle({0.7, 0.7}).phi(), kQuarterPi);
  const auto bs = kennedy_angle({0.1, 1.0});
  EXPECT_NEAR(bs.r() * bs.r(), 1.0 / 1.1, 1e-14);
  EXPECT_NEAR(std::cos(bs.phi()) * std::cos(bs.phi()), 1.0 / 1.1, 1e-14);
  const auto strong = kennedy_angle({0.1, 1e12});
  EXPECT_LT(strong.phi(), 1e-6);
  EXPECT_NEAR(strong.r(), 1.0, 1e-12);
}

TEST(KennedyAngle, WeakReferenceIsOutOfFamily) {
  EXPECT_THROW(kennedy_angle({1.0, 0.5}), out_of_family_error);
  EXPECT_THROW(kennedy_angle({0.0, 0.0}), domain_error);
}

TEST(DiscriminationResult, DistinguishabilityTracksErrorProbability) {
  for (double p : {0.0, 0.1, 0.25, 0.5}) {
    const auto r = DiscriminationResult::make(p, "x");
    EXPECT_NEAR(r.distinguishability, 1.0 - 2.0 * p, 1e-14);
  }
  EXPECT_EQ(DiscriminationResult::make(0.5 + 1e-17, "x").error_probability, 0.5);
  EXPECT_EQ(DiscriminationResult::make(-1e-18, "x").distinguishability, 1.0);
}

}  // namespace
}  // namespace phasekit
