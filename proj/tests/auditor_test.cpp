//
// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpaudit/auditor.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "test_support.hpp"

namespace dpaudit {
namespace {

TEST(RatioBoundExponentTest, Values) {
  LatentVector v{0.2, -0.4};
  EXPECT_EQ(RatioBoundExponent(v, v, 2.0, 1.0), 0.0);
  for (double eps : {0.1, 1.0, 5.0}) {
    auto [x, y] = CounterexamplePair(1.0);
    EXPECT_NEAR(RatioBoundExponent(x, y, 2.0, eps), 4.0 / 3.0 * eps, 1e-12);
    for (std::size_t n : {1, 2, 7, 64}) {
      auto [a, b] = ExtremalPair(1.0, n);
      EXPECT_NEAR(RatioBoundExponent(a, b, TrueSensitivityL2Clip(1.0, n), eps),
                  eps, 1e-12);
    }
  }
  EXPECT_THROW(RatioBoundExponent(LatentVector{1.0}, v, 2.0, 1.0),
               std::invalid_argument);
}

TEST(CheckDpBoundTest, CounterexampleViolatesClaimedAdept) {
  for (double c : {0.5, 1.0, 3.0}) {
    auto [x, y] = CounterexamplePair(c);
    AuditFinding f = CheckDpBound(x, y, MechanismSpec::ClaimedAdept(c, 1.0));
    EXPECT_TRUE(f.violated);
    EXPECT_NEAR(f.l1_distance_after_clip, 8.0 * c / 3.0, 1e-12);
    EXPECT_NEAR(f.ratio_exponent_factor, 4.0 / 3.0, 1e-12);
    EXPECT_NE(f.verdict_note.find("NOT epsilon-DP"), std::string::npos);
  }
}

TEST(CheckDpBoundTest, CounterexampleCompliantUnderRescaled) {
  auto [x, y] = CounterexamplePair(1.0);
  AuditFinding f =
      CheckDpBound(x, y, MechanismSpec::CorrectedRescaled(1.0, 1.0, 2));
  // 8/3 <= 2 sqrt 2.
  EXPECT_FALSE(f.violated);
  EXPECT_NEAR(f.ratio_exponent_factor, (8.0 / 3.0) / (2.0 * std::sqrt(2.0)),
              1e-12);
}

TEST(CheckDpBoundTest, IdenticalInputsNeverViolate) {
  testing::VectorGen gen(3);
  for (int trial = 0; trial < 300; ++trial) {
    LatentVector x = gen.Vector(gen.Dim(1, 20));
    for (ScaleMode mode :
         {ScaleMode::kClaimedAdept, ScaleMode::kCorrectedRescaled,
          ScaleMode::kCorrectedL1Clip}) {
      AuditFinding f =
          CheckDpBound(x, x, MechanismSpec::ForMode(mode, 1.0, 1.0, x.dim()));
      EXPECT_FALSE(f.violated);
      EXPECT_EQ(f.ratio_exponent_factor, 0.0);
    }
  }
}

TEST(CheckDpBoundTest, ExtremalPairAtTrueSensitivityIsCompliant) {
  for (std::size_t n : {1, 2, 3, 64, 1024}) {
    auto [x, y] = ExtremalPair(1.0, n);
    EXPECT_FALSE(
        CheckDpBound(x, y, MechanismSpec::CorrectedRescaled(1.0, 1.0, n))
            .violated);
    EXPECT_EQ(CheckDpBound(x, y, MechanismSpec::ClaimedAdept(1.0, 1.0))
                  .violated,
              n >= 2);
  }
}

TEST(CheckDpBoundTest, DimensionErrors) {
  EXPECT_THROW(CheckDpBound(LatentVector{1.0}, LatentVector{1.0, 2.0},
                            MechanismSpec::ClaimedAdept(1.0, 1.0)),
               std::invalid_argument);
  EXPECT_THROW(CheckDpBound(LatentVector{1.0, 0.0}, LatentVector{1.0, 2.0},
                            MechanismSpec::CorrectedRescaled(1.0, 1.0, 3)),
               std::invalid_argument);
}

TEST(CheckDpBoundPropertyTest, SymmetricAndCorrectedModesNeverViolate) {
  testing::VectorGen gen(2718);
  for (std::size_t n : {2, 3, 10, 64}) {
    for (int trial = 0; trial < 10000; ++trial) {
      LatentVector x = gen.Vector(n), y = gen.Vector(n);
      double c = gen.Real(0.1, 5.0), eps = gen.Real(0.05, 5.0);
      for (ScaleMode mode :
           {ScaleMode::kCorrectedRescaled, ScaleMode::kCorrectedL1Clip}) {
        auto spec = MechanismSpec::ForMode(mode, c, eps, n);
        AuditFinding f = CheckDpBound(x, y, spec);
        ASSERT_FALSE(f.violated) << "n=" << n << " trial=" << trial;
        EXPECT_GE(f.ratio_exponent_factor, 0.0);
      }
      auto adept = MechanismSpec::ClaimedAdept(c, eps);
      EXPECT_EQ(CheckDpBound(x, y, adept).violated,
                CheckDpBound(y, x, adept).violated);
    }
  }
}

TEST(AuditPairsTest, BuildsPerPairMechanisms) {
  std::vector<VectorPair> pairs = {CounterexamplePair(1.0),
                                   ExtremalPair(1.0, 5),
                                   {LatentVector{0.1}, LatentVector{-0.1}}};
  auto adept = AuditPairs(pairs, ScaleMode::kClaimedAdept, 1.0, 1.0);
  ASSERT_EQ(adept.size(), 3u);
  EXPECT_TRUE(adept[0].violated);
  EXPECT_TRUE(adept[1].violated);
  EXPECT_FALSE(adept[2].violated);
  for (const auto& f :
       AuditPairs(pairs, ScaleMode::kCorrectedRescaled, 1.0, 1.0)) {
    EXPECT_FALSE(f.violated);
  }
}

TEST(NumericRatioProbeTest, IdenticalInputsGiveZero) {
  LatentVector x{0.4, -1.2, 3.0};
  EXPECT_EQ(NumericRatioProbe(x, x, MechanismSpec::ClaimedAdept(1.0, 1.0), 50,
                              1),
            0.0);
}

TEST(NumericRatioProbeTest, FarFieldRealizesFourThirds) {
  auto [x, y] = CounterexamplePair(1.0);
  auto spec = MechanismSpec::ClaimedAdept(1.0, 1.0);
  double probe = NumericRatioProbe(x, y, spec, 100, 17);
  EXPECT_NEAR(probe, 4.0 / 3.0, 1e-6);
  double without_far = NumericRatioProbe(x, y, spec, 100, 17, false);
  EXPECT_LE(without_far, 4.0 / 3.0 + 1e-6);
}

TEST(NumericRatioProbeTest, AgreesWithAnalyticExponent) {
  testing::VectorGen gen(161);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = gen.Dim(1, 32);
    LatentVector x = gen.Vector(n), y = gen.Vector(n);
    ScaleMode mode = static_cast<ScaleMode>(trial % 3);
    auto spec =
        MechanismSpec::ForMode(mode, gen.Real(0.1, 4.0), gen.Real(0.1, 4.0), n);
    double analytic =
        RatioBoundExponent(Clip(x, spec.clip), Clip(y, spec.clip),
                           spec.claimed_sensitivity, spec.epsilon);
    double sampled = NumericRatioProbe(x, y, spec, 20, trial, false);
    double full = NumericRatioProbe(x, y, spec, 20, trial, true);
    EXPECT_LE(sampled, analytic + 1e-6);
    EXPECT_NEAR(full, analytic, 1e-6);
    if (mode != ScaleMode::kClaimedAdept) {
      EXPECT_LE(full, spec.epsilon + 1e-6);
    }
  }
}

}  // namespace
}  // namespace dpaudit
