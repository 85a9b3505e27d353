//
// Copyright 2026 The ptrdp Authors
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

#include "ptrdp/estimators.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"

namespace ptrdp {
namespace {

const PrivacyBudget kBudget = *PrivacyBudget::Create(1.0, 0.05);
const Confidence kConf = *Confidence::Create(0.05);
const MedianProfile kNormalProfile = *MedianProfile::Create(
    std::numbers::sqrt2, 1.0 / (std::exp(1.0) * std::sqrt(2 * std::numbers::pi)));

Sample Make(std::vector<double> v) { return *Sample::Create(std::move(v)); }

Sample Ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i) / n;
  return Make(std::move(v));
}

TEST(EmpiricalMedianTest, LeftMedian) {
  EXPECT_EQ(*EmpiricalMedian(Make({5, 1, 4, 2, 3})), 2.0);
  EXPECT_EQ(*EmpiricalMedian(Make({1, 2})), 1.0);
  EXPECT_FALSE(EmpiricalMedian(Make({1})).ok());
}

// Reference values below come from an independent double-precision
// evaluation of the calibration formulas.
TEST(MedianCalibrationTest, EtaReference) {
  absl::StatusOr<double> eta = MedianEta(kNormalProfile, 10000, kBudget, kConf);
  ASSERT_TRUE(eta.ok());
  EXPECT_NEAR(*eta, 0.043035944051281194, 1e-14);
}

TEST(MedianCalibrationTest, BoundReference) {
  const BoundTerms terms = MedianErrorBound(kNormalProfile, 10000,
                                            0.043035944051281194, kBudget,
                                            kConf);
  EXPECT_NEAR(terms.sampling, 0.09253726297763334, 1e-13);
  EXPECT_NEAR(terms.privacy, 0.29659284727100604, 1e-13);
  EXPECT_EQ(terms.bias, 0.0);
  EXPECT_NEAR(terms.total(), 0.3891301102486394, 1e-13);
}

TEST(MedianCalibrationTest, PreconditionThresholds) {
  const std::vector<PreconditionCheck> checks =
      MedianPreconditions(kNormalProfile, 200, kBudget, kConf);
  ASSERT_EQ(checks.size(), 4u);
  EXPECT_NEAR(checks[0].required, 144.5409, 1e-3);
  EXPECT_TRUE(checks[0].satisfied);
  EXPECT_NEAR(checks[1].required, 235.6241, 1e-3);
  EXPECT_FALSE(checks[1].satisfied);
  EXPECT_NEAR(checks[1].margin, 200 - 235.6241, 1e-3);
  EXPECT_FALSE(checks[3].enforced);
}

TEST(MedianCalibrationTest, TooSmallReportsRequiredN) {
  absl::StatusOr<double> eta = MedianEta(kNormalProfile, 200, kBudget, kConf);
  EXPECT_EQ(eta.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(eta.status().message().find("required n >= 236"),
            std::string::npos)
      << eta.status().message();
  EXPECT_TRUE(MedianEta(kNormalProfile, 236, kBudget, kConf).ok());
  EXPECT_FALSE(MedianEta(kNormalProfile, 235, kBudget, kConf).ok());
}

TEST(MedianCalibrationTest, EtaDecreasesInN) {
  double previous = 1e300;
  for (std::size_t n : {300u, 1000u, 10000u, 100000u}) {
    const double eta = *MedianEta(kNormalProfile, n, kBudget, kConf);
    EXPECT_LT(eta, previous);
    previous = eta;
  }
}

TEST(DpMedianTest, ReplyAddsScaledPayload) {
  const Sample s = Ramp(1000);
  const PtrDraws draws{1000.0, 1.0};
  absl::StatusOr<DpEstimateReport> report =
      DpMedian(s, kNormalProfile, kBudget, kConf, draws);
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_TRUE(report->outcome.is_reply());
  const double eta = *MedianEta(kNormalProfile, 1000, kBudget, kConf);
  EXPECT_EQ(report->eta_used, eta);
  EXPECT_NEAR(report->outcome.value(),
              s.OrderStat(500) + eta * std::sqrt(2 * std::log(25.0)), 1e-12);
  EXPECT_NEAR(report->c_used, 14.329498858013952, 1e-12);
  EXPECT_TRUE(report->AllPreconditionsHold());
}

TEST(DpMedianTest, SpreadOutDataGivesNoReply) {
  // Gaps of 1 between points dwarf eta, so the breakdown statistic is 1.
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 0.0);
  absl::StatusOr<DpEstimateReport> report =
      DpMedian(Make(v), kNormalProfile, kBudget, kConf, PtrDraws{0.0, 0.0});
  ASSERT_TRUE(report.ok());
  EXPECT_FALSE(report->outcome.is_reply());
}

TEST(DpMedianTest, PolicyControlsPreconditionFailures) {
  const Sample s = Ramp(100);
  EXPECT_EQ(DpMedian(s, kNormalProfile, kBudget, kConf, PtrDraws{})
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  EstimatorOptions options;
  options.policy = PreconditionPolicy::kReportOnly;
  absl::StatusOr<DpEstimateReport> report =
      DpMedian(s, kNormalProfile, kBudget, kConf, PtrDraws{}, options);
  ASSERT_TRUE(report.ok());
  EXPECT_FALSE(report->AllPreconditionsHold());
}

TEST(DpMedianTest, OddNOnlyFlagsInformationalCheck) {
  absl::StatusOr<DpEstimateReport> report =
      DpMedian(Ramp(1001), kNormalProfile, kBudget, kConf, PtrDraws{});
  ASSERT_TRUE(report.ok());
  EXPECT_TRUE(report->AllPreconditionsHold());
  EXPECT_FALSE(report->precondition_checks[3].satisfied);
}

TEST(BlockMeansTest, UnevenBlocksFrontLoaded) {
  const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7};
  const std::vector<double> means = BlockMeans(v, *MomConfig::Create(3, 7));
  ASSERT_EQ(means.size(), 3u);
  EXPECT_DOUBLE_EQ(means[0], 2.0);  // {1,2,3}
  EXPECT_DOUBLE_EQ(means[1], 4.5);  // {4,5}
  EXPECT_DOUBLE_EQ(means[2], 6.5);  // {6,7}
}

TEST(MomPointEstimateTest, ExtremesAreMeanAndMedian) {
  const Sample s = Make({3, 9, 1, 7, 5, 2});
  EXPECT_DOUBLE_EQ(*MomPointEstimate(s, *MomConfig::Create(1, 6)), 27.0 / 6);
  EXPECT_DOUBLE_EQ(*MomPointEstimate(s, *MomConfig::Create(6, 6)),
                   *EmpiricalMedian(s));
  // K = 2: means 13/3 and 14/3, left median rank 1.
  EXPECT_DOUBLE_EQ(*MomPointEstimate(s, *MomConfig::Create(2, 6)), 13.0 / 3);
}

TEST(MomPointEstimateTest, RejectsMismatchedConfig) {
  EXPECT_FALSE(MomPointEstimate(Make({1, 2, 3}), *MomConfig::Create(2, 4)).ok());
}

TEST(MomBreakdownTest, EqualsMedianBreakdownOfBlockMeans) {
  const Sample s = Ramp(64);
  const MomConfig config = *MomConfig::Create(8, 64);
  const Sample means = Make(BlockMeans(s.values(), config));
  for (double eta : {0.01, 0.1, 0.3, 2.0}) {
    EXPECT_EQ(*MomBreakdownStat(s, config, eta),
              BreakdownStatMedian(means, eta)->k_star);
  }
}

TEST(ShuffleTest, PermutationIsSeededAndPreservesValues) {
  const Sample s = Ramp(50);
  const Sample a = ShuffledSample(s, 3);
  const Sample b = ShuffledSample(s, 3);
  const Sample c = ShuffledSample(s, 4);
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(),
                         b.values().begin()));
  EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(),
                          c.values().begin()));
  EXPECT_TRUE(std::equal(a.sorted().begin(), a.sorted().end(),
                         s.sorted().begin()));
}

TEST(MomCalibrationTest, EtaReference) {
  const MomentProfile profile = *MomentProfile::Create(0, 1, 1.17);
  EXPECT_NEAR(*MomEta(profile, 65536, 512, kBudget, kConf), 0.25, 1e-15);
  EXPECT_NEAR(*MomEta(profile, 65536, 512, kBudget, kConf, 8.0),
              8.0 / std::sqrt(128.0), 1e-15);
}

TEST(MomCalibrationTest, BlockCountThresholds) {
  const MomentProfile profile = *MomentProfile::Create(0, 1, 1);
  const std::vector<PreconditionCheck> checks =
      MomPreconditions(profile, 65536, 100, kBudget, kConf);
  EXPECT_NEAR(checks[0].required, 114.636, 1e-3);
  EXPECT_NEAR(checks[1].required, 140.2249, 1e-3);
  EXPECT_EQ(MomEta(profile, 65536, 140, kBudget, kConf).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_TRUE(MomEta(profile, 65536, 141, kBudget, kConf).ok());
}

TEST(MomCalibrationTest, BoundReference) {
  const MomentProfile profile = *MomentProfile::Create(0, 1, 1.17);
  const BoundTerms terms =
      MomErrorBound(profile, 65536, 512, 0.25, kBudget, kConf);
  EXPECT_NEAR(terms.sampling, 0.01734617797618123, 1e-14);
  EXPECT_NEAR(terms.total(), 1.758176000279944, 1e-12);
}

TEST(MomCalibrationTest, BoundScalesWithSigma) {
  const MomentProfile one = *MomentProfile::Create(0, 1, 1.3);
  const MomentProfile two = *MomentProfile::Create(0, 2, 2.6);
  const double eta1 = *MomEta(one, 65536, 512, kBudget, kConf);
  const double eta2 = *MomEta(two, 65536, 512, kBudget, kConf);
  EXPECT_NEAR(eta2, 2 * eta1, 1e-15);
  EXPECT_NEAR(MomErrorBound(two, 65536, 512, eta2, kBudget, kConf).total(),
              2 * MomErrorBound(one, 65536, 512, eta1, kBudget, kConf).total(),
              1e-12);
}

TEST(DpMomTest, ReportsFailedSampleSizeCheck) {
  const MomentProfile profile = *MomentProfile::Create(0, 1, 2);
  absl::StatusOr<DpEstimateReport> report =
      DpMom(Ramp(4096), profile, 256, kBudget, kConf, PtrDraws{});
  EXPECT_EQ(report.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(report.status().message().find("33*(rho/sigma)^6*K"),
            std::string::npos);
}

TEST(DpMomTest, ReplyOnWellConcentratedData) {
  const MomentProfile profile = *MomentProfile::Create(0, 1, 1);
  // Constant data: all block means equal, breakdown = K/2 = 128.
  const Sample s = Make(std::vector<double>(65536, 0.5));
  absl::StatusOr<DpEstimateReport> report =
      DpMom(s, profile, 256, kBudget, kConf, PtrDraws{0.0, 0.0});
  ASSERT_TRUE(report.ok()) << report.status();
  ASSERT_TRUE(report->outcome.is_reply());
  EXPECT_DOUBLE_EQ(report->outcome.value(), 0.5);
}

TEST(MomDensityTest, EtaReference) {
  const MomentProfile profile = *MomentProfile::Create(0, 1, 1);
  EXPECT_NEAR(*MomDensityEta(profile, 65536, 256, kBudget, kConf),
              0.43030517308228333, 1e-13);
}

TEST(MomDensityTest, NonIntegerBlockSizeRejected) {
  const MomentProfile profile = *MomentProfile::Create(0, 1, 1);
  absl::StatusOr<double> eta =
      MomDensityEta(profile, 65537, 256, kBudget, kConf);
  EXPECT_EQ(eta.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(eta.status().message().find("drop"), std::string::npos);
}

TEST(MomDensityTest, DensityAssertionIsEnforced) {
  const MomentProfile profile = *MomentProfile::Create(0, 1, 1);
  const Sample s = Make(std::vector<double>(65536, 0.5));
  EstimatorOptions options;
  options.data_has_density = false;
  EXPECT_EQ(DpMomDensity(s, profile, 256, kBudget, kConf, PtrDraws{}, options)
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_TRUE(DpMomDensity(s, profile, 256, kBudget, kConf, PtrDraws{}).ok());
}

TEST(MomDensityTest, BoundIncludesPrivacyTermAtEta0) {
  const MomentProfile profile = *MomentProfile::Create(0, 1, 1);
  const BoundTerms terms =
      MomDensityErrorBound(profile, 65536, 256, kBudget, kConf);
  const double eta0 = 0.43030517308228333;
  EXPECT_NEAR(terms.privacy,
              2 * eta0 * std::sqrt(std::log(40.0) * std::log(25.0)), 1e-12);
  EXPECT_NEAR(terms.sampling, 3 * std::sqrt(std::log(80.0) / (2 * 65536.0)),
              1e-15);
  EXPECT_NEAR(terms.bias, 1.43 * 256 / 65536.0, 1e-15);
}

}  // namespace
}  // namespace ptrdp
