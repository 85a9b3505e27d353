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

#include "ptrdp/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"

namespace ptrdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Sample Make(std::vector<double> v) { return *Sample::Create(std::move(v)); }

// Brute-force smooth sensitivity: max over k of exp(-beta k) times the
// largest local sensitivity over all datasets within distance k, where a
// dataset at distance k is obtained by pushing k points to a domain end.
// Valid for the left median because the extreme local sensitivity at
// distance k is attained with the changed points at the domain ends.
double BruteSmooth(const std::vector<double>& x, double lower, double upper,
                   double beta) {
  const std::size_t n = x.size();
  double best = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    double widest = 0;
    // Choose how many of the k changes go to the lower end.
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t low = 0; low <= k; ++low) {
      // Remove k points in every contiguous way from the sorted data: the
      // worst configuration removes a contiguous run around the median.
      for (std::size_t start = 0; start + k <= n; ++start) {
        std::vector<double> y;
        for (std::size_t i = 0; i < n; ++i) {
          if (i < start || i >= start + k) y.push_back(sorted[i]);
        }
        for (std::size_t i = 0; i < low; ++i) y.push_back(lower);
        for (std::size_t i = low; i < k; ++i) y.push_back(upper);
        std::sort(y.begin(), y.end());
        const std::size_t ell = n / 2;
        // Local sensitivity on a bounded domain: one change can move the
        // median to its neighbors, or to a domain end when none exists.
        const double below = ell >= 2 ? y[ell - 2] : lower;
        const double above = ell < n ? y[ell] : upper;
        widest = std::max(widest, std::max(above - y[ell - 1],
                                           y[ell - 1] - below));
      }
    }
    best = std::max(best, std::exp(-beta * static_cast<double>(k)) * widest);
  }
  return best;
}

TEST(LocalSensitivityTest, NeighborGaps) {
  absl::StatusOr<double> ls = LocalSensitivityMedian(Make({1, 2, 4, 7}));
  ASSERT_TRUE(ls.ok());
  // l = 2, x_(2) = 2: max(4 - 2, 2 - 1).
  EXPECT_EQ(*ls, 2.0);
}

TEST(LocalSensitivityTest, NeedsFourPoints) {
  EXPECT_FALSE(LocalSensitivityMedian(Make({1, 2, 3})).ok());
  EXPECT_TRUE(LocalSensitivityMedian(Make({1, 2, 3, 4})).ok());
}

TEST(SmoothSensitivityTest, ReferenceValues) {
  EXPECT_NEAR(*SmoothSensitivityMedianBounded(Make({0, 0.5, 1}), 0, 1, 1.0),
              0.5, 1e-12);
  EXPECT_NEAR(
      *SmoothSensitivityMedianBounded(Make({0.3, 0.3, 0.3, 0.3}), 0, 1, 0.5),
      0.2575156088200096, 1e-12);
  EXPECT_NEAR(*SmoothSensitivityMedianBounded(Make({0.2, 0.9, 0.4, 0.4, 0.6}),
                                              0, 1, 0.3),
              0.2963272882726872, 1e-12);
}

TEST(SmoothSensitivityTest, MatchesBruteForceOnSmallSamples) {
  const std::vector<std::vector<double>> cases = {
      {0.1, 0.2, 0.3, 0.4, 0.5, 0.6},
      {0.0, 0.0, 0.0, 1.0, 1.0},
      {0.5, 0.5, 0.5},
      {0.05, 0.9, 0.33, 0.71, 0.12, 0.5, 0.5},
  };
  for (const auto& x : cases) {
    for (double beta : {0.05, 0.3, 1.0, 3.0}) {
      EXPECT_NEAR(*SmoothSensitivityMedianBounded(Make(x), 0, 1, beta),
                  BruteSmooth(x, 0, 1, beta), 1e-12)
          << "beta=" << beta;
    }
  }
}

TEST(SmoothSensitivityTest, DominatesLocalAndDecreasesInBeta) {
  const Sample s = Make({0.1, 0.15, 0.4, 0.42, 0.8, 0.95});
  const double local = *LocalSensitivityMedian(s);
  double previous = kInf;
  for (double beta : {0.01, 0.1, 0.5, 2.0, 10.0}) {
    const double smooth = *SmoothSensitivityMedianBounded(s, 0, 1, beta);
    EXPECT_GE(smooth, local - 1e-15);
    EXPECT_LE(smooth, 1.0);
    EXPECT_LE(smooth, previous);
    previous = smooth;
  }
}

TEST(SmoothSensitivityTest, RejectsBadArguments) {
  const Sample s = Make({0.2, 0.5, 0.7});
  EXPECT_FALSE(SmoothSensitivityMedianBounded(s, 1, 0, 0.5).ok());
  EXPECT_FALSE(SmoothSensitivityMedianBounded(s, 0, 1, 0.0).ok());
  EXPECT_FALSE(SmoothSensitivityMedianBounded(s, 0.3, 1, 0.5).ok());
}

TEST(MaxShiftTest, EndpointsAndOutOfRange) {
  // l = 3.
  const Sample s = Make({1, 2, 3, 5, 8, 13});
  EXPECT_EQ(MaxShiftMedian(s, 0), 0.0);
  EXPECT_EQ(MaxShiftMedian(s, 1), 2.0);  // max(5 - 3, 3 - 2)
  EXPECT_EQ(MaxShiftMedian(s, 2), 5.0);  // max(8 - 3, 3 - 1)
  EXPECT_EQ(MaxShiftMedian(s, 3), kInf);
}

TEST(WindowShiftTest, DominatesEndpointShift) {
  const Sample s = Make({0, 0.1, 0.15, 0.3, 0.31, 0.6, 0.61, 0.9, 1.4, 2.0});
  for (std::size_t k = 0; k <= s.ell(); ++k) {
    EXPECT_GE(WindowShiftMedian(s, k), MaxShiftMedian(s, k)) << "k=" << k;
  }
}

TEST(BreakdownStatTest, ConstantDataBreaksAtL) {
  const Sample s = Make(std::vector<double>(10, 3.0));
  absl::StatusOr<BreakdownResult> r = BreakdownStatMedian(s, 0.5);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->k_star, 5u);
}

TEST(BreakdownStatTest, SmallEtaBreaksAtOne) {
  const Sample s = Make({1, 2, 3, 4, 5, 6});
  EXPECT_EQ(BreakdownStatMedian(s, 0.5)->k_star, 1u);
  EXPECT_EQ(BreakdownStatMedian(s, 1.5)->k_star, 2u);
}

TEST(BreakdownStatTest, ProbesAreSortedAndIncludeAnswer) {
  const Sample s = Make({0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
  absl::StatusOr<BreakdownResult> r = BreakdownStatMedian(s, 0.25);
  ASSERT_TRUE(r.ok());
  ASSERT_FALSE(r->probes.empty());
  EXPECT_TRUE(std::is_sorted(r->probes.begin(), r->probes.end()));
  bool found = false;
  for (const auto& [k, shift] : r->probes) {
    if (k == r->k_star) {
      found = true;
      EXPECT_GT(shift, 0.25);
    }
  }
  EXPECT_TRUE(found);
}

TEST(BreakdownStatTest, WindowRuleNeverExceedsEndpointRule) {
  const Sample s = Make({0, 0.1, 0.15, 0.3, 0.31, 0.6, 0.61, 0.9, 1.4, 2.0});
  for (double eta : {0.05, 0.2, 0.35, 0.7, 5.0}) {
    EXPECT_LE(BreakdownStatMedian(s, eta, BreakdownRule::kWindow)->k_star,
              BreakdownStatMedian(s, eta, BreakdownRule::kEndpoint)->k_star);
  }
}

TEST(BreakdownStatTest, RejectsBadInput) {
  EXPECT_FALSE(BreakdownStatMedian(Make({1}), 1.0).ok());
  EXPECT_FALSE(BreakdownStatMedian(Make({1, 2}), 0.0).ok());
  EXPECT_FALSE(BreakdownStatMedian(Make({1, 2}), kInf).ok());
}

TEST(BreakdownOracleTest, AgreesOnHandPickedCases) {
  const std::vector<std::vector<double>> cases = {
      {1, 2}, {1, 1, 1}, {0, 1, 2, 3, 4, 5, 6}, {5, 5, 5, 5, 0, 10},
  };
  for (const auto& x : cases) {
    for (double eta : {0.5, 1.0, 2.5, 100.0}) {
      EXPECT_EQ(BreakdownStatOracle(Make(x), eta)->k_star,
                BreakdownStatMedian(Make(x), eta)->k_star);
    }
  }
}

TEST(BreakdownOracleTest, RejectsLargeSamples) {
  EXPECT_FALSE(
      BreakdownStatOracle(Make(std::vector<double>(13, 0.0)), 1.0).ok());
}

}  // namespace
}  // namespace ptrdp
