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

#ifndef PTRDP_SENSITIVITY_H_
#define PTRDP_SENSITIVITY_H_

#include <cstddef>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "ptrdp/core_model.h"

namespace ptrdp {

// How the largest median shift reachable with k coordinate changes is
// evaluated.
//
// kEndpoint is exact: max(x_(l+k) - x_(l), x_(l) - x_(l-k)).
// kWindow is the sliding-window form
//   max_{0<=t<=k+1} (x_(l+t) - x_(l+t-k-1)),
// which dominates the endpoint shift at every k, so it never reports a larger
// statistic. Only kWindow changes by at most 1 between neighboring samples
// (one change moves each order statistic by at most one rank). kEndpoint
// does not: [0,0,6,9,9,9] and [0,0,9,9,9,18] at eta = 8.25 give 3 and 1.
// PTR releases therefore use kWindow.
enum class BreakdownRule { kEndpoint, kWindow };

// Fixed-threshold breakdown point of the left median: the least k such that
// some dataset within Hamming distance k moves the median by more than eta.
struct BreakdownResult {
  std::size_t k_star = 0;
  // Every (k, shift) pair evaluated while searching, sorted by k. Shifts that
  // are unbounded are +infinity.
  std::vector<std::pair<std::size_t, double>> probes;
};

// max(x_(l+1) - x_(l), x_(l) - x_(l-1)). Needs l >= 2, i.e. n >= 4; for
// smaller samples the left median is the minimum and moves without bound.
absl::StatusOr<double> LocalSensitivityMedian(const Sample& sample);

// beta-smooth sensitivity of the left median for data confined to
// [lower, upper]; order statistics past either end are clamped to the domain
// bound. Returns a value in [0, upper - lower].
absl::StatusOr<double> SmoothSensitivityMedianBounded(const Sample& sample,
                                                      double lower,
                                                      double upper,
                                                      double beta);

// Largest achievable |median(x') - median(x)| over d_H(x, x') <= k, or
// +infinity when l + k > n or l - k < 1.
double MaxShiftMedian(const Sample& sample, std::size_t k);

// Sliding-window shift used by BreakdownRule::kWindow; +infinity as soon as a
// window leaves the sample.
double WindowShiftMedian(const Sample& sample, std::size_t k);

// Binary search over k; O(log n) probes on the pre-sorted sample for the
// endpoint rule, O(n log n) for the window rule. Requires n >= 2 and a finite
// eta > 0. The result never exceeds l.
absl::StatusOr<BreakdownResult> BreakdownStatMedian(
    const Sample& sample, double eta,
    BreakdownRule rule = BreakdownRule::kEndpoint);

// Exhaustive verifier for small samples (2 <= n <= 12): tries every subset of
// coordinates and every assignment of +-BIG to them, recomputing the left
// median from scratch. Independent of MaxShiftMedian.
absl::StatusOr<BreakdownResult> BreakdownStatOracle(const Sample& sample,
                                                    double eta);

inline constexpr std::size_t kOracleMaxSampleSize = 12;

}  // namespace ptrdp

#endif  // PTRDP_SENSITIVITY_H_
