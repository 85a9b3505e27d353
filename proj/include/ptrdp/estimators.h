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

#ifndef PTRDP_ESTIMATORS_H_
#define PTRDP_ESTIMATORS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ptrdp/core_model.h"
#include "ptrdp/mechanisms.h"
#include "ptrdp/noise.h"
#include "ptrdp/sensitivity.h"

namespace ptrdp {

// One sample-size or block-count condition of a calibration, evaluated as
// `actual >= required`.
struct PreconditionCheck {
  std::string name;
  bool satisfied = false;
  double actual = 0.0;
  double required = 0.0;
  // actual - required; negative when the check fails.
  double margin = 0.0;
  // Informational checks (for instance "n is even", which only the headline
  // guarantee uses) never block an estimate.
  bool enforced = true;
};

// Additive pieces of a high-probability error bound.
struct BoundTerms {
  // Non-private deviation of the underlying estimator.
  double sampling = 0.0;
  // Berry-Esseen bias of median-of-means; zero for the median.
  double bias = 0.0;
  // Cost of the privacy noise, (2 eta / epsilon) sqrt(log(2/tau) log(1.25/delta)).
  double privacy = 0.0;

  double total() const { return sampling + bias + privacy; }
};

struct DpEstimateReport {
  ReleaseOutcome outcome = ReleaseOutcome::NoReply();
  double eta_used = 0.0;
  double c_used = 0.0;
  std::vector<PreconditionCheck> precondition_checks;
  BoundTerms bound_terms;
  // Error bound holding with probability at least 1 - 2 tau when every
  // enforced check passes.
  double theoretical_bound = 0.0;

  bool AllPreconditionsHold() const;
};

enum class PreconditionPolicy {
  // Any failed enforced check turns into a FailedPrecondition error.
  kEnforce,
  // Checks are only recorded; the estimate is computed anyway. Used by
  // experiments that deliberately run outside the proven regime.
  kReportOnly,
};

// 2 sqrt(2): the block-mean threshold constant of the median-of-means
// calibration. A value of 8 reproduces the more conservative choice.
inline constexpr double kMomEtaDefaultConstant = 2.8284271247461903;

struct EstimatorOptions {
  PreconditionPolicy policy = PreconditionPolicy::kEnforce;
  // The PTR test needs a statistic with global sensitivity 1; see
  // BreakdownRule.
  BreakdownRule rule = BreakdownRule::kWindow;
  double mom_eta_constant = kMomEtaDefaultConstant;
  // When set, data are permuted with this seed before being cut into blocks.
  std::optional<std::uint64_t> shuffle_seed;
  // The density-regime calibration assumes continuous data. This cannot be
  // checked from a sample, so the caller vouches for it.
  bool data_has_density = true;
};

// ---------------------------------------------------------------------------
// Median

// x_(floor(n/2)). Fails for n = 1.
absl::StatusOr<double> EmpiricalMedian(const Sample& sample);

std::vector<PreconditionCheck> MedianPreconditions(
    const MedianProfile& profile, std::size_t n, const PrivacyBudget& budget,
    const Confidence& confidence);

// eta = 4 C / (L n) + 4 log(4/tau) / (3 L n). Fails with FailedPrecondition
// unless n >= max(2 ceil(C) / (r L), 2 log(8/tau) / (r L)^2); the message
// carries both bounds and the smallest admissible n.
absl::StatusOr<double> MedianEta(const MedianProfile& profile, std::size_t n,
                                 const PrivacyBudget& budget,
                                 const Confidence& confidence);

// sqrt(log(2/tau) / (2 n L^2)) + (2 eta / epsilon) sqrt(log(2/tau) log(1.25/delta)).
BoundTerms MedianErrorBound(const MedianProfile& profile, std::size_t n,
                            double eta, const PrivacyBudget& budget,
                            const Confidence& confidence);

// Gaussian PTR around the left median with eta from MedianEta. O(n log n).
absl::StatusOr<DpEstimateReport> DpMedian(const Sample& sample,
                                          const MedianProfile& profile,
                                          const PrivacyBudget& budget,
                                          const Confidence& confidence,
                                          NoiseSource& source,
                                          const EstimatorOptions& options = {});
absl::StatusOr<DpEstimateReport> DpMedian(const Sample& sample,
                                          const MedianProfile& profile,
                                          const PrivacyBudget& budget,
                                          const Confidence& confidence,
                                          const PtrDraws& draws,
                                          const EstimatorOptions& options = {});

// ---------------------------------------------------------------------------
// Median of means

// Means of K consecutive blocks in input order. The first n mod K blocks get
// floor(n/K) + 1 points, the rest floor(n/K).
std::vector<double> BlockMeans(std::span<const double> values,
                               const MomConfig& config);

// Left median (rank max(1, floor(K/2))) of the block means. K = 1 gives the
// sample mean and K = n the left median of the data. O(n).
absl::StatusOr<double> MomPointEstimate(const Sample& sample,
                                        const MomConfig& config);

// Breakdown statistic of the median-of-means estimator. One raw change moves
// at most one block mean, arbitrarily far, so this is the median breakdown
// statistic of the block means.
absl::StatusOr<std::size_t> MomBreakdownStat(
    const Sample& sample, const MomConfig& config, double eta,
    BreakdownRule rule = BreakdownRule::kEndpoint);

// Same data, permuted by a seeded Fisher-Yates shuffle.
Sample ShuffledSample(const Sample& sample, std::uint64_t seed);

// eta = constant * sigma * sqrt(K / n); requires K >= max(8 C, 32 log(4/tau)).
absl::StatusOr<double> MomEta(const MomentProfile& profile, std::size_t n,
                              std::size_t block_count,
                              const PrivacyBudget& budget,
                              const Confidence& confidence,
                              double constant = kMomEtaDefaultConstant);

std::vector<PreconditionCheck> MomPreconditions(const MomentProfile& profile,
                                                std::size_t n,
                                                std::size_t block_count,
                                                const PrivacyBudget& budget,
                                                const Confidence& confidence);

// sigma (3 sqrt(log(4/tau) / (2n)) + 1.43 K rho^3 / (sigma^3 n)) plus the
// privacy term at `eta`. At the default eta the privacy term equals
// 4 sigma sqrt(2 K log(2/tau) log(1.25/delta)) / (epsilon sqrt(n)).
BoundTerms MomErrorBound(const MomentProfile& profile, std::size_t n,
                         std::size_t block_count, double eta,
                         const PrivacyBudget& budget,
                         const Confidence& confidence);

absl::StatusOr<DpEstimateReport> DpMom(const Sample& sample,
                                       const MomentProfile& profile,
                                       std::size_t block_count,
                                       const PrivacyBudget& budget,
                                       const Confidence& confidence,
                                       NoiseSource& source,
                                       const EstimatorOptions& options = {});
absl::StatusOr<DpEstimateReport> DpMom(const Sample& sample,
                                       const MomentProfile& profile,
                                       std::size_t block_count,
                                       const PrivacyBudget& budget,
                                       const Confidence& confidence,
                                       const PtrDraws& draws,
                                       const EstimatorOptions& options = {});

// Density regime. With r = 2 and L_r = exp(-2) / sqrt(2 pi):
//   eta0 = 2 e^2 sigma sqrt(2 pi) (rho^3 K / (sigma^3 n)
//                                  + (2 C + (2/3) log(4/tau)) / sqrt(K n)).
// Requires n / K integral (drop n mod K points otherwise),
// K >= max(8 C, 32 log(4/tau)) and n >= 10 (rho/sigma)^6 K.
absl::StatusOr<double> MomDensityEta(const MomentProfile& profile,
                                     std::size_t n, std::size_t block_count,
                                     const PrivacyBudget& budget,
                                     const Confidence& confidence);

std::vector<PreconditionCheck> MomDensityPreconditions(
    const MomentProfile& profile, std::size_t n, std::size_t block_count,
    const PrivacyBudget& budget, const Confidence& confidence,
    bool data_has_density);

// 3 sqrt(sigma^2 log(4/tau) / (2n)) + 1.43 rho^3 K / (sigma^2 n) plus the
// privacy term at eta0.
BoundTerms MomDensityErrorBound(const MomentProfile& profile, std::size_t n,
                                std::size_t block_count,
                                const PrivacyBudget& budget,
                                const Confidence& confidence);

absl::StatusOr<DpEstimateReport> DpMomDensity(
    const Sample& sample, const MomentProfile& profile,
    std::size_t block_count, const PrivacyBudget& budget,
    const Confidence& confidence, NoiseSource& source,
    const EstimatorOptions& options = {});
absl::StatusOr<DpEstimateReport> DpMomDensity(
    const Sample& sample, const MomentProfile& profile,
    std::size_t block_count, const PrivacyBudget& budget,
    const Confidence& confidence, const PtrDraws& draws,
    const EstimatorOptions& options = {});

}  // namespace ptrdp

#endif  // PTRDP_ESTIMATORS_H_
