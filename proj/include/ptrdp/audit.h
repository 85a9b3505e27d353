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

#ifndef PTRDP_AUDIT_H_
#define PTRDP_AUDIT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ptrdp/core_model.h"
#include "ptrdp/mechanisms.h"
#include "ptrdp/noise.h"

namespace ptrdp {

// One randomized run of the mechanism under audit.
using OutputSampler =
    std::function<absl::StatusOr<ReleaseOutcome>(const Sample&, NoiseSource&)>;

struct AuditConfig {
  // Runs per dataset.
  std::size_t trials = 100000;
  // Equal-mass bins over the pooled numeric outputs; a no-reply bin is added.
  std::size_t bins = 8;
  double target_delta = 0.0;
  // A bin enters the maximum only if the numerator side has this many hits.
  std::size_t min_count = 25;
  std::size_t bootstrap_rounds = 200;
  std::uint64_t seed = 0;
};

struct AuditReport {
  // max(0, symmetrized max over eligible bins of
  //        log(max(p(B) - delta, 1/trials) / max(q(B), 1/trials))).
  double epsilon_hat = 0.0;
  double bootstrap_stddev = 0.0;
  // 1.96 bootstrap standard deviations.
  double bootstrap_radius = 0.0;
  std::size_t trials = 0;
  double target_delta = 0.0;
  std::uint64_t seed = 0;
  // Interior bin edges (bins - 1 of them).
  std::vector<double> edges;
  // Per bin counts, numeric bins first, the no-reply bin last.
  std::vector<std::size_t> counts_x;
  std::vector<std::size_t> counts_x_prime;
};

// Histogram-based empirical privacy loss between the output distributions on
// x and x'. A diagnostic lower estimate, not a proof of privacy.
//
// Run t on x uses NoiseSource(seed, 2t), on x' NoiseSource(seed, 2t+1).
// Fails when x and x' are not neighbors (equal size, at most one differing
// coordinate in input order) or when trials < 100 (bins + 1).
absl::StatusOr<AuditReport> DpAudit(const OutputSampler& sampler,
                                    const Sample& x, const Sample& x_prime,
                                    const AuditConfig& config);
absl::StatusOr<AuditReport> DpAudit(const PtrMechanism& mechanism,
                                    const Sample& x, const Sample& x_prime,
                                    const AuditConfig& config);

// Shipped neighbor pairs.
//   laplace_global          clamped sum over [0, 1] (sensitivity 1) on all
//                           zeros versus one coordinate set to 1.
//   ptr_breakdown_boundary  Gaussian PTR median, eta = 1; a 15-point cluster
//                           whose breakdown statistic drops from 8 to 7.
//   ptr_median_swing        Gaussian PTR median, eta = 1; two tight clusters
//                           0.95 eta apart, one point crosses and the median
//                           jumps while the breakdown statistic stays at 20.
struct AuditPreset {
  std::string name;
  OutputSampler sampler;
  Sample x;
  Sample x_prime;
  // The guarantee the mechanism is proven to meet.
  double proven_epsilon = 0.0;
  double proven_delta = 0.0;
};

std::vector<std::string> AuditPresetNames();

absl::StatusOr<AuditPreset> MakeAuditPreset(const std::string& name,
                                            const PrivacyBudget& budget);

}  // namespace ptrdp

#endif  // PTRDP_AUDIT_H_
