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

#ifndef PTRDP_MECHANISMS_H_
#define PTRDP_MECHANISMS_H_

#include <cstddef>
#include <functional>
#include <utility>

#include "absl/status/statusor.h"
#include "ptrdp/core_model.h"
#include "ptrdp/noise.h"

namespace ptrdp {

// Every mechanism comes in two forms: one that takes the standardized noise
// draw explicitly (for tests and paired simulations) and one that draws it
// from a NoiseSource.

// value + (Z / epsilon) * gs with Z ~ Lap(1). Pure epsilon-DP when gs bounds
// the global sensitivity. gs must be finite and positive.
absl::StatusOr<double> LaplaceGlobalMechanism(double value,
                                              double global_sensitivity,
                                              const PrivacyBudget& budget,
                                              double laplace_draw);
absl::StatusOr<double> LaplaceGlobalMechanism(double value,
                                              double global_sensitivity,
                                              const PrivacyBudget& budget,
                                              NoiseSource& source);

// sqrt(2 log(1.25/delta)) / epsilon.
double GaussianGlobalScale(const PrivacyBudget& budget);

// value + GaussianGlobalScale(budget) * Z * gs with Z ~ N(0, 1).
absl::StatusOr<double> GaussianGlobalMechanism(double value,
                                               double global_sensitivity,
                                               const PrivacyBudget& budget,
                                               double gaussian_draw);
absl::StatusOr<double> GaussianGlobalMechanism(double value,
                                               double global_sensitivity,
                                               const PrivacyBudget& budget,
                                               NoiseSource& source);

using Estimator = std::function<absl::StatusOr<double>(const Sample&)>;

// A smooth sensitivity value together with the beta it was computed at. The
// smooth mechanisms refuse a beta that does not match their calibration.
struct SmoothSensitivity {
  double value = 0.0;
  double beta = 0.0;
};

// beta = epsilon / (2 log(1/delta)).
double LaplaceSmoothBeta(const PrivacyBudget& budget);
// beta = epsilon / (4 (1 + log(2/delta))).
double GaussianSmoothBeta(const PrivacyBudget& budget);
// 5 sqrt(2 log(2/delta)) / epsilon.
double GaussianSmoothScale(const PrivacyBudget& budget);

// h(x) + (2 Z / epsilon) S, Z ~ Lap(1).
absl::StatusOr<double> LaplaceSmoothMechanism(const Sample& sample,
                                              const Estimator& estimator,
                                              SmoothSensitivity sensitivity,
                                              const PrivacyBudget& budget,
                                              double laplace_draw);
absl::StatusOr<double> LaplaceSmoothMechanism(const Sample& sample,
                                              const Estimator& estimator,
                                              SmoothSensitivity sensitivity,
                                              const PrivacyBudget& budget,
                                              NoiseSource& source);

// h(x) + GaussianSmoothScale(budget) * Z * S, Z ~ N(0, 1).
absl::StatusOr<double> GaussianSmoothMechanism(const Sample& sample,
                                               const Estimator& estimator,
                                               SmoothSensitivity sensitivity,
                                               const PrivacyBudget& budget,
                                               double gaussian_draw);
absl::StatusOr<double> GaussianSmoothMechanism(const Sample& sample,
                                               const Estimator& estimator,
                                               SmoothSensitivity sensitivity,
                                               const PrivacyBudget& budget,
                                               NoiseSource& source);

// Fixed-threshold breakdown statistic of the paired estimator. Must change by
// at most one between datasets at Hamming distance one; the release test's
// privacy rests on it.
using BreakdownFn =
    std::function<absl::StatusOr<std::size_t>(const Sample&, double eta)>;

// Propose-test-release around an arbitrary estimator/breakdown pair.
class PtrMechanism {
 public:
  PtrMechanism(PtrConfig config, Estimator estimator, BreakdownFn breakdown)
      : config_(config),
        estimator_(std::move(estimator)),
        breakdown_(std::move(breakdown)) {}

  const PtrConfig& config() const { return config_; }
  const Estimator& estimator() const { return estimator_; }
  const BreakdownFn& breakdown() const { return breakdown_; }

 private:
  PtrConfig config_;
  Estimator estimator_;
  BreakdownFn breakdown_;
};

// Standardized draws consumed by one release: `test` perturbs the breakdown
// statistic, `payload` perturbs the estimate. Both are Lap(1) for the Laplace
// variant and N(0, 1) for the Gaussian one.
struct PtrDraws {
  double test = 0.0;
  double payload = 0.0;
};

// Always consumes the same amount of randomness: test first, then payload.
PtrDraws DrawPtrNoise(PtrVariant variant, NoiseSource& source);

// A = breakdown(x, eta) + (a_delta / epsilon) * draws.test.
// No reply if A <= 1 + b_delta / epsilon, otherwise
// estimator(x) + (eta / epsilon) * a_delta * draws.payload.
//
// The Laplace variant is (2 epsilon, delta)-DP; the Gaussian variant is
// (2 epsilon, 2 e^epsilon delta + delta^2)-DP.
absl::StatusOr<ReleaseOutcome> PtrRelease(const PtrMechanism& mechanism,
                                          const Sample& sample,
                                          const PtrDraws& draws);
absl::StatusOr<ReleaseOutcome> PtrRelease(const PtrMechanism& mechanism,
                                          const Sample& sample,
                                          NoiseSource& source);

struct PrivacyGuarantee {
  double epsilon;
  double delta;
};

// Guarantee of a PTR release run with `config`.
PrivacyGuarantee PtrGuarantee(const PtrConfig& config);

}  // namespace ptrdp

#endif  // PTRDP_MECHANISMS_H_
