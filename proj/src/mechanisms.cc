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

#include "ptrdp/mechanisms.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ptrdp {
namespace {

absl::Status CheckGlobalSensitivity(double gs) {
  if (!std::isfinite(gs)) {
    return absl::InvalidArgumentError(
        "infinite global sensitivity: the mechanism cannot be calibrated");
  }
  if (!(gs > 0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("global sensitivity must be positive, got %g", gs));
  }
  return absl::OkStatus();
}

absl::Status CheckSmooth(const SmoothSensitivity& s, double expected_beta) {
  if (!std::isfinite(s.value)) {
    return absl::InvalidArgumentError(
        "infinite smooth sensitivity: the mechanism cannot be calibrated");
  }
  if (s.value < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("smooth sensitivity must be nonnegative, got %g",
                        s.value));
  }
  if (!(std::abs(s.beta - expected_beta) <= 1e-12 * expected_beta)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "smooth sensitivity was computed at beta=%g but the mechanism is "
        "calibrated for beta=%g",
        s.beta, expected_beta));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> LaplaceGlobalMechanism(double value,
                                              double global_sensitivity,
                                              const PrivacyBudget& budget,
                                              double laplace_draw) {
  if (absl::Status s = CheckGlobalSensitivity(global_sensitivity); !s.ok()) {
    return s;
  }
  return value + laplace_draw / budget.epsilon() * global_sensitivity;
}

absl::StatusOr<double> LaplaceGlobalMechanism(double value,
                                              double global_sensitivity,
                                              const PrivacyBudget& budget,
                                              NoiseSource& source) {
  return LaplaceGlobalMechanism(value, global_sensitivity, budget,
                                SampleLaplace(1.0, source));
}

double GaussianGlobalScale(const PrivacyBudget& budget) {
  return std::sqrt(2.0 * std::log(1.25 / budget.delta())) / budget.epsilon();
}

absl::StatusOr<double> GaussianGlobalMechanism(double value,
                                               double global_sensitivity,
                                               const PrivacyBudget& budget,
                                               double gaussian_draw) {
  if (absl::Status s = CheckGlobalSensitivity(global_sensitivity); !s.ok()) {
    return s;
  }
  return value + GaussianGlobalScale(budget) * gaussian_draw *
                     global_sensitivity;
}

absl::StatusOr<double> GaussianGlobalMechanism(double value,
                                               double global_sensitivity,
                                               const PrivacyBudget& budget,
                                               NoiseSource& source) {
  return GaussianGlobalMechanism(value, global_sensitivity, budget,
                                 SampleGaussian(source));
}

double LaplaceSmoothBeta(const PrivacyBudget& budget) {
  return budget.epsilon() / (2.0 * std::log(1.0 / budget.delta()));
}

double GaussianSmoothBeta(const PrivacyBudget& budget) {
  return budget.epsilon() / (4.0 * (1.0 + std::log(2.0 / budget.delta())));
}

double GaussianSmoothScale(const PrivacyBudget& budget) {
  return 5.0 * std::sqrt(2.0 * std::log(2.0 / budget.delta())) /
         budget.epsilon();
}

absl::StatusOr<double> LaplaceSmoothMechanism(const Sample& sample,
                                              const Estimator& estimator,
                                              SmoothSensitivity sensitivity,
                                              const PrivacyBudget& budget,
                                              double laplace_draw) {
  if (absl::Status s = CheckSmooth(sensitivity, LaplaceSmoothBeta(budget));
      !s.ok()) {
    return s;
  }
  absl::StatusOr<double> value = estimator(sample);
  if (!value.ok()) return value.status();
  return *value + 2.0 * laplace_draw / budget.epsilon() * sensitivity.value;
}

absl::StatusOr<double> LaplaceSmoothMechanism(const Sample& sample,
                                              const Estimator& estimator,
                                              SmoothSensitivity sensitivity,
                                              const PrivacyBudget& budget,
                                              NoiseSource& source) {
  return LaplaceSmoothMechanism(sample, estimator, sensitivity, budget,
                                SampleLaplace(1.0, source));
}

absl::StatusOr<double> GaussianSmoothMechanism(const Sample& sample,
                                               const Estimator& estimator,
                                               SmoothSensitivity sensitivity,
                                               const PrivacyBudget& budget,
                                               double gaussian_draw) {
  if (absl::Status s = CheckSmooth(sensitivity, GaussianSmoothBeta(budget));
      !s.ok()) {
    return s;
  }
  absl::StatusOr<double> value = estimator(sample);
  if (!value.ok()) return value.status();
  return *value +
         GaussianSmoothScale(budget) * gaussian_draw * sensitivity.value;
}

absl::StatusOr<double> GaussianSmoothMechanism(const Sample& sample,
                                               const Estimator& estimator,
                                               SmoothSensitivity sensitivity,
                                               const PrivacyBudget& budget,
                                               NoiseSource& source) {
  return GaussianSmoothMechanism(sample, estimator, sensitivity, budget,
                                 SampleGaussian(source));
}

PtrDraws DrawPtrNoise(PtrVariant variant, NoiseSource& source) {
  PtrDraws draws;
  if (variant == PtrVariant::kLaplace) {
    draws.test = SampleLaplace(1.0, source);
    draws.payload = SampleLaplace(1.0, source);
  } else {
    draws.test = SampleGaussian(source);
    draws.payload = SampleGaussian(source);
  }
  return draws;
}

absl::StatusOr<ReleaseOutcome> PtrRelease(const PtrMechanism& mechanism,
                                          const Sample& sample,
                                          const PtrDraws& draws) {
  const PtrConfig& config = mechanism.config();
  const double epsilon = config.budget().epsilon();
  absl::StatusOr<std::size_t> breakdown =
      mechanism.breakdown()(sample, config.eta());
  if (!breakdown.ok()) return breakdown.status();

  const double noisy_breakdown = static_cast<double>(*breakdown) +
                                 config.a_delta() / epsilon * draws.test;
  if (noisy_breakdown <= config.NoReplyThreshold()) {
    return ReleaseOutcome::NoReply();
  }
  absl::StatusOr<double> estimate = mechanism.estimator()(sample);
  if (!estimate.ok()) return estimate.status();
  return ReleaseOutcome::Value(
      *estimate + config.eta() / epsilon * config.a_delta() * draws.payload);
}

absl::StatusOr<ReleaseOutcome> PtrRelease(const PtrMechanism& mechanism,
                                          const Sample& sample,
                                          NoiseSource& source) {
  return PtrRelease(mechanism, sample,
                    DrawPtrNoise(mechanism.config().variant(), source));
}

PrivacyGuarantee PtrGuarantee(const PtrConfig& config) {
  const double epsilon = config.budget().epsilon();
  const double delta = config.budget().delta();
  if (config.variant() == PtrVariant::kLaplace) {
    return {2.0 * epsilon, delta};
  }
  return {2.0 * epsilon, 2.0 * std::exp(epsilon) * delta + delta * delta};
}

}  // namespace ptrdp
