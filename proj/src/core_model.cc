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

#include "ptrdp/core_model.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ptrdp {

Sample::Sample(std::vector<double> values)
    : values_(std::move(values)), sorted_(values_) {
  std::sort(sorted_.begin(), sorted_.end());
}

absl::StatusOr<Sample> Sample::Create(std::span<const double> values) {
  return Create(std::vector<double>(values.begin(), values.end()));
}

absl::StatusOr<Sample> Sample::Create(std::vector<double> values) {
  if (values.empty()) {
    return absl::InvalidArgumentError("empty input: a sample needs n >= 1");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("non-finite value at index %d", i));
    }
  }
  return Sample(std::move(values));
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double epsilon,
                                                    double delta) {
  if (!std::isfinite(epsilon) || epsilon <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be finite and positive, got %g",
                        epsilon));
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  return PrivacyBudget(epsilon, delta);
}

absl::StatusOr<Confidence> Confidence::Create(double tau) {
  if (!(tau > 0 && tau < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("tau must lie in (0, 1), got %g", tau));
  }
  return Confidence(tau);
}

double ComputeC(const PrivacyBudget& budget, const Confidence& confidence) {
  const double log_delta = std::log(1.25 / budget.delta());
  const double log_tau = std::log(2.0 / confidence.tau());
  return 1.0 +
         (2.0 * log_delta + 2.0 * std::sqrt(log_tau * log_delta)) /
             budget.epsilon();
}

const char* PtrVariantName(PtrVariant variant) {
  switch (variant) {
    case PtrVariant::kLaplace:
      return "laplace";
    case PtrVariant::kGaussian:
      return "gaussian";
  }
  return "unknown";
}

absl::StatusOr<PtrConfig> PtrConfig::Create(double eta, PtrVariant variant,
                                            const PrivacyBudget& budget,
                                            const Confidence& confidence) {
  if (!std::isfinite(eta) || eta <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("eta must be finite and positive, got %g", eta));
  }
  double a_delta = 1.0;
  double b_delta = std::log(2.0 / budget.delta());
  if (variant == PtrVariant::kGaussian) {
    b_delta = 2.0 * std::log(1.25 / budget.delta());
    a_delta = std::sqrt(b_delta);
  }
  return PtrConfig(eta, variant, a_delta, b_delta,
                   ComputeC(budget, confidence), budget);
}

absl::StatusOr<MedianProfile> MedianProfile::Create(double r, double l) {
  if (!std::isfinite(r) || r <= 0 || !std::isfinite(l) || l <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("r and L must be finite and positive, got r=%g L=%g",
                        r, l));
  }
  if (r * l > 0.5) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "r * L = %g exceeds 1/2; no density can satisfy it", r * l));
  }
  return MedianProfile(r, l);
}

absl::StatusOr<MomentProfile> MomentProfile::Create(double mu, double sigma,
                                                    double rho) {
  if (!std::isfinite(mu)) {
    return absl::InvalidArgumentError("mu must be finite");
  }
  if (!std::isfinite(sigma) || sigma <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sigma must be finite and positive, got %g", sigma));
  }
  if (!std::isfinite(rho) || rho < sigma) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "rho must be finite and at least sigma, got rho=%g sigma=%g", rho,
        sigma));
  }
  return MomentProfile(mu, sigma, rho);
}

absl::StatusOr<MomConfig> MomConfig::Create(std::size_t block_count,
                                            std::size_t n) {
  if (block_count == 0) {
    return absl::InvalidArgumentError("block count K must be positive");
  }
  if (block_count > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "block count K=%d exceeds sample size n=%d", block_count, n));
  }
  return MomConfig(block_count, n);
}

}  // namespace ptrdp
