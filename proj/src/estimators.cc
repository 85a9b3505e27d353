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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace ptrdp {
namespace {

PreconditionCheck AtLeast(std::string name, double actual, double required,
                          bool enforced = true) {
  PreconditionCheck check;
  check.name = std::move(name);
  check.actual = actual;
  check.required = required;
  check.margin = actual - required;
  check.satisfied = actual >= required;
  check.enforced = enforced;
  return check;
}

double PrivacyTerm(double eta, const PrivacyBudget& budget,
                   const Confidence& confidence) {
  return 2.0 * eta / budget.epsilon() *
         std::sqrt(std::log(2.0 / confidence.tau()) *
                   std::log(1.25 / budget.delta()));
}

// FailedPrecondition listing every failed enforced check, or OK.
absl::Status FailedChecks(const std::vector<PreconditionCheck>& checks) {
  std::string failures;
  for (const PreconditionCheck& check : checks) {
    if (check.satisfied || !check.enforced) continue;
    absl::StrAppend(&failures, failures.empty() ? "" : "; ",
                    absl::StrFormat("%s: have %.6g, need %.6g", check.name,
                                    check.actual, check.required));
  }
  if (failures.empty()) return absl::OkStatus();
  return absl::FailedPreconditionError(
      absl::StrCat("calibration preconditions violated: ", failures));
}

double MedianEtaValue(const MedianProfile& profile, std::size_t n,
                      const PrivacyBudget& budget,
                      const Confidence& confidence) {
  const double ln = profile.l() * static_cast<double>(n);
  return 4.0 * ComputeC(budget, confidence) / ln +
         4.0 * std::log(4.0 / confidence.tau()) / (3.0 * ln);
}

double MomEtaValue(const MomentProfile& profile, std::size_t n,
                   std::size_t block_count, double constant) {
  return constant * profile.sigma() *
         std::sqrt(static_cast<double>(block_count) / static_cast<double>(n));
}

double MomDensityEtaValue(const MomentProfile& profile, std::size_t n,
                          std::size_t block_count, const PrivacyBudget& budget,
                          const Confidence& confidence) {
  const double sigma = profile.sigma();
  const double rho3 = std::pow(profile.rho(), 3);
  const double k = static_cast<double>(block_count);
  const double nd = static_cast<double>(n);
  const double c = ComputeC(budget, confidence);
  const double scale = 2.0 * std::exp(2.0) * sigma *
                       std::sqrt(2.0 * std::numbers::pi);
  return scale * (rho3 * k / (std::pow(sigma, 3) * nd) +
                  (2.0 * c + (2.0 / 3.0) * std::log(4.0 / confidence.tau())) /
                      std::sqrt(k * nd));
}

std::vector<PreconditionCheck> BlockCountChecks(std::size_t block_count,
                                                const PrivacyBudget& budget,
                                                const Confidence& confidence) {
  const double k = static_cast<double>(block_count);
  return {
      AtLeast("K >= 8*C", k, 8.0 * ComputeC(budget, confidence)),
      AtLeast("K >= 32*log(4/tau)", k,
              32.0 * std::log(4.0 / confidence.tau())),
  };
}

double MomentRatio6(const MomentProfile& profile) {
  return std::pow(profile.rho() / profile.sigma(), 6);
}

// Left median of `values` at rank max(1, floor(K/2)); reorders `values`.
double LeftMedianInPlace(std::vector<double>& values) {
  const std::size_t rank = std::max<std::size_t>(1, values.size() / 2);
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

// Shared tail of the three DP estimators.
absl::StatusOr<DpEstimateReport> Release(
    const Sample& sample, const PtrMechanism& mechanism, const PtrDraws& draws,
    std::vector<PreconditionCheck> checks, const BoundTerms& bound,
    const EstimatorOptions& options) {
  if (options.policy == PreconditionPolicy::kEnforce) {
    if (absl::Status s = FailedChecks(checks); !s.ok()) return s;
  }
  absl::StatusOr<ReleaseOutcome> outcome = PtrRelease(mechanism, sample, draws);
  if (!outcome.ok()) return outcome.status();

  DpEstimateReport report;
  report.outcome = *outcome;
  report.eta_used = mechanism.config().eta();
  report.c_used = mechanism.config().c();
  report.precondition_checks = std::move(checks);
  report.bound_terms = bound;
  report.theoretical_bound = bound.total();
  return report;
}

absl::StatusOr<DpEstimateReport> MomRelease(
    const Sample& raw, std::size_t block_count, double eta,
    const PrivacyBudget& budget, const Confidence& confidence,
    const PtrDraws& draws, std::vector<PreconditionCheck> checks,
    const BoundTerms& bound, const EstimatorOptions& options) {
  absl::StatusOr<MomConfig> config = MomConfig::Create(block_count, raw.size());
  if (!config.ok()) return config.status();
  absl::StatusOr<PtrConfig> ptr =
      PtrConfig::Create(eta, PtrVariant::kGaussian, budget, confidence);
  if (!ptr.ok()) return ptr.status();

  std::optional<Sample> shuffled;
  if (options.shuffle_seed.has_value()) {
    shuffled = ShuffledSample(raw, *options.shuffle_seed);
  }
  const Sample& sample = shuffled.has_value() ? *shuffled : raw;

  const MomConfig mom = *config;
  const BreakdownRule rule = options.rule;
  PtrMechanism mechanism(
      *ptr, [mom](const Sample& s) { return MomPointEstimate(s, mom); },
      [mom, rule](const Sample& s, double e) {
        return MomBreakdownStat(s, mom, e, rule);
      });
  return Release(sample, mechanism, draws, std::move(checks), bound, options);
}

}  // namespace

bool DpEstimateReport::AllPreconditionsHold() const {
  return std::all_of(
      precondition_checks.begin(), precondition_checks.end(),
      [](const PreconditionCheck& c) { return c.satisfied || !c.enforced; });
}

absl::StatusOr<double> EmpiricalMedian(const Sample& sample) {
  if (sample.ell() < 1) {
    return absl::InvalidArgumentError(
        "sample too small: the left median needs n >= 2");
  }
  return sample.OrderStat(sample.ell());
}

std::vector<PreconditionCheck> MedianPreconditions(
    const MedianProfile& profile, std::size_t n, const PrivacyBudget& budget,
    const Confidence& confidence) {
  const double rl = profile.r() * profile.l();
  const double nd = static_cast<double>(n);
  const double tau = confidence.tau();
  const double l = profile.l();
  const double r = profile.r();
  return {
      AtLeast("n >= 2*ceil(C)/(r*L)", nd,
              2.0 * std::ceil(ComputeC(budget, confidence)) / rl),
      AtLeast("n >= 2*log(8/tau)/(r*L)^2", nd,
              2.0 * std::log(8.0 / tau) / (rl * rl)),
      AtLeast("tau >= 2*exp(-2*n*L^2*r^2)", tau,
              2.0 * std::exp(-2.0 * nd * l * l * r * r)),
      AtLeast("n even", n % 2 == 0 ? 1.0 : 0.0, 1.0, /*enforced=*/false),
  };
}

absl::StatusOr<double> MedianEta(const MedianProfile& profile, std::size_t n,
                                 const PrivacyBudget& budget,
                                 const Confidence& confidence) {
  const std::vector<PreconditionCheck> checks =
      MedianPreconditions(profile, n, budget, confidence);
  const double required = std::max(checks[0].required, checks[1].required);
  if (static_cast<double>(n) < required) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "sample size n=%d is below the median calibration threshold: "
        "n >= 2*ceil(C)/(r*L) = %.1f and n >= 2*log(8/tau)/(r*L)^2 = %.1f; "
        "required n >= %.0f",
        n, checks[0].required, checks[1].required, std::ceil(required)));
  }
  return MedianEtaValue(profile, n, budget, confidence);
}

BoundTerms MedianErrorBound(const MedianProfile& profile, std::size_t n,
                            double eta, const PrivacyBudget& budget,
                            const Confidence& confidence) {
  const double l = profile.l();
  BoundTerms terms;
  terms.sampling = std::sqrt(std::log(2.0 / confidence.tau()) /
                             (2.0 * static_cast<double>(n) * l * l));
  terms.privacy = PrivacyTerm(eta, budget, confidence);
  return terms;
}

absl::StatusOr<DpEstimateReport> DpMedian(const Sample& sample,
                                          const MedianProfile& profile,
                                          const PrivacyBudget& budget,
                                          const Confidence& confidence,
                                          const PtrDraws& draws,
                                          const EstimatorOptions& options) {
  const std::size_t n = sample.size();
  if (n < 2) {
    return absl::InvalidArgumentError(
        "sample too small: the DP median needs n >= 2");
  }
  const double eta = MedianEtaValue(profile, n, budget, confidence);
  absl::StatusOr<PtrConfig> config =
      PtrConfig::Create(eta, PtrVariant::kGaussian, budget, confidence);
  if (!config.ok()) return config.status();

  const BreakdownRule rule = options.rule;
  PtrMechanism mechanism(
      *config, [](const Sample& s) { return EmpiricalMedian(s); },
      [rule](const Sample& s, double e) -> absl::StatusOr<std::size_t> {
        absl::StatusOr<BreakdownResult> r = BreakdownStatMedian(s, e, rule);
        if (!r.ok()) return r.status();
        return r->k_star;
      });
  return Release(sample, mechanism, draws,
                 MedianPreconditions(profile, n, budget, confidence),
                 MedianErrorBound(profile, n, eta, budget, confidence),
                 options);
}

absl::StatusOr<DpEstimateReport> DpMedian(const Sample& sample,
                                          const MedianProfile& profile,
                                          const PrivacyBudget& budget,
                                          const Confidence& confidence,
                                          NoiseSource& source,
                                          const EstimatorOptions& options) {
  return DpMedian(sample, profile, budget, confidence,
                  DrawPtrNoise(PtrVariant::kGaussian, source), options);
}

std::vector<double> BlockMeans(std::span<const double> values,
                               const MomConfig& config) {
  const std::size_t k = config.block_count();
  const std::size_t base = values.size() / k;
  const std::size_t extra = values.size() % k;
  std::vector<double> means;
  means.reserve(k);
  std::size_t offset = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t size = base + (j < extra ? 1 : 0);
    double sum = 0.0;
    for (std::size_t i = offset; i < offset + size; ++i) sum += values[i];
    means.push_back(sum / static_cast<double>(size));
    offset += size;
  }
  return means;
}

absl::StatusOr<double> MomPointEstimate(const Sample& sample,
                                        const MomConfig& config) {
  if (config.n() != sample.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "block configuration built for n=%d applied to a sample of size %d",
        config.n(), sample.size()));
  }
  std::vector<double> means = BlockMeans(sample.values(), config);
  return LeftMedianInPlace(means);
}

absl::StatusOr<std::size_t> MomBreakdownStat(const Sample& sample,
                                             const MomConfig& config,
                                             double eta, BreakdownRule rule) {
  if (config.n() != sample.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "block configuration built for n=%d applied to a sample of size %d",
        config.n(), sample.size()));
  }
  absl::StatusOr<Sample> means =
      Sample::Create(BlockMeans(sample.values(), config));
  if (!means.ok()) return means.status();
  absl::StatusOr<BreakdownResult> result =
      BreakdownStatMedian(*means, eta, rule);
  if (!result.ok()) return result.status();
  return result->k_star;
}

Sample ShuffledSample(const Sample& sample, std::uint64_t seed) {
  std::vector<double> values(sample.values().begin(), sample.values().end());
  NoiseSource source(seed, /*stream_id=*/0);
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[source.UniformIndex(i)]);
  }
  // Finite values stay finite under permutation.
  return *Sample::Create(std::move(values));
}

std::vector<PreconditionCheck> MomPreconditions(const MomentProfile& profile,
                                                std::size_t n,
                                                std::size_t block_count,
                                                const PrivacyBudget& budget,
                                                const Confidence& confidence) {
  std::vector<PreconditionCheck> checks =
      BlockCountChecks(block_count, budget, confidence);
  checks.push_back(AtLeast("n >= 33*(rho/sigma)^6*K", static_cast<double>(n),
                           33.0 * MomentRatio6(profile) *
                               static_cast<double>(block_count)));
  return checks;
}

absl::StatusOr<double> MomEta(const MomentProfile& profile, std::size_t n,
                              std::size_t block_count,
                              const PrivacyBudget& budget,
                              const Confidence& confidence, double constant) {
  if (block_count == 0 || block_count > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "block count K=%d must lie in [1, n=%d]", block_count, n));
  }
  if (absl::Status s =
          FailedChecks(BlockCountChecks(block_count, budget, confidence));
      !s.ok()) {
    return absl::FailedPreconditionError(
        absl::StrCat("block count below threshold: ", s.message()));
  }
  return MomEtaValue(profile, n, block_count, constant);
}

BoundTerms MomErrorBound(const MomentProfile& profile, std::size_t n,
                         std::size_t block_count, double eta,
                         const PrivacyBudget& budget,
                         const Confidence& confidence) {
  const double sigma = profile.sigma();
  const double nd = static_cast<double>(n);
  BoundTerms terms;
  terms.sampling =
      sigma * 3.0 * std::sqrt(std::log(4.0 / confidence.tau()) / (2.0 * nd));
  terms.bias = sigma * 1.43 * static_cast<double>(block_count) *
               std::pow(profile.rho() / sigma, 3) / nd;
  terms.privacy = PrivacyTerm(eta, budget, confidence);
  return terms;
}

absl::StatusOr<DpEstimateReport> DpMom(const Sample& sample,
                                       const MomentProfile& profile,
                                       std::size_t block_count,
                                       const PrivacyBudget& budget,
                                       const Confidence& confidence,
                                       const PtrDraws& draws,
                                       const EstimatorOptions& options) {
  const std::size_t n = sample.size();
  if (block_count == 0 || block_count > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "block count K=%d must lie in [1, n=%d]", block_count, n));
  }
  const double eta =
      MomEtaValue(profile, n, block_count, options.mom_eta_constant);
  return MomRelease(
      sample, block_count, eta, budget, confidence, draws,
      MomPreconditions(profile, n, block_count, budget, confidence),
      MomErrorBound(profile, n, block_count, eta, budget, confidence),
      options);
}

absl::StatusOr<DpEstimateReport> DpMom(const Sample& sample,
                                       const MomentProfile& profile,
                                       std::size_t block_count,
                                       const PrivacyBudget& budget,
                                       const Confidence& confidence,
                                       NoiseSource& source,
                                       const EstimatorOptions& options) {
  return DpMom(sample, profile, block_count, budget, confidence,
               DrawPtrNoise(PtrVariant::kGaussian, source), options);
}

std::vector<PreconditionCheck> MomDensityPreconditions(
    const MomentProfile& profile, std::size_t n, std::size_t block_count,
    const PrivacyBudget& budget, const Confidence& confidence,
    bool data_has_density) {
  std::vector<PreconditionCheck> checks =
      BlockCountChecks(block_count, budget, confidence);
  checks.push_back(AtLeast("n >= 10*(rho/sigma)^6*K", static_cast<double>(n),
                           10.0 * MomentRatio6(profile) *
                               static_cast<double>(block_count)));
  checks.push_back(AtLeast("data has a density (caller-asserted)",
                           data_has_density ? 1.0 : 0.0, 1.0));
  return checks;
}

absl::StatusOr<double> MomDensityEta(const MomentProfile& profile,
                                     std::size_t n, std::size_t block_count,
                                     const PrivacyBudget& budget,
                                     const Confidence& confidence) {
  if (block_count == 0 || block_count > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "block count K=%d must lie in [1, n=%d]", block_count, n));
  }
  if (n % block_count != 0) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "non-integer block size: n=%d is not a multiple of K=%d; drop "
        "n mod K = %d points first",
        n, block_count, n % block_count));
  }
  if (absl::Status s = FailedChecks(MomDensityPreconditions(
          profile, n, block_count, budget, confidence, true));
      !s.ok()) {
    return s;
  }
  return MomDensityEtaValue(profile, n, block_count, budget, confidence);
}

BoundTerms MomDensityErrorBound(const MomentProfile& profile, std::size_t n,
                                std::size_t block_count,
                                const PrivacyBudget& budget,
                                const Confidence& confidence) {
  const double sigma = profile.sigma();
  const double nd = static_cast<double>(n);
  BoundTerms terms;
  terms.sampling = 3.0 * std::sqrt(sigma * sigma *
                                   std::log(4.0 / confidence.tau()) /
                                   (2.0 * nd));
  terms.bias = 1.43 * std::pow(profile.rho(), 3) *
               static_cast<double>(block_count) / (sigma * sigma * nd);
  terms.privacy = PrivacyTerm(
      MomDensityEtaValue(profile, n, block_count, budget, confidence), budget,
      confidence);
  return terms;
}

absl::StatusOr<DpEstimateReport> DpMomDensity(
    const Sample& sample, const MomentProfile& profile,
    std::size_t block_count, const PrivacyBudget& budget,
    const Confidence& confidence, const PtrDraws& draws,
    const EstimatorOptions& options) {
  const std::size_t n = sample.size();
  if (block_count == 0 || block_count > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "block count K=%d must lie in [1, n=%d]", block_count, n));
  }
  if (n % block_count != 0) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "non-integer block size: n=%d is not a multiple of K=%d; drop "
        "n mod K = %d points first",
        n, block_count, n % block_count));
  }
  const double eta =
      MomDensityEtaValue(profile, n, block_count, budget, confidence);
  return MomRelease(sample, block_count, eta, budget, confidence, draws,
                    MomDensityPreconditions(profile, n, block_count, budget,
                                            confidence,
                                            options.data_has_density),
                    MomDensityErrorBound(profile, n, block_count, budget,
                                         confidence),
                    options);
}

absl::StatusOr<DpEstimateReport> DpMomDensity(
    const Sample& sample, const MomentProfile& profile,
    std::size_t block_count, const PrivacyBudget& budget,
    const Confidence& confidence, NoiseSource& source,
    const EstimatorOptions& options) {
  return DpMomDensity(sample, profile, block_count, budget, confidence,
                      DrawPtrNoise(PtrVariant::kGaussian, source), options);
}

}  // namespace ptrdp
