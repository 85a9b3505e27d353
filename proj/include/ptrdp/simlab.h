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

#ifndef PTRDP_SIMLAB_H_
#define PTRDP_SIMLAB_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "ptrdp/core_model.h"
#include "ptrdp/distributions.h"
#include "ptrdp/estimators.h"

namespace ptrdp {

enum class EstimatorKind {
  kMedian,
  kMom,
  kMomDensity,
  // Left median without noise, scored against the sampling term of the
  // median bound. Baseline for the private runs.
  kNonPrivateMedian,
};

const char* EstimatorKindName(EstimatorKind kind);

// A binomial proportion with its exact (Clopper-Pearson) interval.
struct RateEstimate {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  double lower = 0.0;
  double upper = 1.0;
};

// Two-sided Clopper-Pearson interval at the given confidence level.
RateEstimate ClopperPearson(std::size_t successes, std::size_t trials,
                            double level = 0.95);

// Empirical q-quantile (type 1: the ceil(q * m)-th smallest of m values);
// infinite entries sort last.
double EmpiricalQuantile(std::vector<double> values, double q);

// The failure levels at which every ExperimentReport records an error
// quantile. The recorded value is the empirical (1 - tau)-quantile.
inline constexpr double kReportTaus[] = {0.5, 0.1, 0.05, 0.01};

struct ExperimentReport {
  std::string distribution;
  EstimatorKind kind = EstimatorKind::kMedian;
  std::size_t n = 0;
  std::size_t block_count = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  // Reply produced and |estimate - truth| <= theoretical_bound.
  RateEstimate coverage;
  RateEstimate noreply;
  // tau -> empirical (1 - tau)-quantile of |estimate - truth|, with no-reply
  // trials counted as infinite error.
  std::map<double, double> error_quantiles;

  double truth = 0.0;
  double eta = 0.0;
  double c = 0.0;
  BoundTerms bound_terms;
  double theoretical_bound = 0.0;
  std::vector<PreconditionCheck> precondition_checks;

  // Per-trial absolute error in trial order; +infinity on no reply.
  std::vector<double> errors;
};

struct CoverageConfig {
  EstimatorKind kind = EstimatorKind::kMedian;
  std::size_t n = 0;
  // Ignored by the median kinds.
  std::size_t block_count = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  EstimatorOptions options;
  // 0 uses the hardware concurrency.
  unsigned threads = 0;
};

// Runs `trials` independent replications. Trial t draws its data from
// NoiseSource(seed, 2t) and its mechanism noise from NoiseSource(seed, 2t+1),
// so the report is a pure function of (spec, config, budget, confidence) no
// matter how trials are scheduled. The first failing trial (by index) turns
// the whole run into that error.
absl::StatusOr<ExperimentReport> RunCoverage(const DistributionSpec& spec,
                                             const CoverageConfig& config,
                                             const PrivacyBudget& budget,
                                             const Confidence& confidence);

struct ScalingConfig {
  EstimatorKind kind = EstimatorKind::kMedian;
  std::vector<std::size_t> n_grid;
  std::vector<double> tau_grid;
  // Block count for a given n; required for the median-of-means kinds.
  std::function<std::size_t(std::size_t)> block_count_for_n;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  EstimatorOptions options;
  unsigned threads = 0;
};

struct ScalingCell {
  std::size_t n = 0;
  std::size_t block_count = 0;
  double tau = 0.0;
  // Empirical (1 - tau)-quantile of the error at the calibration for tau.
  double quantile = 0.0;
  double noreply_rate = 0.0;
  BoundTerms bound_terms;
  double eta = 0.0;
};

struct SlopeFit {
  std::string label;
  double slope = 0.0;
  double intercept = 0.0;
};

struct ScalingTable {
  std::string distribution;
  EstimatorKind kind = EstimatorKind::kMedian;
  std::uint64_t seed = 0;
  std::vector<ScalingCell> cells;
  // Per tau: slope of log quantile against log n ("n|tau=...").
  // Per n: slope of log quantile against log log(1/tau) ("tau|n=...").
  // Per tau: slope of the log privacy term against log n ("privacy|tau=...").
  std::vector<SlopeFit> fits;
};

// Least-squares line through (log x, log y). Needs two distinct x values and
// positive, finite inputs.
absl::StatusOr<SlopeFit> FitLogLogSlope(const std::vector<double>& x,
                                        const std::vector<double>& y);

// For every n, data and noise are shared across the tau grid (the same seed
// schedule as RunCoverage); only the calibration changes with tau. The
// density kind truncates n to a multiple of K before sampling.
absl::StatusOr<ScalingTable> RunScaling(const DistributionSpec& spec,
                                        const ScalingConfig& config,
                                        const PrivacyBudget& budget);

}  // namespace ptrdp

#endif  // PTRDP_SIMLAB_H_
