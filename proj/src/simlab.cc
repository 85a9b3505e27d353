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

#include "ptrdp/simlab.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>
#include <utility>

#include <boost/math/special_functions/beta.hpp>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ptrdp/mechanisms.h"
#include "ptrdp/noise.h"

namespace ptrdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Calls fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written to per-index slots; scheduling never affects them.
template <typename Fn>
void ParallelFor(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count;
           i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (std::thread& worker : workers) worker.join();
}

bool IsMedianKind(EstimatorKind kind) {
  return kind == EstimatorKind::kMedian ||
         kind == EstimatorKind::kNonPrivateMedian;
}

// One trial evaluated at one calibration.
struct TrialOutcome {
  bool reply = false;
  double error = kInf;
  DpEstimateReport report;
};

// Data for trial t come from stream 2t and the PTR draws from stream 2t+1;
// every confidence level sees the same data and the same draws.
absl::StatusOr<std::vector<TrialOutcome>> RunTrial(
    const DistributionSpec& spec, EstimatorKind kind, std::size_t n,
    std::size_t block_count, const PrivacyBudget& budget,
    const std::vector<Confidence>& confidences, const EstimatorOptions& options,
    std::uint64_t seed, std::size_t t) {
  NoiseSource data_source(seed, 2 * static_cast<std::uint64_t>(t));
  absl::StatusOr<Sample> sample = Generate(spec, n, data_source);
  if (!sample.ok()) return sample.status();
  NoiseSource noise_source(seed, 2 * static_cast<std::uint64_t>(t) + 1);
  const PtrDraws draws = DrawPtrNoise(PtrVariant::kGaussian, noise_source);
  const double truth = IsMedianKind(kind) ? spec.Median() : spec.Mean();

  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(confidences.size());
  for (const Confidence& confidence : confidences) {
    absl::StatusOr<DpEstimateReport> report;
    switch (kind) {
      case EstimatorKind::kMedian:
        report = DpMedian(*sample, spec.median_profile(), budget, confidence,
                          draws, options);
        break;
      case EstimatorKind::kMom:
        report = DpMom(*sample, spec.moment_profile(), block_count, budget,
                       confidence, draws, options);
        break;
      case EstimatorKind::kMomDensity:
        report = DpMomDensity(*sample, spec.moment_profile(), block_count,
                              budget, confidence, draws, options);
        break;
      case EstimatorKind::kNonPrivateMedian: {
        absl::StatusOr<double> median = EmpiricalMedian(*sample);
        if (!median.ok()) return median.status();
        DpEstimateReport plain;
        plain.outcome = ReleaseOutcome::Value(*median);
        plain.bound_terms = MedianErrorBound(spec.median_profile(), n, 0.0,
                                             budget, confidence);
        plain.bound_terms.privacy = 0.0;
        plain.theoretical_bound = plain.bound_terms.total();
        report = std::move(plain);
        break;
      }
    }
    if (!report.ok()) return report.status();
    TrialOutcome outcome;
    outcome.reply = report->outcome.is_reply();
    if (outcome.reply) outcome.error = std::abs(report->outcome.value() - truth);
    outcome.report = *std::move(report);
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

// Runs all trials and returns outcomes[trial][confidence index].
absl::StatusOr<std::vector<std::vector<TrialOutcome>>> RunTrials(
    const DistributionSpec& spec, EstimatorKind kind, std::size_t n,
    std::size_t block_count, const PrivacyBudget& budget,
    const std::vector<Confidence>& confidences, const EstimatorOptions& options,
    std::uint64_t seed, std::size_t trials, unsigned threads) {
  std::vector<std::optional<absl::StatusOr<std::vector<TrialOutcome>>>> slots(
      trials);
  ParallelFor(trials, threads, [&](std::size_t t) {
    slots[t] = RunTrial(spec, kind, n, block_count, budget, confidences,
                        options, seed, t);
  });
  std::vector<std::vector<TrialOutcome>> outcomes;
  outcomes.reserve(trials);
  for (auto& slot : slots) {
    if (!slot->ok()) return slot->status();
    outcomes.push_back(*std::move(*slot));
  }
  return outcomes;
}

absl::Status ValidateRun(std::size_t n, std::size_t trials) {
  if (trials == 0) return absl::InvalidArgumentError("trials must be positive");
  if (n < 2) return absl::InvalidArgumentError("n must be at least 2");
  return absl::OkStatus();
}

}  // namespace

const char* EstimatorKindName(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kMedian:
      return "median";
    case EstimatorKind::kMom:
      return "mom";
    case EstimatorKind::kMomDensity:
      return "mom_density";
    case EstimatorKind::kNonPrivateMedian:
      return "nonprivate_median";
  }
  return "unknown";
}

RateEstimate ClopperPearson(std::size_t successes, std::size_t trials,
                            double level) {
  RateEstimate estimate;
  estimate.successes = successes;
  estimate.trials = trials;
  if (trials == 0) return estimate;
  const double x = static_cast<double>(successes);
  const double m = static_cast<double>(trials);
  const double alpha = 1.0 - level;
  estimate.rate = x / m;
  estimate.lower =
      successes == 0 ? 0.0 : boost::math::ibeta_inv(x, m - x + 1, alpha / 2);
  estimate.upper = successes == trials
                       ? 1.0
                       : boost::math::ibeta_inv(x + 1, m - x, 1 - alpha / 2);
  return estimate;
}

double EmpiricalQuantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t m = values.size();
  // The slack keeps q * m from rounding up past an exact integer.
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(m) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, m);
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

absl::StatusOr<ExperimentReport> RunCoverage(const DistributionSpec& spec,
                                             const CoverageConfig& config,
                                             const PrivacyBudget& budget,
                                             const Confidence& confidence) {
  if (absl::Status s = ValidateRun(config.n, config.trials); !s.ok()) return s;
  absl::StatusOr<std::vector<std::vector<TrialOutcome>>> outcomes =
      RunTrials(spec, config.kind, config.n, config.block_count, budget,
                {confidence}, config.options, config.seed, config.trials,
                config.threads);
  if (!outcomes.ok()) return outcomes.status();

  ExperimentReport report;
  report.distribution = spec.Describe();
  report.kind = config.kind;
  report.n = config.n;
  report.block_count = IsMedianKind(config.kind) ? 0 : config.block_count;
  report.trials = config.trials;
  report.seed = config.seed;
  report.truth = IsMedianKind(config.kind) ? spec.Median() : spec.Mean();

  // Calibration is data independent, so any trial carries it.
  const DpEstimateReport& first = (*outcomes)[0][0].report;
  report.eta = first.eta_used;
  report.c = first.c_used;
  report.bound_terms = first.bound_terms;
  report.theoretical_bound = first.theoretical_bound;
  report.precondition_checks = first.precondition_checks;

  std::size_t covered = 0;
  std::size_t noreply = 0;
  report.errors.reserve(config.trials);
  for (const std::vector<TrialOutcome>& trial : *outcomes) {
    const TrialOutcome& outcome = trial[0];
    if (!outcome.reply) ++noreply;
    if (outcome.reply && outcome.error <= report.theoretical_bound) ++covered;
    report.errors.push_back(outcome.error);
  }
  report.coverage = ClopperPearson(covered, config.trials);
  report.noreply = ClopperPearson(noreply, config.trials);
  for (double tau : kReportTaus) {
    report.error_quantiles[tau] = EmpiricalQuantile(report.errors, 1.0 - tau);
  }
  return report;
}

absl::StatusOr<SlopeFit> FitLogLogSlope(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    return absl::InvalidArgumentError(
        "slope fit needs two equally long series of length >= 2");
  }
  const std::size_t m = x.size();
  std::vector<double> lx(m);
  std::vector<double> ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0) || !std::isfinite(x[i]) ||
        !std::isfinite(y[i])) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "slope fit needs positive finite points, got (%g, %g)", x[i], y[i]));
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mean_x = 0;
  double mean_y = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mean_x += lx[i];
    mean_y += ly[i];
  }
  mean_x /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);
  double sxx = 0;
  double sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mean_x) * (lx[i] - mean_x);
    sxy += (lx[i] - mean_x) * (ly[i] - mean_y);
  }
  if (sxx == 0) {
    return absl::InvalidArgumentError("slope fit needs distinct x values");
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  return fit;
}

absl::StatusOr<ScalingTable> RunScaling(const DistributionSpec& spec,
                                        const ScalingConfig& config,
                                        const PrivacyBudget& budget) {
  if (config.n_grid.empty() || config.tau_grid.empty()) {
    return absl::InvalidArgumentError("scaling grids must be non-empty");
  }
  if (!IsMedianKind(config.kind) && !config.block_count_for_n) {
    return absl::InvalidArgumentError(
        "median-of-means scaling needs a block count rule");
  }
  std::vector<Confidence> confidences;
  for (double tau : config.tau_grid) {
    absl::StatusOr<Confidence> confidence = Confidence::Create(tau);
    if (!confidence.ok()) return confidence.status();
    confidences.push_back(*confidence);
  }

  ScalingTable table;
  table.distribution = spec.Describe();
  table.kind = config.kind;
  table.seed = config.seed;
  for (std::size_t n_nominal : config.n_grid) {
    std::size_t n = n_nominal;
    std::size_t k = 0;
    if (!IsMedianKind(config.kind)) {
      k = config.block_count_for_n(n_nominal);
      if (k == 0 || k > n_nominal) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "block count %d invalid for n=%d", k, n_nominal));
      }
      if (config.kind == EstimatorKind::kMomDensity) n = (n / k) * k;
    }
    if (absl::Status s = ValidateRun(n, config.trials); !s.ok()) {
      return s;
    }
    absl::StatusOr<std::vector<std::vector<TrialOutcome>>> outcomes =
        RunTrials(spec, config.kind, n, k, budget, confidences, config.options,
                  config.seed, config.trials, config.threads);
    if (!outcomes.ok()) return outcomes.status();

    for (std::size_t j = 0; j < confidences.size(); ++j) {
      std::vector<double> errors;
      errors.reserve(config.trials);
      std::size_t noreply = 0;
      for (const std::vector<TrialOutcome>& trial : *outcomes) {
        errors.push_back(trial[j].error);
        if (!trial[j].reply) ++noreply;
      }
      ScalingCell cell;
      cell.n = n;
      cell.block_count = k;
      cell.tau = config.tau_grid[j];
      cell.quantile = EmpiricalQuantile(std::move(errors), 1.0 - cell.tau);
      cell.noreply_rate =
          static_cast<double>(noreply) / static_cast<double>(config.trials);
      cell.bound_terms = (*outcomes)[0][j].report.bound_terms;
      cell.eta = (*outcomes)[0][j].report.eta_used;
      table.cells.push_back(cell);
    }
  }

  // A fit over a series containing an infinite quantile (no-reply mass above
  // tau) is reported as NaN rather than dropped.
  auto add_fit = [&](std::string label, const std::vector<double>& x,
                     const std::vector<double>& y) {
    absl::StatusOr<SlopeFit> fit = FitLogLogSlope(x, y);
    SlopeFit result;
    if (fit.ok()) {
      result = *fit;
    } else {
      result.slope = std::numeric_limits<double>::quiet_NaN();
      result.intercept = std::numeric_limits<double>::quiet_NaN();
    }
    result.label = std::move(label);
    table.fits.push_back(std::move(result));
  };
  for (double tau : config.tau_grid) {
    std::vector<double> ns;
    std::vector<double> quantiles;
    std::vector<double> privacy;
    for (const ScalingCell& cell : table.cells) {
      if (cell.tau != tau) continue;
      ns.push_back(static_cast<double>(cell.n));
      quantiles.push_back(cell.quantile);
      privacy.push_back(cell.bound_terms.privacy);
    }
    if (ns.size() < 2) continue;
    add_fit(absl::StrFormat("n|tau=%g", tau), ns, quantiles);
    if (config.kind != EstimatorKind::kNonPrivateMedian) {
      add_fit(absl::StrFormat("privacy|tau=%g", tau), ns, privacy);
    }
  }
  if (config.tau_grid.size() >= 2) {
    for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
      std::vector<double> log_inv_tau;
      std::vector<double> quantiles;
      const std::size_t base = i * config.tau_grid.size();
      for (std::size_t j = 0; j < config.tau_grid.size(); ++j) {
        log_inv_tau.push_back(std::log(1.0 / config.tau_grid[j]));
        quantiles.push_back(table.cells[base + j].quantile);
      }
      add_fit(absl::StrFormat("tau|n=%d", table.cells[base].n), log_inv_tau,
              quantiles);
    }
  }
  return table;
}

}  // namespace ptrdp
