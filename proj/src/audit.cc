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

#include "ptrdp/audit.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "ptrdp/estimators.h"
#include "ptrdp/sensitivity.h"

namespace ptrdp {
namespace {

absl::Status CheckNeighbors(const Sample& x, const Sample& x_prime) {
  if (x.size() != x_prime.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "not neighbors: sizes differ (%d vs %d)", x.size(), x_prime.size()));
  }
  std::size_t differing = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.values()[i] != x_prime.values()[i]) ++differing;
  }
  if (differing > 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "not neighbors: %d coordinates differ, at most 1 allowed", differing));
  }
  return absl::OkStatus();
}

// Bin index of an outcome: numeric bins by upper edge, no reply last.
std::size_t BinOf(const std::optional<double>& value,
                  const std::vector<double>& edges) {
  if (!value.has_value()) return edges.size() + 1;
  return static_cast<std::size_t>(
      std::lower_bound(edges.begin(), edges.end(), *value) - edges.begin());
}

double OneSidedLoss(const std::vector<std::size_t>& num,
                    const std::vector<std::size_t>& den, std::size_t trials,
                    const AuditConfig& config) {
  const double m = static_cast<double>(trials);
  const double floor = 1.0 / m;
  double worst = 0.0;
  for (std::size_t b = 0; b < num.size(); ++b) {
    if (num[b] < config.min_count) continue;
    const double p = static_cast<double>(num[b]) / m;
    const double q = std::max(static_cast<double>(den[b]) / m, floor);
    worst = std::max(worst, std::log(std::max(p - config.target_delta, floor) / q));
  }
  return worst;
}

double SymmetricLoss(const std::vector<std::size_t>& a,
                     const std::vector<std::size_t>& b, std::size_t trials,
                     const AuditConfig& config) {
  return std::max(OneSidedLoss(a, b, trials, config),
                  OneSidedLoss(b, a, trials, config));
}

std::vector<std::size_t> Histogram(const std::vector<std::size_t>& bin_of_run,
                                   std::size_t bin_count) {
  std::vector<std::size_t> counts(bin_count, 0);
  for (std::size_t b : bin_of_run) ++counts[b];
  return counts;
}

// Left median on a sample that the breakdown statistic has already vetted.
PtrMechanism MedianPtr(const PtrConfig& config) {
  return PtrMechanism(
      config, [](const Sample& s) { return EmpiricalMedian(s); },
      [](const Sample& s, double eta) -> absl::StatusOr<std::size_t> {
        absl::StatusOr<BreakdownResult> r = BreakdownStatMedian(s, eta, BreakdownRule::kWindow);
        if (!r.ok()) return r.status();
        return r->k_star;
      });
}

OutputSampler PtrSampler(PtrMechanism mechanism) {
  return [mechanism = std::move(mechanism)](const Sample& s,
                                            NoiseSource& source) {
    return PtrRelease(mechanism, s, source);
  };
}

}  // namespace

absl::StatusOr<AuditReport> DpAudit(const OutputSampler& sampler,
                                    const Sample& x, const Sample& x_prime,
                                    const AuditConfig& config) {
  if (absl::Status s = CheckNeighbors(x, x_prime); !s.ok()) return s;
  if (config.bins == 0) {
    return absl::InvalidArgumentError("audit needs at least one bin");
  }
  const std::size_t needed = 100 * (config.bins + 1);
  if (config.trials < needed) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "insufficient trials: %d runs per dataset, need at least %d for %d "
        "bins",
        config.trials, needed, config.bins));
  }

  std::vector<std::optional<double>> out_x(config.trials);
  std::vector<std::optional<double>> out_x_prime(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    NoiseSource source_x(config.seed, 2 * static_cast<std::uint64_t>(t));
    absl::StatusOr<ReleaseOutcome> a = sampler(x, source_x);
    if (!a.ok()) return a.status();
    if (a->is_reply()) out_x[t] = a->value();
    NoiseSource source_xp(config.seed, 2 * static_cast<std::uint64_t>(t) + 1);
    absl::StatusOr<ReleaseOutcome> b = sampler(x_prime, source_xp);
    if (!b.ok()) return b.status();
    if (b->is_reply()) out_x_prime[t] = b->value();
  }

  // Equal-mass edges over the pooled numeric outputs.
  std::vector<double> pooled;
  pooled.reserve(2 * config.trials);
  for (const auto& v : out_x) {
    if (v.has_value()) pooled.push_back(*v);
  }
  for (const auto& v : out_x_prime) {
    if (v.has_value()) pooled.push_back(*v);
  }
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> edges;
  if (!pooled.empty()) {
    for (std::size_t j = 1; j < config.bins; ++j) {
      edges.push_back(pooled[j * pooled.size() / config.bins]);
    }
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  const std::size_t bin_count = edges.size() + 2;

  std::vector<std::size_t> bins_x(config.trials);
  std::vector<std::size_t> bins_xp(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    bins_x[t] = BinOf(out_x[t], edges);
    bins_xp[t] = BinOf(out_x_prime[t], edges);
  }

  AuditReport report;
  report.trials = config.trials;
  report.target_delta = config.target_delta;
  report.seed = config.seed;
  report.edges = edges;
  report.counts_x = Histogram(bins_x, bin_count);
  report.counts_x_prime = Histogram(bins_xp, bin_count);
  report.epsilon_hat = SymmetricLoss(report.counts_x, report.counts_x_prime,
                                     config.trials, config);

  // Nonparametric bootstrap over runs, edges held fixed.
  if (config.bootstrap_rounds > 1) {
    NoiseSource boot(config.seed, 2 * static_cast<std::uint64_t>(config.trials));
    std::vector<double> estimates;
    estimates.reserve(config.bootstrap_rounds);
    std::vector<std::size_t> resample_x(config.trials);
    std::vector<std::size_t> resample_xp(config.trials);
    for (std::size_t r = 0; r < config.bootstrap_rounds; ++r) {
      for (std::size_t t = 0; t < config.trials; ++t) {
        resample_x[t] = bins_x[boot.UniformIndex(config.trials)];
        resample_xp[t] = bins_xp[boot.UniformIndex(config.trials)];
      }
      estimates.push_back(SymmetricLoss(Histogram(resample_x, bin_count),
                                        Histogram(resample_xp, bin_count),
                                        config.trials, config));
    }
    double mean = 0;
    for (double e : estimates) mean += e;
    mean /= static_cast<double>(estimates.size());
    double var = 0;
    for (double e : estimates) var += (e - mean) * (e - mean);
    var /= static_cast<double>(estimates.size() - 1);
    report.bootstrap_stddev = std::sqrt(var);
    report.bootstrap_radius = 1.96 * report.bootstrap_stddev;
  }
  return report;
}

absl::StatusOr<AuditReport> DpAudit(const PtrMechanism& mechanism,
                                    const Sample& x, const Sample& x_prime,
                                    const AuditConfig& config) {
  return DpAudit(PtrSampler(mechanism), x, x_prime, config);
}

std::vector<std::string> AuditPresetNames() {
  return {"laplace_global", "ptr_breakdown_boundary", "ptr_median_swing"};
}

absl::StatusOr<AuditPreset> MakeAuditPreset(const std::string& name,
                                            const PrivacyBudget& budget) {
  if (name == "laplace_global") {
    std::vector<double> zeros(10, 0.0);
    std::vector<double> one = zeros;
    one[0] = 1.0;
    absl::StatusOr<Sample> x = Sample::Create(zeros);
    absl::StatusOr<Sample> xp = Sample::Create(one);
    if (!x.ok()) return x.status();
    if (!xp.ok()) return xp.status();
    OutputSampler sampler = [budget](const Sample& s, NoiseSource& source)
        -> absl::StatusOr<ReleaseOutcome> {
      double sum = 0;
      for (double v : s.values()) sum += std::clamp(v, 0.0, 1.0);
      absl::StatusOr<double> out =
          LaplaceGlobalMechanism(sum, 1.0, budget, source);
      if (!out.ok()) return out.status();
      return ReleaseOutcome::Value(*out);
    };
    return AuditPreset{name, std::move(sampler), *std::move(x),
                       *std::move(xp), budget.epsilon(), 0.0};
  }

  absl::StatusOr<Confidence> confidence = Confidence::Create(0.05);
  if (!confidence.ok()) return confidence.status();
  absl::StatusOr<PtrConfig> config =
      PtrConfig::Create(1.0, PtrVariant::kGaussian, budget, *confidence);
  if (!config.ok()) return config.status();
  const PrivacyGuarantee guarantee = PtrGuarantee(*config);

  std::vector<double> a;
  std::vector<double> b;
  if (name == "ptr_breakdown_boundary") {
    // 12 points below, 15 at zero, 13 above: l = 20 sits in the cluster,
    // and the first window to leave it has k = 7. Pulling one cluster point
    // down drops that to 6.
    for (int i = 0; i < 12; ++i) a.push_back(-(10.0 + i));
    for (int i = 0; i < 15; ++i) a.push_back(0.0);
    for (int i = 0; i < 13; ++i) a.push_back(10.0 + i);
    b = a;
    b[12] = -30.0;
  } else if (name == "ptr_median_swing") {
    // Clusters at 0 and 0.95 with a 1e-4 spread: every finite window is
    // narrower than eta = 1, so both sides score 19. Moving one point across
    // flips the median.
    for (int i = 0; i < 20; ++i) a.push_back(1e-4 * i);
    for (int i = 0; i < 20; ++i) a.push_back(0.95 + 1e-4 * i);
    b = a;
    b[0] = 0.95 + 2e-3;
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown audit preset '%s'", name));
  }
  absl::StatusOr<Sample> x = Sample::Create(a);
  absl::StatusOr<Sample> xp = Sample::Create(b);
  if (!x.ok()) return x.status();
  if (!xp.ok()) return xp.status();
  return AuditPreset{name, PtrSampler(MedianPtr(*config)), *std::move(x),
                     *std::move(xp), guarantee.epsilon, guarantee.delta};
}

}  // namespace ptrdp
