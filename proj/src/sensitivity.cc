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

#include "ptrdp/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ptrdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status CheckEta(double eta) {
  if (!std::isfinite(eta) || eta <= 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("eta must be finite and positive, got %g", eta));
  }
  return absl::OkStatus();
}

double ShiftFor(const Sample& sample, std::size_t k, BreakdownRule rule) {
  return rule == BreakdownRule::kEndpoint ? MaxShiftMedian(sample, k)
                                          : WindowShiftMedian(sample, k);
}

double LeftMedianOf(std::vector<double>& scratch) {
  const std::size_t ell = scratch.size() / 2;
  std::nth_element(scratch.begin(), scratch.begin() + (ell - 1),
                   scratch.end());
  return scratch[ell - 1];
}

}  // namespace

absl::StatusOr<double> LocalSensitivityMedian(const Sample& sample) {
  const std::size_t ell = sample.ell();
  if (ell < 2) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sample too small: local sensitivity of the left median needs n >= 4, "
        "got n=%d",
        sample.size()));
  }
  return std::max(sample.OrderStat(ell + 1) - sample.OrderStat(ell),
                  sample.OrderStat(ell) - sample.OrderStat(ell - 1));
}

absl::StatusOr<double> SmoothSensitivityMedianBounded(const Sample& sample,
                                                      double lower,
                                                      double upper,
                                                      double beta) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "domain must be a finite interval with lower < upper, got [%g, %g]",
        lower, upper));
  }
  if (!(beta > 0) || std::isnan(beta)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("beta must be positive, got %g", beta));
  }
  const auto sorted = sample.sorted();
  if (sorted.front() < lower || sorted.back() > upper) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "value out of domain: sample spans [%g, %g] outside [%g, %g]",
        sorted.front(), sorted.back(), lower, upper));
  }
  const auto n = static_cast<std::ptrdiff_t>(sample.size());
  const auto ell = static_cast<std::ptrdiff_t>(sample.ell());
  auto clamped = [&](std::ptrdiff_t i) {
    if (i < 1) return lower;
    if (i > n) return upper;
    return sorted[i - 1];
  };

  const double width = upper - lower;
  double best = 0.0;
  for (std::ptrdiff_t k = 0; k <= n; ++k) {
    const double decay = std::exp(-beta * static_cast<double>(k));
    if (decay * width <= best) break;
    double widest = 0.0;
    for (std::ptrdiff_t t = 0; t <= k + 1; ++t) {
      widest = std::max(widest, clamped(ell + t) - clamped(ell + t - k - 1));
    }
    best = std::max(best, decay * widest);
  }
  return best;
}

double MaxShiftMedian(const Sample& sample, std::size_t k) {
  if (k == 0) return 0.0;
  const std::size_t ell = sample.ell();
  if (ell + k > sample.size() || k >= ell) return kInf;
  return std::max(sample.OrderStat(ell + k) - sample.OrderStat(ell),
                  sample.OrderStat(ell) - sample.OrderStat(ell - k));
}

double WindowShiftMedian(const Sample& sample, std::size_t k) {
  const std::size_t ell = sample.ell();
  // t = 0 needs l - k - 1 >= 1 and t = k + 1 needs l + k + 1 <= n.
  if (ell < k + 2 || ell + k + 1 > sample.size()) return kInf;
  double widest = 0.0;
  for (std::size_t t = 0; t <= k + 1; ++t) {
    widest = std::max(widest, sample.OrderStat(ell + t) -
                                  sample.OrderStat(ell + t - k - 1));
  }
  return widest;
}

absl::StatusOr<BreakdownResult> BreakdownStatMedian(const Sample& sample,
                                                    double eta,
                                                    BreakdownRule rule) {
  if (absl::Status s = CheckEta(eta); !s.ok()) return s;
  if (sample.size() < 2) {
    return absl::InvalidArgumentError(
        "sample too small: the breakdown statistic needs n >= 2");
  }
  BreakdownResult result;
  // The shift is nondecreasing in k and infinite at k = l, so the answer lies
  // in [0, l].
  std::size_t lo = 0;
  std::size_t hi = sample.ell();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const double shift = ShiftFor(sample, mid, rule);
    result.probes.emplace_back(mid, shift);
    if (shift > eta) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  result.k_star = lo;
  result.probes.emplace_back(lo, ShiftFor(sample, lo, rule));
  std::sort(result.probes.begin(), result.probes.end());
  result.probes.erase(std::unique(result.probes.begin(), result.probes.end()),
                      result.probes.end());
  return result;
}

absl::StatusOr<BreakdownResult> BreakdownStatOracle(const Sample& sample,
                                                    double eta) {
  if (absl::Status s = CheckEta(eta); !s.ok()) return s;
  const std::size_t n = sample.size();
  if (n < 2) {
    return absl::InvalidArgumentError(
        "sample too small: the breakdown statistic needs n >= 2");
  }
  if (n > kOracleMaxSampleSize) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sample too large for the exhaustive oracle: n=%d > %d", n,
        kOracleMaxSampleSize));
  }

  const std::vector<double> original(sample.values().begin(),
                                     sample.values().end());
  double max_abs = 0.0;
  for (double v : original) max_abs = std::max(max_abs, std::abs(v));
  // Beyond any finite shift the data can produce.
  const double big = 2.0 * (max_abs + eta + 1.0);

  std::vector<double> scratch(n);
  scratch = original;
  const double base_median = LeftMedianOf(scratch);

  BreakdownResult result;
  result.probes.emplace_back(0, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    double widest = 0.0;
    // Enumerate subsets of size k as bitmasks, then every sign pattern on
    // the chosen coordinates.
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
      for (unsigned signs = 0; signs < (1u << k); ++signs) {
        scratch = original;
        std::size_t bit = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask & (1u << i)) {
            scratch[i] = (signs & (1u << bit)) ? big : -big;
            ++bit;
          }
        }
        const double moved = LeftMedianOf(scratch);
        const double shift = std::abs(moved) == big
                                 ? kInf
                                 : std::abs(moved - base_median);
        widest = std::max(widest, shift);
      }
    }
    result.probes.emplace_back(k, widest);
    if (widest > eta) {
      result.k_star = k;
      return result;
    }
  }
  // Unreachable: k = n replaces everything with +-BIG.
  result.k_star = n;
  return result;
}

}  // namespace ptrdp
