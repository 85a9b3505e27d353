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

#ifndef PTRDP_CORE_MODEL_H_
#define PTRDP_CORE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace ptrdp {

// A validated batch of finite reals together with its order statistics.
//
// Order-statistic accessors are 1-based, so OrderStat(1) is the minimum and
// OrderStat(ell()) is the left median x_(floor(n/2)). For n odd the left
// median is deliberately *not* the middle element: {1,2,3,4,5} has left
// median 2.
class Sample {
 public:
  // Fails with InvalidArgument on empty input or on any NaN/inf entry (the
  // message carries the 0-based index of the first offending value).
  static absl::StatusOr<Sample> Create(std::span<const double> values);
  static absl::StatusOr<Sample> Create(std::vector<double> values);

  // Values in input order.
  std::span<const double> values() const { return values_; }
  // Values in nondecreasing order.
  std::span<const double> sorted() const { return sorted_; }

  std::size_t size() const { return values_.size(); }
  // floor(n/2); zero for a single point, which no median operation accepts.
  std::size_t ell() const { return values_.size() / 2; }

  // x_(i) for 1 <= i <= n.
  double OrderStat(std::size_t i) const { return sorted_[i - 1]; }

 private:
  explicit Sample(std::vector<double> values);

  std::vector<double> values_;
  std::vector<double> sorted_;
};

class PrivacyBudget {
 public:
  // epsilon > 0 and finite, 0 < delta < 1.
  static absl::StatusOr<PrivacyBudget> Create(double epsilon, double delta);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }

 private:
  PrivacyBudget(double epsilon, double delta)
      : epsilon_(epsilon), delta_(delta) {}

  double epsilon_;
  double delta_;
};

// Failure level tau of a high-probability statement, 0 < tau < 1.
class Confidence {
 public:
  static absl::StatusOr<Confidence> Create(double tau);

  double tau() const { return tau_; }

 private:
  explicit Confidence(double tau) : tau_(tau) {}

  double tau_;
};

// Threshold constant gating every PTR calibration:
//   C = 1 + (2 log(1.25/delta) + 2 sqrt(log(2/tau) log(1.25/delta))) / epsilon.
double ComputeC(const PrivacyBudget& budget, const Confidence& confidence);

enum class PtrVariant { kLaplace, kGaussian };

const char* PtrVariantName(PtrVariant variant);

// Noise constants of one propose-test-release configuration.
//
//   Laplace:  a_delta = 1,                       b_delta = log(2/delta)
//   Gaussian: a_delta = sqrt(2 log(1.25/delta)), b_delta = 2 log(1.25/delta)
class PtrConfig {
 public:
  static absl::StatusOr<PtrConfig> Create(double eta, PtrVariant variant,
                                          const PrivacyBudget& budget,
                                          const Confidence& confidence);

  double eta() const { return eta_; }
  PtrVariant variant() const { return variant_; }
  double a_delta() const { return a_delta_; }
  double b_delta() const { return b_delta_; }
  double c() const { return c_; }
  const PrivacyBudget& budget() const { return budget_; }

  // The release test fails (no reply) when the noisy breakdown statistic is
  // at or below 1 + b_delta / epsilon.
  double NoReplyThreshold() const {
    return 1.0 + b_delta_ / budget_.epsilon();
  }

 private:
  PtrConfig(double eta, PtrVariant variant, double a_delta, double b_delta,
            double c, PrivacyBudget budget)
      : eta_(eta),
        variant_(variant),
        a_delta_(a_delta),
        b_delta_(b_delta),
        c_(c),
        budget_(budget) {}

  double eta_;
  PtrVariant variant_;
  double a_delta_;
  double b_delta_;
  double c_;
  PrivacyBudget budget_;
};

// Either a released real value or the non-numeric "no reply" symbol.
class ReleaseOutcome {
 public:
  static ReleaseOutcome Value(double v) { return ReleaseOutcome(v); }
  static ReleaseOutcome NoReply() { return ReleaseOutcome(std::nullopt); }

  bool is_reply() const { return value_.has_value(); }
  // Only valid when is_reply().
  double value() const { return *value_; }

  friend bool operator==(const ReleaseOutcome&,
                         const ReleaseOutcome&) = default;

 private:
  explicit ReleaseOutcome(std::optional<double> v) : value_(v) {}

  std::optional<double> value_;
};

// Density lower bound L on the neighborhood [m - r, m + r] of the population
// median. F(m) - F(m - r) >= L r and F(m) = 1/2 force r L <= 1/2.
class MedianProfile {
 public:
  static absl::StatusOr<MedianProfile> Create(double r, double l);

  double r() const { return r_; }
  double l() const { return l_; }

 private:
  MedianProfile(double r, double l) : r_(r), l_(l) {}

  double r_;
  double l_;
};

// First three central moments; rho^3 = E|X - mu|^3, so rho >= sigma.
class MomentProfile {
 public:
  static absl::StatusOr<MomentProfile> Create(double mu, double sigma,
                                              double rho);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double rho() const { return rho_; }

 private:
  MomentProfile(double mu, double sigma, double rho)
      : mu_(mu), sigma_(sigma), rho_(rho) {}

  double mu_;
  double sigma_;
  double rho_;
};

// Median-of-means blocking: K blocks over n points, block size N = n / K.
class MomConfig {
 public:
  static absl::StatusOr<MomConfig> Create(std::size_t block_count,
                                          std::size_t n);

  std::size_t block_count() const { return block_count_; }
  std::size_t block_size() const { return block_size_; }
  std::size_t n() const { return n_; }

 private:
  MomConfig(std::size_t k, std::size_t n)
      : block_count_(k), block_size_(n / k), n_(n) {}

  std::size_t block_count_;
  std::size_t block_size_;
  std::size_t n_;
};

}  // namespace ptrdp

#endif  // PTRDP_CORE_MODEL_H_
