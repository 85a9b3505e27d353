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

#ifndef PTRDP_DISTRIBUTIONS_H_
#define PTRDP_DISTRIBUTIONS_H_

#include <cstddef>
#include <string>

#include "absl/status/statusor.h"
#include "ptrdp/core_model.h"
#include "ptrdp/noise.h"

namespace ptrdp {

enum class Family { kNormal, kStudentT, kPareto, kLogNormal };

// A data-generating distribution together with the analytic constants the
// estimators are calibrated with. Truth values (population median and mean)
// come from here and are never estimated.
//
// Median profiles use a neighborhood on which the density is unimodal, so the
// density lower bound is min(f(m - r), f(m + r)):
//   normal     r = sqrt(2) sigma
//   student-t  r = sqrt(2) scale
//   pareto     r = m - x_m  (the whole left part of the support)
//   lognormal  r = m / 2
class DistributionSpec {
 public:
  static absl::StatusOr<DistributionSpec> Normal(double mu, double sigma);
  // loc + scale * T_nu, nu >= 4 so that the third moment is finite with room.
  static absl::StatusOr<DistributionSpec> StudentT(double nu, double loc,
                                                   double scale);
  // x_m * U^(-1/alpha), alpha >= 4; `centered` subtracts the mean so the
  // population mean is zero.
  static absl::StatusOr<DistributionSpec> Pareto(double alpha, double x_m,
                                                 bool centered);
  // exp(mu + sigma Z).
  static absl::StatusOr<DistributionSpec> LogNormal(double mu, double sigma);

  Family family() const { return family_; }
  // e.g. "normal(mu=0,sigma=1)".
  std::string Describe() const;

  double Median() const { return median_; }
  double Mean() const { return moments_.mu(); }
  double Density(double x) const;

  const MedianProfile& median_profile() const { return median_profile_; }
  const MomentProfile& moment_profile() const { return moments_; }

  double Draw(NoiseSource& source) const;

 private:
  DistributionSpec(Family family, double p1, double p2, double p3,
                   double shift, double median, MedianProfile median_profile,
                   MomentProfile moments)
      : family_(family),
        p1_(p1),
        p2_(p2),
        p3_(p3),
        shift_(shift),
        median_(median),
        median_profile_(median_profile),
        moments_(moments) {}

  Family family_;
  // normal: mu, sigma; student-t: nu, loc, scale; pareto: alpha, x_m;
  // lognormal: mu, sigma.
  double p1_;
  double p2_;
  double p3_;
  // Subtracted from raw draws (centered Pareto).
  double shift_;
  double median_;
  MedianProfile median_profile_;
  MomentProfile moments_;
};

// n i.i.d. draws; deterministic given the source state.
absl::StatusOr<Sample> Generate(const DistributionSpec& spec, std::size_t n,
                                NoiseSource& source);

}  // namespace ptrdp

#endif  // PTRDP_DISTRIBUTIONS_H_
