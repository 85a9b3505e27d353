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

#include "ptrdp/distributions.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace ptrdp {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double NormalPdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double StudentTPdf(double t, double nu) {
  const double log_norm = std::lgamma((nu + 1.0) / 2.0) -
                          std::lgamma(nu / 2.0) -
                          0.5 * std::log(nu * std::numbers::pi);
  return std::exp(log_norm - (nu + 1.0) / 2.0 * std::log1p(t * t / nu));
}

// E|X - center|^3 for a density supported on [lower, inf), split at the
// center so each piece is smooth.
template <typename Pdf>
double ThirdAbsoluteMoment(Pdf pdf, double lower, double center) {
  auto integrand = [&](double x) {
    const double p = pdf(x);
    if (p == 0.0) return 0.0;
    const double d = std::abs(x - center);
    return d * d * d * p;
  };
  double left = 0.0;
  if (center > lower) {
    left = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, lower, center, /*max_depth=*/15, /*tol=*/1e-12);
  }
  boost::math::quadrature::exp_sinh<double> tail;
  const double right = tail.integrate(
      [&](double u) { return integrand(center + u); }, 0.0,
      std::numeric_limits<double>::infinity());
  return left + right;
}

absl::StatusOr<MomentProfile> Moments(double mu, double sigma, double rho3) {
  // Guard against the quadrature landing a hair under the Lyapunov bound.
  const double rho = std::max(std::cbrt(rho3), sigma);
  return MomentProfile::Create(mu, sigma, rho);
}

// Marsaglia-Tsang; shape >= 1.
double SampleGamma(double shape, NoiseSource& source) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x;
    double v;
    do {
      x = SampleGaussian(source);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = source.Uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

}  // namespace

absl::StatusOr<DistributionSpec> DistributionSpec::Normal(double mu,
                                                          double sigma) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "unsupported normal parameters mu=%g sigma=%g", mu, sigma));
  }
  absl::StatusOr<MedianProfile> median =
      MedianProfile::Create(kSqrt2 * sigma, NormalPdf(kSqrt2) / sigma);
  if (!median.ok()) return median.status();
  // E|Z|^3 = 2 sqrt(2/pi).
  absl::StatusOr<MomentProfile> moments = Moments(
      mu, sigma,
      std::pow(sigma, 3) * 2.0 * std::sqrt(2.0 / std::numbers::pi));
  if (!moments.ok()) return moments.status();
  return DistributionSpec(Family::kNormal, mu, sigma, 0.0, 0.0, mu, *median,
                          *moments);
}

absl::StatusOr<DistributionSpec> DistributionSpec::StudentT(double nu,
                                                            double loc,
                                                            double scale) {
  if (!std::isfinite(nu) || nu < 4 || !std::isfinite(loc) ||
      !std::isfinite(scale) || scale <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "unsupported student-t parameters nu=%g loc=%g scale=%g (need nu >= "
        "4, scale > 0)",
        nu, loc, scale));
  }
  const double r = kSqrt2 * scale;
  absl::StatusOr<MedianProfile> median =
      MedianProfile::Create(r, StudentTPdf(kSqrt2, nu) / scale);
  if (!median.ok()) return median.status();
  const double sigma = scale * std::sqrt(nu / (nu - 2.0));
  // E|T|^3 = nu^{3/2} Gamma((nu-3)/2) / (sqrt(pi) Gamma(nu/2)).
  const double abs3 =
      std::pow(nu, 1.5) *
      std::exp(std::lgamma((nu - 3.0) / 2.0) - std::lgamma(nu / 2.0)) /
      std::sqrt(std::numbers::pi);
  absl::StatusOr<MomentProfile> moments =
      Moments(loc, sigma, std::pow(scale, 3) * abs3);
  if (!moments.ok()) return moments.status();
  return DistributionSpec(Family::kStudentT, nu, loc, scale, 0.0, loc,
                          *median, *moments);
}

absl::StatusOr<DistributionSpec> DistributionSpec::Pareto(double alpha,
                                                          double x_m,
                                                          bool centered) {
  if (!std::isfinite(alpha) || alpha < 4 || !std::isfinite(x_m) ||
      x_m <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "unsupported pareto parameters alpha=%g x_m=%g (need alpha >= 4, "
        "x_m > 0)",
        alpha, x_m));
  }
  const double raw_mean = alpha * x_m / (alpha - 1.0);
  const double raw_median = x_m * std::pow(2.0, 1.0 / alpha);
  const double sigma =
      x_m / (alpha - 1.0) * std::sqrt(alpha / (alpha - 2.0));
  auto pdf = [alpha, x_m](double x) {
    return x < x_m ? 0.0 : alpha * std::pow(x_m, alpha) *
                               std::pow(x, -alpha - 1.0);
  };
  const double r = raw_median - x_m;
  absl::StatusOr<MedianProfile> median =
      MedianProfile::Create(r, pdf(raw_median + r));
  if (!median.ok()) return median.status();
  const double shift = centered ? raw_mean : 0.0;
  absl::StatusOr<MomentProfile> moments =
      Moments(raw_mean - shift, sigma, ThirdAbsoluteMoment(pdf, x_m, raw_mean));
  if (!moments.ok()) return moments.status();
  return DistributionSpec(Family::kPareto, alpha, x_m, 0.0, shift,
                          raw_median - shift, *median, *moments);
}

absl::StatusOr<DistributionSpec> DistributionSpec::LogNormal(double mu,
                                                             double sigma) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || sigma <= 0) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "unsupported lognormal parameters mu=%g sigma=%g", mu, sigma));
  }
  auto pdf = [mu, sigma](double x) {
    if (x <= 0) return 0.0;
    return NormalPdf((std::log(x) - mu) / sigma) / (x * sigma);
  };
  const double m = std::exp(mu);
  const double r = m / 2.0;
  absl::StatusOr<MedianProfile> median =
      MedianProfile::Create(r, std::min(pdf(m - r), pdf(m + r)));
  if (!median.ok()) return median.status();
  const double mean = std::exp(mu + sigma * sigma / 2.0);
  const double sd =
      std::sqrt(std::expm1(sigma * sigma)) * std::exp(mu + sigma * sigma / 2);
  absl::StatusOr<MomentProfile> moments =
      Moments(mean, sd, ThirdAbsoluteMoment(pdf, 0.0, mean));
  if (!moments.ok()) return moments.status();
  return DistributionSpec(Family::kLogNormal, mu, sigma, 0.0, 0.0, m, *median,
                          *moments);
}

std::string DistributionSpec::Describe() const {
  switch (family_) {
    case Family::kNormal:
      return absl::StrFormat("normal(mu=%g,sigma=%g)", p1_, p2_);
    case Family::kStudentT:
      return absl::StrFormat("student_t(nu=%g,loc=%g,scale=%g)", p1_, p2_,
                             p3_);
    case Family::kPareto:
      return absl::StrFormat("pareto(alpha=%g,x_m=%g,centered=%s)", p1_, p2_,
                             shift_ != 0.0 ? "true" : "false");
    case Family::kLogNormal:
      return absl::StrFormat("lognormal(mu=%g,sigma=%g)", p1_, p2_);
  }
  return "unknown";
}

double DistributionSpec::Density(double x) const {
  switch (family_) {
    case Family::kNormal:
      return NormalPdf((x - p1_) / p2_) / p2_;
    case Family::kStudentT:
      return StudentTPdf((x - p2_) / p3_, p1_) / p3_;
    case Family::kPareto: {
      const double raw = x + shift_;
      return raw < p2_ ? 0.0
                       : p1_ * std::pow(p2_, p1_) * std::pow(raw, -p1_ - 1.0);
    }
    case Family::kLogNormal:
      return x <= 0 ? 0.0 : NormalPdf((std::log(x) - p1_) / p2_) / (x * p2_);
  }
  return 0.0;
}

double DistributionSpec::Draw(NoiseSource& source) const {
  switch (family_) {
    case Family::kNormal:
      return p1_ + p2_ * SampleGaussian(source);
    case Family::kStudentT: {
      const double z = SampleGaussian(source);
      const double chi2 = 2.0 * SampleGamma(p1_ / 2.0, source);
      return p2_ + p3_ * z / std::sqrt(chi2 / p1_);
    }
    case Family::kPareto:
      return p2_ * std::pow(source.Uniform(), -1.0 / p1_) - shift_;
    case Family::kLogNormal:
      return std::exp(p1_ + p2_ * SampleGaussian(source));
  }
  return 0.0;
}

absl::StatusOr<Sample> Generate(const DistributionSpec& spec, std::size_t n,
                                NoiseSource& source) {
  std::vector<double> values(n);
  for (double& v : values) v = spec.Draw(source);
  return Sample::Create(std::move(values));
}

}  // namespace ptrdp
