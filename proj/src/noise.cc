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

#include "ptrdp/noise.h"

#include <cmath>
#include <numbers>

namespace ptrdp {
namespace {

std::mt19937_64 MakeEngine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

NoiseSource::NoiseSource(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(MakeEngine(seed, stream_id)) {}

double NoiseSource::Uniform() {
  // Midpoints of the 2^53 grid cells, so neither 0 nor 1 is reachable.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t NoiseSource::UniformIndex(std::uint64_t bound) {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t bits;
  do {
    bits = engine_();
  } while (bits >= limit);
  return bits % bound;
}

double LaplaceFromUniform(double u, double lambda) {
  if (u == 0.0) return 0.0;
  const double magnitude = -std::log1p(-2.0 * std::abs(u)) / lambda;
  return u > 0 ? magnitude : -magnitude;
}

double SampleLaplace(double lambda, NoiseSource& source) {
  return LaplaceFromUniform(source.Uniform() - 0.5, lambda);
}

double SampleGaussian(NoiseSource& source) {
  const double u1 = source.Uniform();
  const double u2 = source.Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace ptrdp
