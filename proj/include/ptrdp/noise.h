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

#ifndef PTRDP_NOISE_H_
#define PTRDP_NOISE_H_

#include <cstdint>
#include <random>

namespace ptrdp {

// Reproducible random stream keyed by (seed, stream_id).
//
// The engine is mt19937_64 seeded through std::seed_seq, both of which have a
// fully specified output sequence, and every transform below is written out
// by hand rather than delegated to the implementation-defined <random>
// distributions. The same key therefore yields the same draws on any
// conforming standard library. Distinct stream ids key unrelated seed
// sequences, which is how parallel trials get independent streams.
//
// Not cryptographically hardened; floating-point attacks on the noise are out
// of scope.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t NextBits() { return engine_(); }

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double Uniform();

  // Uniform integer in [0, bound), bound > 0.
  std::uint64_t UniformIndex(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

// Inverse CDF of Lap(lambda) evaluated at u in (-1/2, 1/2):
// -sign(u) log(1 - 2|u|) / lambda.
double LaplaceFromUniform(double u, double lambda);

// Draw from the density (lambda/2) exp(-lambda |x|). One uniform per call.
double SampleLaplace(double lambda, NoiseSource& source);

// Standard normal via Box-Muller, keeping only the cosine branch so that
// every call consumes exactly two uniforms.
double SampleGaussian(NoiseSource& source);

}  // namespace ptrdp

#endif  // PTRDP_NOISE_H_
