//
// Copyright 2026 The dyngraph-dp Authors.
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

// Seeded noise sources and the one-shot Laplace and Gaussian mechanisms.
//
// Samples are produced by floating-point transforms of a 64-bit counter-based
// stream. They are statistically correct but not hardened against
// floating-point side channels.

#ifndef DYNGRAPH_DP_NOISE_H_
#define DYNGRAPH_DP_NOISE_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dyngraph_dp {

// SplitMix64 finalizer. Used to derive independent seeds.
uint64_t MixSeed(uint64_t x);

// Counter-based 64-bit generator: output i is MixSeed(seed + i * golden).
// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = uint64_t;

  explicit CounterRng(uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform double strictly inside (0, 1).
  double UniformOpen();

 private:
  uint64_t state_;
};

enum class NoiseKind : uint8_t { kNone, kLaplace, kGaussian };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kNone;
  double scale = 0;  // Laplace b or Gaussian sigma
  uint64_t seed = 0;

  static NoiseSpec None() { return {}; }
  static NoiseSpec Laplace(double b, uint64_t seed) {
    return {NoiseKind::kLaplace, b, seed};
  }
  static NoiseSpec Gaussian(double sigma, uint64_t seed) {
    return {NoiseKind::kGaussian, sigma, seed};
  }
};

struct PrivacyParams {
  double eps = 1.0;
  double delta = 0.0;
};

absl::Status CheckPrivacyParams(const PrivacyParams& p);

// Stateful i.i.d. sampler for one NoiseSpec.
class NoiseSampler {
 public:
  // Fails on a nonpositive scale for Laplace or Gaussian.
  static absl::StatusOr<NoiseSampler> Create(const NoiseSpec& spec);

  double Next();
  NoiseKind kind() const { return spec_.kind; }
  double scale() const { return spec_.scale; }
  int64_t draws() const { return draws_; }

 private:
  explicit NoiseSampler(const NoiseSpec& spec)
      : spec_(spec), rng_(spec.seed) {}

  double NextStandardNormal();

  NoiseSpec spec_;
  CounterRng rng_;
  std::optional<double> spare_normal_;
  int64_t draws_ = 0;
};

// n i.i.d. draws from `spec`; kind kNone yields zeros.
absl::StatusOr<std::vector<double>> Sample(const NoiseSpec& spec, int64_t n);

// sigma = sqrt(2 ln(2/delta)) * l2_sensitivity / eps.
double GaussianSigma(double l2_sensitivity, const PrivacyParams& p);

// Returns v + Lap(l1_sensitivity / eps) per coordinate. Requires delta == 0.
// With add_noise == false the input is returned unchanged.
absl::StatusOr<std::vector<double>> LaplaceMechanism(
    std::span<const double> v, double l1_sensitivity, const PrivacyParams& p,
    uint64_t seed, bool add_noise = true);

// Returns v + N(0, sigma^2) per coordinate with sigma from GaussianSigma().
// Requires 0 < delta < 1.
absl::StatusOr<std::vector<double>> GaussianMechanism(
    std::span<const double> v, double l2_sensitivity, const PrivacyParams& p,
    uint64_t seed, bool add_noise = true);

// With probability >= 1 - beta the L-infinity error of the mechanisms above is
// at most this, over k coordinates.
double LaplaceErrorBound(double l1_sensitivity, double eps, int64_t k,
                         double beta);
double GaussianErrorBound(double l2_sensitivity, const PrivacyParams& p,
                          int64_t k, double beta);

}  // namespace dyngraph_dp

#endif  // DYNGRAPH_DP_NOISE_H_
