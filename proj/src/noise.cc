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

#include "dyngraph_dp/noise.h"

#include <cmath>
#include <numbers>

#include "absl/strings/str_format.h"

namespace dyngraph_dp {

namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}  // namespace

uint64_t MixSeed(uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::result_type CounterRng::operator()() {
  const uint64_t out = MixSeed(state_);
  state_ += kGolden;
  return out;
}

double CounterRng::UniformOpen() {
  // 53 random bits, shifted by half an ulp so 0 and 1 are excluded.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

absl::Status CheckPrivacyParams(const PrivacyParams& p) {
  if (!(p.eps > 0) || !std::isfinite(p.eps)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("eps must be positive, got %g", p.eps));
  }
  if (!(p.delta >= 0 && p.delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must be in [0,1), got %g", p.delta));
  }
  return absl::OkStatus();
}

absl::StatusOr<NoiseSampler> NoiseSampler::Create(const NoiseSpec& spec) {
  if (spec.kind != NoiseKind::kNone &&
      !(spec.scale > 0 && std::isfinite(spec.scale))) {
    return absl::InvalidArgumentError(
        absl::StrFormat("noise scale must be positive, got %g", spec.scale));
  }
  return NoiseSampler(spec);
}

double NoiseSampler::NextStandardNormal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  // Box-Muller.
  const double u1 = rng_.UniformOpen();
  const double u2 = rng_.UniformOpen();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

double NoiseSampler::Next() {
  ++draws_;
  switch (spec_.kind) {
    case NoiseKind::kNone:
      return 0.0;
    case NoiseKind::kLaplace: {
      // Inverse CDF.
      const double u = rng_.UniformOpen();
      return u < 0.5 ? spec_.scale * std::log(2.0 * u)
                     : -spec_.scale * std::log(2.0 * (1.0 - u));
    }
    case NoiseKind::kGaussian:
      return spec_.scale * NextStandardNormal();
  }
  return 0.0;
}

absl::StatusOr<std::vector<double>> Sample(const NoiseSpec& spec, int64_t n) {
  if (n < 0) return absl::InvalidArgumentError("negative sample count");
  absl::StatusOr<NoiseSampler> sampler = NoiseSampler::Create(spec);
  if (!sampler.ok()) return sampler.status();
  std::vector<double> out(n);
  for (double& x : out) x = sampler->Next();
  return out;
}

double GaussianSigma(double l2_sensitivity, const PrivacyParams& p) {
  return std::sqrt(2.0 * std::log(2.0 / p.delta)) * l2_sensitivity / p.eps;
}

namespace {

absl::StatusOr<std::vector<double>> AddNoise(std::span<const double> v,
                                             const NoiseSpec& spec) {
  absl::StatusOr<std::vector<double>> noise = Sample(spec, v.size());
  if (!noise.ok()) return noise.status();
  for (size_t i = 0; i < v.size(); ++i) (*noise)[i] += v[i];
  return noise;
}

}  // namespace

absl::StatusOr<std::vector<double>> LaplaceMechanism(
    std::span<const double> v, double l1_sensitivity, const PrivacyParams& p,
    uint64_t seed, bool add_noise) {
  if (absl::Status s = CheckPrivacyParams(p); !s.ok()) return s;
  if (p.delta != 0) {
    return absl::InvalidArgumentError(
        "the Laplace mechanism is pure DP; delta must be 0");
  }
  if (!(l1_sensitivity > 0)) {
    return absl::InvalidArgumentError("L1 sensitivity must be positive");
  }
  if (!add_noise) return std::vector<double>(v.begin(), v.end());
  return AddNoise(v, NoiseSpec::Laplace(l1_sensitivity / p.eps, seed));
}

absl::StatusOr<std::vector<double>> GaussianMechanism(
    std::span<const double> v, double l2_sensitivity, const PrivacyParams& p,
    uint64_t seed, bool add_noise) {
  if (absl::Status s = CheckPrivacyParams(p); !s.ok()) return s;
  if (p.delta == 0) {
    return absl::InvalidArgumentError(
        "the Gaussian mechanism needs delta > 0");
  }
  if (!(l2_sensitivity > 0)) {
    return absl::InvalidArgumentError("L2 sensitivity must be positive");
  }
  if (!add_noise) return std::vector<double>(v.begin(), v.end());
  return AddNoise(v, NoiseSpec::Gaussian(GaussianSigma(l2_sensitivity, p),
                                         seed));
}

double LaplaceErrorBound(double l1_sensitivity, double eps, int64_t k,
                         double beta) {
  return l1_sensitivity / eps * std::log(static_cast<double>(k) / beta);
}

double GaussianErrorBound(double l2_sensitivity, const PrivacyParams& p,
                          int64_t k, double beta) {
  return 2.0 * l2_sensitivity / p.eps *
         std::sqrt(std::log(2.0 / p.delta) *
                   std::log(2.0 * static_cast<double>(k) / beta));
}

}  // namespace dyngraph_dp
