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

#include "dyngraph_dp/dyadic.h"

#include <bit>
#include <cmath>

#include "absl/strings/str_format.h"

namespace dyngraph_dp {

int DyadicLevels(int64_t horizon) {
  return std::bit_width(static_cast<uint64_t>(horizon));
}

absl::StatusOr<std::vector<DyadicIndex>> CanonicalCover(int64_t t,
                                                        int64_t horizon) {
  if (t < 1 || t > horizon) {
    return absl::OutOfRangeError(
        absl::StrFormat("t=%d outside [1, %d]", t, horizon));
  }
  std::vector<DyadicIndex> cover;
  int64_t covered = 0;
  for (int level = DyadicLevels(t) - 1; level >= 0; --level) {
    if ((t >> level) & 1) {
      cover.push_back({level, covered >> level});
      covered += int64_t{1} << level;
    }
  }
  return cover;
}

std::vector<DyadicIndex> DyadicNodes(int64_t horizon) {
  std::vector<DyadicIndex> nodes;
  for (int level = 0; level < DyadicLevels(horizon); ++level) {
    const int64_t width = int64_t{1} << level;
    const int64_t blocks = (horizon + width - 1) / width;
    for (int64_t j = 0; j < blocks; ++j) nodes.push_back({level, j});
  }
  return nodes;
}

std::vector<int64_t> DyadicNodeSums(std::span<const int64_t> deltas) {
  const int64_t horizon = static_cast<int64_t>(deltas.size());
  std::vector<int64_t> prefix(horizon + 1, 0);
  for (int64_t t = 1; t <= horizon; ++t) {
    prefix[t] = prefix[t - 1] + deltas[t - 1];
  }
  std::vector<int64_t> sums;
  for (const DyadicIndex& node : DyadicNodes(horizon)) {
    const int64_t last = std::min(node.last(), horizon);
    sums.push_back(prefix[last] - prefix[node.first() - 1]);
  }
  return sums;
}

BinaryTreeCounter::BinaryTreeCounter(int64_t horizon, NoiseSampler sampler)
    : horizon_(horizon),
      open_sum_(DyadicLevels(horizon), 0.0),
      closed_noisy_(DyadicLevels(horizon), 0.0),
      sampler_(std::move(sampler)) {}

absl::StatusOr<BinaryTreeCounter> BinaryTreeCounter::Create(
    int64_t horizon, const NoiseSpec& node_noise) {
  if (horizon < 1) return absl::InvalidArgumentError("horizon must be >= 1");
  absl::StatusOr<NoiseSampler> sampler = NoiseSampler::Create(node_noise);
  if (!sampler.ok()) return sampler.status();
  return BinaryTreeCounter(horizon, *std::move(sampler));
}

absl::StatusOr<double> BinaryTreeCounter::Step(double delta) {
  if (t_ >= horizon_) {
    return absl::OutOfRangeError(
        absl::StrFormat("counter horizon %d exceeded", horizon_));
  }
  ++t_;
  double out = 0;
  for (int level = 0; level < levels(); ++level) {
    open_sum_[level] += delta;
    if (t_ % (int64_t{1} << level) == 0) {
      closed_noisy_[level] = open_sum_[level] + sampler_.Next();
      open_sum_[level] = 0;
    }
    if ((t_ >> level) & 1) out += closed_noisy_[level];
  }
  output_ = out;
  return output_;
}

ContinualHistogram::ContinualHistogram(const Options& options,
                                       double node_scale, NoiseSampler sampler)
    : options_(options),
      levels_(DyadicLevels(options.horizon)),
      node_scale_(node_scale),
      sampler_(std::move(sampler)),
      exact_(options.dims, 0),
      closed_noise_(static_cast<size_t>(levels_) * options.dims, 0.0),
      estimate_(options.dims, 0.0) {}

absl::StatusOr<ContinualHistogram> ContinualHistogram::Create(
    const Options& options) {
  if (options.dims < 1 || options.sparsity < 1 || options.horizon < 1) {
    return absl::InvalidArgumentError(
        "histogram needs dims, sparsity and horizon >= 1");
  }
  if (absl::Status s = CheckPrivacyParams(options.privacy); !s.ok()) return s;
  const double levels = DyadicLevels(options.horizon);
  const double b = options.sparsity;
  const double eps = options.privacy.eps;
  NoiseSpec spec = NoiseSpec::None();
  switch (options.noise) {
    case NoiseKind::kNone:
      break;
    case NoiseKind::kLaplace:
      spec = NoiseSpec::Laplace(2 * b * levels / eps, options.seed);
      break;
    case NoiseKind::kGaussian:
      if (options.privacy.delta <= 0) {
        return absl::InvalidArgumentError(
            "Gaussian histogram noise needs delta > 0");
      }
      spec = NoiseSpec::Gaussian(
          GaussianSigma(std::sqrt(2 * b * levels), options.privacy),
          options.seed);
      break;
  }
  absl::StatusOr<NoiseSampler> sampler = NoiseSampler::Create(spec);
  if (!sampler.ok()) return sampler.status();
  return ContinualHistogram(options, spec.scale, *std::move(sampler));
}

absl::Status ContinualHistogram::Step(
    std::span<const std::pair<int, int>> nonzeros) {
  if (t_ >= options_.horizon) {
    return absl::OutOfRangeError(
        absl::StrFormat("histogram horizon %d exceeded", options_.horizon));
  }
  if (static_cast<int>(nonzeros.size()) > options_.sparsity) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%d nonzeros exceed the sparsity bound %d",
                        nonzeros.size(), options_.sparsity));
  }
  for (const auto& [i, x] : nonzeros) {
    if (i < 0 || i >= options_.dims || (x != 1 && x != -1)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("bad histogram entry (%d, %d)", i, x));
    }
  }
  for (const auto& [i, x] : nonzeros) exact_[i] += x;
  Advance();
  return absl::OkStatus();
}

absl::Status ContinualHistogram::StepDense(std::span<const int> x) {
  if (static_cast<int>(x.size()) != options_.dims) {
    return absl::InvalidArgumentError("dense step has wrong dimension");
  }
  std::vector<std::pair<int, int>> nonzeros;
  for (int i = 0; i < options_.dims; ++i) {
    if (x[i] != 0) nonzeros.emplace_back(i, x[i]);
  }
  return Step(nonzeros);
}

void ContinualHistogram::Advance() {
  ++t_;
  const int d = options_.dims;
  // The sum over the cover of (node sum + node noise) is the exact prefix
  // plus the noise of the covering nodes; only the noise is stored per node.
  for (int level = 0; level < levels_; ++level) {
    if (t_ % (int64_t{1} << level) != 0) continue;
    double* noise = &closed_noise_[static_cast<size_t>(level) * d];
    for (int i = 0; i < d; ++i) noise[i] = sampler_.Next();
  }
  for (int i = 0; i < d; ++i) estimate_[i] = static_cast<double>(exact_[i]);
  for (int level = 0; level < levels_; ++level) {
    if (((t_ >> level) & 1) == 0) continue;
    const double* noise = &closed_noise_[static_cast<size_t>(level) * d];
    for (int i = 0; i < d; ++i) estimate_[i] += noise[i];
  }
}

double ContinualHistogram::ErrorBound(double beta) const {
  const double levels = levels_;
  const double count =
      2.0 * options_.dims * static_cast<double>(options_.horizon);
  switch (sampler_.kind()) {
    case NoiseKind::kNone:
      return 0;
    case NoiseKind::kLaplace:
      // Every node draw satisfies |Y| <= b ln(count / beta).
      return levels * node_scale_ * std::log(count / beta);
    case NoiseKind::kGaussian:
      // Each estimate is N(0, <= L sigma^2); Gaussian tail plus union bound.
      return node_scale_ * std::sqrt(levels) *
             std::sqrt(2.0 * std::log(2.0 * count / beta));
  }
  return 0;
}

}  // namespace dyngraph_dp
