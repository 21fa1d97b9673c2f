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

// Dyadic decomposition of [1, T] and the tree-based continual counters built
// on it.
//
// Level l holds the intervals [j*2^l + 1, (j+1)*2^l]. A node's noisy sum is
// drawn once, at the step its interval closes, and every prefix [1, t] is the
// disjoint union of at most floor(log2 T) + 1 closed nodes (one per set bit
// of t). Horizons that are not powers of two are padded with zero steps.

#ifndef DYNGRAPH_DP_DYADIC_H_
#define DYNGRAPH_DP_DYADIC_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dyngraph_dp/noise.h"

namespace dyngraph_dp {

struct DyadicIndex {
  int level = 0;
  int64_t block = 0;

  int64_t first() const { return (block << level) + 1; }
  int64_t last() const { return (block + 1) << level; }

  friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

// floor(log2 T) + 1.
int DyadicLevels(int64_t horizon);

// Greedy largest-power-of-two decomposition of [1, t], in increasing order.
absl::StatusOr<std::vector<DyadicIndex>> CanonicalCover(int64_t t,
                                                        int64_t horizon);

// All tree nodes over [1, T]: levels 0..floor(log2 T), blocks
// 0..ceil(T / 2^l) - 1, ordered by (level, block).
std::vector<DyadicIndex> DyadicNodes(int64_t horizon);

// Exact partial sums s_[a,b] of `deltas` (deltas[t-1] is step t) for every
// node of DyadicNodes(deltas.size()), in the same order.
std::vector<int64_t> DyadicNodeSums(std::span<const int64_t> deltas);

// Running sum of a scalar stream with one noise draw per closed tree node.
class BinaryTreeCounter {
 public:
  static absl::StatusOr<BinaryTreeCounter> Create(int64_t horizon,
                                                  const NoiseSpec& node_noise);

  // Consumes the delta for the next step and returns the noisy prefix sum.
  absl::StatusOr<double> Step(double delta);

  double Output() const { return output_; }
  int64_t time() const { return t_; }
  int64_t horizon() const { return horizon_; }
  int levels() const { return static_cast<int>(open_sum_.size()); }
  // Number of node noise values drawn so far.
  int64_t noise_draws() const { return sampler_.draws(); }

 private:
  BinaryTreeCounter(int64_t horizon, NoiseSampler sampler);

  int64_t horizon_;
  int64_t t_ = 0;
  std::vector<double> open_sum_;      // exact sum of the open node per level
  std::vector<double> closed_noisy_;  // noisy sum of the last closed node
  NoiseSampler sampler_;
  double output_ = 0;
};

// b-bounded continual histogram: d running sums over a stream of vectors in
// {-1,0,1}^d with at most b nonzeros per step, one binary tree per
// coordinate.
//
// Per-node noise is calibrated so that two streams differing in at most two
// steps, with opposite-signed changes to the same coordinates, are
// indistinguishable: Laplace with scale 2b*L/eps, or Gaussian with
// sigma = sqrt(2 ln(2/delta)) * sqrt(2b*L) / eps, where L is the number of
// levels.
class ContinualHistogram {
 public:
  struct Options {
    int dims = 1;
    int sparsity = 1;
    int64_t horizon = 1;
    PrivacyParams privacy;
    NoiseKind noise = NoiseKind::kLaplace;
    uint64_t seed = 0;
  };

  static absl::StatusOr<ContinualHistogram> Create(const Options& options);

  // Sparse step: (coordinate, +1/-1) pairs. Coordinates must be distinct.
  absl::Status Step(std::span<const std::pair<int, int>> nonzeros);
  // Dense step.
  absl::Status StepDense(std::span<const int> x);

  const std::vector<double>& estimate() const { return estimate_; }
  const std::vector<int64_t>& exact() const { return exact_; }
  int64_t time() const { return t_; }
  double node_noise_scale() const { return node_scale_; }

  // Bound that holds for every coordinate at every step simultaneously with
  // probability >= 1 - beta (union bound over all node draws or estimates).
  double ErrorBound(double beta) const;

 private:
  ContinualHistogram(const Options& options, double node_scale,
                     NoiseSampler sampler);
  void Advance();

  Options options_;
  int levels_;
  double node_scale_;
  NoiseSampler sampler_;
  int64_t t_ = 0;
  std::vector<int64_t> exact_;
  // closed_noise_[l * dims + i]: noise of the last closed level-l node of
  // coordinate i.
  std::vector<double> closed_noise_;
  std::vector<double> estimate_;
};

}  // namespace dyngraph_dp

#endif  // DYNGRAPH_DP_DYADIC_H_
