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

// Continual-release mechanisms for graph statistics under edge differential
// privacy. Each mechanism consumes one Update per step and releases a value
// for the current graph.

#ifndef DYNGRAPH_DP_MECHANISMS_H_
#define DYNGRAPH_DP_MECHANISMS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dyngraph_dp/dyadic.h"
#include "dyngraph_dp/exact_stats.h"
#include "dyngraph_dp/graph_stream.h"
#include "dyngraph_dp/noise.h"

namespace dyngraph_dp {

using Release = std::vector<double>;

// kAuto picks Laplace for delta == 0 and Gaussian otherwise.
enum class NoiseFamily : uint8_t { kAuto, kLaplace, kGaussian, kNone };

absl::string_view NoiseFamilyName(NoiseFamily family);
absl::StatusOr<NoiseFamily> ParseNoiseFamily(absl::string_view name);

class ContinualMechanism {
 public:
  virtual ~ContinualMechanism() = default;

  // Consumes the update for the next timestep and returns the release for
  // it. Fails past the horizon or on an update invalid for the current graph.
  virtual absl::StatusOr<Release> Step(const Update& update) = 0;

  virtual int64_t time() const = 0;
  virtual int64_t horizon() const = 0;
  virtual int dimension() const = 0;
  virtual std::string name() const = 0;
};

// Always releases f(empty graph).
class TrivialBaseline : public ContinualMechanism {
 public:
  TrivialBaseline(StatKind kind, uint32_t num_nodes, int64_t horizon);

  absl::StatusOr<Release> Step(const Update& update) override;
  int64_t time() const override { return t_; }
  int64_t horizon() const override { return horizon_; }
  int dimension() const override { return static_cast<int>(value_.size()); }
  std::string name() const override { return "trivial"; }

 private:
  int64_t horizon_;
  int64_t t_ = 0;
  Release value_;
};

// Releases a fresh noisy f(G_t) at the end of every block of B steps (and at
// T), repeating the last release in between.
class RecomputeMechanism : public ContinualMechanism {
 public:
  static constexpr double kBeta0 = 0.05;

  struct Options {
    StatKind kind;
    uint32_t num_nodes = 1;
    int64_t horizon = 1;
    PrivacyParams privacy;
    NoiseFamily noise = NoiseFamily::kAuto;
    uint64_t seed = 0;
    // The release vector's sensitivity bound holds for item-level and
    // event-level neighbors alike; the flag only labels the guarantee.
    bool item_level = false;
    std::optional<int64_t> block_size;  // overrides the calibrated B
  };

  static absl::StatusOr<std::unique_ptr<RecomputeMechanism>> Create(
      const Options& options);

  // delta == 0: ceil(sqrt((T/eps) ln(Tk/beta0))).
  // delta > 0:  ceil(((T/eps^2) ln(Tk/beta0) ln(1/delta))^(1/3)).
  static int64_t CalibratedBlockSize(int64_t horizon, const PrivacyParams& p,
                                     int k);

  absl::StatusOr<Release> Step(const Update& update) override;
  int64_t time() const override { return t_; }
  int64_t horizon() const override { return options_.horizon; }
  int dimension() const override { return static_cast<int>(last_.size()); }
  std::string name() const override { return "recompute"; }

  int64_t block_size() const { return block_size_; }
  int64_t num_releases() const {
    return (options_.horizon + block_size_ - 1) / block_size_;
  }
  // Laplace scale or Gaussian sigma of each release; 0 when exact.
  double noise_scale() const { return sampler_.scale(); }
  NoiseKind noise_kind() const { return sampler_.kind(); }
  bool item_level() const { return options_.item_level; }

 private:
  RecomputeMechanism(const Options& options, int64_t block_size,
                     NoiseSampler sampler);

  Options options_;
  int64_t block_size_;
  NoiseSampler sampler_;
  StatTracker tracker_;
  int64_t t_ = 0;
  Release last_;
};

// Noisy degree vector via a 2-sparse continual histogram over per-node
// degree deltas.
class DegreeListMechanism : public ContinualMechanism {
 public:
  static absl::StatusOr<std::unique_ptr<DegreeListMechanism>> Create(
      uint32_t num_nodes, int64_t horizon, const PrivacyParams& privacy,
      NoiseFamily noise, uint64_t seed);

  absl::StatusOr<Release> Step(const Update& update) override;
  int64_t time() const override { return histogram_.time(); }
  int64_t horizon() const override { return horizon_; }
  int dimension() const override { return static_cast<int>(graph_.num_nodes()); }
  std::string name() const override { return "degree-list"; }

  // max_v of the current noisy degree estimate.
  double noisy_max_degree() const { return noisy_max_; }
  double node_noise_scale() const { return histogram_.node_noise_scale(); }
  // Simultaneous bound on every coordinate at every step, w.p. >= 1 - beta.
  double ErrorBound(double beta) const { return histogram_.ErrorBound(beta); }

 private:
  DegreeListMechanism(int64_t horizon, uint32_t num_nodes,
                      ContinualHistogram histogram)
      : horizon_(horizon),
        graph_(num_nodes),
        histogram_(std::move(histogram)) {}

  int64_t horizon_;
  DynamicGraph graph_;
  ContinualHistogram histogram_;
  double noisy_max_ = 0;
};

// Triangle count under the promise that every graph has max degree <= D:
// a binary-tree counter over the triangle difference sequence with Gaussian
// node noise calibrated to L2 sensitivity 6 sqrt(T D log2 T).
class DRestrictedTriangleMechanism : public ContinualMechanism {
 public:
  static absl::StatusOr<std::unique_ptr<DRestrictedTriangleMechanism>> Create(
      uint32_t num_nodes, int64_t horizon, uint32_t degree_bound,
      const PrivacyParams& privacy, NoiseFamily noise, uint64_t seed);

  // 6 sqrt(T * D' * max(log2 T, 1)) with D' = min(D, N - 1, T): no graph on
  // N nodes built in T steps has a larger degree.
  static double SensitivityBound(int64_t horizon, uint32_t degree_bound,
                                 uint32_t num_nodes);
  // Gaussian sigma for the bound above.
  static double Sigma(int64_t horizon, uint32_t degree_bound,
                      uint32_t num_nodes, const PrivacyParams& privacy);

  absl::StatusOr<Release> Step(const Update& update) override;
  int64_t time() const override { return counter_.time(); }
  int64_t horizon() const override { return counter_.horizon(); }
  int dimension() const override { return 1; }
  std::string name() const override { return "triangle-d"; }

  uint32_t degree_bound() const { return degree_bound_; }
  double sigma() const { return sigma_; }
  int64_t noise_draws() const { return counter_.noise_draws(); }
  // First timestep whose graph broke the degree promise. Releases continue;
  // privacy only holds for promise-respecting inputs.
  std::optional<int64_t> first_promise_violation() const {
    return first_violation_;
  }

 private:
  DRestrictedTriangleMechanism(uint32_t num_nodes, uint32_t degree_bound,
                               double sigma, BinaryTreeCounter counter)
      : degree_bound_(degree_bound),
        sigma_(sigma),
        tracker_(num_nodes),
        counter_(std::move(counter)) {}

  uint32_t degree_bound_;
  double sigma_;
  StatTracker tracker_;
  BinaryTreeCounter counter_;
  std::optional<int64_t> first_violation_;
};

// Builds a D-restricted mechanism with the given degree bound, horizon and
// seed.
using RestrictedFactory =
    std::function<absl::StatusOr<std::unique_ptr<ContinualMechanism>>(
        uint32_t degree_bound, int64_t horizon, uint64_t seed)>;

// Turns a family of D-restricted mechanisms into one without a degree
// promise. A noisy degree tracker picks level j in 1..max(1, ceil(log2 N)),
// the smallest with noisy max degree < 2^j; the active inner mechanism runs
// with D_j = ceil(gamma) + 2^j, where gamma is the tracker's own error bound
// at confidence beta_s. On escalation the new inner instance first replays
// insertions of the current edge set with outputs discarded.
class DegreeRestrictedWrapper : public ContinualMechanism {
 public:
  struct Options {
    uint32_t num_nodes = 1;
    int64_t horizon = 1;
    PrivacyParams privacy;
    double beta_s = 0.05;
    NoiseFamily tracker_noise = NoiseFamily::kLaplace;
    uint64_t seed = 0;
    std::string inner_name = "inner";
  };

  static absl::StatusOr<std::unique_ptr<DegreeRestrictedWrapper>> Create(
      const Options& options, RestrictedFactory factory);

  absl::StatusOr<Release> Step(const Update& update) override;
  int64_t time() const override { return t_; }
  int64_t horizon() const override { return options_.horizon; }
  int dimension() const override { return inner_ ? inner_->dimension() : 1; }
  std::string name() const override {
    return "wrapped-" + options_.inner_name;
  }

  int level() const { return level_; }
  int max_level() const { return max_level_; }
  double gamma() const { return gamma_; }
  uint32_t current_degree_bound() const;
  double noisy_max_degree() const { return tracker_->noisy_max_degree(); }
  const ContinualMechanism* inner() const { return inner_.get(); }
  // (t, new level) for every escalation after the first step.
  const std::vector<std::pair<int64_t, int>>& escalations() const {
    return escalations_;
  }

 private:
  DegreeRestrictedWrapper(const Options& options, RestrictedFactory factory,
                          std::unique_ptr<DegreeListMechanism> tracker);
  int LevelFor(double noisy_max_degree) const;
  absl::Status StartLevel(int level);

  Options options_;
  RestrictedFactory factory_;
  std::unique_ptr<DegreeListMechanism> tracker_;
  double gamma_;
  int max_level_;
  int level_ = 0;
  int64_t t_ = 0;
  DynamicGraph graph_;
  std::unique_ptr<ContinualMechanism> inner_;
  std::vector<std::pair<int64_t, int>> escalations_;
};

// Privacy of the wrapper when the tracker and every inner level are
// (eps, delta): (eps (2 + log2 N), delta (1 + log2 N) + beta_s (1 + e^eps)).
PrivacyParams WrapperPrivacyCost(const PrivacyParams& per_part, double beta_s,
                                 uint32_t num_nodes);

// Wrapper around DRestrictedTriangleMechanism. NoiseFamily::kNone disables
// noise everywhere (gamma = 0).
absl::StatusOr<std::unique_ptr<DegreeRestrictedWrapper>> MakeEventLevelTriangle(
    uint32_t num_nodes, int64_t horizon, const PrivacyParams& privacy,
    double beta_s, NoiseFamily noise, uint64_t seed);

enum class MechanismId : uint8_t {
  kTrivial,
  kRecompute,
  kDegreeList,
  kTriangleDRestricted,
  kTriangleEventLevel,
};

// "trivial", "recompute", "degree-list", "triangle-d", "triangle-event".
absl::string_view MechanismName(MechanismId id);
absl::StatusOr<MechanismId> ParseMechanismId(absl::string_view name);

struct MechanismConfig {
  MechanismId id = MechanismId::kRecompute;
  StatKind stat;
  uint32_t num_nodes = 1;
  int64_t horizon = 1;
  PrivacyParams privacy;
  double beta = 0.05;          // wrapper beta_s
  uint32_t degree_bound = 0;   // triangle-d
  std::optional<int64_t> block_size;
  NoiseFamily noise = NoiseFamily::kAuto;
  bool item_level = false;
  uint64_t seed = 0;
};

// Checks stat/mechanism compatibility and builds the mechanism.
absl::StatusOr<std::unique_ptr<ContinualMechanism>> MakeMechanism(
    const MechanismConfig& config);

}  // namespace dyngraph_dp

#endif  // DYNGRAPH_DP_MECHANISMS_H_
