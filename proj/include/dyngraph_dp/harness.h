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

// Repeated-trial error measurement for continual-release mechanisms.

#ifndef DYNGRAPH_DP_HARNESS_H_
#define DYNGRAPH_DP_HARNESS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dyngraph_dp/graph_stream.h"
#include "dyngraph_dp/mechanisms.h"

namespace dyngraph_dp {

enum class RandomModel : uint8_t { kUniformFlip, kDegreeCapped, kInsertHeavy };

struct RandomModelSpec {
  RandomModel model = RandomModel::kUniformFlip;
  uint32_t degree_cap = 1;    // kDegreeCapped
  double insert_prob = 0.9;   // kInsertHeavy
};

// "uniform-flip", "degree-capped:<D>", "insert-heavy:<p>".
absl::StatusOr<RandomModelSpec> ParseRandomModel(absl::string_view text);
std::string RandomModelName(const RandomModelSpec& spec);

// Always valid. uniform-flip toggles a uniformly random pair; degree-capped
// does the same but turns an insertion that would push a degree past D into
// a no-op; insert-heavy inserts a fresh random pair with probability p and
// otherwise deletes a random present edge.
UpdateSequence RandomSequence(uint32_t num_nodes, int64_t horizon,
                              const RandomModelSpec& spec, uint64_t seed);

struct SequenceSource {
  std::optional<UpdateSequence> fixed;  // used as-is for every trial
  // Otherwise a fresh random sequence per trial.
  RandomModelSpec random;
  uint32_t num_nodes = 16;
  int64_t horizon = 256;
};

struct RunConfig {
  MechanismConfig mechanism;  // seed, N and T are filled in per trial
  int trials = 1;
  uint64_t base_seed = 0;
  bool clamp = false;          // clamp releases to [0, range]
  bool keep_coordinates = false;
  int threads = 0;             // 0: hardware concurrency
};

struct TimestepRecord {
  int64_t t = 0;
  double exact = 0;
  double released = 0;
  double abs_error = 0;
  int coordinate = 0;  // coordinate of the L-infinity error
};

struct TrialRecord {
  int trial = 0;
  std::vector<TimestepRecord> rows;
  double max_error = 0;
  double runtime_ms = 0;
  // Full release and exact value per step when RunConfig::keep_coordinates
  // is set.
  std::vector<Release> releases;
  std::vector<StatValue> exact_values;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;
  double Quantile(double q) const;  // nearest rank over per-trial max_error
  double MeanMaxError() const;
};

// Runs cfg.trials independent trials. Trial i seeds its mechanism (and random
// sequence, if any) from MixSeed(base_seed + i); results are in trial order.
absl::StatusOr<ExperimentResult> RunExperiment(const RunConfig& cfg,
                                               const SequenceSource& source);

// Nearest-rank q-quantile of `values`.
double NearestRankQuantile(std::vector<double> values, double q);

// "trial,t,exact,released,abs_error" rows followed by "#" summary lines with
// per-trial max_error and the (1 - beta) quantile.
void WriteExperimentCsv(const ExperimentResult& result, double beta,
                        std::ostream& out);
// "trial,t,coordinate,exact,released" for every coordinate.
void WriteCoordinateCsv(const ExperimentResult& result, std::ostream& out);

struct SweepPoint {
  int64_t horizon = 256;
  uint32_t num_nodes = 16;
  uint32_t degree_bound = 4;
  double eps = 1.0;
};

struct SweepRow {
  SweepPoint point;
  double mean_max_error = 0;
  double quantile = 0;
};

// Runs RunExperiment at every grid point, overriding T, N, eps and, for
// degree-capped sources and D-restricted mechanisms, the degree bound.
absl::StatusOr<std::vector<SweepRow>> Sweep(const RunConfig& cfg,
                                            const SequenceSource& source,
                                            std::span<const SweepPoint> grid,
                                            double beta);
void WriteSweepCsv(std::span<const SweepRow> rows, double beta,
                   std::ostream& out);

// Least-squares slope of log(y) against log(x).
double LogLogSlope(std::span<const double> x, std::span<const double> y);

}  // namespace dyngraph_dp

#endif  // DYNGRAPH_DP_HARNESS_H_
