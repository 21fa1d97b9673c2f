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

// Exact (non-private) graph statistics and their difference sequences.

#ifndef DYNGRAPH_DP_EXACT_STATS_H_
#define DYNGRAPH_DP_EXACT_STATS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dyngraph_dp/graph_stream.h"

namespace dyngraph_dp {

enum class StatId : uint8_t {
  kEdgeCount,
  kTriangleCount,
  kHighDegree,
  kDegreeList,
  kDegreeHist,
  kMaxMatching,
  kConnectedComponents,
};

struct StatKind {
  StatId id = StatId::kEdgeCount;
  uint32_t tau = 0;  // threshold, kHighDegree only

  static StatKind EdgeCount() { return {StatId::kEdgeCount}; }
  static StatKind TriangleCount() { return {StatId::kTriangleCount}; }
  static StatKind HighDegree(uint32_t tau) { return {StatId::kHighDegree, tau}; }
  static StatKind DegreeList() { return {StatId::kDegreeList}; }
  static StatKind DegreeHist() { return {StatId::kDegreeHist}; }
  static StatKind MaxMatching() { return {StatId::kMaxMatching}; }
  static StatKind ConnectedComponents() {
    return {StatId::kConnectedComponents};
  }

  friend bool operator==(const StatKind&, const StatKind&) = default;
};

// "edges", "triangles", "high-degree:<tau>", "degree-list", "degree-hist",
// "matching", "components".
std::string StatName(StatKind kind);
absl::StatusOr<StatKind> ParseStatKind(absl::string_view name);

// Scalar statistics have dimension 1; DegreeList and DegreeHist have N.
int OutputDimension(StatKind kind, uint32_t num_nodes);
bool IsVectorStat(StatKind kind);

// Exact statistic value. Scalars are stored as a length-1 vector; deltas use
// the same type.
using StatValue = std::vector<int64_t>;

// Largest value any coordinate can take on an N-node graph.
double StatRange(StatKind kind, uint32_t num_nodes);

int64_t CountTriangles(const DynamicGraph& g);
int64_t CountConnectedComponents(const DynamicGraph& g);
// Maximum cardinality matching in a general graph (Edmonds blossom search).
int64_t MaxMatchingSize(const DynamicGraph& g);
// Same, returning mate[v] (or -1) for every node.
std::vector<int64_t> MaxMatching(const DynamicGraph& g);

// Evaluates `kind` on `g`. Triangles are counted from scratch here; use
// StatTracker for the incrementally maintained counter.
StatValue ExactValue(StatKind kind, const DynamicGraph& g);

// Change in the triangle count caused by `update`, computed before it is
// applied.
absl::StatusOr<int64_t> TriangleDelta(const DynamicGraph& g,
                                      const Update& update);

// Graph replay with an incrementally maintained triangle count.
class StatTracker {
 public:
  explicit StatTracker(uint32_t num_nodes) : graph_(num_nodes) {}

  // Applies `update` and returns the triangle delta it caused.
  absl::StatusOr<int64_t> Apply(const Update& update);

  const DynamicGraph& graph() const { return graph_; }
  int64_t triangles() const { return triangles_; }
  StatValue Value(StatKind kind) const;

 private:
  DynamicGraph graph_;
  int64_t triangles_ = 0;
};

// df(S, t) = f(G_t) - f(G_{t-1}) for t = 1..T.
absl::StatusOr<std::vector<StatValue>> DifferenceSequence(
    StatKind kind, const UpdateSequence& seq);

// f(G_t) for t = 1..T.
absl::StatusOr<std::vector<StatValue>> ExactTrajectory(
    StatKind kind, const UpdateSequence& seq);

struct Sensitivity {
  double l1 = 0;
  double l2 = 0;
};

// One-edge-flip L1/L2 sensitivity on N-node graphs. A positive
// `degree_bound` selects the degree-restricted triangle bound D - 1.
Sensitivity StaticSensitivity(StatKind kind, uint32_t num_nodes,
                              uint32_t degree_bound = 0);

}  // namespace dyngraph_dp

#endif  // DYNGRAPH_DP_EXACT_STATS_H_
