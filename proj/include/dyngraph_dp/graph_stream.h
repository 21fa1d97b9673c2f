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

// Dynamic graph sequences: a stream of single-edge insertions, deletions and
// no-ops over a fixed node set, replayed from the empty graph.

#ifndef DYNGRAPH_DP_GRAPH_STREAM_H_
#define DYNGRAPH_DP_GRAPH_STREAM_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace dyngraph_dp {

using NodeId = uint32_t;

// Undirected simple edge, stored with u < v.
struct EdgeKey {
  NodeId u = 0;
  NodeId v = 1;

  // Canonicalizes (a, b). Requires a != b.
  static EdgeKey Of(NodeId a, NodeId b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
  }

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

enum class UpdateKind : uint8_t { kNoOp, kInsert, kDelete };

struct Update {
  UpdateKind kind = UpdateKind::kNoOp;
  // Meaningless for kNoOp; kept zeroed so equality is structural.
  EdgeKey edge{0, 0};

  static Update Insert(NodeId a, NodeId b) {
    return {UpdateKind::kInsert, EdgeKey::Of(a, b)};
  }
  static Update Insert(EdgeKey e) { return {UpdateKind::kInsert, e}; }
  static Update Delete(NodeId a, NodeId b) {
    return {UpdateKind::kDelete, EdgeKey::Of(a, b)};
  }
  static Update Delete(EdgeKey e) { return {UpdateKind::kDelete, e}; }
  static Update NoOp() { return {}; }

  bool is_noop() const { return kind == UpdateKind::kNoOp; }

  friend bool operator==(const Update&, const Update&) = default;
};

// A length-T stream of updates over nodes [0, num_nodes). Timestep t (1-based)
// is updates[t - 1]. Construction does not validate; see Validate().
struct UpdateSequence {
  uint32_t num_nodes = 0;
  std::vector<Update> updates;

  int64_t horizon() const { return static_cast<int64_t>(updates.size()); }
  const Update& at(int64_t t) const { return updates[t - 1]; }

  friend bool operator==(const UpdateSequence&,
                         const UpdateSequence&) = default;
};

enum class ViolationKind : uint8_t {
  kInsertPresent,
  kDeleteAbsent,
  kNodeOutOfRange,
};

struct Violation {
  int64_t timestep = 0;  // 1-based
  ViolationKind kind = ViolationKind::kInsertPresent;
};

absl::string_view ViolationName(ViolationKind kind);

// Returns the first timestep at which replay from the empty graph fails, or
// nullopt when the sequence is a valid dynamic graph sequence.
std::optional<Violation> FindViolation(const UpdateSequence& seq);

// Same check as FindViolation, as a status carrying the timestep and kind.
absl::Status Validate(const UpdateSequence& seq);

// Simple undirected graph on a fixed node set, with sorted adjacency lists and
// maintained degrees so statistic deltas cost O(deg).
class DynamicGraph {
 public:
  explicit DynamicGraph(uint32_t num_nodes = 0);

  uint32_t num_nodes() const { return static_cast<uint32_t>(adj_.size()); }
  int64_t edge_count() const { return edge_count_; }
  uint32_t degree(NodeId v) const {
    return static_cast<uint32_t>(adj_[v].size());
  }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[v]; }
  uint32_t max_degree() const;

  bool HasEdge(NodeId a, NodeId b) const;
  bool HasEdge(EdgeKey e) const { return HasEdge(e.u, e.v); }

  // |N(a) ∩ N(b)|, iterating the smaller list.
  int64_t CommonNeighborCount(NodeId a, NodeId b) const;

  // Checks the update against the current state without applying it.
  absl::Status CheckUpdate(const Update& update) const;

  // Applies a valid update. NoOp is the identity. On error the graph is
  // unchanged.
  absl::Status Apply(const Update& update);

  // All edges in lexicographic order.
  std::vector<EdgeKey> Edges() const;

 private:
  std::vector<std::vector<NodeId>> adj_;
  int64_t edge_count_ = 0;
};

// Item-level edge-neighboring: the sequences differ only in updates touching
// a single edge. Errors on node-count or horizon mismatch.
absl::StatusOr<bool> AreItemNeighbors(const UpdateSequence& s1,
                                      const UpdateSequence& s2);

// Event-level edge-neighboring: one sequence equals the other except that an
// insertion (deletion) of e* and the next deletion (insertion) of e*, or just
// the first one when e* is never touched again, are replaced by no-ops.
absl::StatusOr<bool> AreEventNeighbors(const UpdateSequence& s1,
                                       const UpdateSequence& s2);

// Stream file format: "N T\n" then exactly T lines "+ u v", "- u v" or ".".
absl::StatusOr<UpdateSequence> ParseSequence(absl::string_view text);
std::string SerializeSequence(const UpdateSequence& seq);

absl::StatusOr<UpdateSequence> ReadSequenceFile(const std::string& path);
absl::Status WriteSequenceFile(const std::string& path,
                               const UpdateSequence& seq);

}  // namespace dyngraph_dp

#endif  // DYNGRAPH_DP_GRAPH_STREAM_H_
