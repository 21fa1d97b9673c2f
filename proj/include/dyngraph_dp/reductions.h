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

// Transformations from linear-query datasets (submatrix queries, inner
// products, marginals) to dynamic graph sequences whose statistic at fixed
// query times encodes the query answers, plus their verifier and decoder.
//
// Timesteps are 1-based throughout; rows, columns and queries are indexed
// from 1 in comments and from 0 in containers.

#ifndef DYNGRAPH_DP_REDUCTIONS_H_
#define DYNGRAPH_DP_REDUCTIONS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dyngraph_dp/exact_stats.h"
#include "dyngraph_dp/gadgets.h"
#include "dyngraph_dp/graph_stream.h"

namespace dyngraph_dp {

using BitVector = std::vector<uint8_t>;

// Dense 0/1 matrix. Text form: "rows cols\n" then one line of
// space-separated 0/1 entries per row.
struct BinaryMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> bits;  // row-major

  BinaryMatrix() = default;
  BinaryMatrix(int r, int c) : rows(r), cols(c), bits(size_t(r) * c, 0) {}

  uint8_t at(int i, int j) const { return bits[size_t(i) * cols + j]; }
  uint8_t& at(int i, int j) { return bits[size_t(i) * cols + j]; }
  BitVector row(int i) const;
  BitVector col(int j) const;

  friend bool operator==(const BinaryMatrix&, const BinaryMatrix&) = default;
};

absl::StatusOr<BinaryMatrix> ParseMatrix(absl::string_view text);
std::string FormatMatrix(const BinaryMatrix& m);
absl::StatusOr<BinaryMatrix> ReadMatrixFile(const std::string& path);

// Query m is (a^(m), b^(m)); its answer is a^T Y b.
struct SubmatrixInstance {
  BinaryMatrix y;  // n x n
  std::vector<std::pair<BitVector, BitVector>> queries;
  int64_t w = 1;
  std::optional<int> block;  // B, must divide n
};

struct InnerProductInstance {
  BitVector y;
  std::vector<BitVector> queries;
};

// Rows are the n individuals, columns the d attributes; answer j is the
// column sum.
struct MarginalsInstance {
  BinaryMatrix y;
};

enum class NeighborLevel : uint8_t { kEvent, kItem };

struct ReductionOutput {
  std::string kind;
  UpdateSequence seq;
  StatKind stat;
  // answer = (f(G_{t_m}) - f(G_{t0})) / scale; negative for gadgets of -f.
  int64_t scale = 1;
  std::vector<int64_t> query_times;     // strictly increasing
  std::optional<int64_t> baseline_time; // t0; f(G_0) = 0 is used otherwise
  std::vector<int64_t> expected;        // true answers, one per query time
  // Relation between outputs for datasets that differ in one bit (submatrix,
  // inner product) or one row (marginals).
  NeighborLevel neighbor_level = NeighborLevel::kEvent;
};

// a^T Y b.
int64_t SubmatrixAnswer(const BinaryMatrix& y, const BitVector& a,
                        const BitVector& b);

// N = 2n + w, T = n^2 + 4knw, t_m = n^2 + 2nw(2m - 1), scale w.
// Nodes: x_i = i-1, v_j = n+j-1, z_l = 2n+l-1.
absl::StatusOr<ReductionOutput> SubmatrixToTriangles(
    const SubmatrixInstance& inst);

// One (2B + w)-node copy of the unblocked construction per B x B block of Y,
// updated in lockstep. N = 2n^2/B + n^2 w/B^2, T = n^2 + 4k w n^2/B, max
// degree <= 2B + w.
absl::StatusOr<ReductionOutput> SubmatrixToTrianglesBounded(
    const SubmatrixInstance& inst);

// n copies of a 2-edge gadget; e1 copies toggled by y, e2 copies by each
// query. N = n_g n, T = (m_g + 2k) n, t0 = (m_g + 1) n, t_l = (m_g + 2l) n.
absl::StatusOr<ReductionOutput> InnerProductToGadget(
    const InnerProductInstance& inst, const Gadget& g);

// n copies of a 1-edge gadget; after the build phase and n idle steps, column
// j toggles e1 copies by Y_i[j] and reverts them. N = n_g n,
// T = (m_g + 2d) n, t0 = (m_g + 1) n, t_j = (m_g + 2j) n.
absl::StatusOr<ReductionOutput> MarginalsToGadget(const MarginalsInstance& inst,
                                                  const Gadget& g);

// Scaffold V0 x W and V1 x W with |V0| = |V1| = ceil(sqrt(n)), |W| = w; the
// i-th V0-V1 pair is toggled by Y_i[j]. N = 2 ceil(sqrt n) + w,
// T = 2 ceil(sqrt n) w + 2nd, t_j = t0 + (2j - 1) n.
absl::StatusOr<ReductionOutput> MarginalsToTriangles(
    const MarginalsInstance& inst, int64_t w);

// The i-th node pair (lexicographic) is present at t_j = (2j - 1) n iff
// Y_i[j] = 1. N is the smallest with N(N-1)/2 >= n, T = 2nd.
absl::StatusOr<ReductionOutput> MarginalsToEdgeCount(
    const MarginalsInstance& inst);
uint32_t EdgeCountNodes(int n);

// 2-edge gadget copies with every e1 toggled at m_g n + i, then e2 copies
// toggled by Y_i[j] per column. Same shape as MarginalsToGadget.
absl::StatusOr<ReductionOutput> OutputDeterminedVariant(
    const MarginalsInstance& inst, const Gadget& g);

// Node id of gadget-local node `v` in copy `copy` (0-based).
inline NodeId CopyNode(const Gadget& g, int copy, NodeId v) {
  return static_cast<NodeId>(copy) * g.num_nodes + v;
}
inline EdgeKey CopyEdge(const Gadget& g, int copy, EdgeKey e) {
  return EdgeKey::Of(CopyNode(g, copy, e.u), CopyNode(g, copy, e.v));
}

// Replaces the update at t with a no-op.
UpdateSequence DropUpdate(const UpdateSequence& seq, int64_t t);

// Appends isolated nodes and trailing no-ops.
absl::StatusOr<ReductionOutput> Pad(const ReductionOutput& out,
                                    uint32_t num_nodes, int64_t horizon);

struct LiftedSequence {
  UpdateSequence seq;
  int64_t t0 = 0;  // length of the scaffold prefix
};

// Adds tau - 1 nodes U joined to every original node and to each other, then
// replays `seq`. For N >= 2: f_{d>=1}(G_t) = f_{d>=tau}(H_{t0+t}) - (tau-1).
absl::StatusOr<LiftedSequence> LiftTau(const UpdateSequence& seq,
                                       uint32_t tau);

// Replays the sequence and checks every query equality exactly. Returns the
// recovered answers, or an error naming the first failing query index.
absl::StatusOr<std::vector<int64_t>> VerifyReduction(
    const ReductionOutput& out, std::span<const int64_t> expected);
absl::StatusOr<std::vector<int64_t>> VerifyReduction(const ReductionOutput& out);

// Checks that two outputs are neighbors at out.neighbor_level.
absl::Status CheckSiblings(const ReductionOutput& a, const ReductionOutput& b);

// Query-time sidecar: one line "m t_m scale [t0]" per query.
struct QuerySidecar {
  std::vector<int64_t> query_times;
  int64_t scale = 1;
  std::optional<int64_t> baseline_time;
};
QuerySidecar SidecarOf(const ReductionOutput& out);
std::string FormatQuerySidecar(const QuerySidecar& sidecar);
absl::StatusOr<QuerySidecar> ParseQuerySidecar(absl::string_view text);

// answer_m = (released[t_m] - released[t0]) / scale, with released[t] the
// release at step t (index t - 1) and 0 standing in for t0 when absent.
absl::StatusOr<std::vector<double>> DecodeAnswers(
    std::span<const double> released, const QuerySidecar& sidecar);
absl::StatusOr<std::vector<double>> DecodeAnswers(
    std::span<const double> released, const ReductionOutput& out);

}  // namespace dyngraph_dp

#endif  // DYNGRAPH_DP_REDUCTIONS_H_
