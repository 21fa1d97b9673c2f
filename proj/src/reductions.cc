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

#include "dyngraph_dp/reductions.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"

namespace dyngraph_dp {

namespace {

// Fixed-length update schedule; each slot may be written once.
class Schedule {
 public:
  Schedule(uint32_t num_nodes, int64_t horizon) {
    seq_.num_nodes = num_nodes;
    seq_.updates.assign(horizon, Update::NoOp());
  }

  absl::Status Put(int64_t t, const Update& update) {
    if (t < 1 || t > seq_.horizon()) {
      return absl::InternalError(
          absl::StrFormat("schedule slot %d outside [1, %d]", t,
                          seq_.horizon()));
    }
    if (!seq_.updates[t - 1].is_noop()) {
      return absl::InternalError(
          absl::StrFormat("schedule slot %d written twice", t));
    }
    seq_.updates[t - 1] = update;
    return absl::OkStatus();
  }

  UpdateSequence Take() { return std::move(seq_); }

 private:
  UpdateSequence seq_;
};

#define DGDP_RETURN_IF_ERROR(expr)              \
  do {                                          \
    if (absl::Status _s = (expr); !_s.ok()) {   \
      return _s;                                \
    }                                           \
  } while (0)

absl::Status CheckBits(const BitVector& v, size_t n, absl::string_view what) {
  if (v.size() != n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%s has length %d, want %d", what, v.size(), n));
  }
  for (uint8_t b : v) {
    if (b > 1) return absl::InvalidArgumentError(absl::StrCat(what, " not 0/1"));
  }
  return absl::OkStatus();
}

absl::Status CheckMatrix(const BinaryMatrix& m) {
  if (m.rows < 1 || m.cols < 1 ||
      m.bits.size() != size_t(m.rows) * m.cols) {
    return absl::InvalidArgumentError("matrix must be nonempty and complete");
  }
  for (uint8_t b : m.bits) {
    if (b > 1) return absl::InvalidArgumentError("matrix entries must be 0/1");
  }
  return absl::OkStatus();
}

absl::Status CheckSubmatrix(const SubmatrixInstance& inst) {
  DGDP_RETURN_IF_ERROR(CheckMatrix(inst.y));
  if (inst.y.rows != inst.y.cols) {
    return absl::InvalidArgumentError("Y must be square");
  }
  if (inst.w < 1) return absl::InvalidArgumentError("w must be >= 1");
  const size_t n = inst.y.rows;
  for (const auto& [a, b] : inst.queries) {
    DGDP_RETURN_IF_ERROR(CheckBits(a, n, "query vector a"));
    DGDP_RETURN_IF_ERROR(CheckBits(b, n, "query vector b"));
  }
  return absl::OkStatus();
}

absl::Status CheckGadget(const Gadget& g, bool two_edge) {
  if (g.is_two_edge() != two_edge) {
    return absl::InvalidArgumentError(absl::StrCat(
        "reduction needs a ", two_edge ? "2-edge" : "1-edge", " gadget"));
  }
  return VerifyGadget(g);
}

// Builds copies 0..n-1 of the gadget at steps 1..m_g n, copy-major.
absl::Status BuildCopies(const Gadget& g, int n, Schedule& s) {
  const int64_t m = g.num_edges();
  for (int c = 0; c < n; ++c) {
    for (int64_t e = 0; e < m; ++e) {
      DGDP_RETURN_IF_ERROR(
          s.Put(c * m + e + 1, Update::Insert(CopyEdge(g, c, g.edges[e]))));
    }
  }
  return absl::OkStatus();
}

std::vector<int64_t> ColumnSums(const BinaryMatrix& y) {
  std::vector<int64_t> sums(y.cols, 0);
  for (int i = 0; i < y.rows; ++i) {
    for (int j = 0; j < y.cols; ++j) sums[j] += y.at(i, j);
  }
  return sums;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

// ----------------------------------------------------------------- matrix

BitVector BinaryMatrix::row(int i) const {
  return BitVector(bits.begin() + size_t(i) * cols,
                   bits.begin() + size_t(i + 1) * cols);
}

BitVector BinaryMatrix::col(int j) const {
  BitVector out(rows);
  for (int i = 0; i < rows; ++i) out[i] = at(i, j);
  return out;
}

absl::StatusOr<BinaryMatrix> ParseMatrix(absl::string_view text) {
  std::vector<absl::string_view> lines =
      absl::StrSplit(text, '\n', absl::SkipWhitespace());
  auto tokens_of = [](absl::string_view line) {
    return std::vector<absl::string_view>(
        absl::StrSplit(line, absl::ByAnyChar(" \t\r"), absl::SkipEmpty()));
  };
  if (lines.empty()) return absl::InvalidArgumentError("empty matrix text");
  const auto header = tokens_of(lines[0]);
  int rows = 0;
  int cols = 0;
  if (header.size() != 2 || !absl::SimpleAtoi(header[0], &rows) ||
      !absl::SimpleAtoi(header[1], &cols) || rows < 1 || cols < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed matrix header '", lines[0], "'"));
  }
  if (static_cast<int>(lines.size()) - 1 != rows) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "matrix header declares %d rows, found %d", rows, lines.size() - 1));
  }
  BinaryMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto tok = tokens_of(lines[i + 1]);
    if (static_cast<int>(tok.size()) != cols) {
      return absl::InvalidArgumentError(
          absl::StrFormat("matrix row %d has %d entries, want %d", i + 1,
                          tok.size(), cols));
    }
    for (int j = 0; j < cols; ++j) {
      if (tok[j] != "0" && tok[j] != "1") {
        return absl::InvalidArgumentError(
            absl::StrCat("matrix entry '", tok[j], "' is not 0/1"));
      }
      m.at(i, j) = tok[j] == "1";
    }
  }
  return m;
}

std::string FormatMatrix(const BinaryMatrix& m) {
  std::string out = absl::StrCat(m.rows, " ", m.cols, "\n");
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      absl::StrAppend(&out, j ? " " : "", static_cast<int>(m.at(i, j)));
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<BinaryMatrix> ReadMatrixFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseMatrix(*text);
}

// -------------------------------------------------------------- submatrix

int64_t SubmatrixAnswer(const BinaryMatrix& y, const BitVector& a,
                        const BitVector& b) {
  int64_t sum = 0;
  for (int i = 0; i < y.rows; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < y.cols; ++j) sum += y.at(i, j) & b[j];
  }
  return sum;
}

absl::StatusOr<ReductionOutput> SubmatrixToTriangles(
    const SubmatrixInstance& inst) {
  DGDP_RETURN_IF_ERROR(CheckSubmatrix(inst));
  if (inst.block.has_value()) {
    return absl::InvalidArgumentError(
        "instance has a block size; use SubmatrixToTrianglesBounded");
  }
  const int64_t n = inst.y.rows;
  const int64_t w = inst.w;
  const int64_t k = static_cast<int64_t>(inst.queries.size());
  Schedule s(static_cast<uint32_t>(2 * n + w), n * n + 4 * k * n * w);
  auto x = [&](int64_t i) { return static_cast<NodeId>(i - 1); };
  auto v = [&](int64_t j) { return static_cast<NodeId>(n + j - 1); };
  auto z = [&](int64_t l) { return static_cast<NodeId>(2 * n + l - 1); };

  for (int64_t i = 1; i <= n; ++i) {
    for (int64_t j = 1; j <= n; ++j) {
      if (inst.y.at(i - 1, j - 1)) {
        DGDP_RETURN_IF_ERROR(
            s.Put(n * (i - 1) + j, Update::Insert(x(i), v(j))));
      }
    }
  }
  ReductionOutput out;
  for (int64_t m = 1; m <= k; ++m) {
    const auto& [a, b] = inst.queries[m - 1];
    const int64_t sm = n * n + 4 * n * w * (m - 1);
    for (int64_t i = 1; i <= n; ++i) {
      for (int64_t l = 1; l <= w; ++l) {
        const int64_t off = (i - 1) * w + l;
        if (a[i - 1]) {
          DGDP_RETURN_IF_ERROR(s.Put(sm + off, Update::Insert(x(i), z(l))));
          DGDP_RETURN_IF_ERROR(
              s.Put(sm + 2 * n * w + off, Update::Delete(x(i), z(l))));
        }
        if (b[i - 1]) {
          DGDP_RETURN_IF_ERROR(
              s.Put(sm + n * w + off, Update::Insert(v(i), z(l))));
          DGDP_RETURN_IF_ERROR(
              s.Put(sm + 3 * n * w + off, Update::Delete(v(i), z(l))));
        }
      }
    }
    out.query_times.push_back(sm + 2 * n * w);
    out.expected.push_back(SubmatrixAnswer(inst.y, a, b));
  }
  out.kind = "submatrix-triangles";
  out.seq = s.Take();
  out.stat = StatKind::TriangleCount();
  out.scale = w;
  out.neighbor_level = NeighborLevel::kEvent;
  return out;
}

absl::StatusOr<ReductionOutput> SubmatrixToTrianglesBounded(
    const SubmatrixInstance& inst) {
  DGDP_RETURN_IF_ERROR(CheckSubmatrix(inst));
  if (!inst.block.has_value() || *inst.block < 1 ||
      inst.y.rows % *inst.block != 0) {
    return absl::InvalidArgumentError("block size B must divide n");
  }
  const int64_t n = inst.y.rows;
  const int64_t w = inst.w;
  const int64_t B = *inst.block;
  const int64_t P = n / B;
  const int64_t k = static_cast<int64_t>(inst.queries.size());
  const int64_t width = 2 * B + w;
  const int64_t phase = n * n * w / B;  // steps per insert or delete half
  Schedule s(static_cast<uint32_t>(P * P * width), n * n + 4 * k * phase);
  // Gadget (p1, p2), 0-based, owns nodes [g*width, (g+1)*width).
  auto base = [&](int64_t p1, int64_t p2) { return (p1 * P + p2) * width; };
  auto x = [&](int64_t p1, int64_t p2, int64_t i) {
    return static_cast<NodeId>(base(p1, p2) + i - 1);
  };
  auto v = [&](int64_t p1, int64_t p2, int64_t j) {
    return static_cast<NodeId>(base(p1, p2) + B + j - 1);
  };
  auto z = [&](int64_t p1, int64_t p2, int64_t l) {
    return static_cast<NodeId>(base(p1, p2) + 2 * B + l - 1);
  };

  for (int64_t p1 = 0; p1 < P; ++p1) {
    for (int64_t p2 = 0; p2 < P; ++p2) {
      const int64_t start = (p1 * P + p2) * B * B;
      for (int64_t i = 1; i <= B; ++i) {
        for (int64_t j = 1; j <= B; ++j) {
          if (inst.y.at(p1 * B + i - 1, p2 * B + j - 1)) {
            DGDP_RETURN_IF_ERROR(
                s.Put(start + B * (i - 1) + j,
                      Update::Insert(x(p1, p2, i), v(p1, p2, j))));
          }
        }
      }
    }
  }
  ReductionOutput out;
  for (int64_t m = 1; m <= k; ++m) {
    const auto& [a, b] = inst.queries[m - 1];
    const int64_t sm = n * n + (m - 1) * 4 * phase;
    for (int64_t p1 = 0; p1 < P; ++p1) {
      for (int64_t p2 = 0; p2 < P; ++p2) {
        for (int64_t i = 1; i <= B; ++i) {
          for (int64_t l = 1; l <= w; ++l) {
            // a-edges are grouped by row block, b-edges by column block.
            const int64_t a_off = p1 * n * w + p2 * B * w + (i - 1) * w + l;
            const int64_t b_off =
                phase + p2 * n * w + p1 * B * w + (i - 1) * w + l;
            if (a[p1 * B + i - 1]) {
              const Update ins = Update::Insert(x(p1, p2, i), z(p1, p2, l));
              const Update del = Update::Delete(x(p1, p2, i), z(p1, p2, l));
              DGDP_RETURN_IF_ERROR(s.Put(sm + a_off, ins));
              DGDP_RETURN_IF_ERROR(s.Put(sm + 2 * phase + a_off, del));
            }
            if (b[p2 * B + i - 1]) {
              const Update ins = Update::Insert(v(p1, p2, i), z(p1, p2, l));
              const Update del = Update::Delete(v(p1, p2, i), z(p1, p2, l));
              DGDP_RETURN_IF_ERROR(s.Put(sm + b_off, ins));
              DGDP_RETURN_IF_ERROR(s.Put(sm + 2 * phase + b_off, del));
            }
          }
        }
      }
    }
    out.query_times.push_back(sm + 2 * phase);
    out.expected.push_back(SubmatrixAnswer(inst.y, a, b));
  }
  out.kind = "submatrix-triangles-bounded";
  out.seq = s.Take();
  out.stat = StatKind::TriangleCount();
  out.scale = w;
  out.neighbor_level = NeighborLevel::kEvent;
  return out;
}

// ---------------------------------------------------------- gadget-based

absl::StatusOr<ReductionOutput> InnerProductToGadget(
    const InnerProductInstance& inst, const Gadget& g) {
  DGDP_RETURN_IF_ERROR(CheckGadget(g, /*two_edge=*/true));
  const int64_t n = static_cast<int64_t>(inst.y.size());
  const int64_t k = static_cast<int64_t>(inst.queries.size());
  if (n < 1 || k < 1) {
    return absl::InvalidArgumentError("need n >= 1 and at least one query");
  }
  DGDP_RETURN_IF_ERROR(CheckBits(inst.y, n, "y"));
  for (const BitVector& q : inst.queries) {
    DGDP_RETURN_IF_ERROR(CheckBits(q, n, "query q"));
  }
  const int64_t mg = g.num_edges();
  const int64_t t0 = (mg + 1) * n;
  Schedule s(static_cast<uint32_t>(g.num_nodes * n), (mg + 2 * k) * n);
  DGDP_RETURN_IF_ERROR(BuildCopies(g, static_cast<int>(n), s));

  ReductionOutput out;
  for (int64_t j = 1; j <= n; ++j) {
    if (inst.y[j - 1]) {
      DGDP_RETURN_IF_ERROR(s.Put(
          mg * n + j, g.Toggle(CopyEdge(g, static_cast<int>(j - 1), g.e1))));
    }
  }
  for (int64_t l = 1; l <= k; ++l) {
    const BitVector& q = inst.queries[l - 1];
    int64_t answer = 0;
    for (int64_t j = 1; j <= n; ++j) {
      answer += inst.y[j - 1] & q[j - 1];
      if (!q[j - 1]) continue;
      const EdgeKey e2 = CopyEdge(g, static_cast<int>(j - 1), *g.e2);
      DGDP_RETURN_IF_ERROR(s.Put(t0 + 2 * (l - 1) * n + j, g.Toggle(e2)));
      if (l < k) {
        DGDP_RETURN_IF_ERROR(s.Put(t0 + (2 * l - 1) * n + j, g.Revert(e2)));
      }
    }
    out.query_times.push_back((mg + 2 * l) * n);
    out.expected.push_back(answer);
  }
  out.kind = "innerproduct-" + g.name;
  out.seq = s.Take();
  out.stat = g.stat;
  out.scale = g.sign * g.weight;
  out.baseline_time = t0;
  out.neighbor_level = NeighborLevel::kEvent;
  return out;
}

namespace {

// Shared shape of the marginals reductions over gadget copies. `setup`
// toggles e1 of every copy at m_g n + i when true; the column toggles act on
// `column_edge`.
absl::StatusOr<ReductionOutput> MarginalsOverCopies(
    const MarginalsInstance& inst, const Gadget& g, bool setup,
    EdgeKey column_edge) {
  DGDP_RETURN_IF_ERROR(CheckMatrix(inst.y));
  const int64_t n = inst.y.rows;
  const int64_t d = inst.y.cols;
  const int64_t mg = g.num_edges();
  const int64_t t0 = (mg + 1) * n;
  Schedule s(static_cast<uint32_t>(g.num_nodes * n), (mg + 2 * d) * n);
  DGDP_RETURN_IF_ERROR(BuildCopies(g, static_cast<int>(n), s));
  if (setup) {
    for (int64_t i = 1; i <= n; ++i) {
      DGDP_RETURN_IF_ERROR(s.Put(
          mg * n + i, g.Toggle(CopyEdge(g, static_cast<int>(i - 1), g.e1))));
    }
  }
  for (int64_t j = 1; j <= d; ++j) {
    for (int64_t i = 1; i <= n; ++i) {
      if (!inst.y.at(i - 1, j - 1)) continue;
      const EdgeKey e = CopyEdge(g, static_cast<int>(i - 1), column_edge);
      DGDP_RETURN_IF_ERROR(s.Put(t0 + 2 * (j - 1) * n + i, g.Toggle(e)));
      if (j < d) {
        DGDP_RETURN_IF_ERROR(s.Put(t0 + (2 * j - 1) * n + i, g.Revert(e)));
      }
    }
  }
  ReductionOutput out;
  for (int64_t j = 1; j <= d; ++j) out.query_times.push_back((mg + 2 * j) * n);
  out.expected = ColumnSums(inst.y);
  out.seq = s.Take();
  out.stat = g.stat;
  out.scale = g.sign * g.weight;
  out.baseline_time = t0;
  out.neighbor_level = NeighborLevel::kItem;
  return out;
}

}  // namespace

absl::StatusOr<ReductionOutput> MarginalsToGadget(const MarginalsInstance& inst,
                                                  const Gadget& g) {
  DGDP_RETURN_IF_ERROR(CheckGadget(g, /*two_edge=*/false));
  absl::StatusOr<ReductionOutput> out =
      MarginalsOverCopies(inst, g, /*setup=*/false, g.e1);
  if (out.ok()) out->kind = "marginals-" + g.name;
  return out;
}

absl::StatusOr<ReductionOutput> OutputDeterminedVariant(
    const MarginalsInstance& inst, const Gadget& g) {
  DGDP_RETURN_IF_ERROR(CheckGadget(g, /*two_edge=*/true));
  absl::StatusOr<ReductionOutput> out =
      MarginalsOverCopies(inst, g, /*setup=*/true, *g.e2);
  if (out.ok()) out->kind = "output-determined-" + g.name;
  return out;
}

absl::StatusOr<ReductionOutput> MarginalsToTriangles(
    const MarginalsInstance& inst, int64_t w) {
  DGDP_RETURN_IF_ERROR(CheckMatrix(inst.y));
  if (w < 1) return absl::InvalidArgumentError("w must be >= 1");
  const int64_t n = inst.y.rows;
  const int64_t d = inst.y.cols;
  int64_t r = static_cast<int64_t>(std::ceil(std::sqrt(double(n))));
  while (r * r < n) ++r;
  const int64_t t0 = 2 * r * w;
  Schedule s(static_cast<uint32_t>(2 * r + w), t0 + 2 * n * d);
  // V0 = [0, r), V1 = [r, 2r), W = [2r, 2r + w).
  int64_t t = 0;
  for (int64_t v = 0; v < 2 * r; ++v) {
    for (int64_t u = 0; u < w; ++u) {
      DGDP_RETURN_IF_ERROR(s.Put(
          ++t, Update::Insert(static_cast<NodeId>(v),
                              static_cast<NodeId>(2 * r + u))));
    }
  }
  auto pair = [&](int64_t i) {
    return EdgeKey::Of(static_cast<NodeId>((i - 1) / r),
                       static_cast<NodeId>(r + (i - 1) % r));
  };
  for (int64_t j = 1; j <= d; ++j) {
    for (int64_t i = 1; i <= n; ++i) {
      if (!inst.y.at(i - 1, j - 1)) continue;
      DGDP_RETURN_IF_ERROR(
          s.Put(t0 + 2 * (j - 1) * n + i, Update::Insert(pair(i))));
      DGDP_RETURN_IF_ERROR(
          s.Put(t0 + (2 * j - 1) * n + i, Update::Delete(pair(i))));
    }
  }
  ReductionOutput out;
  out.kind = "marginals-triangles";
  for (int64_t j = 1; j <= d; ++j) {
    out.query_times.push_back(t0 + (2 * j - 1) * n);
  }
  out.expected = ColumnSums(inst.y);
  out.seq = s.Take();
  out.stat = StatKind::TriangleCount();
  out.scale = w;
  out.neighbor_level = NeighborLevel::kItem;
  return out;
}

uint32_t EdgeCountNodes(int n) {
  uint32_t nodes = 2;
  while (int64_t{nodes} * (nodes - 1) / 2 < n) ++nodes;
  return nodes;
}

absl::StatusOr<ReductionOutput> MarginalsToEdgeCount(
    const MarginalsInstance& inst) {
  DGDP_RETURN_IF_ERROR(CheckMatrix(inst.y));
  const int64_t n = inst.y.rows;
  const int64_t d = inst.y.cols;
  const uint32_t nodes = EdgeCountNodes(static_cast<int>(n));
  std::vector<EdgeKey> pairs;
  for (NodeId a = 0; a < nodes && int64_t(pairs.size()) < n; ++a) {
    for (NodeId b = a + 1; b < nodes && int64_t(pairs.size()) < n; ++b) {
      pairs.push_back(EdgeKey::Of(a, b));
    }
  }
  Schedule s(nodes, 2 * n * d);
  for (int64_t j = 1; j <= d; ++j) {
    for (int64_t i = 1; i <= n; ++i) {
      if (!inst.y.at(i - 1, j - 1)) continue;
      DGDP_RETURN_IF_ERROR(
          s.Put(2 * (j - 1) * n + i, Update::Insert(pairs[i - 1])));
      if (j < d) {
        DGDP_RETURN_IF_ERROR(
            s.Put((2 * j - 1) * n + i, Update::Delete(pairs[i - 1])));
      }
    }
  }
  ReductionOutput out;
  out.kind = "marginals-edges";
  for (int64_t j = 1; j <= d; ++j) out.query_times.push_back((2 * j - 1) * n);
  out.expected = ColumnSums(inst.y);
  out.seq = s.Take();
  out.stat = StatKind::EdgeCount();
  out.scale = 1;
  out.neighbor_level = NeighborLevel::kItem;
  return out;
}

// --------------------------------------------------------------- helpers

UpdateSequence DropUpdate(const UpdateSequence& seq, int64_t t) {
  UpdateSequence out = seq;
  if (t >= 1 && t <= out.horizon()) out.updates[t - 1] = Update::NoOp();
  return out;
}

absl::StatusOr<ReductionOutput> Pad(const ReductionOutput& out,
                                    uint32_t num_nodes, int64_t horizon) {
  if (num_nodes < out.seq.num_nodes || horizon < out.seq.horizon()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "cannot pad (N=%d, T=%d) down to (N=%d, T=%d)", out.seq.num_nodes,
        out.seq.horizon(), num_nodes, horizon));
  }
  ReductionOutput padded = out;
  padded.seq.num_nodes = num_nodes;
  padded.seq.updates.resize(horizon, Update::NoOp());
  // Isolated nodes change the value of statistics such as the component
  // count, but only through a constant that cancels against the baseline.
  if (!padded.baseline_time.has_value() && num_nodes != out.seq.num_nodes) {
    const int64_t f0 =
        ExactValue(out.stat, DynamicGraph(num_nodes)).front() -
        ExactValue(out.stat, DynamicGraph(out.seq.num_nodes)).front();
    if (f0 != 0) {
      return absl::FailedPreconditionError(
          "padding nodes shifts the statistic and there is no baseline");
    }
  }
  return padded;
}

absl::StatusOr<LiftedSequence> LiftTau(const UpdateSequence& seq,
                                       uint32_t tau) {
  if (tau < 1) return absl::InvalidArgumentError("tau must be >= 1");
  const uint32_t n = seq.num_nodes;
  const uint32_t extra = tau - 1;
  LiftedSequence out;
  out.seq.num_nodes = n + extra;
  for (uint32_t u = 0; u < extra; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      out.seq.updates.push_back(Update::Insert(n + u, v));
    }
  }
  for (uint32_t u = 0; u < extra; ++u) {
    for (uint32_t u2 = u + 1; u2 < extra; ++u2) {
      out.seq.updates.push_back(Update::Insert(n + u, n + u2));
    }
  }
  out.t0 = out.seq.horizon();
  out.seq.updates.insert(out.seq.updates.end(), seq.updates.begin(),
                         seq.updates.end());
  return out;
}

// ----------------------------------------------------- verify and decode

absl::StatusOr<std::vector<int64_t>> VerifyReduction(
    const ReductionOutput& out, std::span<const int64_t> expected) {
  if (absl::Status s = Validate(out.seq); !s.ok()) return s;
  if (expected.size() != out.query_times.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%d expected answers for %d query times",
                        expected.size(), out.query_times.size()));
  }
  if (out.scale == 0) return absl::InvalidArgumentError("scale is zero");
  for (size_t m = 0; m < out.query_times.size(); ++m) {
    const int64_t t = out.query_times[m];
    if (t < 1 || t > out.seq.horizon() ||
        (m > 0 && t <= out.query_times[m - 1])) {
      return absl::FailedPreconditionError(
          absl::StrFormat("query %d: time %d out of order or range", m + 1, t));
    }
  }
  std::vector<int64_t> times = out.query_times;
  if (out.baseline_time) times.push_back(*out.baseline_time);
  std::vector<int64_t> value_at(times.size(), 0);

  StatTracker tracker(out.seq.num_nodes);
  for (int64_t t = 1; t <= out.seq.horizon(); ++t) {
    if (absl::StatusOr<int64_t> d = tracker.Apply(out.seq.at(t)); !d.ok()) {
      return d.status();
    }
    for (size_t q = 0; q < times.size(); ++q) {
      if (times[q] == t) value_at[q] = tracker.Value(out.stat).front();
    }
  }
  const int64_t base = out.baseline_time ? value_at.back() : 0;
  std::vector<int64_t> recovered;
  for (size_t m = 0; m < out.query_times.size(); ++m) {
    const int64_t diff = value_at[m] - base;
    if (diff % out.scale != 0 || diff / out.scale != expected[m]) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "query %d at t=%d: f difference %d / scale %d != expected %d", m + 1,
          out.query_times[m], diff, out.scale, expected[m]));
    }
    recovered.push_back(diff / out.scale);
  }
  return recovered;
}

absl::StatusOr<std::vector<int64_t>> VerifyReduction(
    const ReductionOutput& out) {
  return VerifyReduction(out, out.expected);
}

absl::Status CheckSiblings(const ReductionOutput& a, const ReductionOutput& b) {
  absl::StatusOr<bool> ok = a.neighbor_level == NeighborLevel::kEvent
                                ? AreEventNeighbors(a.seq, b.seq)
                                : AreItemNeighbors(a.seq, b.seq);
  if (!ok.ok()) return ok.status();
  if (!*ok) {
    return absl::FailedPreconditionError(absl::StrCat(
        a.kind, ": sibling outputs are not ",
        a.neighbor_level == NeighborLevel::kEvent ? "event" : "item",
        "-level neighbors"));
  }
  return absl::OkStatus();
}

QuerySidecar SidecarOf(const ReductionOutput& out) {
  return {out.query_times, out.scale, out.baseline_time};
}

std::string FormatQuerySidecar(const QuerySidecar& sidecar) {
  std::string text;
  for (size_t m = 0; m < sidecar.query_times.size(); ++m) {
    absl::StrAppend(&text, m + 1, " ", sidecar.query_times[m], " ",
                    sidecar.scale);
    if (sidecar.baseline_time) absl::StrAppend(&text, " ", *sidecar.baseline_time);
    text += "\n";
  }
  return text;
}

absl::StatusOr<QuerySidecar> ParseQuerySidecar(absl::string_view text) {
  QuerySidecar out;
  int64_t line_no = 0;
  for (absl::string_view line :
       absl::StrSplit(text, '\n', absl::SkipWhitespace())) {
    ++line_no;
    std::vector<absl::string_view> tok =
        absl::StrSplit(line, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
    int64_t m = 0;
    int64_t t = 0;
    int64_t scale = 0;
    int64_t t0 = 0;
    if ((tok.size() != 3 && tok.size() != 4) || !absl::SimpleAtoi(tok[0], &m) ||
        !absl::SimpleAtoi(tok[1], &t) || !absl::SimpleAtoi(tok[2], &scale) ||
        (tok.size() == 4 && !absl::SimpleAtoi(tok[3], &t0)) || m != line_no) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed sidecar line '", line, "'"));
    }
    const std::optional<int64_t> base =
        tok.size() == 4 ? std::optional<int64_t>(t0) : std::nullopt;
    if (line_no > 1 && (scale != out.scale || base != out.baseline_time)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sidecar line ", line_no, " disagrees on scale or baseline"));
    }
    out.query_times.push_back(t);
    out.scale = scale;
    out.baseline_time = base;
  }
  return out;
}

absl::StatusOr<std::vector<double>> DecodeAnswers(
    std::span<const double> released, const QuerySidecar& sidecar) {
  const int64_t horizon = static_cast<int64_t>(released.size());
  auto at = [&](int64_t t) -> absl::StatusOr<double> {
    if (t < 1 || t > horizon) {
      return absl::OutOfRangeError(
          absl::StrFormat("no release for t=%d (have %d)", t, horizon));
    }
    return released[t - 1];
  };
  if (sidecar.scale == 0) return absl::InvalidArgumentError("scale is zero");
  double base = 0;
  if (sidecar.baseline_time) {
    absl::StatusOr<double> b = at(*sidecar.baseline_time);
    if (!b.ok()) return b.status();
    base = *b;
  }
  std::vector<double> answers;
  for (int64_t t : sidecar.query_times) {
    absl::StatusOr<double> r = at(t);
    if (!r.ok()) return r.status();
    answers.push_back((*r - base) / static_cast<double>(sidecar.scale));
  }
  return answers;
}

absl::StatusOr<std::vector<double>> DecodeAnswers(
    std::span<const double> released, const ReductionOutput& out) {
  return DecodeAnswers(released, SidecarOf(out));
}

}  // namespace dyngraph_dp
