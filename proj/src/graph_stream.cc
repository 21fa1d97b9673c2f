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

#include "dyngraph_dp/graph_stream.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"

namespace dyngraph_dp {

absl::string_view ViolationName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kInsertPresent:
      return "insert of present edge";
    case ViolationKind::kDeleteAbsent:
      return "delete of absent edge";
    case ViolationKind::kNodeOutOfRange:
      return "node id out of range";
  }
  return "unknown";
}

std::optional<Violation> FindViolation(const UpdateSequence& seq) {
  DynamicGraph g(seq.num_nodes);
  for (int64_t t = 1; t <= seq.horizon(); ++t) {
    const Update& up = seq.at(t);
    if (up.is_noop()) continue;
    if (up.edge.v >= seq.num_nodes) {
      return Violation{t, ViolationKind::kNodeOutOfRange};
    }
    const bool present = g.HasEdge(up.edge);
    if (up.kind == UpdateKind::kInsert && present) {
      return Violation{t, ViolationKind::kInsertPresent};
    }
    if (up.kind == UpdateKind::kDelete && !present) {
      return Violation{t, ViolationKind::kDeleteAbsent};
    }
    g.Apply(up).IgnoreError();
  }
  return std::nullopt;
}

absl::Status Validate(const UpdateSequence& seq) {
  if (auto v = FindViolation(seq)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid sequence at t=%d: %s", v->timestep, ViolationName(v->kind)));
  }
  return absl::OkStatus();
}

DynamicGraph::DynamicGraph(uint32_t num_nodes) : adj_(num_nodes) {}

uint32_t DynamicGraph::max_degree() const {
  size_t best = 0;
  for (const auto& list : adj_) best = std::max(best, list.size());
  return static_cast<uint32_t>(best);
}

bool DynamicGraph::HasEdge(NodeId a, NodeId b) const {
  if (a >= adj_.size() || b >= adj_.size()) return false;
  const auto& la = adj_[a];
  const auto& lb = adj_[b];
  // Search the shorter list.
  return la.size() <= lb.size() ? std::binary_search(la.begin(), la.end(), b)
                                : std::binary_search(lb.begin(), lb.end(), a);
}

int64_t DynamicGraph::CommonNeighborCount(NodeId a, NodeId b) const {
  const auto* small = &adj_[a];
  const auto* large = &adj_[b];
  if (small->size() > large->size()) std::swap(small, large);
  int64_t count = 0;
  for (NodeId w : *small) {
    if (std::binary_search(large->begin(), large->end(), w)) ++count;
  }
  return count;
}

absl::Status DynamicGraph::CheckUpdate(const Update& update) const {
  if (update.is_noop()) return absl::OkStatus();
  const EdgeKey e = update.edge;
  if (e.u == e.v) {
    return absl::InvalidArgumentError("self-loop update");
  }
  if (e.v >= adj_.size()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "edge (%d,%d) references node >= %d", e.u, e.v, adj_.size()));
  }
  const bool present = HasEdge(e);
  if (update.kind == UpdateKind::kInsert && present) {
    return absl::FailedPreconditionError(
        absl::StrFormat("insert of present edge (%d,%d)", e.u, e.v));
  }
  if (update.kind == UpdateKind::kDelete && !present) {
    return absl::FailedPreconditionError(
        absl::StrFormat("delete of absent edge (%d,%d)", e.u, e.v));
  }
  return absl::OkStatus();
}

absl::Status DynamicGraph::Apply(const Update& update) {
  if (absl::Status s = CheckUpdate(update); !s.ok()) return s;
  if (update.is_noop()) return absl::OkStatus();
  const EdgeKey e = update.edge;
  auto& lu = adj_[e.u];
  auto& lv = adj_[e.v];
  if (update.kind == UpdateKind::kInsert) {
    lu.insert(std::lower_bound(lu.begin(), lu.end(), e.v), e.v);
    lv.insert(std::lower_bound(lv.begin(), lv.end(), e.u), e.u);
    ++edge_count_;
  } else {
    lu.erase(std::lower_bound(lu.begin(), lu.end(), e.v));
    lv.erase(std::lower_bound(lv.begin(), lv.end(), e.u));
    --edge_count_;
  }
  return absl::OkStatus();
}

std::vector<EdgeKey> DynamicGraph::Edges() const {
  std::vector<EdgeKey> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adj_.size(); ++u) {
    for (NodeId v : adj_[u]) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

namespace {

absl::Status CheckSameShape(const UpdateSequence& s1,
                            const UpdateSequence& s2) {
  if (s1.num_nodes != s2.num_nodes || s1.horizon() != s2.horizon()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: (N=%d,T=%d) vs (N=%d,T=%d)", s1.num_nodes,
        s1.horizon(), s2.num_nodes, s2.horizon()));
  }
  return absl::OkStatus();
}

// `with` carries updates on e* at every differing step and `without` carries
// no-ops there.
bool IsOneSidedEventWitness(const UpdateSequence& with,
                            const UpdateSequence& without,
                            const std::vector<int64_t>& diff) {
  for (int64_t t : diff) {
    if (with.at(t).is_noop() || !without.at(t).is_noop()) return false;
  }
  const EdgeKey e = with.at(diff.front()).edge;
  const int64_t t1 = diff.front();
  int64_t t2 = with.horizon() + 1;
  if (diff.size() == 2) {
    t2 = diff.back();
    if (with.at(t2).edge != e) return false;
    if (with.at(t1).kind == with.at(t2).kind) return false;
  }
  for (int64_t t = t1 + 1; t < t2; ++t) {
    const Update& up = with.at(t);
    if (!up.is_noop() && up.edge == e) return false;
  }
  return true;
}

}  // namespace

absl::StatusOr<bool> AreItemNeighbors(const UpdateSequence& s1,
                                      const UpdateSequence& s2) {
  if (absl::Status s = CheckSameShape(s1, s2); !s.ok()) return s;
  std::optional<EdgeKey> witness;
  for (int64_t t = 1; t <= s1.horizon(); ++t) {
    const Update& a = s1.at(t);
    const Update& b = s2.at(t);
    if (a == b) continue;
    for (const Update* up : {&a, &b}) {
      if (up->is_noop()) continue;
      if (witness && *witness != up->edge) return false;
      witness = up->edge;
    }
  }
  return true;
}

absl::StatusOr<bool> AreEventNeighbors(const UpdateSequence& s1,
                                       const UpdateSequence& s2) {
  if (absl::Status s = CheckSameShape(s1, s2); !s.ok()) return s;
  std::vector<int64_t> diff;
  for (int64_t t = 1; t <= s1.horizon(); ++t) {
    if (s1.at(t) != s2.at(t)) {
      diff.push_back(t);
      if (diff.size() > 2) return false;
    }
  }
  if (diff.empty()) return true;
  return IsOneSidedEventWitness(s1, s2, diff) ||
         IsOneSidedEventWitness(s2, s1, diff);
}

absl::StatusOr<UpdateSequence> ParseSequence(absl::string_view text) {
  if (text.empty() || text.back() != '\n') {
    return absl::InvalidArgumentError("stream must end with a newline");
  }
  text.remove_suffix(1);
  std::vector<absl::string_view> lines = absl::StrSplit(text, '\n');
  auto tokens_of = [](absl::string_view line) {
    return std::vector<absl::string_view>(
        absl::StrSplit(line, absl::ByAnyChar(" \t"), absl::SkipEmpty()));
  };

  const auto header = tokens_of(lines.front());
  uint32_t n = 0;
  int64_t horizon = 0;
  if (header.size() != 2 || !absl::SimpleAtoi(header[0], &n) ||
      !absl::SimpleAtoi(header[1], &horizon) || n == 0 || horizon <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed header: '", lines.front(), "'"));
  }
  if (static_cast<int64_t>(lines.size()) - 1 != horizon) {
    return absl::InvalidArgumentError(
        absl::StrFormat("header declares T=%d but found %d update lines",
                        horizon, lines.size() - 1));
  }

  UpdateSequence seq;
  seq.num_nodes = n;
  seq.updates.reserve(horizon);
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto tok = tokens_of(lines[i]);
    auto malformed = [&] {
      return absl::InvalidArgumentError(
          absl::StrFormat("malformed line %d: '%s'", i + 1, lines[i]));
    };
    if (tok.size() == 1 && tok[0] == ".") {
      seq.updates.push_back(Update::NoOp());
      continue;
    }
    NodeId a = 0;
    NodeId b = 0;
    if (tok.size() != 3 || (tok[0] != "+" && tok[0] != "-") ||
        !absl::SimpleAtoi(tok[1], &a) || !absl::SimpleAtoi(tok[2], &b)) {
      return malformed();
    }
    if (a == b) {
      return absl::InvalidArgumentError(
          absl::StrFormat("self-loop on line %d: '%s'", i + 1, lines[i]));
    }
    seq.updates.push_back(tok[0] == "+" ? Update::Insert(a, b)
                                        : Update::Delete(a, b));
  }
  return seq;
}

std::string SerializeSequence(const UpdateSequence& seq) {
  std::string out = absl::StrCat(seq.num_nodes, " ", seq.horizon(), "\n");
  for (const Update& up : seq.updates) {
    switch (up.kind) {
      case UpdateKind::kNoOp:
        out += ".\n";
        break;
      case UpdateKind::kInsert:
        absl::StrAppend(&out, "+ ", up.edge.u, " ", up.edge.v, "\n");
        break;
      case UpdateKind::kDelete:
        absl::StrAppend(&out, "- ", up.edge.u, " ", up.edge.v, "\n");
        break;
    }
  }
  return out;
}

absl::StatusOr<UpdateSequence> ReadSequenceFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseSequence(buf.str());
}

absl::Status WriteSequenceFile(const std::string& path,
                               const UpdateSequence& seq) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << SerializeSequence(seq);
  return out ? absl::OkStatus()
             : absl::DataLossError(absl::StrCat("short write to ", path));
}

}  // namespace dyngraph_dp
