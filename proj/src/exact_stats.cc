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

#include "dyngraph_dp/exact_stats.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "absl/strings/strip.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"

namespace dyngraph_dp {

std::string StatName(StatKind kind) {
  switch (kind.id) {
    case StatId::kEdgeCount:
      return "edges";
    case StatId::kTriangleCount:
      return "triangles";
    case StatId::kHighDegree:
      return absl::StrCat("high-degree:", kind.tau);
    case StatId::kDegreeList:
      return "degree-list";
    case StatId::kDegreeHist:
      return "degree-hist";
    case StatId::kMaxMatching:
      return "matching";
    case StatId::kConnectedComponents:
      return "components";
  }
  return "unknown";
}

absl::StatusOr<StatKind> ParseStatKind(absl::string_view name) {
  if (name == "edges") return StatKind::EdgeCount();
  if (name == "triangles") return StatKind::TriangleCount();
  if (name == "degree-list") return StatKind::DegreeList();
  if (name == "degree-hist") return StatKind::DegreeHist();
  if (name == "matching") return StatKind::MaxMatching();
  if (name == "components") return StatKind::ConnectedComponents();
  absl::string_view rest = name;
  if (absl::ConsumePrefix(&rest, "high-degree:")) {
    uint32_t tau = 0;
    if (absl::SimpleAtoi(rest, &tau)) return StatKind::HighDegree(tau);
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown statistic '", name, "'"));
}

bool IsVectorStat(StatKind kind) {
  return kind.id == StatId::kDegreeList || kind.id == StatId::kDegreeHist;
}

int OutputDimension(StatKind kind, uint32_t num_nodes) {
  return IsVectorStat(kind) ? static_cast<int>(num_nodes) : 1;
}

double StatRange(StatKind kind, uint32_t num_nodes) {
  const double n = num_nodes;
  switch (kind.id) {
    case StatId::kEdgeCount:
      return n * (n - 1) / 2;
    case StatId::kTriangleCount:
      return n * (n - 1) * (n - 2) / 6;
    case StatId::kDegreeList:
      return std::max(0.0, n - 1);
    case StatId::kMaxMatching:
      return std::floor(n / 2);
    case StatId::kHighDegree:
    case StatId::kDegreeHist:
    case StatId::kConnectedComponents:
      return n;
  }
  return n;
}

int64_t CountTriangles(const DynamicGraph& g) {
  int64_t count = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const auto& nu = g.neighbors(u);
    for (NodeId v : nu) {
      if (v <= u) continue;
      const auto& nv = g.neighbors(v);
      // Common neighbors w > v, so each triangle is counted once.
      auto a = std::upper_bound(nu.begin(), nu.end(), v);
      auto b = std::upper_bound(nv.begin(), nv.end(), v);
      while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++count;
          ++a;
          ++b;
        }
      }
    }
  }
  return count;
}

int64_t CountConnectedComponents(const DynamicGraph& g) {
  const uint32_t n = g.num_nodes();
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack;
  int64_t components = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return components;
}

namespace {

// Edmonds' blossom search: BFS over alternating trees from each exposed
// vertex, contracting odd cycles by relabelling their base.
class BlossomMatcher {
 public:
  explicit BlossomMatcher(const DynamicGraph& g)
      : g_(g),
        n_(static_cast<int>(g.num_nodes())),
        mate_(n_, -1),
        parent_(n_),
        base_(n_),
        in_tree_(n_),
        in_blossom_(n_) {}

  std::vector<int64_t> Run() {
    // Greedy start; augmentation fixes any suboptimal choice.
    for (int v = 0; v < n_; ++v) {
      if (mate_[v] != -1) continue;
      for (NodeId w : g_.neighbors(v)) {
        if (mate_[w] == -1) {
          mate_[v] = static_cast<int>(w);
          mate_[w] = v;
          break;
        }
      }
    }
    for (int root = 0; root < n_; ++root) {
      if (mate_[root] != -1) continue;
      int v = FindAugmentingPath(root);
      while (v != -1) {
        const int pv = parent_[v];
        const int next = mate_[pv];
        mate_[v] = pv;
        mate_[pv] = v;
        v = next;
      }
    }
    return {mate_.begin(), mate_.end()};
  }

 private:
  int LowestCommonBase(int a, int b) {
    std::vector<char> seen(n_, 0);
    while (true) {
      a = base_[a];
      seen[a] = 1;
      if (mate_[a] == -1) break;
      a = parent_[mate_[a]];
    }
    while (true) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[mate_[b]];
    }
  }

  void MarkPath(int v, int b, int child) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = 1;
      in_blossom_[base_[mate_[v]]] = 1;
      parent_[v] = child;
      child = mate_[v];
      v = parent_[mate_[v]];
    }
  }

  int FindAugmentingPath(int root) {
    std::fill(in_tree_.begin(), in_tree_.end(), 0);
    std::fill(parent_.begin(), parent_.end(), -1);
    std::iota(base_.begin(), base_.end(), 0);
    std::deque<int> queue{root};
    in_tree_[root] = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (NodeId w_id : g_.neighbors(v)) {
        const int w = static_cast<int>(w_id);
        if (base_[v] == base_[w] || mate_[v] == w) continue;
        if (w == root || (mate_[w] != -1 && parent_[mate_[w]] != -1)) {
          const int b = LowestCommonBase(v, w);
          std::fill(in_blossom_.begin(), in_blossom_.end(), 0);
          MarkPath(v, b, w);
          MarkPath(w, b, v);
          for (int i = 0; i < n_; ++i) {
            if (!in_blossom_[base_[i]]) continue;
            base_[i] = b;
            if (!in_tree_[i]) {
              in_tree_[i] = 1;
              queue.push_back(i);
            }
          }
        } else if (parent_[w] == -1) {
          parent_[w] = v;
          if (mate_[w] == -1) return w;
          in_tree_[mate_[w]] = 1;
          queue.push_back(mate_[w]);
        }
      }
    }
    return -1;
  }

  const DynamicGraph& g_;
  int n_;
  std::vector<int> mate_;
  std::vector<int> parent_;
  std::vector<int> base_;
  std::vector<char> in_tree_;
  std::vector<char> in_blossom_;
};

}  // namespace

std::vector<int64_t> MaxMatching(const DynamicGraph& g) {
  return BlossomMatcher(g).Run();
}

int64_t MaxMatchingSize(const DynamicGraph& g) {
  const auto mate = MaxMatching(g);
  int64_t matched = 0;
  for (int64_t m : mate) matched += (m != -1);
  return matched / 2;
}

namespace {

StatValue ValueWithTriangles(StatKind kind, const DynamicGraph& g,
                             int64_t triangles) {
  const uint32_t n = g.num_nodes();
  switch (kind.id) {
    case StatId::kEdgeCount:
      return {g.edge_count()};
    case StatId::kTriangleCount:
      return {triangles};
    case StatId::kHighDegree: {
      int64_t count = 0;
      for (NodeId v = 0; v < n; ++v) count += (g.degree(v) >= kind.tau);
      return {count};
    }
    case StatId::kDegreeList: {
      StatValue out(n);
      for (NodeId v = 0; v < n; ++v) out[v] = g.degree(v);
      return out;
    }
    case StatId::kDegreeHist: {
      StatValue out(n, 0);
      for (NodeId v = 0; v < n; ++v) ++out[g.degree(v)];
      return out;
    }
    case StatId::kMaxMatching:
      return {MaxMatchingSize(g)};
    case StatId::kConnectedComponents:
      return {CountConnectedComponents(g)};
  }
  return {};
}

}  // namespace

StatValue ExactValue(StatKind kind, const DynamicGraph& g) {
  const int64_t triangles =
      kind.id == StatId::kTriangleCount ? CountTriangles(g) : 0;
  return ValueWithTriangles(kind, g, triangles);
}

absl::StatusOr<int64_t> TriangleDelta(const DynamicGraph& g,
                                      const Update& update) {
  if (absl::Status s = g.CheckUpdate(update); !s.ok()) return s;
  if (update.is_noop()) return 0;
  const int64_t common = g.CommonNeighborCount(update.edge.u, update.edge.v);
  return update.kind == UpdateKind::kInsert ? common : -common;
}

absl::StatusOr<int64_t> StatTracker::Apply(const Update& update) {
  absl::StatusOr<int64_t> delta = TriangleDelta(graph_, update);
  if (!delta.ok()) return delta.status();
  if (absl::Status s = graph_.Apply(update); !s.ok()) return s;
  triangles_ += *delta;
  return *delta;
}

StatValue StatTracker::Value(StatKind kind) const {
  return ValueWithTriangles(kind, graph_, triangles_);
}

absl::StatusOr<std::vector<StatValue>> ExactTrajectory(
    StatKind kind, const UpdateSequence& seq) {
  StatTracker tracker(seq.num_nodes);
  std::vector<StatValue> out;
  out.reserve(seq.horizon());
  for (int64_t t = 1; t <= seq.horizon(); ++t) {
    if (auto d = tracker.Apply(seq.at(t)); !d.ok()) {
      return absl::Status(d.status().code(),
                          absl::StrCat("t=", t, ": ", d.status().message()));
    }
    out.push_back(tracker.Value(kind));
  }
  return out;
}

absl::StatusOr<std::vector<StatValue>> DifferenceSequence(
    StatKind kind, const UpdateSequence& seq) {
  auto trajectory = ExactTrajectory(kind, seq);
  if (!trajectory.ok()) return trajectory.status();
  StatValue prev = ExactValue(kind, DynamicGraph(seq.num_nodes));
  std::vector<StatValue> out;
  out.reserve(trajectory->size());
  for (StatValue& cur : *trajectory) {
    StatValue delta(cur.size());
    for (size_t i = 0; i < cur.size(); ++i) delta[i] = cur[i] - prev[i];
    out.push_back(std::move(delta));
    prev = std::move(cur);
  }
  return out;
}

Sensitivity StaticSensitivity(StatKind kind, uint32_t num_nodes,
                              uint32_t degree_bound) {
  switch (kind.id) {
    case StatId::kEdgeCount:
    case StatId::kMaxMatching:
    case StatId::kConnectedComponents:
      return {1, 1};
    case StatId::kTriangleCount: {
      // A flipped edge closes one triangle per common neighbor.
      const double d = degree_bound > 0
                           ? static_cast<double>(degree_bound) - 1
                           : static_cast<double>(num_nodes) - 2;
      return {std::max(d, 0.0), std::max(d, 0.0)};
    }
    case StatId::kHighDegree:
      // Both endpoints may cross the threshold; the value is a scalar.
      return {2, 2};
    case StatId::kDegreeList:
      return {2, std::sqrt(2.0)};
    case StatId::kDegreeHist:
      // Equal endpoint degrees move two units out of one bucket into the next.
      return {4, 2 * std::sqrt(2.0)};
  }
  return {1, 1};
}

}  // namespace dyngraph_dp
