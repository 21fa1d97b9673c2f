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

// Hand-rolled generators and brute-force oracles shared by the unit tests
// and the acceptance binary. Nothing here calls into the library's own
// algorithms beyond DynamicGraph adjacency queries.

#ifndef DYNGRAPH_DP_TESTS_TEST_UTIL_H_
#define DYNGRAPH_DP_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "dyngraph_dp/graph_stream.h"

namespace dyngraph_dp::testing {

using Rng = std::mt19937_64;

inline std::vector<EdgeKey> AllPairs(uint32_t n) {
  std::vector<EdgeKey> pairs;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) pairs.push_back({u, v});
  }
  return pairs;
}

// Valid by construction: each step is a no-op with probability p_noop and
// otherwise toggles a uniformly random pair.
inline UpdateSequence RandomValidSequence(Rng& rng, uint32_t n, int64_t t_max,
                                          double p_noop = 0.1) {
  UpdateSequence seq{n, {}};
  const std::vector<EdgeKey> pairs = AllPairs(n);
  std::set<EdgeKey> present;
  std::bernoulli_distribution noop(p_noop);
  std::uniform_int_distribution<size_t> pick(0, pairs.empty() ? 0
                                                              : pairs.size() - 1);
  for (int64_t t = 0; t < t_max; ++t) {
    if (pairs.empty() || noop(rng)) {
      seq.updates.push_back(Update::NoOp());
      continue;
    }
    const EdgeKey e = pairs[pick(rng)];
    if (present.erase(e)) {
      seq.updates.push_back(Update::Delete(e));
    } else {
      present.insert(e);
      seq.updates.push_back(Update::Insert(e));
    }
  }
  return seq;
}

// Toggle-only sequence in which no insertion pushes a degree past d.
inline UpdateSequence RandomDegreeBoundedSequence(Rng& rng, uint32_t n,
                                                  int64_t t_max, uint32_t d) {
  UpdateSequence seq{n, {}};
  std::vector<uint32_t> deg(n, 0);
  std::set<EdgeKey> present;
  std::uniform_int_distribution<NodeId> node(0, n - 1);
  for (int64_t t = 0; t < t_max; ++t) {
    NodeId a = node(rng);
    NodeId b = node(rng);
    if (a == b) {
      seq.updates.push_back(Update::NoOp());
      continue;
    }
    const EdgeKey e = EdgeKey::Of(a, b);
    if (present.erase(e)) {
      --deg[a];
      --deg[b];
      seq.updates.push_back(Update::Delete(e));
    } else if (deg[a] < d && deg[b] < d) {
      present.insert(e);
      ++deg[a];
      ++deg[b];
      seq.updates.push_back(Update::Insert(e));
    } else {
      seq.updates.push_back(Update::NoOp());
    }
  }
  return seq;
}

// Graph whose edge set is bit i of `mask` over AllPairs(n).
inline DynamicGraph GraphFromMask(uint32_t n, uint64_t mask) {
  DynamicGraph g(n);
  const std::vector<EdgeKey> pairs = AllPairs(n);
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (mask >> i & 1) (void)g.Apply(Update::Insert(pairs[i]));
  }
  return g;
}

inline bool ReplayValid(const UpdateSequence& seq) {
  std::set<EdgeKey> present;
  for (const Update& u : seq.updates) {
    if (u.is_noop()) continue;
    if (u.edge.u >= seq.num_nodes || u.edge.v >= seq.num_nodes ||
        u.edge.u == u.edge.v) {
      return false;
    }
    if (u.kind == UpdateKind::kInsert && !present.insert(u.edge).second) {
      return false;
    }
    if (u.kind == UpdateKind::kDelete && present.erase(u.edge) == 0) {
      return false;
    }
  }
  return true;
}

inline int64_t BruteTriangles(const DynamicGraph& g) {
  int64_t count = 0;
  const uint32_t n = g.num_nodes();
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (!g.HasEdge(a, b)) continue;
      for (NodeId c = b + 1; c < n; ++c) {
        if (g.HasEdge(a, c) && g.HasEdge(b, c)) ++count;
      }
    }
  }
  return count;
}

namespace internal {
inline int64_t MatchFrom(const DynamicGraph& g, std::vector<bool>& used,
                         NodeId v) {
  const uint32_t n = g.num_nodes();
  while (v < n && used[v]) ++v;
  if (v >= n) return 0;
  used[v] = true;
  int64_t best = MatchFrom(g, used, v + 1);  // v stays unmatched
  for (NodeId u = v + 1; u < n; ++u) {
    if (used[u] || !g.HasEdge(v, u)) continue;
    used[u] = true;
    best = std::max(best, 1 + MatchFrom(g, used, v + 1));
    used[u] = false;
  }
  used[v] = false;
  return best;
}
}  // namespace internal

// Exhaustive maximum matching: every vertex is either skipped or paired
// with each available neighbor in turn.
inline int64_t BruteMatching(const DynamicGraph& g) {
  std::vector<bool> used(g.num_nodes(), false);
  return internal::MatchFrom(g, used, 0);
}

inline int64_t BruteComponents(const DynamicGraph& g) {
  const uint32_t n = g.num_nodes();
  std::vector<uint32_t> label(n);
  for (uint32_t i = 0; i < n; ++i) label[i] = i;
  // Repeated relaxation until stable; quadratic but obviously correct.
  for (bool changed = true; changed;) {
    changed = false;
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = 0; b < n; ++b) {
        if (a != b && g.HasEdge(a, b) && label[b] < label[a]) {
          label[a] = label[b];
          changed = true;
        }
      }
    }
  }
  std::set<uint32_t> distinct(label.begin(), label.end());
  return static_cast<int64_t>(distinct.size());
}

inline bool Touches(const Update& u, EdgeKey e) {
  return !u.is_noop() && u.edge == e;
}

// Item-level neighbors by definition: some e* such that, at every step,
// the two updates agree once updates on e* are replaced by no-ops.
inline bool BruteItemNeighbors(const UpdateSequence& s1,
                               const UpdateSequence& s2) {
  for (const EdgeKey& e : AllPairs(s1.num_nodes)) {
    bool ok = true;
    for (int64_t t = 1; t <= s1.horizon() && ok; ++t) {
      Update a = s1.at(t);
      Update b = s2.at(t);
      if (Touches(a, e)) a = Update::NoOp();
      if (Touches(b, e)) b = Update::NoOp();
      ok = a == b;
    }
    if (ok) return true;
  }
  return s1 == s2;
}

// Event-level neighbors by enumeration of every witness (e*, t1, t2, which
// sequence carries the pair, insert-first or delete-first), t2 = T + 1
// standing for "never".
inline bool BruteEventNeighbors(const UpdateSequence& s1,
                                const UpdateSequence& s2) {
  if (s1 == s2) return true;
  const int64_t horizon = s1.horizon();
  for (const EdgeKey& e : AllPairs(s1.num_nodes)) {
    for (int64_t t1 = 1; t1 <= horizon; ++t1) {
      for (int64_t t2 = t1 + 1; t2 <= horizon + 1; ++t2) {
        for (int side = 0; side < 2; ++side) {
          const UpdateSequence& with = side == 0 ? s1 : s2;
          const UpdateSequence& without = side == 0 ? s2 : s1;
          for (int insert_first = 0; insert_first < 2; ++insert_first) {
            const Update first =
                insert_first ? Update::Insert(e) : Update::Delete(e);
            const Update second =
                insert_first ? Update::Delete(e) : Update::Insert(e);
            bool ok = with.at(t1) == first && without.at(t1).is_noop();
            if (t2 <= horizon) {
              ok = ok && with.at(t2) == second && without.at(t2).is_noop();
            }
            for (int64_t t = 1; t <= horizon && ok; ++t) {
              if (t == t1 || t == t2) continue;
              ok = s1.at(t) == s2.at(t);
              if (t > t1 && t < t2) ok = ok && !Touches(s1.at(t), e);
            }
            if (ok) return true;
          }
        }
      }
    }
  }
  return false;
}

// Perturbs up to `k` positions of `seq` with no-ops or random pair updates;
// the result may be invalid.
inline UpdateSequence Perturb(Rng& rng, const UpdateSequence& seq, int k) {
  UpdateSequence out = seq;
  const std::vector<EdgeKey> pairs = AllPairs(seq.num_nodes);
  std::uniform_int_distribution<int64_t> pos(0, seq.horizon() - 1);
  std::uniform_int_distribution<size_t> pick(0, pairs.size() - 1);
  std::uniform_int_distribution<int> what(0, 2);
  for (int i = 0; i < k; ++i) {
    Update& u = out.updates[pos(rng)];
    switch (what(rng)) {
      case 0:
        u = Update::NoOp();
        break;
      case 1:
        u = Update::Insert(pairs[pick(rng)]);
        break;
      default:
        u = Update::Delete(pairs[pick(rng)]);
    }
  }
  return out;
}

inline uint32_t ReplayMaxDegree(const UpdateSequence& seq) {
  DynamicGraph g(seq.num_nodes);
  uint32_t worst = 0;
  for (const Update& u : seq.updates) {
    if (!g.Apply(u).ok()) return UINT32_MAX;
    worst = std::max(worst, g.max_degree());
  }
  return worst;
}

// Event-level sibling of `seq`: a random non-noop update at t1 and the next
// update on the same pair (if any) both become no-ops. Returns nullopt when
// the sibling would be invalid or exceed `max_degree`.
inline std::optional<UpdateSequence> EventSibling(Rng& rng,
                                                  const UpdateSequence& seq,
                                                  uint32_t max_degree) {
  std::vector<int64_t> active;
  for (int64_t t = 1; t <= seq.horizon(); ++t) {
    if (!seq.at(t).is_noop()) active.push_back(t);
  }
  if (active.empty()) return std::nullopt;
  std::uniform_int_distribution<size_t> pick(0, active.size() - 1);
  const int64_t t1 = active[pick(rng)];
  const EdgeKey e = seq.at(t1).edge;
  UpdateSequence out = seq;
  out.updates[t1 - 1] = Update::NoOp();
  for (int64_t t = t1 + 1; t <= seq.horizon(); ++t) {
    if (Touches(seq.at(t), e)) {
      out.updates[t - 1] = Update::NoOp();
      break;
    }
  }
  if (!ReplayValid(out) || ReplayMaxDegree(out) > max_degree) {
    return std::nullopt;
  }
  return out;
}

}  // namespace dyngraph_dp::testing

#endif  // DYNGRAPH_DP_TESTS_TEST_UTIL_H_
