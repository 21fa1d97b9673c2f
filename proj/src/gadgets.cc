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

#include "dyngraph_dp/gadgets.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace dyngraph_dp {

namespace {

constexpr NodeId kA = 0;
constexpr NodeId kB = 1;
constexpr NodeId kC = 2;
constexpr NodeId kD = 3;

absl::StatusOr<DynamicGraph> BuildGraph(uint32_t n,
                                        const std::vector<EdgeKey>& edges) {
  DynamicGraph g(n);
  for (const EdgeKey& e : edges) {
    if (absl::Status s = g.Apply(Update::Insert(e)); !s.ok()) return s;
  }
  return g;
}

// sign*f after applying the toggles selected by `mask` (bit 0: e1, bit 1: e2).
absl::StatusOr<int64_t> ValueWithToggles(const Gadget& g, int mask) {
  absl::StatusOr<DynamicGraph> graph = BuildGraph(g.num_nodes, g.edges);
  if (!graph.ok()) return graph.status();
  if (mask & 1) {
    if (absl::Status s = graph->Apply(g.Toggle(g.e1)); !s.ok()) return s;
  }
  if (mask & 2) {
    if (absl::Status s = graph->Apply(g.Toggle(*g.e2)); !s.ok()) return s;
  }
  return SignedValue(g.stat, g.sign, *graph);
}

}  // namespace

int64_t SignedValue(StatKind kind, int sign, const DynamicGraph& g) {
  return sign * ExactValue(kind, g).front();
}

absl::Status VerifyGadget(const Gadget& g) {
  if (IsVectorStat(g.stat)) {
    return absl::InvalidArgumentError("gadgets need a scalar statistic");
  }
  if (g.weight <= 0 || (g.sign != 1 && g.sign != -1)) {
    return absl::InvalidArgumentError("bad gadget weight or sign");
  }
  auto in_e = [&](EdgeKey e) {
    return std::find(g.edges.begin(), g.edges.end(), e) != g.edges.end();
  };
  if (in_e(g.e1) != g.present || (g.e2 && in_e(*g.e2) != g.present)) {
    return absl::FailedPreconditionError(absl::StrCat(
        g.name, ": designated pairs disagree with the presence flag"));
  }
  if (g.e2 && *g.e2 == g.e1) {
    return absl::FailedPreconditionError("e1 and e2 coincide");
  }
  absl::StatusOr<int64_t> base = ValueWithToggles(g, 0);
  if (!base.ok()) return base.status();
  std::vector<std::pair<int, int64_t>> expected;
  if (g.e2) {
    expected = {{1, *base}, {2, *base}, {3, *base + g.weight}};
  } else {
    expected = {{1, *base + g.weight}};
  }
  for (const auto& [mask, want] : expected) {
    absl::StatusOr<int64_t> got = ValueWithToggles(g, mask);
    if (!got.ok()) return got.status();
    if (*got != want) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "%s: toggle mask %d gives %d, want %d", g.name, mask, *got, want));
    }
  }
  return absl::OkStatus();
}

Gadget MatchingGadget() {
  Gadget g;
  g.name = "mm";
  g.num_nodes = 4;
  g.edges = {EdgeKey::Of(kB, kC)};
  g.e1 = EdgeKey::Of(kA, kB);
  g.e2 = EdgeKey::Of(kC, kD);
  g.present = false;
  g.stat = StatKind::MaxMatching();
  return g;
}

Gadget ComponentsGadget() {
  Gadget g;
  g.name = "cc";
  g.num_nodes = 3;
  g.edges = {EdgeKey::Of(kA, kB), EdgeKey::Of(kA, kC), EdgeKey::Of(kB, kC)};
  g.e1 = EdgeKey::Of(kA, kB);
  g.e2 = EdgeKey::Of(kB, kC);
  g.present = true;
  g.stat = StatKind::ConnectedComponents();
  return g;
}

Gadget NegatedHighDegreeGadget() {
  Gadget g;
  g.name = "neg-d1";
  g.num_nodes = 4;
  g.edges = {EdgeKey::Of(kA, kB), EdgeKey::Of(kB, kD), EdgeKey::Of(kC, kD),
             EdgeKey::Of(kA, kC)};
  g.e1 = EdgeKey::Of(kA, kB);
  g.e2 = EdgeKey::Of(kA, kC);
  g.present = true;
  g.stat = StatKind::HighDegree(1);
  g.sign = -1;
  return g;
}

std::vector<Gadget> BuiltinGadgets() {
  return {MatchingGadget(), ComponentsGadget(), NegatedHighDegreeGadget()};
}

absl::StatusOr<Gadget> GadgetByName(const std::string& name) {
  for (Gadget& g : BuiltinGadgets()) {
    if (g.name == name) return g;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown gadget '", name, "' (mm, cc, neg-d1)"));
}

absl::StatusOr<Gadget> ConvertToOneEdge(const Gadget& g) {
  if (!g.is_two_edge()) {
    return absl::FailedPreconditionError("gadget is not a 2-edge gadget");
  }
  if (absl::Status s = VerifyGadget(g); !s.ok()) return s;
  Gadget out = g;
  out.name = g.name + "-1e";
  const EdgeKey e2 = *g.e2;
  if (g.present) {
    out.edges.erase(std::find(out.edges.begin(), out.edges.end(), e2));
  } else {
    out.edges.push_back(e2);
  }
  out.e2.reset();
  if (absl::Status s = VerifyGadget(out); !s.ok()) return s;
  return out;
}

}  // namespace dyngraph_dp
