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

// Distinguishing gadgets: small graphs in which toggling one or two
// designated node pairs shifts a statistic by exactly the gadget weight.

#ifndef DYNGRAPH_DP_GADGETS_H_
#define DYNGRAPH_DP_GADGETS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dyngraph_dp/exact_stats.h"
#include "dyngraph_dp/graph_stream.h"

namespace dyngraph_dp {

struct Gadget {
  std::string name;
  uint32_t num_nodes = 0;
  std::vector<EdgeKey> edges;  // E', in build order
  EdgeKey e1;
  std::optional<EdgeKey> e2;   // absent for 1-edge gadgets
  // True when e1 (and e2) belong to E', so toggling means deleting.
  bool present = false;
  int64_t weight = 1;
  StatKind stat;
  // -1 when the gadget is for the negated statistic -f.
  int sign = 1;

  int64_t num_edges() const { return static_cast<int64_t>(edges.size()); }
  bool is_two_edge() const { return e2.has_value(); }
  // The update that moves a designated pair into its toggled state.
  Update Toggle(EdgeKey e) const {
    return present ? Update::Delete(e) : Update::Insert(e);
  }
  Update Revert(EdgeKey e) const {
    return present ? Update::Insert(e) : Update::Delete(e);
  }
};

// sign * f(graph) for a scalar statistic.
int64_t SignedValue(StatKind kind, int sign, const DynamicGraph& g);

// Exhaustively checks the gadget equalities over every toggle state of the
// designated pairs: for two edges, each single toggle leaves sign*f
// unchanged and toggling both adds the weight; for one edge, the toggle adds
// the weight. Also checks the presence flag against E'.
absl::Status VerifyGadget(const Gadget& g);

// Maximum matching: a-b, b-c, c-d with E' = {(b,c)} and e1 = (a,b),
// e2 = (c,d) absent.
Gadget MatchingGadget();
// Connected components: triangle a,b,c with e1 = (a,b), e2 = (b,c) present.
Gadget ComponentsGadget();
// Negated count of non-isolated nodes: 4-cycle a-b-d-c-a with e1 = (a,b),
// e2 = (a,c) present.
Gadget NegatedHighDegreeGadget();
std::vector<Gadget> BuiltinGadgets();

// "mm", "cc", "neg-d1".
absl::StatusOr<Gadget> GadgetByName(const std::string& name);

// Fixes e2 in its toggled state, giving a verified 1-edge gadget of the same
// weight with one edge more (absent flavor) or less (present flavor).
absl::StatusOr<Gadget> ConvertToOneEdge(const Gadget& g);

}  // namespace dyngraph_dp

#endif  // DYNGRAPH_DP_GADGETS_H_
