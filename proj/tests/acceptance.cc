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

// Acceptance checks A1 to A8. Prints one [PASS]/[FAIL] line per criterion
// and exits nonzero if any fails. Each criterion's wall-clock budget is part
// of its verdict.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dyngraph_dp/dyadic.h"
#include "dyngraph_dp/exact_stats.h"
#include "dyngraph_dp/gadgets.h"
#include "dyngraph_dp/graph_stream.h"
#include "dyngraph_dp/harness.h"
#include "dyngraph_dp/mechanisms.h"
#include "dyngraph_dp/reductions.h"
#include "reduction_fixtures.h"
#include "test_util.h"

namespace dyngraph_dp {
namespace {

using testing::Rng;

struct Verdict {
  bool pass = true;
  std::string detail;
  int failures = 0;

  // Records a failed check; keeps the first few messages.
  void Fail(const std::string& what) {
    pass = false;
    if (++failures <= 3) absl::StrAppend(&detail, detail.empty() ? "" : "; ", what);
  }
};

Release AsRelease(const StatValue& v) { return Release(v.begin(), v.end()); }

std::vector<StatKind> AllStats(Rng& rng) {
  std::uniform_int_distribution<uint32_t> tau(1, 3);
  return {StatKind::EdgeCount(),  StatKind::TriangleCount(),
          StatKind::HighDegree(tau(rng)), StatKind::DegreeList(),
          StatKind::DegreeHist(), StatKind::MaxMatching(),
          StatKind::ConnectedComponents()};
}

// The shared random corpus for A1 and A8: N in [2, 16], T in [1, 512].
std::vector<UpdateSequence> Corpus() {
  Rng rng(20260101);
  std::uniform_int_distribution<uint32_t> nodes(2, 16);
  std::uniform_int_distribution<int64_t> horizon(1, 512);
  std::vector<UpdateSequence> out;
  for (int i = 0; i < 200; ++i) {
    const uint32_t n = nodes(rng);
    out.push_back(testing::RandomValidSequence(rng, n, horizon(rng)));
  }
  return out;
}

absl::StatusOr<std::vector<Release>> RunAll(ContinualMechanism& m,
                                            const UpdateSequence& s) {
  std::vector<Release> out;
  for (const Update& u : s.updates) {
    absl::StatusOr<Release> r = m.Step(u);
    if (!r.ok()) return r.status();
    out.push_back(*std::move(r));
  }
  return out;
}

Verdict A1() {
  Verdict v;
  Rng rng(1);
  const PrivacyParams pure{1.0, 0.0};
  const PrivacyParams approx{1.0, 1e-6};
  int checked_steps = 0;
  for (const UpdateSequence& s : Corpus()) {
    const uint32_t n = s.num_nodes;
    const int64_t horizon = s.horizon();
    const uint32_t realized = testing::ReplayMaxDegree(s);
    for (const StatKind& kind : AllStats(rng)) {
      auto traj = ExactTrajectory(kind, s);
      if (!traj.ok()) {
        v.Fail(traj.status().ToString());
        continue;
      }
      const Release empty = AsRelease(ExactValue(kind, DynamicGraph(n)));

      TrivialBaseline trivial(kind, n, horizon);
      auto tr = RunAll(trivial, s);
      if (!tr.ok() || (*tr)[horizon - 1] != empty) {
        v.Fail(absl::StrCat("trivial ", StatName(kind)));
      }

      auto rec = RecomputeMechanism::Create({.kind = kind,
                                             .num_nodes = n,
                                             .horizon = horizon,
                                             .privacy = pure,
                                             .noise = NoiseFamily::kNone});
      if (!rec.ok()) {
        v.Fail(rec.status().ToString());
        continue;
      }
      const int64_t b = (*rec)->block_size();
      auto out = RunAll(**rec, s);
      if (!out.ok()) {
        v.Fail(out.status().ToString());
        continue;
      }
      for (int64_t t = 1; t <= horizon; ++t) {
        const int64_t ref = (t % b == 0 || t == horizon) ? t : t - t % b;
        const Release want = ref == 0 ? empty : AsRelease((*traj)[ref - 1]);
        if ((*out)[t - 1] != want) {
          v.Fail(absl::StrFormat("recompute %s t=%d", StatName(kind), t));
          break;
        }
        ++checked_steps;
      }
    }

    std::vector<std::pair<StatKind, std::unique_ptr<ContinualMechanism>>> ms;
    auto dl = DegreeListMechanism::Create(n, horizon, approx,
                                          NoiseFamily::kNone, 0);
    auto td = DRestrictedTriangleMechanism::Create(
        n, horizon, std::max(1u, realized), approx, NoiseFamily::kNone, 0);
    auto te = MakeEventLevelTriangle(n, horizon, approx, 0.05,
                                     NoiseFamily::kNone, 0);
    if (!dl.ok() || !td.ok() || !te.ok()) {
      v.Fail("mechanism creation");
      continue;
    }
    if ((*te)->gamma() != 0) v.Fail("wrapper gamma != 0 without noise");
    ms.emplace_back(StatKind::DegreeList(), *std::move(dl));
    ms.emplace_back(StatKind::TriangleCount(), *std::move(td));
    ms.emplace_back(StatKind::TriangleCount(), *std::move(te));
    for (auto& [kind, m] : ms) {
      auto traj = ExactTrajectory(kind, s);
      auto out = RunAll(*m, s);
      if (!out.ok()) {
        v.Fail(out.status().ToString());
        continue;
      }
      for (int64_t t = 1; t <= horizon; ++t) {
        if ((*out)[t - 1] != AsRelease((*traj)[t - 1])) {
          v.Fail(absl::StrFormat("%s t=%d", m->name(), t));
          break;
        }
        ++checked_steps;
      }
    }
  }
  v.detail = absl::StrCat(v.pass ? "" : v.detail + "; ", "200 sequences, ",
                          checked_steps, " releases compared exactly");
  return v;
}

Verdict A2() {
  Verdict v;
  Rng rng(2);
  const int64_t horizon = 256;
  double worst_ratio = 0;
  int pairs = 0;
  for (uint32_t d : {2u, 4u, 8u}) {
    const double bound =
        6 * std::sqrt(double(horizon) * d * std::log2(double(horizon)));
    int checked = 0;
    while (checked < 200) {
      UpdateSequence s = testing::RandomDegreeBoundedSequence(rng, 16, horizon, d);
      auto sib = testing::EventSibling(rng, s, d);
      if (!sib) continue;
      auto nb = AreEventNeighbors(s, *sib);
      if (!nb.ok() || !*nb) {
        v.Fail("generated pair is not event-neighboring");
        continue;
      }
      ++checked;
      ++pairs;
      auto da = DifferenceSequence(StatKind::TriangleCount(), s);
      auto db = DifferenceSequence(StatKind::TriangleCount(), *sib);
      std::vector<int64_t> xa, xb;
      for (int64_t t = 0; t < horizon; ++t) {
        xa.push_back((*da)[t][0]);
        xb.push_back((*db)[t][0]);
      }
      const std::vector<int64_t> na = DyadicNodeSums(xa);
      const std::vector<int64_t> nb_sums = DyadicNodeSums(xb);
      double l2 = 0;
      for (size_t i = 0; i < na.size(); ++i) {
        const double g = double(na[i] - nb_sums[i]);
        l2 += g * g;
      }
      l2 = std::sqrt(l2);
      worst_ratio = std::max(worst_ratio, l2 / bound);
      if (l2 > bound) {
        v.Fail(absl::StrFormat("D=%d: ||diff||_2=%.3f > %.3f", d, l2, bound));
      }
    }
  }
  absl::StrAppend(&v.detail, v.detail.empty() ? "" : "; ", pairs,
                  " pairs, worst ||diff||_2 / bound = ",
                  absl::StrFormat("%.4f", worst_ratio));
  return v;
}

Verdict A3() {
  Verdict v;
  const int64_t horizon = 4096;
  const uint32_t d = 4;
  const uint32_t n = 64;
  const PrivacyParams p{1.0, 1e-5};
  const double beta = 0.05;
  RunConfig cfg;
  cfg.mechanism.id = MechanismId::kTriangleDRestricted;
  cfg.mechanism.stat = StatKind::TriangleCount();
  cfg.mechanism.privacy = p;
  cfg.mechanism.degree_bound = d;
  cfg.trials = 20;
  cfg.base_seed = 3;
  SequenceSource src;
  src.random = {RandomModel::kDegreeCapped, d};
  src.num_nodes = n;
  src.horizon = horizon;
  auto r = RunExperiment(cfg, src);
  if (!r.ok()) {
    v.Fail(r.status().ToString());
    return v;
  }
  const double sigma = DRestrictedTriangleMechanism::Sigma(horizon, d, n, p);
  const double envelope =
      sigma * std::sqrt((std::floor(std::log2(double(horizon))) + 1) * 2 *
                        std::log(horizon / beta));
  int within = 0;
  double worst = 0;
  for (const TrialRecord& t : r->trials) {
    within += t.max_error <= envelope;
    worst = std::max(worst, t.max_error);
  }
  if (within < 19) v.Fail(absl::StrCat(within, "/20 within envelope"));
  v.detail = absl::StrFormat(
      "%d/20 within %.1f (sigma=%.2f), worst %.1f, q95 %.1f", within, envelope,
      sigma, worst, r->Quantile(0.95));
  return v;
}

Verdict A4() {
  Verdict v;
  const int64_t horizon = 4096;
  const PrivacyParams p{1.0, 0.0};
  const int k = 1;
  const uint32_t n = 64;
  RunConfig cfg;
  cfg.mechanism.id = MechanismId::kRecompute;
  cfg.mechanism.stat = StatKind::EdgeCount();
  cfg.mechanism.privacy = p;
  cfg.trials = 20;
  cfg.base_seed = 4;
  SequenceSource src;
  src.num_nodes = n;
  src.horizon = horizon;
  auto r = RunExperiment(cfg, src);
  if (!r.ok()) {
    v.Fail(r.status().ToString());
    return v;
  }
  const int64_t b = RecomputeMechanism::CalibratedBlockSize(horizon, p, k);
  const double d1 = StaticSensitivity(StatKind::EdgeCount(), n).l1;
  const double releases = double((horizon + b - 1) / b);
  const double envelope =
      b * d1 + (releases * d1 / p.eps) * std::log(horizon * k / 0.05);
  int within = 0;
  double worst = 0;
  for (const TrialRecord& t : r->trials) {
    within += t.max_error <= envelope;
    worst = std::max(worst, t.max_error);
  }
  if (within < 19) v.Fail(absl::StrCat(within, "/20 within envelope"));
  v.detail = absl::StrFormat("%d/20 within %.1f (B=%d), worst %.1f", within,
                             envelope, b, worst);
  return v;
}

int64_t ValueAt(const ReductionOutput& out, int64_t t) {
  StatTracker tracker(out.seq.num_nodes);
  for (int64_t s = 1; s <= t; ++s) (void)tracker.Apply(out.seq.at(s));
  return tracker.Value(out.stat).front();
}

Verdict A5() {
  Verdict v;
  auto fig = SubmatrixToTriangles(testing::FourByFour());
  if (!fig.ok()) {
    v.Fail(fig.status().ToString());
  } else {
    auto got = VerifyReduction(*fig);
    if (!got.ok() || *got != std::vector<int64_t>{1}) v.Fail("4x4 answer != 1");
    if (ValueAt(*fig, fig->query_times[0]) != 5) v.Fail("4x4 f(G_t1) != 5");
  }
  auto worked = SubmatrixToTriangles(testing::ThreeByThree());
  if (!worked.ok() || !VerifyReduction(*worked).ok() ||
      *VerifyReduction(*worked) != std::vector<int64_t>{3}) {
    v.Fail("3x3 answer != 3");
  }
  Rng rng(5);
  int instances = 0;
  for (const std::string& name : testing::ReductionNames()) {
    for (int i = 0; i < 100; ++i) {
      testing::ReductionCase c = testing::RandomCase(rng, name);
      if (!c.out.ok() || !c.sibling.ok()) {
        v.Fail(absl::StrCat(name, ": construction failed"));
        continue;
      }
      ++instances;
      auto got = VerifyReduction(*c.out, c.answers);
      if (!got.ok()) v.Fail(absl::StrCat(name, ": ", got.status().message()));
      if (c.out->seq.num_nodes != c.num_nodes ||
          c.out->seq.horizon() != c.horizon) {
        v.Fail(absl::StrCat(name, ": shape"));
      }
      if (c.max_degree != UINT32_MAX &&
          testing::ReplayMaxDegree(c.out->seq) > c.max_degree) {
        v.Fail(absl::StrCat(name, ": degree audit"));
      }
      if (!CheckSiblings(*c.out, *c.sibling).ok()) {
        v.Fail(absl::StrCat(name, ": sibling check"));
      }
      const bool item = c.level == NeighborLevel::kItem;
      auto nb = item ? AreItemNeighbors(c.out->seq, c.sibling->seq)
                     : AreEventNeighbors(c.out->seq, c.sibling->seq);
      if (!nb.ok() || !*nb || c.out->neighbor_level != c.level) {
        v.Fail(absl::StrCat(name, ": siblings not ",
                            item ? "item" : "event", "-neighboring"));
      }
    }
  }
  absl::StrAppend(&v.detail, v.detail.empty() ? "" : "; ",
                  "4x4 -> 1 with f=5, 3x3 -> 3, ", instances,
                  " random instances over ", testing::ReductionNames().size(),
                  " reductions");
  return v;
}

Verdict A6() {
  Verdict v;
  int gadgets = 0;
  for (const Gadget& g : BuiltinGadgets()) {
    if (!VerifyGadget(g).ok()) v.Fail(g.name);
    auto one = ConvertToOneEdge(g);
    if (!one.ok() || !VerifyGadget(*one).ok()) v.Fail(g.name + " 1-edge");
    gadgets += 2;
  }
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const uint32_t n = 2 + i % 10;
    const uint32_t tau = 1 + i % 6;
    UpdateSequence s = testing::RandomValidSequence(rng, n, 40 + i);
    auto lifted = LiftTau(s, tau);
    if (!lifted.ok() || !Validate(lifted->seq).ok()) {
      v.Fail("lift failed");
      continue;
    }
    auto base = ExactTrajectory(StatKind::HighDegree(1), s);
    auto high = ExactTrajectory(StatKind::HighDegree(tau), lifted->seq);
    for (int64_t t = 1; t <= s.horizon(); ++t) {
      if ((*base)[t - 1][0] !=
          (*high)[lifted->t0 + t - 1][0] - int64_t(tau - 1)) {
        v.Fail(absl::StrFormat("lift tau=%d t=%d", tau, t));
        break;
      }
    }
  }
  absl::StrAppend(&v.detail, v.detail.empty() ? "" : "; ", gadgets,
                  " gadgets verified, lifting identity on 50 sequences");
  return v;
}

Verdict A7() {
  Verdict v;
  RunConfig cfg;
  cfg.mechanism.id = MechanismId::kTriangleDRestricted;
  cfg.mechanism.stat = StatKind::TriangleCount();
  cfg.mechanism.privacy = {1.0, 1e-5};
  cfg.trials = 20;
  cfg.base_seed = 700;
  SequenceSource src;
  src.random = {RandomModel::kDegreeCapped, 4};
  const double beta = 0.05;

  std::vector<SweepPoint> t_grid;
  for (int64_t t : {256, 1024, 4096}) t_grid.push_back({t, 64, 4, 1.0});
  std::vector<SweepPoint> e_grid;
  for (double e : {0.25, 0.5, 1.0}) e_grid.push_back({1024, 64, 4, e});
  auto tr = Sweep(cfg, src, t_grid, beta);
  auto er = Sweep(cfg, src, e_grid, beta);
  if (!tr.ok() || !er.ok()) {
    v.Fail("sweep failed");
    return v;
  }
  std::vector<double> tx, ty, ex, ey;
  for (const SweepRow& r : *tr) {
    tx.push_back(double(r.point.horizon));
    ty.push_back(r.quantile);
  }
  for (const SweepRow& r : *er) {
    ex.push_back(r.point.eps);
    ey.push_back(r.quantile);
  }
  const double t_slope = LogLogSlope(tx, ty);
  const double e_slope = LogLogSlope(ex, ey);
  if (std::abs(t_slope - 0.5) > 0.15) {
    v.Fail("T slope outside 0.5 +- 0.15");
  }
  if (std::abs(e_slope + 1) > 0.2) {
    v.Fail("eps slope outside -1 +- 0.2");
  }
  v.detail = absl::StrFormat(
      "%sT slope %.3f (q95 %.1f, %.1f, %.1f), eps slope %.3f (q95 %.1f, "
      "%.1f, %.1f)",
      v.pass ? "" : v.detail + "; ", t_slope, ty[0], ty[1], ty[2], e_slope,
      ey[0], ey[1], ey[2]);
  return v;
}

Verdict A8() {
  Verdict v;
  // Incremental triangle count against brute force over the A1 corpus.
  int64_t steps = 0;
  for (const UpdateSequence& s : Corpus()) {
    StatTracker tracker(s.num_nodes);
    for (int64_t t = 1; t <= s.horizon(); ++t) {
      (void)tracker.Apply(s.at(t));
      if (tracker.triangles() != testing::BruteTriangles(tracker.graph())) {
        v.Fail(absl::StrFormat("triangles at t=%d", t));
        break;
      }
      ++steps;
    }
  }
  // Matching: every graph on N <= 6 nodes, random graphs on 7 and 8.
  int64_t graphs = 0;
  for (uint32_t n = 1; n <= 6; ++n) {
    const uint64_t masks = uint64_t{1} << (n * (n - 1) / 2);
    for (uint64_t mask = 0; mask < masks; ++mask) {
      const DynamicGraph g = testing::GraphFromMask(n, mask);
      if (MaxMatchingSize(g) != testing::BruteMatching(g)) {
        v.Fail(absl::StrFormat("matching n=%d mask=%d", n, mask));
      }
      ++graphs;
    }
  }
  Rng rng(8);
  for (uint32_t n : {7u, 8u}) {
    std::uniform_int_distribution<uint64_t> mask(
        0, (uint64_t{1} << (n * (n - 1) / 2)) - 1);
    for (int i = 0; i < 5000; ++i) {
      const DynamicGraph g = testing::GraphFromMask(n, mask(rng));
      if (MaxMatchingSize(g) != testing::BruteMatching(g)) {
        v.Fail(absl::StrFormat("matching n=%d", n));
      }
      ++graphs;
    }
  }
  // Neighbor checkers against witness enumeration, T <= 12.
  int64_t pairs = 0;
  std::uniform_int_distribution<int64_t> horizon(1, 12);
  std::uniform_int_distribution<uint32_t> nodes(2, 4);
  std::uniform_int_distribution<int> edits(0, 3);
  for (int i = 0; i < 20000; ++i) {
    const uint32_t n = nodes(rng);
    UpdateSequence a = testing::RandomValidSequence(rng, n, horizon(rng), 0.3);
    UpdateSequence b;
    if (i % 2 == 0) {
      auto sib = testing::EventSibling(rng, a, UINT32_MAX);
      if (!sib) continue;
      b = *sib;
    } else {
      b = testing::Perturb(rng, a, edits(rng));
    }
    if (i % 4 < 2) std::swap(a, b);
    auto ev = AreEventNeighbors(a, b);
    auto it = AreItemNeighbors(a, b);
    if (!ev.ok() || !it.ok()) {
      v.Fail("checker error");
      continue;
    }
    if (*ev != testing::BruteEventNeighbors(a, b)) v.Fail("event neighbors");
    if (*it != testing::BruteItemNeighbors(a, b)) v.Fail("item neighbors");
    ++pairs;
  }
  absl::StrAppend(&v.detail, v.detail.empty() ? "" : "; ", steps,
                  " triangle steps, ", graphs, " matching graphs, ", pairs,
                  " neighbor pairs");
  return v;
}

struct Criterion {
  const char* id;
  const char* what;
  double budget_s;
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace dyngraph_dp

int main() {
  using dyngraph_dp::Criterion;
  const std::vector<Criterion> criteria = {
      {"A1", "zero-noise equivalence", 120, dyngraph_dp::A1},
      {"A2", "sensitivity certificate", 60, dyngraph_dp::A2},
      {"A3", "triangle error envelope", 300, dyngraph_dp::A3},
      {"A4", "recompute error envelope", 60, dyngraph_dp::A4},
      {"A5", "reduction equalities", 120, dyngraph_dp::A5},
      {"A6", "gadget suite", 60, dyngraph_dp::A6},
      {"A7", "scaling shapes", 600, dyngraph_dp::A7},
      {"A8", "oracle cross-validation", 180, dyngraph_dp::A8},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    dyngraph_dp::Verdict v = c.run();
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (secs >= c.budget_s) {
      v.pass = false;
      v.detail += absl::StrFormat("; over budget (%.0fs)", c.budget_s);
    }
    failed += !v.pass;
    std::printf("[%s] %s %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", c.id,
                c.what, secs, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
