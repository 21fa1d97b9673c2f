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

#include "dyngraph_dp/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/strip.h"
#include "dyngraph_dp/exact_stats.h"
#include "dyngraph_dp/noise.h"

namespace dyngraph_dp {

namespace {

// Random edge multiset with O(log m) insert, delete and uniform pick.
class EdgePool {
 public:
  void Add(EdgeKey e) {
    index_[e] = edges_.size();
    edges_.push_back(e);
  }
  void Remove(EdgeKey e) {
    auto it = index_.find(e);
    const size_t i = it->second;
    index_.erase(it);
    if (i + 1 != edges_.size()) {
      edges_[i] = edges_.back();
      index_[edges_[i]] = i;
    }
    edges_.pop_back();
  }
  size_t size() const { return edges_.size(); }
  EdgeKey at(size_t i) const { return edges_[i]; }

 private:
  std::vector<EdgeKey> edges_;
  std::map<EdgeKey, size_t> index_;
};

std::string FormatDouble(double x) { return absl::StrFormat("%.10g", x); }

}  // namespace

absl::StatusOr<RandomModelSpec> ParseRandomModel(absl::string_view text) {
  RandomModelSpec spec;
  if (text == "uniform-flip") return spec;
  absl::string_view rest = text;
  if (absl::ConsumePrefix(&rest, "degree-capped:")) {
    spec.model = RandomModel::kDegreeCapped;
    if (absl::SimpleAtoi(rest, &spec.degree_cap) && spec.degree_cap >= 1) {
      return spec;
    }
  } else if (absl::ConsumePrefix(&rest, "insert-heavy:")) {
    spec.model = RandomModel::kInsertHeavy;
    if (absl::SimpleAtod(rest, &spec.insert_prob) && spec.insert_prob >= 0 &&
        spec.insert_prob <= 1) {
      return spec;
    }
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "bad random model '", text,
      "' (uniform-flip, degree-capped:<D>, insert-heavy:<p>)"));
}

std::string RandomModelName(const RandomModelSpec& spec) {
  switch (spec.model) {
    case RandomModel::kUniformFlip:
      return "uniform-flip";
    case RandomModel::kDegreeCapped:
      return absl::StrCat("degree-capped:", spec.degree_cap);
    case RandomModel::kInsertHeavy:
      return absl::StrCat("insert-heavy:", spec.insert_prob);
  }
  return "unknown";
}

UpdateSequence RandomSequence(uint32_t num_nodes, int64_t horizon,
                              const RandomModelSpec& spec, uint64_t seed) {
  UpdateSequence seq;
  seq.num_nodes = num_nodes;
  seq.updates.reserve(horizon);
  if (num_nodes < 2) {
    seq.updates.assign(horizon, Update::NoOp());
    return seq;
  }
  CounterRng rng(seed);
  std::uniform_int_distribution<NodeId> first(0, num_nodes - 1);
  std::uniform_int_distribution<NodeId> second(0, num_nodes - 2);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto random_pair = [&] {
    const NodeId u = first(rng);
    NodeId v = second(rng);
    if (v >= u) ++v;
    return EdgeKey::Of(u, v);
  };
  const int64_t all_pairs = int64_t{num_nodes} * (num_nodes - 1) / 2;
  DynamicGraph g(num_nodes);
  EdgePool pool;

  for (int64_t t = 0; t < horizon; ++t) {
    Update up = Update::NoOp();
    switch (spec.model) {
      case RandomModel::kUniformFlip: {
        const EdgeKey e = random_pair();
        up = g.HasEdge(e) ? Update::Delete(e) : Update::Insert(e);
        break;
      }
      case RandomModel::kDegreeCapped: {
        const EdgeKey e = random_pair();
        if (g.HasEdge(e)) {
          up = Update::Delete(e);
        } else if (g.degree(e.u) < spec.degree_cap &&
                   g.degree(e.v) < spec.degree_cap) {
          up = Update::Insert(e);
        }
        break;
      }
      case RandomModel::kInsertHeavy: {
        const bool full = g.edge_count() == all_pairs;
        const bool insert =
            !full && (pool.size() == 0 || coin(rng) < spec.insert_prob);
        if (insert) {
          EdgeKey e = random_pair();
          while (g.HasEdge(e)) e = random_pair();
          up = Update::Insert(e);
        } else {
          std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
          up = Update::Delete(pool.at(pick(rng)));
        }
        break;
      }
    }
    if (!up.is_noop()) {
      g.Apply(up).IgnoreError();
      if (up.kind == UpdateKind::kInsert) {
        pool.Add(up.edge);
      } else {
        pool.Remove(up.edge);
      }
    }
    seq.updates.push_back(up);
  }
  return seq;
}

double NearestRankQuantile(std::vector<double> values, double q) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const double rank = std::ceil(q * static_cast<double>(values.size()));
  const size_t idx = static_cast<size_t>(std::clamp(rank, 1.0,
                                           double(values.size()))) - 1;
  return values[idx];
}

double ExperimentResult::Quantile(double q) const {
  std::vector<double> v;
  for (const TrialRecord& r : trials) v.push_back(r.max_error);
  return NearestRankQuantile(std::move(v), q);
}

double ExperimentResult::MeanMaxError() const {
  if (trials.empty()) return 0;
  double sum = 0;
  for (const TrialRecord& r : trials) sum += r.max_error;
  return sum / static_cast<double>(trials.size());
}

namespace {

absl::StatusOr<TrialRecord> RunTrial(const RunConfig& cfg,
                                     const SequenceSource& source, int trial) {
  const uint64_t seed = MixSeed(cfg.base_seed + static_cast<uint64_t>(trial));
  UpdateSequence generated;
  const UpdateSequence* seq = nullptr;
  if (source.fixed.has_value()) {
    seq = &*source.fixed;
  } else {
    generated = RandomSequence(source.num_nodes, source.horizon, source.random,
                               MixSeed(seed));
    seq = &generated;
  }
  absl::StatusOr<std::vector<StatValue>> exact =
      ExactTrajectory(cfg.mechanism.stat, *seq);
  if (!exact.ok()) return exact.status();

  MechanismConfig mc = cfg.mechanism;
  mc.num_nodes = seq->num_nodes;
  mc.horizon = seq->horizon();
  mc.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<std::unique_ptr<ContinualMechanism>> mech = MakeMechanism(mc);
  if (!mech.ok()) return mech.status();
  const double range = StatRange(mc.stat, mc.num_nodes);

  TrialRecord rec;
  rec.trial = trial;
  rec.rows.reserve(seq->horizon());
  for (int64_t t = 1; t <= seq->horizon(); ++t) {
    absl::StatusOr<Release> r = (*mech)->Step(seq->at(t));
    if (!r.ok()) return r.status();
    if (cfg.clamp) {
      for (double& x : *r) x = std::clamp(x, 0.0, range);
    }
    const StatValue& f = (*exact)[t - 1];
    if (r->size() != f.size()) {
      return absl::InternalError("release dimension mismatch");
    }
    TimestepRecord row;
    row.t = t;
    row.abs_error = -1;
    for (size_t i = 0; i < f.size(); ++i) {
      const double err = std::abs((*r)[i] - static_cast<double>(f[i]));
      if (err > row.abs_error) {
        row.abs_error = err;
        row.exact = static_cast<double>(f[i]);
        row.released = (*r)[i];
        row.coordinate = static_cast<int>(i);
      }
    }
    rec.max_error = std::max(rec.max_error, row.abs_error);
    rec.rows.push_back(row);
    if (cfg.keep_coordinates) {
      rec.releases.push_back(*std::move(r));
      rec.exact_values.push_back(f);
    }
  }
  rec.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return rec;
}

}  // namespace

absl::StatusOr<ExperimentResult> RunExperiment(const RunConfig& cfg,
                                               const SequenceSource& source) {
  if (cfg.trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (source.fixed.has_value()) {
    if (absl::Status s = Validate(*source.fixed); !s.ok()) return s;
  }
  std::vector<absl::StatusOr<TrialRecord>> results(
      cfg.trials, absl::UnknownError("trial not run"));
  int threads = cfg.threads > 0
                    ? cfg.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, cfg.trials);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < cfg.trials; i = next++) {
      results[i] = RunTrial(cfg, source, i);
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  ExperimentResult out;
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    out.trials.push_back(*std::move(r));
  }
  return out;
}

void WriteExperimentCsv(const ExperimentResult& result, double beta,
                        std::ostream& out) {
  out << "trial,t,exact,released,abs_error\n";
  for (const TrialRecord& r : result.trials) {
    for (const TimestepRecord& row : r.rows) {
      out << r.trial << ',' << row.t << ',' << FormatDouble(row.exact) << ','
          << FormatDouble(row.released) << ',' << FormatDouble(row.abs_error)
          << '\n';
    }
  }
  for (const TrialRecord& r : result.trials) {
    out << "# trial " << r.trial << " max_error " << FormatDouble(r.max_error)
        << '\n';
  }
  out << "# trials " << result.trials.size() << '\n';
  out << "# mean_max_error " << FormatDouble(result.MeanMaxError()) << '\n';
  out << "# quantile " << FormatDouble(1 - beta) << ' '
      << FormatDouble(result.Quantile(1 - beta)) << '\n';
}

void WriteCoordinateCsv(const ExperimentResult& result, std::ostream& out) {
  out << "trial,t,coordinate,exact,released\n";
  for (const TrialRecord& r : result.trials) {
    for (size_t t = 0; t < r.releases.size(); ++t) {
      for (size_t i = 0; i < r.releases[t].size(); ++i) {
        out << r.trial << ',' << t + 1 << ',' << i << ','
            << r.exact_values[t][i] << ',' << FormatDouble(r.releases[t][i])
            << '\n';
      }
    }
  }
}

absl::StatusOr<std::vector<SweepRow>> Sweep(const RunConfig& cfg,
                                            const SequenceSource& source,
                                            std::span<const SweepPoint> grid,
                                            double beta) {
  if (grid.empty()) return absl::InvalidArgumentError("empty sweep grid");
  std::vector<SweepRow> rows;
  for (const SweepPoint& p : grid) {
    RunConfig c = cfg;
    c.mechanism.privacy.eps = p.eps;
    c.mechanism.degree_bound = p.degree_bound;
    SequenceSource s = source;
    if (!s.fixed.has_value()) {
      s.num_nodes = p.num_nodes;
      s.horizon = p.horizon;
      if (s.random.model == RandomModel::kDegreeCapped) {
        s.random.degree_cap = p.degree_bound;
      }
    }
    absl::StatusOr<ExperimentResult> r = RunExperiment(c, s);
    if (!r.ok()) return r.status();
    rows.push_back({p, r->MeanMaxError(), r->Quantile(1 - beta)});
  }
  return rows;
}

void WriteSweepCsv(std::span<const SweepRow> rows, double beta,
                   std::ostream& out) {
  out << "T,N,D,eps,mean_max_error,quantile_" << FormatDouble(1 - beta)
      << '\n';
  for (const SweepRow& r : rows) {
    out << r.point.horizon << ',' << r.point.num_nodes << ','
        << r.point.degree_bound << ',' << FormatDouble(r.point.eps) << ','
        << FormatDouble(r.mean_max_error) << ',' << FormatDouble(r.quantile)
        << '\n';
  }
}

double LogLogSlope(std::span<const double> x, std::span<const double> y) {
  const size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0;
  double mx = 0;
  double my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0;
  double sxx = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0 ? sxy / sxx : 0;
}

}  // namespace dyngraph_dp
