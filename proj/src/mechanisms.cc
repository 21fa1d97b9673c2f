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

#include "dyngraph_dp/mechanisms.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace dyngraph_dp {

namespace {

absl::StatusOr<NoiseKind> ResolveNoise(NoiseFamily family,
                                       const PrivacyParams& p) {
  switch (family) {
    case NoiseFamily::kAuto:
      return p.delta > 0 ? NoiseKind::kGaussian : NoiseKind::kLaplace;
    case NoiseFamily::kLaplace:
      return NoiseKind::kLaplace;
    case NoiseFamily::kGaussian:
      if (p.delta <= 0) {
        return absl::InvalidArgumentError("Gaussian noise needs delta > 0");
      }
      return NoiseKind::kGaussian;
    case NoiseFamily::kNone:
      return NoiseKind::kNone;
  }
  return absl::InvalidArgumentError("unknown noise family");
}

absl::Status CheckHorizon(int64_t t, int64_t horizon) {
  if (t >= horizon) {
    return absl::OutOfRangeError(
        absl::StrFormat("horizon %d exceeded", horizon));
  }
  return absl::OkStatus();
}

Release ToRelease(const StatValue& v) { return Release(v.begin(), v.end()); }

}  // namespace

absl::string_view NoiseFamilyName(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::kAuto:
      return "auto";
    case NoiseFamily::kLaplace:
      return "laplace";
    case NoiseFamily::kGaussian:
      return "gaussian";
    case NoiseFamily::kNone:
      return "none";
  }
  return "unknown";
}

absl::StatusOr<NoiseFamily> ParseNoiseFamily(absl::string_view name) {
  for (NoiseFamily f : {NoiseFamily::kAuto, NoiseFamily::kLaplace,
                        NoiseFamily::kGaussian, NoiseFamily::kNone}) {
    if (name == NoiseFamilyName(f)) return f;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown noise family '", name, "'"));
}

// ---------------------------------------------------------------- trivial

TrivialBaseline::TrivialBaseline(StatKind kind, uint32_t num_nodes,
                                 int64_t horizon)
    : horizon_(horizon),
      value_(ToRelease(ExactValue(kind, DynamicGraph(num_nodes)))) {}

absl::StatusOr<Release> TrivialBaseline::Step(const Update&) {
  if (absl::Status s = CheckHorizon(t_, horizon_); !s.ok()) return s;
  ++t_;
  return value_;
}

// -------------------------------------------------------------- recompute

int64_t RecomputeMechanism::CalibratedBlockSize(int64_t horizon,
                                                const PrivacyParams& p, int k) {
  const double T = static_cast<double>(horizon);
  const double log_term = std::log(T * k / kBeta0);
  double b = 0;
  if (p.delta > 0) {
    b = std::cbrt(T / (p.eps * p.eps) * log_term * std::log(1.0 / p.delta));
  } else {
    b = std::sqrt(T / p.eps * log_term);
  }
  return std::clamp<int64_t>(static_cast<int64_t>(std::ceil(b)), 1, horizon);
}

RecomputeMechanism::RecomputeMechanism(const Options& options,
                                       int64_t block_size,
                                       NoiseSampler sampler)
    : options_(options),
      block_size_(block_size),
      sampler_(std::move(sampler)),
      tracker_(options.num_nodes),
      last_(ToRelease(ExactValue(options.kind, tracker_.graph()))) {}

absl::StatusOr<std::unique_ptr<RecomputeMechanism>> RecomputeMechanism::Create(
    const Options& options) {
  if (options.horizon < 1 || options.num_nodes < 1) {
    return absl::InvalidArgumentError("need N >= 1 and T >= 1");
  }
  if (absl::Status s = CheckPrivacyParams(options.privacy); !s.ok()) return s;
  absl::StatusOr<NoiseKind> kind = ResolveNoise(options.noise, options.privacy);
  if (!kind.ok()) return kind.status();

  const int k = OutputDimension(options.kind, options.num_nodes);
  PrivacyParams calibration = options.privacy;
  if (*kind == NoiseKind::kLaplace) calibration.delta = 0;
  int64_t block = CalibratedBlockSize(options.horizon, calibration, k);
  if (options.block_size.has_value()) {
    if (*options.block_size < 1) {
      return absl::InvalidArgumentError("block size must be >= 1");
    }
    block = std::min(*options.block_size, options.horizon);
  }
  const double releases =
      static_cast<double>((options.horizon + block - 1) / block);
  const Sensitivity sens = StaticSensitivity(options.kind, options.num_nodes);

  NoiseSpec spec = NoiseSpec::None();
  if (*kind == NoiseKind::kLaplace && sens.l1 > 0) {
    spec = NoiseSpec::Laplace(releases * sens.l1 / options.privacy.eps,
                              options.seed);
  } else if (*kind == NoiseKind::kGaussian && sens.l2 > 0) {
    spec = NoiseSpec::Gaussian(
        GaussianSigma(std::sqrt(releases) * sens.l2, options.privacy),
        options.seed);
  }
  absl::StatusOr<NoiseSampler> sampler = NoiseSampler::Create(spec);
  if (!sampler.ok()) return sampler.status();
  return std::unique_ptr<RecomputeMechanism>(
      new RecomputeMechanism(options, block, *std::move(sampler)));
}

absl::StatusOr<Release> RecomputeMechanism::Step(const Update& update) {
  if (absl::Status s = CheckHorizon(t_, options_.horizon); !s.ok()) return s;
  if (absl::StatusOr<int64_t> d = tracker_.Apply(update); !d.ok()) {
    return d.status();
  }
  ++t_;
  if (t_ % block_size_ == 0 || t_ == options_.horizon) {
    last_ = ToRelease(tracker_.Value(options_.kind));
    for (double& x : last_) x += sampler_.Next();
  }
  return last_;
}

// ------------------------------------------------------------ degree list

absl::StatusOr<std::unique_ptr<DegreeListMechanism>>
DegreeListMechanism::Create(uint32_t num_nodes, int64_t horizon,
                            const PrivacyParams& privacy, NoiseFamily noise,
                            uint64_t seed) {
  absl::StatusOr<NoiseKind> kind = ResolveNoise(noise, privacy);
  if (!kind.ok()) return kind.status();
  ContinualHistogram::Options options;
  options.dims = static_cast<int>(num_nodes);
  options.sparsity = 2;
  options.horizon = horizon;
  options.privacy = privacy;
  options.noise = *kind;
  options.seed = seed;
  absl::StatusOr<ContinualHistogram> histogram =
      ContinualHistogram::Create(options);
  if (!histogram.ok()) return histogram.status();
  return std::unique_ptr<DegreeListMechanism>(
      new DegreeListMechanism(horizon, num_nodes, *std::move(histogram)));
}

absl::StatusOr<Release> DegreeListMechanism::Step(const Update& update) {
  if (absl::Status s = CheckHorizon(time(), horizon_); !s.ok()) return s;
  if (absl::Status s = graph_.Apply(update); !s.ok()) return s;
  std::vector<std::pair<int, int>> nonzeros;
  if (!update.is_noop()) {
    const int sign = update.kind == UpdateKind::kInsert ? 1 : -1;
    nonzeros = {{static_cast<int>(update.edge.u), sign},
                {static_cast<int>(update.edge.v), sign}};
  }
  if (absl::Status s = histogram_.Step(nonzeros); !s.ok()) return s;
  const std::vector<double>& est = histogram_.estimate();
  noisy_max_ = *std::max_element(est.begin(), est.end());
  return est;
}

// ------------------------------------------------------- D-restricted tri

double DRestrictedTriangleMechanism::SensitivityBound(int64_t horizon,
                                                      uint32_t degree_bound,
                                                      uint32_t num_nodes) {
  const double cap = std::min<double>(
      {static_cast<double>(degree_bound),
       std::max<double>(num_nodes, 2) - 1, static_cast<double>(horizon)});
  const double d = std::max(cap, 1.0);
  const double log_t = std::max(std::log2(static_cast<double>(horizon)), 1.0);
  return 6.0 * std::sqrt(static_cast<double>(horizon) * d * log_t);
}

double DRestrictedTriangleMechanism::Sigma(int64_t horizon,
                                           uint32_t degree_bound,
                                           uint32_t num_nodes,
                                           const PrivacyParams& privacy) {
  return GaussianSigma(SensitivityBound(horizon, degree_bound, num_nodes),
                       privacy);
}

absl::StatusOr<std::unique_ptr<DRestrictedTriangleMechanism>>
DRestrictedTriangleMechanism::Create(uint32_t num_nodes, int64_t horizon,
                                     uint32_t degree_bound,
                                     const PrivacyParams& privacy,
                                     NoiseFamily noise, uint64_t seed) {
  if (absl::Status s = CheckPrivacyParams(privacy); !s.ok()) return s;
  if (privacy.delta <= 0) {
    return absl::InvalidArgumentError(
        "the D-restricted triangle mechanism needs delta > 0");
  }
  if (degree_bound < 1) {
    return absl::InvalidArgumentError("degree bound must be >= 1");
  }
  if (noise == NoiseFamily::kLaplace) {
    return absl::InvalidArgumentError(
        "the D-restricted triangle mechanism uses Gaussian noise");
  }
  const double sigma = Sigma(horizon, degree_bound, num_nodes, privacy);
  const NoiseSpec spec = noise == NoiseFamily::kNone
                             ? NoiseSpec::None()
                             : NoiseSpec::Gaussian(sigma, seed);
  absl::StatusOr<BinaryTreeCounter> counter =
      BinaryTreeCounter::Create(horizon, spec);
  if (!counter.ok()) return counter.status();
  return std::unique_ptr<DRestrictedTriangleMechanism>(
      new DRestrictedTriangleMechanism(num_nodes, degree_bound, sigma,
                                       *std::move(counter)));
}

absl::StatusOr<Release> DRestrictedTriangleMechanism::Step(
    const Update& update) {
  if (absl::Status s = CheckHorizon(time(), horizon()); !s.ok()) return s;
  absl::StatusOr<int64_t> delta = tracker_.Apply(update);
  if (!delta.ok()) return delta.status();
  const DynamicGraph& g = tracker_.graph();
  if (!first_violation_.has_value() && !update.is_noop() &&
      std::max(g.degree(update.edge.u), g.degree(update.edge.v)) >
          degree_bound_) {
    first_violation_ = counter_.time() + 1;
  }
  absl::StatusOr<double> out = counter_.Step(static_cast<double>(*delta));
  if (!out.ok()) return out.status();
  return Release{*out};
}

// ---------------------------------------------------------------- wrapper

DegreeRestrictedWrapper::DegreeRestrictedWrapper(
    const Options& options, RestrictedFactory factory,
    std::unique_ptr<DegreeListMechanism> tracker)
    : options_(options),
      factory_(std::move(factory)),
      tracker_(std::move(tracker)),
      gamma_(tracker_->ErrorBound(options.beta_s)),
      max_level_(std::max(
          1, static_cast<int>(std::bit_width(options.num_nodes - 1)))),
      graph_(options.num_nodes) {}

absl::StatusOr<std::unique_ptr<DegreeRestrictedWrapper>>
DegreeRestrictedWrapper::Create(const Options& options,
                                RestrictedFactory factory) {
  if (!(options.beta_s > 0 && options.beta_s < 1)) {
    return absl::InvalidArgumentError("beta_s must be in (0,1)");
  }
  absl::StatusOr<std::unique_ptr<DegreeListMechanism>> tracker =
      DegreeListMechanism::Create(options.num_nodes, options.horizon,
                                  options.privacy, options.tracker_noise,
                                  MixSeed(options.seed));
  if (!tracker.ok()) return tracker.status();
  return std::unique_ptr<DegreeRestrictedWrapper>(new DegreeRestrictedWrapper(
      options, std::move(factory), *std::move(tracker)));
}

int DegreeRestrictedWrapper::LevelFor(double noisy_max_degree) const {
  for (int j = 1; j < max_level_; ++j) {
    if (noisy_max_degree < std::ldexp(1.0, j)) return j;
  }
  return max_level_;
}

uint32_t DegreeRestrictedWrapper::current_degree_bound() const {
  return static_cast<uint32_t>(std::ceil(gamma_)) + (uint32_t{1} << level_);
}

absl::Status DegreeRestrictedWrapper::StartLevel(int level) {
  level_ = level;
  const std::vector<EdgeKey> edges = graph_.Edges();
  const int64_t inner_horizon =
      static_cast<int64_t>(edges.size()) + (options_.horizon - t_ + 1);
  absl::StatusOr<std::unique_ptr<ContinualMechanism>> inner =
      factory_(current_degree_bound(), inner_horizon,
               MixSeed(options_.seed + static_cast<uint64_t>(level)));
  if (!inner.ok()) return inner.status();
  inner_ = *std::move(inner);
  for (const EdgeKey& e : edges) {
    if (absl::StatusOr<Release> r = inner_->Step(Update::Insert(e)); !r.ok()) {
      return r.status();
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Release> DegreeRestrictedWrapper::Step(const Update& update) {
  if (absl::Status s = CheckHorizon(t_, options_.horizon); !s.ok()) return s;
  if (absl::StatusOr<Release> r = tracker_->Step(update); !r.ok()) {
    return r.status();
  }
  ++t_;
  const int target = LevelFor(tracker_->noisy_max_degree());
  if (inner_ == nullptr) {
    if (absl::Status s = StartLevel(target); !s.ok()) return s;
  } else if (target > level_) {
    escalations_.emplace_back(t_, target);
    if (absl::Status s = StartLevel(target); !s.ok()) return s;
  }
  absl::StatusOr<Release> out = inner_->Step(update);
  if (!out.ok()) return out.status();
  if (absl::Status s = graph_.Apply(update); !s.ok()) return s;
  return out;
}

PrivacyParams WrapperPrivacyCost(const PrivacyParams& per_part, double beta_s,
                                 uint32_t num_nodes) {
  const double log_n = std::log2(static_cast<double>(num_nodes));
  return {per_part.eps * (2 + log_n),
          per_part.delta * (1 + log_n) +
              beta_s * (1 + std::exp(per_part.eps))};
}

absl::StatusOr<std::unique_ptr<DegreeRestrictedWrapper>> MakeEventLevelTriangle(
    uint32_t num_nodes, int64_t horizon, const PrivacyParams& privacy,
    double beta_s, NoiseFamily noise, uint64_t seed) {
  if (privacy.delta <= 0) {
    return absl::InvalidArgumentError(
        "event-level triangle counting needs delta > 0");
  }
  const bool noiseless = noise == NoiseFamily::kNone;
  DegreeRestrictedWrapper::Options options;
  options.num_nodes = num_nodes;
  options.horizon = horizon;
  options.privacy = privacy;
  options.beta_s = beta_s;
  options.tracker_noise = noiseless ? NoiseFamily::kNone : NoiseFamily::kLaplace;
  options.seed = seed;
  options.inner_name = "triangle-d";
  const NoiseFamily inner_noise =
      noiseless ? NoiseFamily::kNone : NoiseFamily::kGaussian;
  RestrictedFactory factory =
      [num_nodes, privacy, inner_noise](
          uint32_t degree_bound, int64_t inner_horizon,
          uint64_t inner_seed) -> absl::StatusOr<std::unique_ptr<ContinualMechanism>> {
    absl::StatusOr<std::unique_ptr<DRestrictedTriangleMechanism>> m =
        DRestrictedTriangleMechanism::Create(num_nodes, inner_horizon,
                                             degree_bound, privacy,
                                             inner_noise, inner_seed);
    if (!m.ok()) return m.status();
    return std::unique_ptr<ContinualMechanism>(*std::move(m));
  };
  return DegreeRestrictedWrapper::Create(options, std::move(factory));
}

// ---------------------------------------------------------------- factory

absl::string_view MechanismName(MechanismId id) {
  switch (id) {
    case MechanismId::kTrivial:
      return "trivial";
    case MechanismId::kRecompute:
      return "recompute";
    case MechanismId::kDegreeList:
      return "degree-list";
    case MechanismId::kTriangleDRestricted:
      return "triangle-d";
    case MechanismId::kTriangleEventLevel:
      return "triangle-event";
  }
  return "unknown";
}

absl::StatusOr<MechanismId> ParseMechanismId(absl::string_view name) {
  for (MechanismId id :
       {MechanismId::kTrivial, MechanismId::kRecompute,
        MechanismId::kDegreeList, MechanismId::kTriangleDRestricted,
        MechanismId::kTriangleEventLevel}) {
    if (name == MechanismName(id)) return id;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown mechanism '", name, "'"));
}

absl::StatusOr<std::unique_ptr<ContinualMechanism>> MakeMechanism(
    const MechanismConfig& c) {
  if (c.num_nodes < 1 || c.horizon < 1) {
    return absl::InvalidArgumentError("need N >= 1 and T >= 1");
  }
  auto require_stat = [&](StatId id) -> absl::Status {
    if (c.stat.id != id) {
      return absl::InvalidArgumentError(
          absl::StrCat("mechanism '", MechanismName(c.id),
                       "' does not release '", StatName(c.stat), "'"));
    }
    return absl::OkStatus();
  };
  auto upcast = [](auto m) -> absl::StatusOr<std::unique_ptr<ContinualMechanism>> {
    if (!m.ok()) return m.status();
    return std::unique_ptr<ContinualMechanism>(*std::move(m));
  };
  switch (c.id) {
    case MechanismId::kTrivial:
      return std::make_unique<TrivialBaseline>(c.stat, c.num_nodes, c.horizon);
    case MechanismId::kRecompute: {
      RecomputeMechanism::Options o;
      o.kind = c.stat;
      o.num_nodes = c.num_nodes;
      o.horizon = c.horizon;
      o.privacy = c.privacy;
      o.noise = c.noise;
      o.seed = c.seed;
      o.item_level = c.item_level;
      o.block_size = c.block_size;
      return upcast(RecomputeMechanism::Create(o));
    }
    case MechanismId::kDegreeList:
      if (absl::Status s = require_stat(StatId::kDegreeList); !s.ok()) return s;
      return upcast(DegreeListMechanism::Create(c.num_nodes, c.horizon,
                                                c.privacy, c.noise, c.seed));
    case MechanismId::kTriangleDRestricted:
      if (absl::Status s = require_stat(StatId::kTriangleCount); !s.ok()) {
        return s;
      }
      return upcast(DRestrictedTriangleMechanism::Create(
          c.num_nodes, c.horizon, c.degree_bound, c.privacy, c.noise, c.seed));
    case MechanismId::kTriangleEventLevel:
      if (absl::Status s = require_stat(StatId::kTriangleCount); !s.ok()) {
        return s;
      }
      return upcast(MakeEventLevelTriangle(c.num_nodes, c.horizon, c.privacy,
                                           c.beta, c.noise, c.seed));
  }
  return absl::InvalidArgumentError("unknown mechanism");
}

}  // namespace dyngraph_dp
