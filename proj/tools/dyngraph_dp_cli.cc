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

// Command-line front end: validate streams, run mechanisms over repeated
// trials, sweep parameter grids, and build, verify and decode reductions.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "dyngraph_dp/exact_stats.h"
#include "dyngraph_dp/gadgets.h"
#include "dyngraph_dp/graph_stream.h"
#include "dyngraph_dp/harness.h"
#include "dyngraph_dp/mechanisms.h"
#include "dyngraph_dp/reductions.h"

namespace dyngraph_dp {
namespace {

struct MechanismFlags {
  std::string stat = "triangles";
  std::string mech = "recompute";
  double eps = 1.0;
  double delta = 0.0;
  double beta = 0.05;
  uint32_t deg_bound = 0;
  int64_t block = 0;
  std::string noise = "auto";
  bool item_level = false;
  int trials = 1;
  uint64_t seed = 0;
  bool clamp = false;
  int threads = 0;
};

void AddMechanismFlags(CLI::App* app, MechanismFlags& f) {
  app->add_option("--stat", f.stat,
                  "edges, triangles, high-degree:<tau>, degree-list, "
                  "degree-hist, matching, components");
  app->add_option("--mech", f.mech,
                  "trivial, recompute, degree-list, triangle-d, "
                  "triangle-event");
  app->add_option("--eps", f.eps, "privacy parameter epsilon");
  app->add_option("--delta", f.delta, "privacy parameter delta");
  app->add_option("--beta", f.beta,
                  "failure probability (quantile level and wrapper beta_s)");
  app->add_option("--deg-bound", f.deg_bound, "degree bound D for triangle-d");
  app->add_option("--block", f.block, "recompute block size override");
  app->add_option("--noise", f.noise, "auto, laplace, gaussian, none");
  app->add_flag("--item-level", f.item_level,
                "label recompute releases as item-level");
  app->add_option("--trials", f.trials, "number of trials")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "base seed");
  app->add_flag("--clamp", f.clamp, "clamp releases to [0, range]");
  app->add_option("--threads", f.threads, "worker threads (0: all cores)");
}

absl::StatusOr<RunConfig> MakeRunConfig(const MechanismFlags& f) {
  RunConfig cfg;
  absl::StatusOr<StatKind> stat = ParseStatKind(f.stat);
  if (!stat.ok()) return stat.status();
  absl::StatusOr<MechanismId> mech = ParseMechanismId(f.mech);
  if (!mech.ok()) return mech.status();
  absl::StatusOr<NoiseFamily> noise = ParseNoiseFamily(f.noise);
  if (!noise.ok()) return noise.status();
  cfg.mechanism.id = *mech;
  cfg.mechanism.stat = *stat;
  cfg.mechanism.privacy = {f.eps, f.delta};
  cfg.mechanism.beta = f.beta;
  cfg.mechanism.degree_bound = f.deg_bound;
  if (f.block > 0) cfg.mechanism.block_size = f.block;
  cfg.mechanism.noise = *noise;
  cfg.mechanism.item_level = f.item_level;
  cfg.trials = f.trials;
  cfg.base_seed = f.seed;
  cfg.clamp = f.clamp;
  cfg.threads = f.threads;
  return cfg;
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << text;
  return out ? absl::OkStatus()
             : absl::DataLossError(absl::StrCat("write failed: ", path));
}

absl::StatusOr<std::string> ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs `body` writing to `path`, or to stdout when path is empty.
template <typename F>
absl::Status WithOutput(const std::string& path, F body) {
  if (path.empty()) {
    body(std::cout);
    return absl::OkStatus();
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  body(out);
  return absl::OkStatus();
}

int Fail(const absl::Status& s) {
  std::cerr << "error: " << s << "\n";
  return 1;
}

// ------------------------------------------------------------- validate

int Validate(const std::string& path) {
  absl::StatusOr<UpdateSequence> seq = ReadSequenceFile(path);
  if (!seq.ok()) return Fail(seq.status());
  if (absl::Status s = dyngraph_dp::Validate(*seq); !s.ok()) return Fail(s);
  std::cout << absl::StrFormat("valid: N=%d T=%d\n", seq->num_nodes,
                               seq->horizon());
  return 0;
}

// ------------------------------------------------------------------ run

struct SourceFlags {
  std::string input;
  std::string random = "uniform-flip";
  uint32_t nodes = 16;
  int64_t horizon = 256;
};

absl::StatusOr<SequenceSource> MakeSource(const SourceFlags& f) {
  SequenceSource src;
  if (!f.input.empty()) {
    absl::StatusOr<UpdateSequence> seq = ReadSequenceFile(f.input);
    if (!seq.ok()) return seq.status();
    src.fixed = *std::move(seq);
    return src;
  }
  absl::StatusOr<RandomModelSpec> model = ParseRandomModel(f.random);
  if (!model.ok()) return model.status();
  src.random = *model;
  src.num_nodes = f.nodes;
  src.horizon = f.horizon;
  return src;
}

int Run(const MechanismFlags& mf, const SourceFlags& sf,
        const std::string& out_path, const std::string& coords_path) {
  absl::StatusOr<RunConfig> cfg = MakeRunConfig(mf);
  if (!cfg.ok()) return Fail(cfg.status());
  cfg->keep_coordinates = !coords_path.empty();
  absl::StatusOr<SequenceSource> src = MakeSource(sf);
  if (!src.ok()) return Fail(src.status());
  absl::StatusOr<ExperimentResult> result = RunExperiment(*cfg, *src);
  if (!result.ok()) return Fail(result.status());
  if (absl::Status s = WithOutput(out_path, [&](std::ostream& o) {
        WriteExperimentCsv(*result, mf.beta, o);
      });
      !s.ok()) {
    return Fail(s);
  }
  if (!coords_path.empty()) {
    if (absl::Status s = WithOutput(coords_path, [&](std::ostream& o) {
          WriteCoordinateCsv(*result, o);
        });
        !s.ok()) {
      return Fail(s);
    }
  }
  return 0;
}

// ---------------------------------------------------------------- sweep

int RunSweep(const MechanismFlags& mf, const SourceFlags& sf,
             const std::vector<int64_t>& horizons,
             const std::vector<uint32_t>& nodes,
             const std::vector<uint32_t>& degrees,
             const std::vector<double>& epsilons, const std::string& out_path) {
  absl::StatusOr<RunConfig> cfg = MakeRunConfig(mf);
  if (!cfg.ok()) return Fail(cfg.status());
  absl::StatusOr<SequenceSource> src = MakeSource(sf);
  if (!src.ok()) return Fail(src.status());
  std::vector<SweepPoint> grid;
  for (int64_t t : horizons.empty() ? std::vector<int64_t>{sf.horizon} : horizons) {
    for (uint32_t n : nodes.empty() ? std::vector<uint32_t>{sf.nodes} : nodes) {
      for (uint32_t d : degrees.empty() ? std::vector<uint32_t>{mf.deg_bound}
                                        : degrees) {
        for (double e : epsilons.empty() ? std::vector<double>{mf.eps}
                                         : epsilons) {
          grid.push_back({t, n, d, e});
        }
      }
    }
  }
  absl::StatusOr<std::vector<SweepRow>> rows =
      Sweep(*cfg, *src, grid, mf.beta);
  if (!rows.ok()) return Fail(rows.status());
  absl::Status s = WithOutput(out_path, [&](std::ostream& o) {
    WriteSweepCsv(*rows, mf.beta, o);
  });
  return s.ok() ? 0 : Fail(s);
}

// --------------------------------------------------------------- reduce

struct ReduceFlags {
  std::string kind;
  std::string y;
  std::string a;
  std::string b;
  std::string q;
  int64_t w = 1;
  int block = 0;
  std::string gadget = "mm";
  uint32_t pad_nodes = 0;
  int64_t pad_horizon = 0;
  std::string out;
};

absl::StatusOr<BitVector> ReadVector(const std::string& path) {
  absl::StatusOr<BinaryMatrix> m = ReadMatrixFile(path);
  if (!m.ok()) return m.status();
  if (m->rows != 1) return absl::InvalidArgumentError(path + ": want one row");
  return m->row(0);
}

absl::StatusOr<ReductionOutput> BuildReduction(const ReduceFlags& f) {
  absl::StatusOr<BinaryMatrix> y = ReadMatrixFile(f.y);
  if (!y.ok()) return y.status();
  if (f.kind == "submatrix-triangles" ||
      f.kind == "submatrix-triangles-bounded") {
    absl::StatusOr<BinaryMatrix> a = ReadMatrixFile(f.a);
    if (!a.ok()) return a.status();
    absl::StatusOr<BinaryMatrix> b = ReadMatrixFile(f.b);
    if (!b.ok()) return b.status();
    if (a->rows != b->rows) {
      return absl::InvalidArgumentError("a and b need one row per query");
    }
    SubmatrixInstance inst{*y, {}, f.w, std::nullopt};
    for (int m = 0; m < a->rows; ++m) {
      inst.queries.emplace_back(a->row(m), b->row(m));
    }
    if (f.kind == "submatrix-triangles") return SubmatrixToTriangles(inst);
    inst.block = f.block;
    return SubmatrixToTrianglesBounded(inst);
  }
  if (f.kind == "marginals-triangles") {
    return MarginalsToTriangles({*y}, f.w);
  }
  if (f.kind == "marginals-edges") return MarginalsToEdgeCount({*y});
  absl::StatusOr<Gadget> g = GadgetByName(f.gadget);
  if (!g.ok()) return g.status();
  if (f.kind == "innerproduct") {
    if (y->rows != 1) {
      return absl::InvalidArgumentError("inner product y must be one row");
    }
    absl::StatusOr<BinaryMatrix> q = ReadMatrixFile(f.q);
    if (!q.ok()) return q.status();
    InnerProductInstance inst{y->row(0), {}};
    for (int l = 0; l < q->rows; ++l) inst.queries.push_back(q->row(l));
    return InnerProductToGadget(inst, *g);
  }
  if (f.kind == "marginals") {
    absl::StatusOr<Gadget> one = ConvertToOneEdge(*g);
    if (!one.ok()) return one.status();
    return MarginalsToGadget({*y}, *one);
  }
  if (f.kind == "output-determined") return OutputDeterminedVariant({*y}, *g);
  return absl::InvalidArgumentError(absl::StrCat("unknown reduction '", f.kind,
                                                 "'"));
}

std::string FormatAnswers(const std::vector<int64_t>& answers) {
  std::string out;
  for (size_t m = 0; m < answers.size(); ++m) {
    absl::StrAppend(&out, m + 1, " ", answers[m], "\n");
  }
  return out;
}

int Reduce(const ReduceFlags& f) {
  absl::StatusOr<ReductionOutput> out = BuildReduction(f);
  if (!out.ok()) return Fail(out.status());
  if (f.pad_nodes > 0 || f.pad_horizon > 0) {
    out = Pad(*out, std::max(f.pad_nodes, out->seq.num_nodes),
              std::max(f.pad_horizon, out->seq.horizon()));
    if (!out.ok()) return Fail(out.status());
  }
  for (absl::Status s :
       {WriteSequenceFile(f.out, out->seq),
        WriteText(f.out + ".queries", FormatQuerySidecar(SidecarOf(*out))),
        WriteText(f.out + ".answers", FormatAnswers(out->expected))}) {
    if (!s.ok()) return Fail(s);
  }
  std::cout << absl::StrFormat("%s: N=%d T=%d queries=%d stat=%s\n", out->kind,
                               out->seq.num_nodes, out->seq.horizon(),
                               out->query_times.size(), StatName(out->stat));
  return 0;
}

absl::StatusOr<std::vector<int64_t>> ParseAnswers(const std::string& text) {
  std::vector<int64_t> answers;
  for (absl::string_view line :
       absl::StrSplit(text, '\n', absl::SkipWhitespace())) {
    std::vector<absl::string_view> tok =
        absl::StrSplit(line, ' ', absl::SkipEmpty());
    int64_t v = 0;
    if (tok.size() != 2 || !absl::SimpleAtoi(tok[1], &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed answer line '", line, "'"));
    }
    answers.push_back(v);
  }
  return answers;
}

int VerifyReductionCmd(const std::string& seq_path, const std::string& stat) {
  absl::StatusOr<UpdateSequence> seq = ReadSequenceFile(seq_path);
  if (!seq.ok()) return Fail(seq.status());
  absl::StatusOr<std::string> sidecar_text = ReadText(seq_path + ".queries");
  if (!sidecar_text.ok()) return Fail(sidecar_text.status());
  absl::StatusOr<QuerySidecar> sidecar = ParseQuerySidecar(*sidecar_text);
  if (!sidecar.ok()) return Fail(sidecar.status());
  absl::StatusOr<std::string> answers_text = ReadText(seq_path + ".answers");
  if (!answers_text.ok()) return Fail(answers_text.status());
  absl::StatusOr<std::vector<int64_t>> expected = ParseAnswers(*answers_text);
  if (!expected.ok()) return Fail(expected.status());
  absl::StatusOr<StatKind> kind = ParseStatKind(stat);
  if (!kind.ok()) return Fail(kind.status());

  ReductionOutput out;
  out.kind = seq_path;
  out.seq = *std::move(seq);
  out.stat = *kind;
  out.scale = sidecar->scale;
  out.query_times = sidecar->query_times;
  out.baseline_time = sidecar->baseline_time;
  absl::StatusOr<std::vector<int64_t>> recovered =
      VerifyReduction(out, *expected);
  if (!recovered.ok()) return Fail(recovered.status());
  std::cout << absl::StrFormat("verified %d queries\n", recovered->size())
            << FormatAnswers(*recovered);
  return 0;
}

// Reads released values of one trial from a run CSV.
absl::StatusOr<std::vector<double>> ReadReleased(const std::string& path,
                                                 int trial) {
  absl::StatusOr<std::string> text = ReadText(path);
  if (!text.ok()) return text.status();
  std::vector<double> released;
  bool header = true;
  for (absl::string_view line :
       absl::StrSplit(*text, '\n', absl::SkipWhitespace())) {
    if (header) {
      header = false;
      continue;
    }
    if (line.front() == '#') continue;
    std::vector<absl::string_view> tok = absl::StrSplit(line, ',');
    int tr = 0;
    int64_t t = 0;
    double r = 0;
    if (tok.size() != 5 || !absl::SimpleAtoi(tok[0], &tr) ||
        !absl::SimpleAtoi(tok[1], &t) || !absl::SimpleAtod(tok[3], &r)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed CSV row '", line, "'"));
    }
    if (tr != trial) continue;
    if (t != static_cast<int64_t>(released.size()) + 1) {
      return absl::InvalidArgumentError("CSV rows out of order");
    }
    released.push_back(r);
  }
  return released;
}

int Decode(const std::string& csv, const std::string& sidecar_path, int trial,
           const std::string& answers_path) {
  absl::StatusOr<std::vector<double>> released = ReadReleased(csv, trial);
  if (!released.ok()) return Fail(released.status());
  absl::StatusOr<std::string> text = ReadText(sidecar_path);
  if (!text.ok()) return Fail(text.status());
  absl::StatusOr<QuerySidecar> sidecar = ParseQuerySidecar(*text);
  if (!sidecar.ok()) return Fail(sidecar.status());
  absl::StatusOr<std::vector<double>> answers =
      DecodeAnswers(*released, *sidecar);
  if (!answers.ok()) return Fail(answers.status());
  std::vector<int64_t> truth;
  if (!answers_path.empty()) {
    absl::StatusOr<std::string> t = ReadText(answers_path);
    if (!t.ok()) return Fail(t.status());
    absl::StatusOr<std::vector<int64_t>> parsed = ParseAnswers(*t);
    if (!parsed.ok()) return Fail(parsed.status());
    truth = *parsed;
  }
  std::cout << (truth.empty() ? "m,recovered\n" : "m,recovered,true,abs_error\n");
  double worst = 0;
  for (size_t m = 0; m < answers->size(); ++m) {
    std::cout << m + 1 << ',' << absl::StrFormat("%.10g", (*answers)[m]);
    if (m < truth.size()) {
      const double err = std::abs((*answers)[m] - double(truth[m]));
      worst = std::max(worst, err);
      std::cout << ',' << truth[m] << ',' << absl::StrFormat("%.10g", err);
    }
    std::cout << '\n';
  }
  if (!truth.empty()) {
    std::cout << "# max_abs_error " << absl::StrFormat("%.10g", worst) << '\n';
  }
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Continual-release differential privacy for dynamic graphs"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a stream file");
  validate->add_option("file", validate_path)->required();

  MechanismFlags run_mf;
  SourceFlags run_sf;
  std::string run_out;
  std::string run_coords;
  CLI::App* run = app.add_subcommand("run", "run a mechanism over trials");
  AddMechanismFlags(run, run_mf);
  run->add_option("--input", run_sf.input, "stream file");
  run->add_option("--random", run_sf.random,
                  "uniform-flip, degree-capped:<D>, insert-heavy:<p>");
  run->add_option("--nodes", run_sf.nodes, "N for random streams");
  run->add_option("--horizon", run_sf.horizon, "T for random streams");
  run->add_option("--out", run_out, "CSV output (default stdout)");
  run->add_option("--coords-out", run_coords,
                  "per-coordinate CSV for vector statistics");

  MechanismFlags sweep_mf;
  SourceFlags sweep_sf;
  std::vector<int64_t> sweep_t;
  std::vector<uint32_t> sweep_n;
  std::vector<uint32_t> sweep_d;
  std::vector<double> sweep_eps;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand("sweep", "error quantiles over a grid");
  AddMechanismFlags(sweep, sweep_mf);
  sweep->add_option("--random", sweep_sf.random, "random stream model");
  sweep->add_option("--nodes", sweep_sf.nodes, "default N");
  sweep->add_option("--horizon", sweep_sf.horizon, "default T");
  sweep->add_option("--T", sweep_t, "horizon grid")->delimiter(',');
  sweep->add_option("--N", sweep_n, "node-count grid")->delimiter(',');
  sweep->add_option("--D", sweep_d, "degree-bound grid")->delimiter(',');
  sweep->add_option("--eps-grid", sweep_eps, "epsilon grid")->delimiter(',');
  sweep->add_option("--out", sweep_out, "CSV output (default stdout)");

  ReduceFlags rf;
  CLI::App* reduce = app.add_subcommand(
      "reduce", "build a reduction sequence with query-time sidecar");
  reduce
      ->add_option("kind", rf.kind,
                   "submatrix-triangles, submatrix-triangles-bounded, "
                   "innerproduct, marginals, marginals-triangles, "
                   "marginals-edges, output-determined")
      ->required();
  reduce->add_option("--y", rf.y, "dataset matrix Y (or y as one row)")
      ->required();
  reduce->add_option("--a", rf.a, "submatrix row selectors, one per query");
  reduce->add_option("--b", rf.b, "submatrix column selectors, one per query");
  reduce->add_option("--q", rf.q, "inner-product queries, one per row");
  reduce->add_option("--w", rf.w, "weight w");
  reduce->add_option("--block", rf.block, "block size B");
  reduce->add_option("--gadget", rf.gadget, "mm, cc, neg-d1");
  reduce->add_option("--pad-nodes", rf.pad_nodes, "pad to N nodes");
  reduce->add_option("--pad-horizon", rf.pad_horizon, "pad to T steps");
  reduce->add_option("--out", rf.out, "stream path; writes .queries, .answers")
      ->required();

  std::string verify_seq;
  std::string verify_stat;
  CLI::App* verify = app.add_subcommand(
      "verify-reduction", "replay a reduction and check every query");
  verify->add_option("file", verify_seq, "stream written by reduce")
      ->required();
  verify->add_option("--stat", verify_stat, "statistic of the reduction")
      ->required();

  std::string decode_csv;
  std::string decode_queries;
  std::string decode_answers;
  int decode_trial = 0;
  CLI::App* decode = app.add_subcommand(
      "decode", "recover query answers from a run CSV");
  decode->add_option("--released", decode_csv, "CSV from run")->required();
  decode->add_option("--queries", decode_queries, "query-time sidecar")
      ->required();
  decode->add_option("--answers", decode_answers, "true answers to compare");
  decode->add_option("--trial", decode_trial, "trial to decode");

  CLI11_PARSE(app, argc, argv);

  if (*validate) return Validate(validate_path);
  if (*run) return Run(run_mf, run_sf, run_out, run_coords);
  if (*sweep) {
    return RunSweep(sweep_mf, sweep_sf, sweep_t, sweep_n, sweep_d, sweep_eps,
                    sweep_out);
  }
  if (*reduce) return Reduce(rf);
  if (*verify) return VerifyReductionCmd(verify_seq, verify_stat);
  if (*decode) {
    return Decode(decode_csv, decode_queries, decode_trial, decode_answers);
  }
  return 1;
}

}  // namespace
}  // namespace dyngraph_dp

int main(int argc, char** argv) { return dyngraph_dp::Main(argc, argv); }
