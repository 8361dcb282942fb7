/* Copyright 2026 The mlprov Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "mlprov/cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mlprov/analytics.h"
#include "mlprov/config.h"
#include "mlprov/corpus.h"
#include "mlprov/forest.h"
#include "mlprov/policy.h"
#include "mlprov/segmentation.h"
#include "mlprov/similarity.h"
#include "mlprov/synthgen.h"
#include "mlprov/table.h"

namespace mlprov {
namespace {

using nlohmann::json;

constexpr std::array<const char*, 10> kMetaColumns{
    "label",         "cost_to_acquire", "pipeline_id",         "anchor",
    "stage",         "model_type",      "graphlet_cost",       "cost_input",
    "cost_input_pre", "cost_input_pre_trainer"};
constexpr const char* kLastMetaColumn = "cost_validation";

// Raised for invalid flag combinations found after parsing.
struct UsageError : Error {
  using Error::Error;
};

struct Common {
  std::string corpus;
  std::string out;
  std::string config;
  std::uint64_t seed = 42;
};

RunConfig MakeConfig(const Common& c) {
  RunConfig cfg;
  ApplySeed(cfg, c.seed);
  if (!c.config.empty()) cfg = LoadConfig(c.config, cfg);
  return cfg;
}

// Writes to the --out path when given, else to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error("cannot write " + path);
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::ifstream OpenInput(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  return f;
}

std::string Fmt(double v) { return FormatDouble(v); }

std::string FmtOpt(const std::optional<double>& v) { return v ? Fmt(*v) : "NA"; }

double MeanOrNan(std::span<const double> v) { return v.empty() ? std::nan("") : Mean(v); }
double MeanOrNan(std::span<const int> v) { return v.empty() ? std::nan("") : Mean(v); }

std::string FmtMean(double v) { return std::isnan(v) ? "NA" : Fmt(v); }

void RequireCorpus(const Common& c) {
  if (c.corpus.empty()) throw UsageError("--corpus is required");
}

std::vector<Pipeline> Classifiable(std::vector<Pipeline> corpus, bool keep_warmstart) {
  return keep_warmstart ? std::move(corpus) : FilterWarmstart(std::move(corpus));
}

FeatureMatrix FeaturizeDir(const Common& c, const RunConfig& cfg, bool keep_warmstart) {
  const auto corpus = Classifiable(LoadCorpus(c.corpus, cfg.stop), keep_warmstart);
  if (corpus.empty()) throw Error("no pipelines left to featurize");
  return FeaturizeCorpus(corpus, FeaturizeOptionsOf(cfg), ArchitectureVocabulary::FromCorpus(corpus));
}

// --- commands ---------------------------------------------------------------

int CmdValidate(const Common& c, std::ostream& out, std::ostream& err) {
  RequireCorpus(c);
  const auto files = ListTraceFiles(c.corpus);
  if (files.empty()) throw Error("no .jsonl trace files in " + c.corpus);
  std::size_t violations = 0;
  for (const auto& path : files) {
    const std::string name = std::filesystem::path(path).filename().string();
    Trace t;
    try {
      t = ReadTraceFile(path);
    } catch (const ParseError& e) {
      out << name << ": " << e.what() << '\n';
      ++violations;
      continue;
    }
    for (const auto& v : ValidateTrace(t)) {
      out << name << ": " << v.ToString() << '\n';
      ++violations;
    }
  }
  err << files.size() << " traces, " << violations << " violations\n";
  return violations ? kExitViolations : kExitOk;
}

int CmdSegment(const Common& c, std::ostream& out, std::ostream& err) {
  RequireCorpus(c);
  const RunConfig cfg = MakeConfig(c);
  const auto corpus = LoadCorpus(c.corpus, cfg.stop);
  Sink sink(c.out, out);
  std::size_t n = 0;
  for (const auto& p : corpus) {
    WriteGraphlets(p, *sink);
    n += p.graphlets.size();
  }
  err << corpus.size() << " pipelines, " << n << " graphlets\n";
  return kExitOk;
}

int CmdStats(const Common& c, std::ostream& out, std::ostream&) {
  RequireCorpus(c);
  const RunConfig cfg = MakeConfig(c);
  const auto corpus = LoadCorpus(c.corpus, cfg.stop);
  Sink sink(c.out, out);
  {
    std::vector<std::string> header{"pipeline_id",   "lifespan_days",        "models_per_day",
                                    "trainer_count", "feature_count",        "categorical_fraction",
                                    "mean_categorical_domain"};
    for (int a = 0; a < kNumAnalyzers; ++a)
      header.push_back("analyzer_" + std::string(ToString(static_cast<Analyzer>(a))));
    for (int g = 0; g < kNumOperatorGroups; ++g)
      header.push_back("cost_" + std::string(ToString(static_cast<OperatorGroup>(g))));
    TableWriter t(*sink, "pipeline_stats", header);
    for (const auto& p : corpus) {
      const PipelineStats s = ComputePipelineStats(p.trace);
      std::vector<std::string> row{s.pipeline_id, Fmt(s.lifespan_days), Fmt(s.models_per_day),
                                   std::to_string(s.trainer_count),
                                   s.feature_count ? std::to_string(*s.feature_count) : "NA",
                                   FmtOpt(s.categorical_fraction), FmtOpt(s.mean_categorical_domain)};
      for (int u : s.analyzer_usage) row.push_back(std::to_string(u));
      for (double g : s.group_costs) row.push_back(Fmt(g));
      t.Row(row);
    }
  }
  {
    TableWriter t(*sink, "cost_breakdown", {"group", "fraction"});
    for (const auto& [g, f] : CostBreakdown(std::span<const Pipeline>(corpus)))
      t.Row({std::string(ToString(g)), Fmt(f)});
  }
  {
    const CadenceStats cs = ComputeCadence(corpus);
    TableWriter t(*sink, "cadence", {"metric", "count", "mean"});
    auto row = [&](const char* name, const auto& v) {
      t.Row({name, std::to_string(v.size()), FmtMean(MeanOrNan(v))});
    };
    row("hours_between_graphlets", cs.hours_between_graphlets);
    row("hours_between_pushed", cs.hours_between_pushed);
    row("graphlets_between_pushes", cs.graphlets_between_pushes);
    row("graphlet_duration_hours", cs.graphlet_duration_hours);
    row("trainer_cpu_pushed", cs.trainer_cpu_pushed);
    row("trainer_cpu_unpushed", cs.trainer_cpu_unpushed);
    TableWriter r(*sink, "push_rate_by_model_type", {"model_type", "push_rate"});
    for (const auto& [type, rate] : cs.push_rate_by_model_type)
      r.Row({std::string(ToString(type)), Fmt(rate)});
  }
  return kExitOk;
}

int CmdSimilarity(const Common& c, std::ostream& out, std::ostream&) {
  RequireCorpus(c);
  const RunConfig cfg = MakeConfig(c);
  CheckWeights(cfg.weights);
  const auto corpus = LoadCorpus(c.corpus, cfg.stop);
  const LshHasher hasher(cfg.lsh);
  const auto pairs = ConsecutiveSimilarities(corpus, hasher, cfg.weights);
  Sink sink(c.out, out);
  {
    TableWriter t(*sink, "pair_similarity",
                  {"pipeline_id", "anchor_a", "anchor_b", "jaccard", "dataset_sim", "code_match",
                   "successor_pushed"});
    for (const auto& p : pairs)
      t.Row({p.pipeline_id, p.anchor_a, p.anchor_b, Fmt(p.jaccard), Fmt(p.dataset_sim),
             p.code_match ? "1" : "0", p.successor_pushed ? "1" : "0"});
  }
  {
    std::vector<double> jac, ds;
    for (const auto& p : pairs) {
      jac.push_back(p.jaccard);
      ds.push_back(p.dataset_sim);
    }
    TableWriter t(*sink, "similarity_quartiles", {"metric", "q1", "q2", "q3", "q4", "mean"});
    for (auto [name, v] : {std::pair{"jaccard", &jac}, std::pair{"dataset_sim", &ds}}) {
      if (v->empty()) continue;
      const auto q = Quartiles(*v);
      t.Row({name, std::to_string(q.counts[0]), std::to_string(q.counts[1]),
             std::to_string(q.counts[2]), std::to_string(q.counts[3]), Fmt(q.mean)});
    }
  }
  {
    const auto table = ComputeDriftCodeTable(pairs);
    TableWriter t(*sink, "drift_code", {"successor", "mean_dataset_sim", "mean_code_match", "pairs"});
    for (auto [name, row] : {std::pair{"pushed", &table.pushed}, std::pair{"unpushed", &table.unpushed},
                             std::pair{"overall", &table.overall}})
      t.Row({name, Fmt(row->mean_dataset_sim), Fmt(row->mean_code_match), std::to_string(row->pairs)});
  }
  return kExitOk;
}

int CmdFeaturize(const Common& c, const std::string& stage, bool keep_warmstart, std::ostream& out,
                 std::ostream& err) {
  RequireCorpus(c);
  const RunConfig cfg = MakeConfig(c);
  FeatureMatrix m = FeaturizeDir(c, cfg, keep_warmstart);
  if (!stage.empty()) {
    auto s = ParseFeatureStage(stage);
    if (!s) throw UsageError("unknown stage '" + stage + "'");
    m = SelectStage(m, *s);
  }
  Sink sink(c.out, out);
  WriteFeatureMatrix(m, *sink);
  err << m.num_rows() << " rows, " << m.num_cols() << " features\n";
  return kExitOk;
}

int CmdTrain(const Common& c, const std::string& features, const std::string& stage,
             std::ostream& out, std::ostream& err) {
  if (features.empty()) throw UsageError("--features is required");
  const RunConfig cfg = MakeConfig(c);
  auto in = OpenInput(features);
  FeatureMatrix m = ReadFeatureMatrix(in);
  if (!stage.empty()) {
    auto s = ParseFeatureStage(stage);
    if (!s) throw UsageError("unknown stage '" + stage + "'");
    m = SelectStage(m, *s);
  }
  const auto summaries = SummarizePipelines(m);
  const SplitSpec split = SplitCorpus(summaries, cfg.forest.seed, cfg.split, &err);
  const auto train = RowsOf(m, split.train_pipeline_ids);
  const Forest forest = Forest::Fit(GatherRows(m, train), m.num_cols(), GatherLabels(m, train),
                                    cfg.forest, m.names);
  std::stringstream fs;
  forest.Save(fs);
  json j;
  j["format"] = "mlprov-model";
  j["version"] = 1;
  j["stage"] = std::string(ToString(m.stage));
  j["train_pipeline_ids"] = split.train_pipeline_ids;
  j["test_pipeline_ids"] = split.test_pipeline_ids;
  j["train_fraction"] = split.train_fraction;
  j["rate_gap"] = split.rate_gap;
  j["relaxed"] = split.relaxed;
  j["forest"] = json::parse(fs.str());
  Sink sink(c.out, out);
  *sink << j.dump() << '\n';
  err << "trained on " << train.size() << " rows from " << split.train_pipeline_ids.size()
      << " pipelines; " << split.test_pipeline_ids.size() << " test pipelines\n";
  return kExitOk;
}

struct Model {
  Forest forest;
  FeatureStage stage = FeatureStage::kValidation;
  std::vector<std::string> test_ids;
};

Model ReadModel(const std::string& path) {
  auto in = OpenInput(path);
  try {
    json j;
    in >> j;
    if (j.at("format") != "mlprov-model" || j.at("version") != 1)
      throw Error("unsupported model file " + path);
    Model m;
    auto s = ParseFeatureStage(j.at("stage").get<std::string>());
    if (!s) throw Error("model file has an unknown stage");
    m.stage = *s;
    m.test_ids = j.at("test_pipeline_ids").get<std::vector<std::string>>();
    std::stringstream fs(j.at("forest").dump());
    m.forest = Forest::Load(fs);
    return m;
  } catch (const json::exception& e) {
    throw Error("malformed model file " + path + ": " + e.what());
  }
}

void WriteScores(std::span<const EvalRecord> records, std::span<const std::string> pipelines,
                 std::ostream& out) {
  TableWriter t(out, "scores",
                {"pipeline_id", "anchor", "label", "score", "unpushed_cost", "stage_feature_cost"});
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    t.Row({pipelines[i], r.anchor, r.label ? "1" : "0", Fmt(r.score), Fmt(r.unpushed_cost),
           Fmt(r.stage_feature_cost)});
  }
}

int CmdEvaluate(const Common& c, const std::string& features, const std::string& model_path,
                std::ostream& out, std::ostream& err) {
  if (features.empty() || model_path.empty()) throw UsageError("--features and --model are required");
  const Model model = ReadModel(model_path);
  auto in = OpenInput(features);
  FeatureMatrix m = SelectStage(ReadFeatureMatrix(in), model.stage);
  const auto rows = RowsOf(m, model.test_ids);
  if (rows.empty()) throw Error("no rows of the model's test pipelines in " + features);
  const auto records = ScoreRecords(model.forest, m, rows);
  std::vector<std::string> pipelines;
  for (auto i : rows) pipelines.push_back(m.rows[i].pipeline_id);
  Sink sink(c.out, out);
  WriteScores(records, pipelines, *sink);
  const RunConfig cfg = MakeConfig(c);
  err << "balanced_accuracy " << Fmt(BalancedAccuracy(Labels(records), Predictions(records, cfg.decision_threshold)))
      << '\n';
  return kExitOk;
}

int CmdSweep(const Common& c, const std::string& scores, std::ostream& out, std::ostream&) {
  if (scores.empty()) throw UsageError("--scores is required");
  auto in = OpenInput(scores);
  const Table t = ReadTable(in, "scores");
  std::vector<EvalRecord> records;
  const auto ia = t.column("anchor"), il = t.column("label"), is = t.column("score"),
             iu = t.column("unpushed_cost"), ic = t.column("stage_feature_cost");
  for (const auto& row : t.rows) {
    EvalRecord r;
    r.anchor = row[ia];
    r.label = row[il] == "1";
    r.score = ParseDouble(row[is]);
    r.unpushed_cost = ParseDouble(row[iu]);
    r.stage_feature_cost = ParseDouble(row[ic]);
    records.push_back(std::move(r));
  }
  const TradeoffCurve curve = Sweep(records);
  Sink sink(c.out, out);
  TableWriter w(*sink, "curve", {"threshold", "wasted_fraction", "freshness", "fpr", "tpr"});
  for (const auto& p : curve.points)
    w.Row({Fmt(p.threshold), Fmt(p.wasted_fraction), Fmt(p.freshness), Fmt(p.fpr), Fmt(p.tpr)});
  return kExitOk;
}

int CmdReport(const Common& c, const std::string& features, bool keep_warmstart,
              const std::string& curves, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = MakeConfig(c);
  FeatureMatrix m;
  if (!features.empty()) {
    auto in = OpenInput(features);
    m = ReadFeatureMatrix(in);
    if (m.stage != FeatureStage::kValidation)
      throw Error("report needs the full validation-stage feature matrix");
  } else {
    RequireCorpus(c);
    m = FeaturizeDir(c, cfg, keep_warmstart);
  }
  const SplitSpec split = SplitCorpus(SummarizePipelines(m), cfg.forest.seed, cfg.split, &err);
  const PolicyReport report = BuildPolicyReport(m, split, kAllStages, ReportConfigOf(cfg));
  Sink sink(c.out, out);
  {
    TableWriter t(*sink, "report_split",
                  {"train_pipelines", "test_pipelines", "train_fraction", "rate_gap", "relaxed"});
    t.Row({std::to_string(split.train_pipeline_ids.size()), std::to_string(split.test_pipeline_ids.size()),
           Fmt(split.train_fraction), Fmt(split.rate_gap), split.relaxed ? "1" : "0"});
  }
  {
    TableWriter t(*sink, "report_models",
                  {"model", "kind", "cost_stage", "balanced_accuracy", "feature_cost",
                   "waste_elimination"});
    for (auto [kind, list] : {std::pair{"stage", &report.stages}, std::pair{"ablation", &report.ablations}})
      for (const auto& r : *list)
        t.Row({r.name, kind, std::string(ToString(r.cost_stage)), Fmt(r.balanced_accuracy),
               Fmt(r.feature_cost), Fmt(r.waste_elimination)});
  }
  {
    TableWriter t(*sink, "report_heuristics", {"heuristic", "balanced_accuracy"});
    for (const auto& h : report.heuristics) t.Row({h.name, Fmt(h.balanced_accuracy)});
  }
  if (!curves.empty()) {
    Sink cs(curves, out);
    TableWriter t(*cs, "curves", {"model", "threshold", "wasted_fraction", "freshness", "fpr", "tpr"});
    for (const auto* list : {&report.stages, &report.ablations})
      for (const auto& r : *list)
        for (const auto& p : r.curve.points)
          t.Row({r.name, Fmt(p.threshold), Fmt(p.wasted_fraction), Fmt(p.freshness), Fmt(p.fpr),
                 Fmt(p.tpr)});
  }
  return kExitOk;
}

int CmdSynth(const Common& c, const std::string& preset, int pipelines, int min_g, int max_g,
             std::ostream& err) {
  if (c.out.empty()) throw UsageError("--out DIR is required");
  RunConfig cfg = MakeConfig(c);
  if (!preset.empty()) {
    auto p = ParseSignalPreset(preset);
    if (!p) throw UsageError("unknown preset '" + preset + "'");
    const GenConfig g = PresetConfig(*p);
    cfg.gen.push.scale = g.push.scale;
    cfg.gen.push.blessing_rate = g.push.blessing_rate;
  }
  if (pipelines > 0) cfg.gen.n_pipelines = pipelines;
  if (min_g > 0) cfg.gen.min_graphlets = min_g;
  if (max_g > 0) cfg.gen.max_graphlets = max_g;
  if (cfg.gen.max_graphlets < cfg.gen.min_graphlets) throw UsageError("--max-graphlets below --min-graphlets");
  const GeneratedCorpus corpus = Generate(cfg.gen);
  WriteCorpus(corpus, c.out);
  std::size_t pushed = 0;
  for (const auto& g : corpus.truth.graphlets) pushed += g.pushed;
  err << corpus.traces.size() << " pipelines, " << corpus.truth.graphlets.size() << " graphlets, "
      << pushed << " pushed\n";
  return kExitOk;
}

void AddCommon(CLI::App* sub, Common& c, bool corpus) {
  if (corpus) sub->add_option("--corpus", c.corpus, "Directory of .jsonl trace files");
  sub->add_option("--out", c.out, "Output path (stdout when omitted)");
  sub->add_option("--seed", c.seed, "Seed for every random stream")->capture_default_str();
  sub->add_option("--config", c.config, "key=value configuration file");
}

}  // namespace

void WriteFeatureMatrix(const FeatureMatrix& m, std::ostream& out) {
  std::vector<std::string> header = m.names;
  for (const char* col : kMetaColumns) header.push_back(col);
  header.push_back(kLastMetaColumn);
  TableWriter t(out, "features", header);
  const std::string stage(ToString(m.stage));
  for (std::size_t i = 0; i < m.num_rows(); ++i) {
    std::vector<std::string> row;
    row.reserve(header.size());
    for (double v : m.row(i)) row.push_back(Fmt(v));
    const RowInfo& r = m.rows[i];
    row.push_back(r.label ? "1" : "0");
    row.push_back(Fmt(m.cost_to_acquire(i)));
    row.push_back(r.pipeline_id);
    row.push_back(r.anchor);
    row.push_back(stage);
    row.push_back(std::string(ToString(r.model_type)));
    row.push_back(Fmt(r.graphlet_cost));
    for (double sc : r.stage_costs) row.push_back(Fmt(sc));
    t.Row(row);
  }
}

FeatureMatrix ReadFeatureMatrix(std::istream& in) {
  const Table t = ReadTable(in, "features");
  const std::size_t n_meta = kMetaColumns.size() + 1;
  if (t.header.size() < n_meta) throw Error("features table lacks metadata columns");
  const std::size_t d = t.header.size() - n_meta;
  for (std::size_t k = 0; k < kMetaColumns.size(); ++k)
    if (t.header[d + k] != kMetaColumns[k]) throw Error("features table: unexpected column order");
  if (t.header.back() != kLastMetaColumn) throw Error("features table: unexpected column order");
  FeatureMatrix m;
  m.names.assign(t.header.begin(), t.header.begin() + d);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    for (std::size_t j = 0; j < d; ++j) m.values.push_back(ParseDouble(row[j]));
    RowInfo r;
    if (row[d] != "0" && row[d] != "1") throw Error("features table: label must be 0 or 1");
    r.label = row[d] == "1";
    r.pipeline_id = row[d + 2];
    r.anchor = row[d + 3];
    auto stage = ParseFeatureStage(row[d + 4]);
    if (!stage) throw Error("features table: unknown stage '" + row[d + 4] + "'");
    if (i == 0) m.stage = *stage;
    else if (*stage != m.stage) throw Error("features table mixes stages");
    auto type = ParseModelType(row[d + 5]);
    if (!type) throw Error("features table: unknown model type '" + row[d + 5] + "'");
    r.model_type = *type;
    r.graphlet_cost = ParseDouble(row[d + 6]);
    for (int s = 0; s < kNumStages; ++s) r.stage_costs[s] = ParseDouble(row[d + 7 + s]);
    m.rows.push_back(std::move(r));
  }
  return m;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Provenance trace analysis and execution-policy toolkit", "mlprov"};
  app.require_subcommand(1);
  Common common;
  std::string stage, features, model, scores, curves, preset;
  bool keep_warmstart = false;
  int pipelines = 0, min_g = 0, max_g = 0;

  auto* validate = app.add_subcommand("validate", "Check trace files against the trace invariants");
  AddCommon(validate, common, true);
  auto* segment = app.add_subcommand("segment", "Extract model graphlets, one JSON record each");
  AddCommon(segment, common, true);
  auto* stats = app.add_subcommand("stats", "Pipeline statistics, cost breakdown and cadence");
  AddCommon(stats, common, true);
  auto* similarity = app.add_subcommand("similarity", "Similarity of consecutive graphlets");
  AddCommon(similarity, common, true);
  auto* featurize = app.add_subcommand("featurize", "Write the classifier feature matrix");
  AddCommon(featurize, common, true);
  featurize->add_option("--stage", stage, "Feature stage (default: all features)");
  featurize->add_flag("--keep-warmstart", keep_warmstart, "Keep warmstart pipelines");
  auto* train = app.add_subcommand("train", "Split by pipeline and train a forest");
  AddCommon(train, common, false);
  train->add_option("--features", features, "Features table");
  train->add_option("--stage", stage, "Feature stage (default: every column)");
  auto* evaluate = app.add_subcommand("evaluate", "Score the held-out pipelines of a model");
  AddCommon(evaluate, common, false);
  evaluate->add_option("--features", features, "Features table");
  evaluate->add_option("--model", model, "Model file from train");
  auto* sweep = app.add_subcommand("sweep", "Freshness versus wasted-computation curve");
  AddCommon(sweep, common, false);
  sweep->add_option("--scores", scores, "Scores table from evaluate");
  auto* report = app.add_subcommand("report", "Per-stage models, ablations and heuristics");
  AddCommon(report, common, true);
  report->add_option("--features", features, "Features table instead of --corpus");
  report->add_option("--curves", curves, "Also write every curve to this path");
  report->add_flag("--keep-warmstart", keep_warmstart, "Keep warmstart pipelines");
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus and its truth file");
  AddCommon(synth, common, false);
  synth->add_option("--preset", preset, "Signal strength: weak, medium or strong");
  synth->add_option("--pipelines", pipelines, "Number of pipelines");
  synth->add_option("--min-graphlets", min_g, "Fewest graphlets per pipeline");
  synth->add_option("--max-graphlets", max_g, "Most graphlets per pipeline");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return CmdValidate(common, out, err);
    if (segment->parsed()) return CmdSegment(common, out, err);
    if (stats->parsed()) return CmdStats(common, out, err);
    if (similarity->parsed()) return CmdSimilarity(common, out, err);
    if (featurize->parsed()) return CmdFeaturize(common, stage, keep_warmstart, out, err);
    if (train->parsed()) return CmdTrain(common, features, stage, out, err);
    if (evaluate->parsed()) return CmdEvaluate(common, features, model, out, err);
    if (sweep->parsed()) return CmdSweep(common, scores, out, err);
    if (report->parsed()) return CmdReport(common, features, keep_warmstart, curves, out, err);
    if (synth->parsed()) return CmdSynth(common, preset, pipelines, min_g, max_g, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitViolations;
  }
  return kExitUsage;
}

}  // namespace mlprov
