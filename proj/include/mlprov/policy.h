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

// Execution policies from classifier scores: the two-term loss, threshold
// sweeps into freshness-vs-waste curves, heuristic baselines and the
// per-stage report.

#ifndef MLPROV_POLICY_H_
#define MLPROV_POLICY_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mlprov/featurization.h"
#include "mlprov/forest.h"

namespace mlprov {

struct EvalRecord {
  std::string anchor;
  bool label = false;
  double score = 0.0;
  // Full graphlet cost when unpushed, else 0.
  double unpushed_cost = 0.0;
  double stage_feature_cost = 0.0;
};

struct CurvePoint {
  double threshold = 0.0;
  double freshness = 0.0;
  double wasted_fraction = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct TradeoffCurve {
  std::vector<CurvePoint> points;
};

// Graphlets scoring below the threshold are skipped.
struct Policy {
  FeatureStage stage = FeatureStage::kValidation;
  double threshold = 0.5;
  bool Runs(double score) const { return score >= threshold; }
};

inline constexpr double kSweepEpsilon = 1e-9;

// Thresholds are -eps, the midpoints between consecutive distinct scores,
// and 1 + eps. Wasted fraction is the false-positive share of unpushed cost;
// if no unpushed graphlet has cost it falls back to the false-positive rate.
TradeoffCurve Sweep(std::span<const EvalRecord> records);

// The point a single threshold maps to.
CurvePoint Evaluate(std::span<const EvalRecord> records, double threshold);

// Loss applied to a 0/1 error indicator of one record.
using LossFn = std::function<double(double, const EvalRecord&)>;
double IdentityLoss(double v, const EvalRecord& r);
double UnpushedCostLoss(double v, const EvalRecord& r);

// Sum over records of Lm(y (1 - yhat)) + Lw(yhat (1 - y)), yhat = [score >= threshold].
double Eq1Loss(std::span<const EvalRecord> records, double threshold, const LossFn& lm,
               const LossFn& lw);
double Eq1Loss(std::span<const EvalRecord> records, double threshold, const LossFn& loss);

struct LossMinimum {
  double threshold = 0.0;
  double loss = 0.0;
};
// Minimum over the sweep thresholds; the lowest threshold wins ties.
LossMinimum MinimizeEq1Loss(std::span<const EvalRecord> records, const LossFn& lm,
                            const LossFn& lw);

// 1 - the smallest wasted fraction among points with freshness >= min_freshness.
double WasteElimination(const TradeoffCurve& curve, double min_freshness = 0.999);

std::vector<int> Predictions(std::span<const EvalRecord> records, double threshold = 0.5);
std::vector<int> Labels(std::span<const EvalRecord> records);

// Graphlet and pushed counts per pipeline, in first-seen row order.
std::vector<PipelineSummary> SummarizePipelines(const FeatureMatrix& m);
// Row indices whose pipeline is in `ids` (sorted).
std::vector<std::size_t> RowsOf(const FeatureMatrix& m, std::span<const std::string> ids);

// The rows `rows` of m as a dense matrix and label vector.
std::vector<double> GatherRows(const FeatureMatrix& m, std::span<const std::size_t> rows);
std::vector<int> GatherLabels(const FeatureMatrix& m, std::span<const std::size_t> rows);

std::vector<EvalRecord> ScoreRecords(const Forest& forest, const FeatureMatrix& m,
                                     std::span<const std::size_t> rows);

struct HeuristicResult {
  std::string name;
  double balanced_accuracy = 0.0;
};

// Three single-signal rules fitted on the train rows and evaluated on the
// test rows: model type (a type predicts pushed when its train push rate
// exceeds the overall rate), a jaccard_1 threshold with direction chosen to
// maximize train balanced accuracy, and code_match_1 == 1.
std::vector<HeuristicResult> HeuristicBaselines(const FeatureMatrix& full,
                                                std::span<const std::size_t> train,
                                                std::span<const std::size_t> test);

struct ModelReport {
  std::string name;
  FeatureStage cost_stage = FeatureStage::kValidation;
  double balanced_accuracy = 0.0;
  // Mean stage cost over mean validation-stage cost, on the test rows.
  double feature_cost = 0.0;
  double waste_elimination = 0.0;
  TradeoffCurve curve;
  std::vector<EvalRecord> records;
};

struct ReportConfig {
  ForestConfig forest;
  double decision_threshold = 0.5;
  double min_freshness = 0.999;
  bool ablations = true;
};

struct PolicyReport {
  SplitSpec split;
  std::vector<ModelReport> stages;
  std::vector<ModelReport> ablations;
  std::vector<HeuristicResult> heuristics;
};

ModelReport SummarizeModel(std::string name, FeatureStage cost_stage,
                           std::vector<EvalRecord> records, double validation_cost,
                           const ReportConfig& cfg);

// Trains one forest per stage (and per ablation feature group, costed at
// input_pre_trainer) on the split's train pipelines and evaluates on test.
PolicyReport BuildPolicyReport(const FeatureMatrix& full, const SplitSpec& split,
                               std::span<const FeatureStage> stages, const ReportConfig& cfg);

}  // namespace mlprov

#endif  // MLPROV_POLICY_H_
