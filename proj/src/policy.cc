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

#include "mlprov/policy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace mlprov {
namespace {

void CheckRecords(std::span<const EvalRecord> records) {
  bool pos = false, neg = false;
  for (const auto& r : records) {
    if (!std::isfinite(r.score) || r.score < 0.0 || r.score > 1.0)
      throw Error("policy: score outside [0,1] for " + r.anchor);
    if (!(r.unpushed_cost >= 0.0) || !(r.stage_feature_cost >= 0.0))
      throw Error("policy: negative cost for " + r.anchor);
    (r.label ? pos : neg) = true;
  }
  if (!pos || !neg) throw Error("policy: records must contain both labels");
}

double Ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// Best train balanced accuracy of a one-feature threshold rule. Returns the
// threshold and whether high values predict pushed.
std::pair<double, bool> FitThreshold(std::span<const double> x, std::span<const int> y) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  double p = 0, n = 0;
  for (int v : y) (v ? p : n) += 1;
  // Below-threshold counts as the threshold rises.
  double bp = 0, bn = 0;
  double best = -1.0, best_t = x.empty() ? 0.0 : x[order.front()] - 1.0;
  bool best_high = true;
  auto consider = [&](double t) {
    // high: pushed iff x >= t
    const double tpr = Ratio(p - bp, p), tnr = Ratio(bn, n);
    const double high = (tpr + tnr) / 2.0;
    const double low = ((1.0 - tpr) + (1.0 - tnr)) / 2.0;
    if (high > best) best = high, best_t = t, best_high = true;
    if (low > best) best = low, best_t = t, best_high = false;
  };
  std::size_t i = 0;
  while (i < order.size()) {
    const double v = x[order[i]];
    consider(i == 0 ? v - 1.0 : 0.5 * (x[order[i - 1]] + v));
    for (; i < order.size() && x[order[i]] == v; ++i) (y[order[i]] ? bp : bn) += 1;
  }
  consider(x.empty() ? 0.0 : x[order.back()] + 1.0);
  return {best_t, best_high};
}

bool IsShapeAblationFeature(std::string_view name) {
  if (!IsShapeFeature(name) || !name.ends_with("_count")) return false;
  if (name.find("validator") != std::string_view::npos) return false;
  for (OperatorKind k : KindsOf(ShapePartition::kPostTrainer))
    if (name == "shape_" + std::string(ToString(k)) + "_count") return false;
  return true;
}

}  // namespace

CurvePoint Evaluate(std::span<const EvalRecord> records, double threshold) {
  double tp = 0, p = 0, fp = 0, n = 0, fp_cost = 0, cost = 0;
  for (const auto& r : records) {
    const bool run = r.score >= threshold;
    if (r.label) {
      p += 1;
      tp += run;
    } else {
      n += 1;
      cost += r.unpushed_cost;
      if (run) {
        fp += 1;
        fp_cost += r.unpushed_cost;
      }
    }
  }
  CurvePoint pt;
  pt.threshold = threshold;
  pt.tpr = Ratio(tp, p);
  pt.fpr = Ratio(fp, n);
  pt.freshness = pt.tpr;
  pt.wasted_fraction = cost > 0.0 ? fp_cost / cost : pt.fpr;
  return pt;
}

TradeoffCurve Sweep(std::span<const EvalRecord> records) {
  CheckRecords(records);
  std::vector<const EvalRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const EvalRecord* a, const EvalRecord* b) { return a->score < b->score; });

  struct Group {
    double score, pos, neg, neg_cost;
  };
  std::vector<Group> groups;
  double p = 0, n = 0, cost = 0;
  for (const auto* r : sorted) {
    if (groups.empty() || groups.back().score != r->score) groups.push_back({r->score, 0, 0, 0});
    auto& g = groups.back();
    if (r->label) {
      g.pos += 1;
      p += 1;
    } else {
      g.neg += 1;
      g.neg_cost += r->unpushed_cost;
      n += 1;
      cost += r->unpushed_cost;
    }
  }
  TradeoffCurve curve;
  curve.points.reserve(groups.size() + 1);
  // Running totals of everything scoring at or above the current threshold.
  double tp = p, fp = n, fp_cost = cost;
  for (std::size_t j = 0; j <= groups.size(); ++j) {
    CurvePoint pt;
    if (j == 0) pt.threshold = -kSweepEpsilon;
    else if (j == groups.size()) pt.threshold = 1.0 + kSweepEpsilon;
    else pt.threshold = 0.5 * (groups[j - 1].score + groups[j].score);
    if (j == groups.size()) tp = fp = fp_cost = 0.0;
    pt.tpr = tp / p;
    pt.fpr = fp / n;
    pt.freshness = pt.tpr;
    pt.wasted_fraction = cost > 0.0 ? fp_cost / cost : pt.fpr;
    curve.points.push_back(pt);
    if (j < groups.size()) {
      tp -= groups[j].pos;
      fp -= groups[j].neg;
      fp_cost -= groups[j].neg_cost;
      if (fp_cost < 0.0) fp_cost = 0.0;
    }
  }
  return curve;
}

double IdentityLoss(double v, const EvalRecord&) { return v; }
double UnpushedCostLoss(double v, const EvalRecord& r) { return v * r.unpushed_cost; }

double Eq1Loss(std::span<const EvalRecord> records, double threshold, const LossFn& lm,
               const LossFn& lw) {
  double total = 0.0;
  for (const auto& r : records) {
    const double y = r.label ? 1.0 : 0.0;
    const double yhat = r.score >= threshold ? 1.0 : 0.0;
    total += lm(y * (1.0 - yhat), r) + lw(yhat * (1.0 - y), r);
  }
  return total;
}

double Eq1Loss(std::span<const EvalRecord> records, double threshold, const LossFn& loss) {
  return Eq1Loss(records, threshold, loss, loss);
}

LossMinimum MinimizeEq1Loss(std::span<const EvalRecord> records, const LossFn& lm,
                            const LossFn& lw) {
  const TradeoffCurve curve = Sweep(records);
  LossMinimum best{0.0, std::numeric_limits<double>::infinity()};
  for (const auto& pt : curve.points) {
    const double l = Eq1Loss(records, pt.threshold, lm, lw);
    if (l < best.loss) best = {pt.threshold, l};
  }
  return best;
}

double WasteElimination(const TradeoffCurve& curve, double min_freshness) {
  double min_waste = 1.0;
  for (const auto& pt : curve.points)
    if (pt.freshness >= min_freshness) min_waste = std::min(min_waste, pt.wasted_fraction);
  return 1.0 - min_waste;
}

std::vector<int> Predictions(std::span<const EvalRecord> records, double threshold) {
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.score >= threshold ? 1 : 0);
  return out;
}

std::vector<int> Labels(std::span<const EvalRecord> records) {
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.label ? 1 : 0);
  return out;
}

std::vector<PipelineSummary> SummarizePipelines(const FeatureMatrix& m) {
  std::vector<PipelineSummary> out;
  std::unordered_map<std::string, std::size_t> at;
  for (const auto& row : m.rows) {
    auto [it, fresh] = at.emplace(row.pipeline_id, out.size());
    if (fresh) out.push_back({row.pipeline_id, 0, 0});
    auto& s = out[it->second];
    ++s.graphlets;
    s.pushed += row.label;
  }
  return out;
}

std::vector<std::size_t> RowsOf(const FeatureMatrix& m, std::span<const std::string> ids) {
  const std::unordered_set<std::string> keep(ids.begin(), ids.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.num_rows(); ++i)
    if (keep.count(m.rows[i].pipeline_id)) out.push_back(i);
  return out;
}

std::vector<double> GatherRows(const FeatureMatrix& m, std::span<const std::size_t> rows) {
  std::vector<double> out;
  out.reserve(rows.size() * m.num_cols());
  for (auto i : rows) {
    auto r = m.row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

std::vector<int> GatherLabels(const FeatureMatrix& m, std::span<const std::size_t> rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto i : rows) out.push_back(m.rows[i].label ? 1 : 0);
  return out;
}

std::vector<EvalRecord> ScoreRecords(const Forest& forest, const FeatureMatrix& m,
                                     std::span<const std::size_t> rows) {
  forest.CheckSchema(m.names);
  std::vector<EvalRecord> out;
  out.reserve(rows.size());
  for (auto i : rows) {
    const auto& info = m.rows[i];
    EvalRecord r;
    r.anchor = info.anchor;
    r.label = info.label;
    r.score = forest.Score(m.row(i));
    r.unpushed_cost = info.label ? 0.0 : info.graphlet_cost;
    r.stage_feature_cost = m.cost_to_acquire(i);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<HeuristicResult> HeuristicBaselines(const FeatureMatrix& full,
                                                std::span<const std::size_t> train,
                                                std::span<const std::size_t> test) {
  const auto y_train = GatherLabels(full, train);
  const auto y_test = GatherLabels(full, test);
  std::vector<HeuristicResult> out;

  {
    std::map<ModelType, std::pair<double, double>> counts;  // pushed, total
    double pushed = 0;
    for (std::size_t k = 0; k < train.size(); ++k) {
      auto& c = counts[full.rows[train[k]].model_type];
      c.first += y_train[k];
      c.second += 1;
      pushed += y_train[k];
    }
    const double rate = Ratio(pushed, static_cast<double>(train.size()));
    std::vector<int> pred;
    for (auto i : test) {
      auto it = counts.find(full.rows[i].model_type);
      pred.push_back(it != counts.end() && it->second.first / it->second.second > rate ? 1 : 0);
    }
    out.push_back({"model_type", BalancedAccuracy(y_test, pred)});
  }
  {
    const std::size_t col = full.column("jaccard_1");
    std::vector<double> x;
    for (auto i : train) x.push_back(full.row(i)[col]);
    const auto [t, high] = FitThreshold(x, y_train);
    std::vector<int> pred;
    for (auto i : test) {
      const double v = full.row(i)[col];
      pred.push_back((v >= t) == high ? 1 : 0);
    }
    out.push_back({"jaccard_1_threshold", BalancedAccuracy(y_test, pred)});
  }
  {
    const std::size_t col = full.column("code_match_1");
    std::vector<int> pred;
    for (auto i : test) pred.push_back(full.row(i)[col] == 1.0 ? 1 : 0);
    out.push_back({"code_match_1", BalancedAccuracy(y_test, pred)});
  }
  return out;
}

ModelReport SummarizeModel(std::string name, FeatureStage cost_stage,
                           std::vector<EvalRecord> records, double validation_cost,
                           const ReportConfig& cfg) {
  ModelReport m;
  m.name = std::move(name);
  m.cost_stage = cost_stage;
  m.balanced_accuracy = BalancedAccuracy(Labels(records), Predictions(records, cfg.decision_threshold));
  double cost = 0;
  for (const auto& r : records) cost += r.stage_feature_cost;
  m.feature_cost = Ratio(cost / static_cast<double>(records.size()), validation_cost);
  m.curve = Sweep(records);
  m.waste_elimination = WasteElimination(m.curve, cfg.min_freshness);
  m.records = std::move(records);
  return m;
}

PolicyReport BuildPolicyReport(const FeatureMatrix& full, const SplitSpec& split,
                               std::span<const FeatureStage> stages, const ReportConfig& cfg) {
  PolicyReport report;
  report.split = split;
  const auto train = RowsOf(full, split.train_pipeline_ids);
  const auto test = RowsOf(full, split.test_pipeline_ids);
  if (train.empty() || test.empty()) throw Error("report: empty train or test side");
  const auto y_train = GatherLabels(full, train);
  double validation_cost = 0;
  for (auto i : test) validation_cost += full.rows[i].stage_costs[static_cast<int>(FeatureStage::kValidation)];
  validation_cost /= static_cast<double>(test.size());

  auto run = [&](std::string name, const FeatureMatrix& m, FeatureStage cost_stage) {
    const Forest f = Forest::Fit(GatherRows(m, train), m.num_cols(), y_train, cfg.forest, m.names);
    return SummarizeModel(std::move(name), cost_stage, ScoreRecords(f, m, test), validation_cost, cfg);
  };
  for (FeatureStage s : stages)
    report.stages.push_back(run("rf_" + std::string(ToString(s)), SelectStage(full, s), s));
  if (cfg.ablations) {
    const FeatureStage cs = FeatureStage::kInputPreTrainer;
    report.ablations.push_back(run("rf_history", SelectColumns(full, cs, IsHistoryFeature), cs));
    report.ablations.push_back(run("rf_shape", SelectColumns(full, cs, IsShapeAblationFeature), cs));
    report.ablations.push_back(run(
        "rf_model_type",
        SelectColumns(full, cs, [](std::string_view n) { return n.starts_with("model_type_"); }), cs));
  }
  report.heuristics = HeuristicBaselines(full, train, test);
  return report;
}

}  // namespace mlprov
