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

#include "mlprov/featurization.h"

#include <algorithm>
#include <map>

#include "mlprov/analytics.h"

namespace mlprov {
namespace {

constexpr std::array<OperatorKind, 7> kPreTrainerKinds{
    OperatorKind::kExampleGen,   OperatorKind::kStatisticsGen, OperatorKind::kSchemaGen,
    OperatorKind::kExampleValidator, OperatorKind::kTransform, OperatorKind::kTuner,
    OperatorKind::kCustom};
constexpr std::array<OperatorKind, 1> kTrainerKinds{OperatorKind::kTrainer};
constexpr std::array<OperatorKind, 2> kPostTrainerKinds{OperatorKind::kEvaluator,
                                                        OperatorKind::kModelValidator};

constexpr std::array<OperatorGroup, 2> kInputGroups{OperatorGroup::kDataIngestion,
                                                    OperatorGroup::kDataAnalysisValidation};
constexpr std::array<OperatorGroup, 3> kInputPreGroups{
    OperatorGroup::kDataIngestion, OperatorGroup::kDataAnalysisValidation,
    OperatorGroup::kDataPreprocessing};
constexpr std::array<OperatorGroup, 4> kInputPreTrainerGroups{
    OperatorGroup::kDataIngestion, OperatorGroup::kDataAnalysisValidation,
    OperatorGroup::kDataPreprocessing, OperatorGroup::kTraining};
constexpr std::array<OperatorGroup, 5> kValidationGroups{
    OperatorGroup::kDataIngestion, OperatorGroup::kDataAnalysisValidation,
    OperatorGroup::kDataPreprocessing, OperatorGroup::kTraining,
    OperatorGroup::kModelAnalysisValidation};

constexpr std::string_view kShapePrefix = "shape_";
constexpr std::array<std::string_view, 3> kShapeSuffixes{"_count", "_avg_in", "_avg_out"};

std::string ShapeName(OperatorKind kind, int which) {
  return std::string(kShapePrefix) + std::string(ToString(kind)) + std::string(kShapeSuffixes[which]);
}

// Partition of a shape feature name, by its operator kind.
std::optional<ShapePartition> PartitionOfName(std::string_view name) {
  if (!name.starts_with(kShapePrefix)) return std::nullopt;
  for (ShapePartition part :
       {ShapePartition::kPreTrainer, ShapePartition::kTrainer, ShapePartition::kPostTrainer}) {
    for (OperatorKind kind : KindsOf(part)) {
      for (int k = 0; k < 3; ++k) {
        if (name == ShapeName(kind, k)) return part;
      }
    }
  }
  return std::nullopt;
}

bool InStage(std::string_view name, FeatureStage stage) {
  auto part = PartitionOfName(name);
  if (!part) return true;
  switch (*part) {
    case ShapePartition::kPreTrainer:
      return stage >= FeatureStage::kInputPre;
    case ShapePartition::kTrainer:
      return stage >= FeatureStage::kInputPreTrainer;
    case ShapePartition::kPostTrainer:
      return stage >= FeatureStage::kValidation;
  }
  return false;
}

void Append(NamedValues& out, NamedValues more) {
  for (auto& nv : more) out.push_back(std::move(nv));
}

}  // namespace

std::string_view ToString(FeatureStage s) {
  switch (s) {
    case FeatureStage::kInput:
      return "input";
    case FeatureStage::kInputPre:
      return "input_pre";
    case FeatureStage::kInputPreTrainer:
      return "input_pre_trainer";
    case FeatureStage::kValidation:
      return "validation";
  }
  return "unknown";
}

std::optional<FeatureStage> ParseFeatureStage(std::string_view s) {
  for (FeatureStage stage : kAllStages) {
    if (ToString(stage) == s) return stage;
  }
  return std::nullopt;
}

std::span<const OperatorKind> KindsOf(ShapePartition part) {
  switch (part) {
    case ShapePartition::kPreTrainer:
      return kPreTrainerKinds;
    case ShapePartition::kTrainer:
      return kTrainerKinds;
    case ShapePartition::kPostTrainer:
      return kPostTrainerKinds;
  }
  return {};
}

std::span<const OperatorGroup> GroupsNeeded(FeatureStage stage) {
  switch (stage) {
    case FeatureStage::kInput:
      return kInputGroups;
    case FeatureStage::kInputPre:
      return kInputPreGroups;
    case FeatureStage::kInputPreTrainer:
      return kInputPreTrainerGroups;
    case FeatureStage::kValidation:
      return kValidationGroups;
  }
  throw Error("unknown feature stage");
}

ArchitectureVocabulary::ArchitectureVocabulary(std::vector<std::string> names)
    : names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
  if (names_.size() > kCap) throw Error("architecture vocabulary exceeds 32 entries");
}

ArchitectureVocabulary ArchitectureVocabulary::FromCorpus(std::span<const Pipeline> corpus) {
  std::map<std::string, long> freq;
  for (const Pipeline& p : corpus) {
    for (const Graphlet& g : p.graphlets) {
      if (g.architecture) ++freq[*g.architecture];
    }
  }
  std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ranked.size() && i < kCap; ++i) names.push_back(ranked[i].first);
  return ArchitectureVocabulary(std::move(names));
}

std::optional<std::size_t> ArchitectureVocabulary::SlotOf(
    const std::optional<std::string>& arch) const {
  if (!arch) return std::nullopt;
  auto it = std::lower_bound(names_.begin(), names_.end(), *arch);
  if (it != names_.end() && *it == *arch) return static_cast<std::size_t>(it - names_.begin());
  return names_.size();
}

NamedValues ShapeFeatures(const Pipeline& pipeline, const Graphlet& g, ShapePartition part) {
  const auto kinds = KindsOf(part);
  std::vector<double> count(kinds.size(), 0.0);
  std::vector<double> in(kinds.size(), 0.0);
  std::vector<double> out(kinds.size(), 0.0);
  for (TraceIndex::Node v : g.nodes) {
    if (!pipeline.index.is_execution(v)) continue;
    const OperatorKind op = pipeline.trace.executions[pipeline.index.execution_index(v)].op;
    auto it = std::find(kinds.begin(), kinds.end(), op);
    if (it == kinds.end()) continue;
    const std::size_t k = static_cast<std::size_t>(it - kinds.begin());
    count[k] += 1.0;
    for (TraceIndex::Node u : pipeline.index.predecessors(v)) in[k] += g.contains(u) ? 1.0 : 0.0;
    for (TraceIndex::Node u : pipeline.index.successors(v)) out[k] += g.contains(u) ? 1.0 : 0.0;
  }
  NamedValues values;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    values.emplace_back(ShapeName(kinds[k], 0), count[k]);
    values.emplace_back(ShapeName(kinds[k], 1), count[k] > 0 ? in[k] / count[k] : 0.0);
    values.emplace_back(ShapeName(kinds[k], 2), count[k] > 0 ? out[k] / count[k] : 0.0);
  }
  return values;
}

NamedValues ModelFeatures(const Graphlet& g, const ArchitectureVocabulary& vocab) {
  NamedValues values;
  for (int t = 0; t < kNumModelTypes; ++t) {
    const auto type = static_cast<ModelType>(t);
    values.emplace_back("model_type_" + std::string(ToString(type)), g.model_type == type ? 1.0 : 0.0);
  }
  const auto slot = vocab.SlotOf(g.architecture);
  for (std::size_t i = 0; i <= vocab.names().size(); ++i) {
    const std::string name = i < vocab.names().size() ? vocab.names()[i] : "other";
    values.emplace_back("arch_" + name, slot && *slot == i ? 1.0 : 0.0);
  }
  return values;
}

NamedValues HistoryFeatures(const Graphlet& g, std::span<const Graphlet* const> predecessors,
                            const WindowConfig& window, const SpanSignatureCache& signatures,
                            const SimWeights& weights) {
  if (window.w < 1) throw Error("history window must be at least 1");
  NamedValues values;
  const std::vector<SpanSignature> mine = signatures.InputsOf(g);
  for (int i = 1; i <= window.w; ++i) {
    const std::string suffix = "_" + std::to_string(i);
    if (static_cast<std::size_t>(i) <= predecessors.size()) {
      const Graphlet& prev = *predecessors[i - 1];
      values.emplace_back("jaccard" + suffix, Jaccard(g, prev));
      values.emplace_back("dataset_sim" + suffix,
                          SequenceSim(mine, signatures.InputsOf(prev), weights));
      values.emplace_back("code_match" + suffix, CodeMatches(g, prev) ? 1.0 : 0.0);
    } else {
      values.emplace_back("jaccard" + suffix, kMissingHistory);
      values.emplace_back("dataset_sim" + suffix, kMissingHistory);
      values.emplace_back("code_match" + suffix, kMissingHistory);
    }
  }
  return values;
}

std::vector<std::string> StageSchema(FeatureStage stage, const WindowConfig& window,
                                     const ArchitectureVocabulary& vocab) {
  std::vector<std::string> names;
  for (int t = 0; t < kNumModelTypes; ++t) {
    names.push_back("model_type_" + std::string(ToString(static_cast<ModelType>(t))));
  }
  for (const auto& a : vocab.names()) names.push_back("arch_" + a);
  names.push_back("arch_other");
  for (int i = 1; i <= window.w; ++i) {
    for (const char* metric : {"jaccard_", "dataset_sim_", "code_match_"}) {
      names.push_back(metric + std::to_string(i));
    }
  }
  auto add_partition = [&](ShapePartition part) {
    for (OperatorKind kind : KindsOf(part)) {
      for (int k = 0; k < 3; ++k) names.push_back(ShapeName(kind, k));
    }
  };
  if (stage >= FeatureStage::kInputPre) add_partition(ShapePartition::kPreTrainer);
  if (stage >= FeatureStage::kInputPreTrainer) add_partition(ShapePartition::kTrainer);
  if (stage >= FeatureStage::kValidation) add_partition(ShapePartition::kPostTrainer);
  return names;
}

double AcquisitionCost(const Graphlet& g, FeatureStage stage) {
  double cost = 0.0;
  for (OperatorGroup group : GroupsNeeded(stage)) {
    auto it = g.costs.find(group);
    if (it != g.costs.end()) cost += it->second;
  }
  return cost;
}

FeatureVector Assemble(const Pipeline& pipeline, const Graphlet& g,
                       std::span<const Graphlet* const> predecessors, FeatureStage stage,
                       const WindowConfig& window, const ArchitectureVocabulary& vocab,
                       const SpanSignatureCache& signatures, const SimWeights& weights) {
  NamedValues all = ModelFeatures(g, vocab);
  Append(all, HistoryFeatures(g, predecessors, window, signatures, weights));
  if (stage >= FeatureStage::kInputPre) {
    Append(all, ShapeFeatures(pipeline, g, ShapePartition::kPreTrainer));
  }
  if (stage >= FeatureStage::kInputPreTrainer) {
    Append(all, ShapeFeatures(pipeline, g, ShapePartition::kTrainer));
  }
  if (stage >= FeatureStage::kValidation) {
    Append(all, ShapeFeatures(pipeline, g, ShapePartition::kPostTrainer));
  }
  FeatureVector fv;
  for (auto& [name, value] : all) {
    fv.names.push_back(std::move(name));
    fv.values.push_back(value);
  }
  fv.label = g.pushed;
  fv.cost_to_acquire = AcquisitionCost(g, stage);
  return fv;
}

std::size_t FeatureMatrix::column(std::string_view name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error("no feature column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names.begin());
}

FeatureMatrix FeaturizeCorpus(std::span<const Pipeline> corpus, const FeaturizeOptions& options,
                              const ArchitectureVocabulary& vocab) {
  CheckWeights(options.weights);
  const LshHasher hasher(options.lsh);
  FeatureMatrix m;
  m.stage = FeatureStage::kValidation;
  m.names = StageSchema(FeatureStage::kValidation, options.window, vocab);
  const std::size_t w = static_cast<std::size_t>(options.window.w);
  for (const Pipeline& p : corpus) {
    const SpanSignatureCache signatures(p, hasher);
    std::vector<const Graphlet*> ordered;
    for (const Graphlet& g : p.graphlets) ordered.push_back(&g);
    std::stable_sort(ordered.begin(), ordered.end(), [](const Graphlet* a, const Graphlet* b) {
      if (a->trainer_end_at != b->trainer_end_at) return a->trainer_end_at < b->trainer_end_at;
      return a->anchor < b->anchor;
    });
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      std::vector<const Graphlet*> preds;
      for (std::size_t k = 1; k <= w && k <= i; ++k) preds.push_back(ordered[i - k]);
      const Graphlet& g = *ordered[i];
      FeatureVector fv = Assemble(p, g, preds, FeatureStage::kValidation, options.window, vocab,
                                  signatures, options.weights);
      m.values.insert(m.values.end(), fv.values.begin(), fv.values.end());
      RowInfo info;
      info.pipeline_id = p.id();
      info.anchor = g.anchor;
      info.label = g.pushed;
      info.model_type = g.model_type;
      info.graphlet_cost = TotalCost(g);
      for (FeatureStage s : kAllStages) info.stage_costs[static_cast<int>(s)] = AcquisitionCost(g, s);
      m.rows.push_back(std::move(info));
    }
  }
  return m;
}

FeatureMatrix SelectColumns(const FeatureMatrix& full, FeatureStage cost_stage,
                            const std::function<bool(std::string_view)>& keep) {
  FeatureMatrix out;
  out.stage = cost_stage;
  out.rows = full.rows;
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < full.names.size(); ++j) {
    if (keep(full.names[j])) {
      cols.push_back(j);
      out.names.push_back(full.names[j]);
    }
  }
  out.values.reserve(cols.size() * full.num_rows());
  for (std::size_t i = 0; i < full.num_rows(); ++i) {
    const auto row = full.row(i);
    for (std::size_t j : cols) out.values.push_back(row[j]);
  }
  return out;
}

FeatureMatrix SelectStage(const FeatureMatrix& full, FeatureStage stage) {
  return SelectColumns(full, stage, [stage](std::string_view name) { return InStage(name, stage); });
}

bool IsShapeFeature(std::string_view name) { return name.starts_with(kShapePrefix); }

bool IsHistoryFeature(std::string_view name) {
  return name.starts_with("jaccard_") || name.starts_with("dataset_sim_") ||
         name.starts_with("code_match_");
}

bool IsModelFeature(std::string_view name) {
  return name.starts_with("model_type_") || name.starts_with("arch_");
}

}  // namespace mlprov
