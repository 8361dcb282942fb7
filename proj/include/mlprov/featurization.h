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

// Classifier features for graphlets: shape (per-operator execution counts and
// mean in/out degree, partitioned into pre-trainer, trainer and post-trainer
// operators), model type and architecture one-hots, and history features
// comparing a graphlet to the w graphlets before it.

#ifndef MLPROV_FEATURIZATION_H_
#define MLPROV_FEATURIZATION_H_

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlprov/segmentation.h"
#include "mlprov/similarity.h"

namespace mlprov {

// Points at which a policy may intervene, ordered by how much of the
// graphlet has run.
enum class FeatureStage { kInput, kInputPre, kInputPreTrainer, kValidation };
inline constexpr int kNumStages = 4;
inline constexpr std::array<FeatureStage, kNumStages> kAllStages{
    FeatureStage::kInput, FeatureStage::kInputPre, FeatureStage::kInputPreTrainer,
    FeatureStage::kValidation};

std::string_view ToString(FeatureStage s);
std::optional<FeatureStage> ParseFeatureStage(std::string_view s);

enum class ShapePartition { kPreTrainer, kTrainer, kPostTrainer };

// Operator kinds contributing shape features to a partition. The pusher
// belongs to none: it defines the label.
std::span<const OperatorKind> KindsOf(ShapePartition part);

// Cost groups whose executions must have run before features of `stage`
// are available.
std::span<const OperatorGroup> GroupsNeeded(FeatureStage stage);

inline constexpr double kMissingHistory = -1.0;

struct WindowConfig {
  int w = 3;
};

using NamedValues = std::vector<std::pair<std::string, double>>;

// Architecture one-hot slots: distinct corpus architectures, the 32 most
// frequent kept (ties by name), sorted by name. Unknown names map to "other".
class ArchitectureVocabulary {
 public:
  static constexpr std::size_t kCap = 32;

  ArchitectureVocabulary() = default;
  explicit ArchitectureVocabulary(std::vector<std::string> names);
  static ArchitectureVocabulary FromCorpus(std::span<const Pipeline> corpus);

  const std::vector<std::string>& names() const { return names_; }
  // Slot index in [0, names().size()], the last slot being "other";
  // nullopt for graphlets without an architecture.
  std::optional<std::size_t> SlotOf(const std::optional<std::string>& arch) const;

 private:
  std::vector<std::string> names_;
};

struct FeaturizeOptions {
  WindowConfig window;
  LshParams lsh;
  SimWeights weights;
};

NamedValues ShapeFeatures(const Pipeline& pipeline, const Graphlet& g, ShapePartition part);
NamedValues ModelFeatures(const Graphlet& g, const ArchitectureVocabulary& vocab);
// `predecessors` are most recent first; missing slots hold kMissingHistory.
NamedValues HistoryFeatures(const Graphlet& g, std::span<const Graphlet* const> predecessors,
                            const WindowConfig& window, const SpanSignatureCache& signatures,
                            const SimWeights& weights);

// Feature names of a stage, in vector order.
std::vector<std::string> StageSchema(FeatureStage stage, const WindowConfig& window,
                                     const ArchitectureVocabulary& vocab);

// Sum of the costs of g's executions in the groups needed by `stage`.
double AcquisitionCost(const Graphlet& g, FeatureStage stage);

struct FeatureVector {
  std::vector<double> values;
  std::vector<std::string> names;
  bool label = false;
  double cost_to_acquire = 0.0;
};

FeatureVector Assemble(const Pipeline& pipeline, const Graphlet& g,
                       std::span<const Graphlet* const> predecessors, FeatureStage stage,
                       const WindowConfig& window, const ArchitectureVocabulary& vocab,
                       const SpanSignatureCache& signatures, const SimWeights& weights);

struct RowInfo {
  std::string pipeline_id;
  std::string anchor;
  bool label = false;
  ModelType model_type = ModelType::kOther;
  double graphlet_cost = 0.0;
  std::array<double, kNumStages> stage_costs{};
};

// Row-major feature matrix with per-row metadata.
struct FeatureMatrix {
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<RowInfo> rows;
  FeatureStage stage = FeatureStage::kValidation;

  std::size_t num_rows() const { return rows.size(); }
  std::size_t num_cols() const { return names.size(); }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * names.size(), names.size()};
  }
  double cost_to_acquire(std::size_t i) const {
    return rows[i].stage_costs[static_cast<int>(stage)];
  }
  // Column index of `name`; throws if absent.
  std::size_t column(std::string_view name) const;
};

// Validation-stage matrix over every graphlet of the corpus, pipelines and
// graphlets in chronological order.
FeatureMatrix FeaturizeCorpus(std::span<const Pipeline> corpus, const FeaturizeOptions& options,
                              const ArchitectureVocabulary& vocab);

// The columns of `stage`, in its schema order.
FeatureMatrix SelectStage(const FeatureMatrix& full, FeatureStage stage);

// Keeps the columns whose name satisfies `keep`; acquisition cost is that of
// `cost_stage`.
FeatureMatrix SelectColumns(const FeatureMatrix& full, FeatureStage cost_stage,
                            const std::function<bool(std::string_view)>& keep);

bool IsShapeFeature(std::string_view name);
bool IsHistoryFeature(std::string_view name);
bool IsModelFeature(std::string_view name);

}  // namespace mlprov

#endif  // MLPROV_FEATURIZATION_H_
