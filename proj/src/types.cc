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

#include "mlprov/types.h"

#include <array>
#include <utility>

namespace mlprov {
namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> Lookup(const std::array<std::pair<Enum, std::string_view>, N>& table,
                           std::string_view s) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
std::string_view Name(const std::array<std::pair<Enum, std::string_view>, N>& table,
                      Enum v) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "unknown";
}

constexpr std::array<std::pair<ArtifactType, std::string_view>, 8> kArtifactTypes{{
    {ArtifactType::kDataSpan, "data_span"},
    {ArtifactType::kModel, "model"},
    {ArtifactType::kStatistics, "statistics"},
    {ArtifactType::kSchema, "schema"},
    {ArtifactType::kTransformGraph, "transform_graph"},
    {ArtifactType::kEvalResult, "eval_result"},
    {ArtifactType::kPushResult, "push_result"},
    {ArtifactType::kOther, "other"},
}};

constexpr std::array<std::pair<OperatorKind, std::string_view>, 11> kOperatorKinds{{
    {OperatorKind::kExampleGen, "example_gen"},
    {OperatorKind::kStatisticsGen, "statistics_gen"},
    {OperatorKind::kSchemaGen, "schema_gen"},
    {OperatorKind::kExampleValidator, "example_validator"},
    {OperatorKind::kTransform, "transform"},
    {OperatorKind::kTrainer, "trainer"},
    {OperatorKind::kTuner, "tuner"},
    {OperatorKind::kEvaluator, "evaluator"},
    {OperatorKind::kModelValidator, "model_validator"},
    {OperatorKind::kPusher, "pusher"},
    {OperatorKind::kCustom, "custom"},
}};

constexpr std::array<std::pair<OperatorGroup, std::string_view>, 6> kGroups{{
    {OperatorGroup::kDataIngestion, "data_ingestion"},
    {OperatorGroup::kDataAnalysisValidation, "data_analysis_validation"},
    {OperatorGroup::kDataPreprocessing, "data_preprocessing"},
    {OperatorGroup::kTraining, "training"},
    {OperatorGroup::kModelAnalysisValidation, "model_analysis_validation"},
    {OperatorGroup::kDeployment, "deployment"},
}};

constexpr std::array<std::pair<ExecutionState, std::string_view>, 2> kStates{{
    {ExecutionState::kComplete, "complete"},
    {ExecutionState::kFailed, "failed"},
}};

constexpr std::array<std::pair<ModelType, std::string_view>, 7> kModelTypes{{
    {ModelType::kDnn, "dnn"},
    {ModelType::kLinear, "linear"},
    {ModelType::kDnnLinear, "dnn_linear"},
    {ModelType::kTree, "tree"},
    {ModelType::kEnsemble, "ensemble"},
    {ModelType::kCustom, "custom"},
    {ModelType::kOther, "other"},
}};

constexpr std::array<std::pair<Analyzer, std::string_view>, 6> kAnalyzers{{
    {Analyzer::kVocabulary, "vocabulary"},
    {Analyzer::kMin, "min"},
    {Analyzer::kMax, "max"},
    {Analyzer::kMean, "mean"},
    {Analyzer::kVariance, "variance"},
    {Analyzer::kCustom, "custom"},
}};

constexpr std::array<std::pair<EdgeRole, std::string_view>, 2> kRoles{{
    {EdgeRole::kInput, "input"},
    {EdgeRole::kOutput, "output"},
}};

}  // namespace

OperatorGroup GroupOf(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kExampleGen:
      return OperatorGroup::kDataIngestion;
    case OperatorKind::kStatisticsGen:
    case OperatorKind::kSchemaGen:
    case OperatorKind::kExampleValidator:
      return OperatorGroup::kDataAnalysisValidation;
    case OperatorKind::kTransform:
    case OperatorKind::kTuner:
    case OperatorKind::kCustom:
      return OperatorGroup::kDataPreprocessing;
    case OperatorKind::kTrainer:
      return OperatorGroup::kTraining;
    case OperatorKind::kEvaluator:
    case OperatorKind::kModelValidator:
      return OperatorGroup::kModelAnalysisValidation;
    case OperatorKind::kPusher:
      return OperatorGroup::kDeployment;
  }
  return OperatorGroup::kDataPreprocessing;
}

std::string_view ToString(ArtifactType v) { return Name(kArtifactTypes, v); }
std::string_view ToString(OperatorKind v) { return Name(kOperatorKinds, v); }
std::string_view ToString(OperatorGroup v) { return Name(kGroups, v); }
std::string_view ToString(ExecutionState v) { return Name(kStates, v); }
std::string_view ToString(ModelType v) { return Name(kModelTypes, v); }
std::string_view ToString(Analyzer v) { return Name(kAnalyzers, v); }
std::string_view ToString(EdgeRole v) { return Name(kRoles, v); }

std::optional<ArtifactType> ParseArtifactType(std::string_view s) {
  return Lookup(kArtifactTypes, s);
}
std::optional<OperatorKind> ParseOperatorKind(std::string_view s) {
  return Lookup(kOperatorKinds, s);
}
std::optional<OperatorGroup> ParseOperatorGroup(std::string_view s) {
  return Lookup(kGroups, s);
}
std::optional<ExecutionState> ParseExecutionState(std::string_view s) {
  return Lookup(kStates, s);
}
std::optional<ModelType> ParseModelType(std::string_view s) { return Lookup(kModelTypes, s); }
std::optional<Analyzer> ParseAnalyzer(std::string_view s) { return Lookup(kAnalyzers, s); }
std::optional<EdgeRole> ParseEdgeRole(std::string_view s) { return Lookup(kRoles, s); }

}  // namespace mlprov
