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

#ifndef MLPROV_TYPES_H_
#define MLPROV_TYPES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mlprov {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Milliseconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr double kMillisPerHour = 3'600'000.0;
inline constexpr double kMillisPerDay = 86'400'000.0;

enum class ArtifactType {
  kDataSpan,
  kModel,
  kStatistics,
  kSchema,
  kTransformGraph,
  kEvalResult,
  kPushResult,
  kOther,
};
inline constexpr int kNumArtifactTypes = 8;

enum class OperatorKind {
  kExampleGen,
  kStatisticsGen,
  kSchemaGen,
  kExampleValidator,
  kTransform,
  kTrainer,
  kTuner,
  kEvaluator,
  kModelValidator,
  kPusher,
  kCustom,
};
inline constexpr int kNumOperatorKinds = 11;

// Cost groups. The order is the reporting order used by every table.
enum class OperatorGroup {
  kDataIngestion,
  kDataAnalysisValidation,
  kDataPreprocessing,
  kTraining,
  kModelAnalysisValidation,
  kDeployment,
};
inline constexpr int kNumOperatorGroups = 6;

enum class ExecutionState { kComplete, kFailed };

enum class ModelType { kDnn, kLinear, kDnnLinear, kTree, kEnsemble, kCustom, kOther };
inline constexpr int kNumModelTypes = 7;

enum class Analyzer { kVocabulary, kMin, kMax, kMean, kVariance, kCustom };
inline constexpr int kNumAnalyzers = 6;

enum class EdgeRole { kInput, kOutput };

OperatorGroup GroupOf(OperatorKind kind);

std::string_view ToString(ArtifactType v);
std::string_view ToString(OperatorKind v);
std::string_view ToString(OperatorGroup v);
std::string_view ToString(ExecutionState v);
std::string_view ToString(ModelType v);
std::string_view ToString(Analyzer v);
std::string_view ToString(EdgeRole v);

std::optional<ArtifactType> ParseArtifactType(std::string_view s);
std::optional<OperatorKind> ParseOperatorKind(std::string_view s);
std::optional<OperatorGroup> ParseOperatorGroup(std::string_view s);
std::optional<ExecutionState> ParseExecutionState(std::string_view s);
std::optional<ModelType> ParseModelType(std::string_view s);
std::optional<Analyzer> ParseAnalyzer(std::string_view s);
std::optional<EdgeRole> ParseEdgeRole(std::string_view s);

// Per-group accumulator indexed by OperatorGroup.
using GroupCosts = std::array<double, kNumOperatorGroups>;

inline double& At(GroupCosts& costs, OperatorGroup g) {
  return costs[static_cast<int>(g)];
}
inline double At(const GroupCosts& costs, OperatorGroup g) {
  return costs[static_cast<int>(g)];
}

}  // namespace mlprov

#endif  // MLPROV_TYPES_H_
