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

// Corpus statistics: pipeline lifespans and training cadence, feature
// shapes, analyzer usage, cost breakdown per operator group, push cadence,
// and data-drift / code-change summaries over consecutive graphlets.

#ifndef MLPROV_ANALYTICS_H_
#define MLPROV_ANALYTICS_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlprov/segmentation.h"
#include "mlprov/similarity.h"
#include "mlprov/trace.h"
#include "mlprov/types.h"

namespace mlprov {

struct PipelineStats {
  std::string pipeline_id;
  double lifespan_days = 0.0;
  double models_per_day = 0.0;
  int trainer_count = 0;
  // Absent when the trace has no data spans.
  std::optional<int> feature_count;
  std::optional<double> categorical_fraction;
  std::optional<double> mean_categorical_domain;
  std::array<int, kNumAnalyzers> analyzer_usage{};
  GroupCosts group_costs{};
};

PipelineStats ComputePipelineStats(const Trace& trace);

// Fraction of total cost per operator group, each execution counted once.
// Throws on an empty corpus or zero total cost.
std::map<OperatorGroup, double> CostBreakdown(std::span<const Pipeline> corpus);
std::map<OperatorGroup, double> CostBreakdown(std::span<const Trace> corpus);

struct CadenceStats {
  std::vector<double> hours_between_graphlets;
  std::vector<double> hours_between_pushed;
  std::vector<int> graphlets_between_pushes;
  std::vector<double> graphlet_duration_hours;
  std::vector<double> trainer_cpu_pushed;
  std::vector<double> trainer_cpu_unpushed;
  std::map<ModelType, double> push_rate_by_model_type;
};

CadenceStats ComputeCadence(std::span<const Pipeline> corpus);

bool CodeMatches(const Graphlet& a, const Graphlet& b);

struct PairSimilarity {
  std::string pipeline_id;
  std::string anchor_a;
  std::string anchor_b;
  double jaccard = 0.0;
  double dataset_sim = 0.0;
  bool code_match = false;
  bool successor_pushed = false;
};

// Jaccard and dataset similarity for every consecutive graphlet pair.
std::vector<PairSimilarity> ConsecutiveSimilarities(std::span<const Pipeline> corpus,
                                                    const LshHasher& hasher,
                                                    const SimWeights& weights);

struct DriftCodeRow {
  double mean_dataset_sim = 0.0;
  double mean_code_match = 0.0;
  std::size_t pairs = 0;
};

// Means grouped by the label of the later graphlet in each pair.
struct DriftCodeTable {
  DriftCodeRow pushed;
  DriftCodeRow unpushed;
  DriftCodeRow overall;
};

DriftCodeTable ComputeDriftCodeTable(std::span<const PairSimilarity> pairs);

// Counts over [0,.25), [.25,.5), [.5,.75), [.75,1].
struct QuartileHistogram {
  std::array<std::size_t, 4> counts{};
  double mean = 0.0;
};

QuartileHistogram Quartiles(std::span<const double> values);

double Mean(std::span<const double> values);
double Mean(std::span<const int> values);

}  // namespace mlprov

#endif  // MLPROV_ANALYTICS_H_
