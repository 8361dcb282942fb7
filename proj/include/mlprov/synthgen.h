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

// Synthetic corpus generator with planted push structure.
//
// Each pipeline trains one model type on a rolling window of data spans.
// Every graphlet draws latent drift, shape and trainer-size values; they
// surface as span distribution changes, custom operator counts and extra
// trainer outputs. The push probability is
//
//   p = blessed * sigmoid(logit(base[model_type]) + scale * w . z + c)
//
// where z are the standardized latents, blessed ~ Bernoulli(blessing_rate)
// decides whether the model validator emits a blessing, and c is fitted so
// that the mean of p over the generated graphlets equals the target rate.

#ifndef MLPROV_SYNTHGEN_H_
#define MLPROV_SYNTHGEN_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlprov/segmentation.h"
#include "mlprov/trace.h"
#include "mlprov/types.h"

namespace mlprov {

enum class SignalPreset { kWeak, kMedium, kStrong };
std::string_view ToString(SignalPreset p);
std::optional<SignalPreset> ParseSignalPreset(std::string_view s);

enum class PushMode {
  kPlanted,
  // Every graphlet pushes with probability target_rate, independent of all
  // features; push gaps are geometric.
  kConstant,
};

struct PushModel {
  PushMode mode = PushMode::kPlanted;
  double target_rate = 0.2;
  // Indexed by ModelType.
  std::array<double, kNumModelTypes> base_rate{0.30, 0.12, 0.22, 0.35, 0.18, 0.08, 0.15};
  double w_drift = -2.0;
  double w_shape = 0.9;
  double w_trainer = 1.0;
  double scale = 1.0;
  double blessing_rate = 0.6;
};

struct GenConfig {
  std::uint64_t seed = 42;
  int n_pipelines = 120;
  int min_graphlets = 180;
  int max_graphlets = 240;
  PushModel push;
  // Fractions of pipeline cost per OperatorGroup, in reporting order.
  GroupCosts cost_mix{0.22, 0.20, 0.11, 0.30, 0.15, 0.02};
  // Indexed by ModelType.
  std::array<double, kNumModelTypes> model_type_mix{0.35, 0.20, 0.10, 0.15, 0.08, 0.07, 0.05};
  double warmstart_fraction = 0.09;
  double code_stability = 0.85;
  // Drift is the probability that a feature of a newly ingested span is
  // redrawn rather than copied. It follows a random walk on [0, max_drift],
  // reflected at the ends, with steps N(0, (drift_step * max_drift)^2); the
  // first graphlet of a pipeline draws it uniformly.
  double max_drift = 0.6;
  double drift_step = 0.1;
  // Number of newest spans each trainer reads.
  int window = 2;
  int min_features = 8;
  int max_features = 24;
  double categorical_fraction = 0.3;
};

GenConfig PresetConfig(SignalPreset preset);
// Throws on an infeasible configuration.
void CheckGenConfig(const GenConfig& cfg);

struct GraphletTruth {
  std::string pipeline_id;
  std::string anchor;
  double push_probability = 0.0;
  bool pushed = false;
  bool blessed = false;
  double drift = 0.0;
  int custom_ops = 0;
  int trainer_extra_outputs = 0;
};

struct PlantedTruth {
  double intercept = 0.0;
  std::vector<std::string> warmstart_pipelines;
  std::vector<GraphletTruth> graphlets;

  const GraphletTruth* find(std::string_view pipeline_id, std::string_view anchor) const;
};

struct GeneratedCorpus {
  std::vector<Trace> traces;
  PlantedTruth truth;
};

GeneratedCorpus Generate(const GenConfig& cfg);

// Writes one <pipeline_id>.jsonl per trace plus truth.json into `dir`,
// creating it if needed.
void WriteCorpus(const GeneratedCorpus& corpus, const std::string& dir);
void WriteTruth(const PlantedTruth& truth, std::ostream& out);
PlantedTruth ReadTruth(std::istream& in);

// Intercept c giving E[p] = target_rate under the latent distribution,
// found by bisection over a fixed Monte Carlo sample.
double CalibrateIntercept(const GenConfig& cfg);

struct BayesReference {
  // Best balanced accuracy of thresholding the true p, in expectation over
  // the labels of the given graphlets.
  double balanced_accuracy = 0.0;
  // 1 - wasted fraction of the oracle that runs exactly the graphlets whose
  // p is at least the smallest p of a pushed graphlet.
  double waste_elimination = 0.0;
};

// Over the graphlets of `corpus` (costs come from its segmentation).
BayesReference ComputeBayesReference(const PlantedTruth& truth, std::span<const Pipeline> corpus);

// Expected Bayes balanced accuracy of a set of push probabilities.
double BayesBalancedAccuracy(std::span<const double> p);

// The same quantity integrated over the latent distribution by sampling.
double MonteCarloBayesBalancedAccuracy(const GenConfig& cfg, std::size_t samples,
                                       std::uint64_t seed);

}  // namespace mlprov

#endif  // MLPROV_SYNTHGEN_H_
