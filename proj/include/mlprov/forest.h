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

// Random forest of CART classification trees with class-balanced Gini
// splits, plus the pipeline-level train/test split and balanced accuracy.
//
// Training is deterministic in (X, y, config): tree t draws its bootstrap
// sample and per-node feature subsets from a std::mt19937_64 seeded with
// DeriveSeed(config.seed, t) (see random.h). Nodes are expanded depth
// first, left child before right.

#ifndef MLPROV_FOREST_H_
#define MLPROV_FOREST_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlprov/types.h"

namespace mlprov {

struct ForestConfig {
  int n_trees = 100;
  int max_depth = 16;
  int min_leaf = 5;
  // ceil(sqrt(num_features)) when unset.
  std::optional<int> features_per_split;
  std::uint64_t seed = 42;
  bool balanced_class_weights = true;
  // Off trains every tree on the full sample; useful for fixtures.
  bool bootstrap = true;

  bool operator==(const ForestConfig&) const = default;
};

void CheckForestConfig(const ForestConfig& cfg);

// One tree in flat form. Leaves have feature == -1 and carry the
// class-weighted fraction of positive samples; internal nodes send
// x[feature] <= threshold to `left`.
struct Tree {
  std::vector<int> feature;
  std::vector<double> threshold;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<double> value;
  std::vector<int> samples;

  std::size_t size() const { return feature.size(); }
  double Predict(std::span<const double> x) const;

  bool operator==(const Tree&) const = default;
};

class Forest {
 public:
  static constexpr int kFormatVersion = 1;

  // `x` is row-major with `num_features` columns; labels are 0/1. `schema`
  // names the columns and may be empty.
  static Forest Fit(std::span<const double> x, std::size_t num_features, std::span<const int> y,
                    const ForestConfig& cfg, std::vector<std::string> schema = {});

  // Mean over trees of the leaf positive fraction.
  double Score(std::span<const double> x) const;
  std::vector<double> ScoreRows(std::span<const double> x) const;

  std::size_t num_features() const { return num_features_; }
  const std::vector<std::string>& schema() const { return schema_; }
  const ForestConfig& config() const { return config_; }
  const std::vector<Tree>& trees() const { return trees_; }

  // Throws if `names` differs from the training schema.
  void CheckSchema(std::span<const std::string> names) const;

  void Save(std::ostream& out) const;
  static Forest Load(std::istream& in);

  bool operator==(const Forest&) const = default;

 private:
  ForestConfig config_;
  std::size_t num_features_ = 0;
  std::vector<std::string> schema_;
  std::vector<Tree> trees_;
};

// (TPR + TNR) / 2. Throws on empty or mismatched input or when y_true holds
// a single class.
double BalancedAccuracy(std::span<const int> y_true, std::span<const int> y_pred);

struct PipelineSummary {
  std::string id;
  int graphlets = 0;
  int pushed = 0;
};

struct SplitOptions {
  double target_train_fraction = 0.8;
  double fraction_slack = 0.02;
  double label_tolerance = 0.02;
  double relaxed_label_tolerance = 0.05;
  int max_shuffles = 1000;
};

struct SplitSpec {
  std::vector<std::string> train_pipeline_ids;
  std::vector<std::string> test_pipeline_ids;
  double train_fraction = 0.0;
  double rate_gap = 0.0;
  bool relaxed = false;
};

// Randomized greedy assignment of whole pipelines. Each attempt shuffles the
// pipelines and adds them to the training side while the training graphlet
// fraction stays within target + slack; the rest go to test. The first
// attempt meeting both constraints wins. After max_shuffles failures the
// label tolerance is relaxed (with a warning on `warn`); throws if that also
// fails.
SplitSpec SplitCorpus(std::span<const PipelineSummary> pipelines, std::uint64_t seed,
                      const SplitOptions& options = {}, std::ostream* warn = nullptr);

}  // namespace mlprov

#endif  // MLPROV_FOREST_H_
