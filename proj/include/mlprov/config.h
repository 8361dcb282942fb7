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

// Run configuration and its key=value file format.
//
//   # comment
//   lsh.k = 4
//   forest.n_trees = 100
//   gen.cost_mix = 0.22,0.20,0.11,0.30,0.15,0.02
//
// Unknown keys and malformed values are errors. The --seed flag overrides
// every seed (see ApplySeed).

#ifndef MLPROV_CONFIG_H_
#define MLPROV_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mlprov/featurization.h"
#include "mlprov/forest.h"
#include "mlprov/policy.h"
#include "mlprov/segmentation.h"
#include "mlprov/similarity.h"
#include "mlprov/synthgen.h"

namespace mlprov {

struct RunConfig {
  LshParams lsh;
  SimWeights weights;
  WindowConfig window;
  ForestConfig forest;
  GenConfig gen;
  StopSet stop;
  SplitOptions split;
  double min_freshness = 0.999;
  double decision_threshold = 0.5;
};

class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Applies the keys of `in` on top of `base`, then checks the result.
RunConfig ParseConfig(std::istream& in, RunConfig base = {});
RunConfig LoadConfig(const std::string& path, RunConfig base = {});

// Throws if any section is invalid.
void CheckRunConfig(const RunConfig& cfg);

// The seed drives the LSH projections, the forest, the split and the
// generator.
void ApplySeed(RunConfig& cfg, std::uint64_t seed);

// Every recognized key, for documentation and tests.
std::vector<std::string> ConfigKeys();

FeaturizeOptions FeaturizeOptionsOf(const RunConfig& cfg);
ReportConfig ReportConfigOf(const RunConfig& cfg);

}  // namespace mlprov

#endif  // MLPROV_CONFIG_H_
