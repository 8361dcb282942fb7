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

// Helpers for constructing traces and statistics in tests.

#ifndef MLPROV_TESTING_BUILDERS_H_
#define MLPROV_TESTING_BUILDERS_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mlprov/trace.h"

namespace mlprov::testing {

std::string FixturePath(const std::string& relative);

FeatureStats Numerical(std::string name, std::array<double, kHistogramBins> hist);
FeatureStats Categorical(std::string name, std::vector<std::int64_t> top, std::int64_t unique,
                         std::int64_t total);

// Random well-formed statistics: histograms from a Dirichlet-like draw,
// categoricals with up to 10 top terms.
FeatureStats RandomFeature(std::mt19937_64& rng, const std::string& name, FeatureType type);
SpanStats RandomSpan(std::mt19937_64& rng, int max_features);

class TraceBuilder {
 public:
  explicit TraceBuilder(std::string pipeline_id = "p");

  // Each call advances the clock so node times follow call order.
  TraceBuilder& Exec(const std::string& id, OperatorKind op, double cost = 1.0,
                     ExecutionState state = ExecutionState::kComplete);
  TraceBuilder& Art(const std::string& id, ArtifactType type);
  TraceBuilder& Span(const std::string& id, SpanStats stats = {});
  TraceBuilder& In(const std::string& artifact, const std::string& execution);
  TraceBuilder& Out(const std::string& execution, const std::string& artifact);
  // Sets trainer properties on the most recent execution.
  TraceBuilder& Model(ModelType type, std::string code_version = "v1",
                      std::string architecture = "ff");

  Trace& trace() { return trace_; }
  Trace Build() const { return trace_; }

 private:
  Trace trace_;
  Timestamp clock_ = 1'700'000'000'000;
};

// A random valid trace with at most `max_nodes` nodes. Edges only go from
// earlier to later nodes, so the graph is acyclic; trainers, transforms and
// occasional warm-start edges are included.
Trace RandomTrace(std::mt19937_64& rng, int max_nodes);

}  // namespace mlprov::testing

#endif  // MLPROV_TESTING_BUILDERS_H_
