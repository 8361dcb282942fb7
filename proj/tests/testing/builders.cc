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

#include "testing/builders.h"

#include <algorithm>
#include <numeric>

namespace mlprov::testing {

std::string FixturePath(const std::string& relative) {
  return std::string(MLPROV_FIXTURES) + "/" + relative;
}

FeatureStats Numerical(std::string name, std::array<double, kHistogramBins> hist) {
  FeatureStats f;
  f.name = std::move(name);
  f.type = FeatureType::kNumerical;
  f.numerical_hist = hist;
  return f;
}

FeatureStats Categorical(std::string name, std::vector<std::int64_t> top, std::int64_t unique,
                         std::int64_t total) {
  FeatureStats f;
  f.name = std::move(name);
  f.type = FeatureType::kCategorical;
  f.cat_top10 = std::move(top);
  f.cat_unique = unique;
  f.cat_total = total;
  return f;
}

FeatureStats RandomFeature(std::mt19937_64& rng, const std::string& name, FeatureType type) {
  if (type == FeatureType::kNumerical) {
    std::exponential_distribution<double> e(1.0);
    std::bernoulli_distribution zero(0.3);
    std::array<double, kHistogramBins> h{};
    double sum = 0.0;
    for (auto& v : h) {
      v = zero(rng) ? 0.0 : e(rng);
      sum += v;
    }
    if (sum == 0.0) {
      h[0] = 1.0;
      sum = 1.0;
    }
    for (auto& v : h) v /= sum;
    return Numerical(name, h);
  }
  const auto k = std::uniform_int_distribution<int>(1, 10)(rng);
  const auto unique = k + std::uniform_int_distribution<std::int64_t>(0, 40)(rng);
  std::vector<std::int64_t> top(k);
  std::int64_t total = 0;
  for (auto& c : top) {
    c = std::uniform_int_distribution<std::int64_t>(1, 500)(rng);
    total += c;
  }
  // Tail terms are no more frequent than the rarest top term.
  const std::int64_t rarest = *std::min_element(top.begin(), top.end());
  if (unique > k) total += (unique - k) * std::uniform_int_distribution<std::int64_t>(1, rarest)(rng);
  return Categorical(name, top, unique, total);
}

SpanStats RandomSpan(std::mt19937_64& rng, int max_features) {
  SpanStats s;
  const int n = std::uniform_int_distribution<int>(1, max_features)(rng);
  std::bernoulli_distribution cat(0.3);
  std::vector<int> ids(2 * max_features);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  for (int i = 0; i < n; ++i) {
    const auto name = "f" + std::to_string(ids[i]);
    s.features.push_back(
        RandomFeature(rng, name, cat(rng) ? FeatureType::kCategorical : FeatureType::kNumerical));
  }
  return s;
}

TraceBuilder::TraceBuilder(std::string pipeline_id) { trace_.pipeline_id = std::move(pipeline_id); }

TraceBuilder& TraceBuilder::Exec(const std::string& id, OperatorKind op, double cost,
                                 ExecutionState state) {
  Execution e;
  e.id = id;
  e.op = op;
  e.pipeline_id = trace_.pipeline_id;
  e.start_at = clock_;
  clock_ += 1000;
  e.end_at = clock_;
  e.state = state;
  e.cpu_cost = cost;
  trace_.executions.push_back(std::move(e));
  return *this;
}

TraceBuilder& TraceBuilder::Art(const std::string& id, ArtifactType type) {
  Artifact a;
  a.id = id;
  a.type = type;
  a.pipeline_id = trace_.pipeline_id;
  clock_ += 1000;
  a.created_at = clock_;
  trace_.artifacts.push_back(std::move(a));
  return *this;
}

TraceBuilder& TraceBuilder::Span(const std::string& id, SpanStats stats) {
  Art(id, ArtifactType::kDataSpan);
  trace_.artifacts.back().span_stats = std::move(stats);
  return *this;
}

TraceBuilder& TraceBuilder::In(const std::string& artifact, const std::string& execution) {
  trace_.edges.push_back({artifact, execution, EdgeRole::kInput});
  return *this;
}

TraceBuilder& TraceBuilder::Out(const std::string& execution, const std::string& artifact) {
  trace_.edges.push_back({execution, artifact, EdgeRole::kOutput});
  return *this;
}

TraceBuilder& TraceBuilder::Model(ModelType type, std::string code_version,
                                  std::string architecture) {
  auto& e = trace_.executions.back();
  e.model_type = type;
  e.code_version = std::move(code_version);
  e.architecture = std::move(architecture);
  return *this;
}

Trace RandomTrace(std::mt19937_64& rng, int max_nodes) {
  const int n = std::uniform_int_distribution<int>(2, max_nodes)(rng);
  std::bernoulli_distribution is_exec(0.45);
  std::uniform_int_distribution<int> kind(0, kNumOperatorKinds - 1);
  std::bernoulli_distribution trainer(0.2), model_art(0.2), span_art(0.3);

  struct Node {
    std::string id;
    bool exec;
    OperatorKind op;
    ArtifactType type;
  };
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) {
    Node v;
    v.exec = i == 0 || (i > 1 && is_exec(rng));
    v.op = trainer(rng) ? OperatorKind::kTrainer : static_cast<OperatorKind>(kind(rng));
    v.type = model_art(rng)  ? ArtifactType::kModel
             : span_art(rng) ? ArtifactType::kDataSpan
                             : ArtifactType::kOther;
    v.id = (v.exec ? "e" : "a") + std::to_string(i);
    nodes.push_back(v);
  }
  if (std::none_of(nodes.begin(), nodes.end(),
                   [](const Node& v) { return v.exec && v.op == OperatorKind::kTrainer; }))
    nodes[0].op = OperatorKind::kTrainer;

  TraceBuilder b("rand");
  for (const Node& v : nodes) {
    if (v.exec) {
      b.Exec(v.id, v.op, 1.0);
      if (v.op == OperatorKind::kTrainer) b.Model(ModelType::kDnn);
    } else if (v.type == ArtifactType::kDataSpan) {
      b.Span(v.id);
    } else {
      b.Art(v.id, v.type);
    }
  }
  // Every artifact after the first execution has exactly one producer;
  // inputs are a random subset of earlier artifacts.
  std::vector<int> execs_so_far;
  std::vector<int> arts_so_far;
  const double density = std::uniform_real_distribution<double>(0.02, 0.3)(rng);
  std::bernoulli_distribution link(density);
  for (int i = 0; i < n; ++i) {
    if (nodes[i].exec) {
      for (int a : arts_so_far)
        if (link(rng)) b.In(nodes[a].id, nodes[i].id);
      execs_so_far.push_back(i);
    } else {
      if (!execs_so_far.empty() && std::bernoulli_distribution(0.9)(rng)) {
        const int e = execs_so_far[std::uniform_int_distribution<std::size_t>(
            0, execs_so_far.size() - 1)(rng)];
        b.Out(nodes[e].id, nodes[i].id);
      }
      arts_so_far.push_back(i);
    }
  }
  Trace t = b.Build();
  SortTrace(t);
  return t;
}

}  // namespace mlprov::testing
