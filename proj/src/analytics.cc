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

#include "mlprov/analytics.h"

#include <algorithm>
#include <limits>

namespace mlprov {

PipelineStats ComputePipelineStats(const Trace& trace) {
  PipelineStats s;
  s.pipeline_id = trace.pipeline_id;
  Timestamp lo = std::numeric_limits<Timestamp>::max();
  Timestamp hi = std::numeric_limits<Timestamp>::min();
  auto touch = [&](Timestamp t) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  };
  long spans = 0;
  long features = 0;
  long categorical = 0;
  double domain_sum = 0.0;
  for (const Artifact& a : trace.artifacts) {
    touch(a.created_at);
    if (!a.span_stats) continue;
    ++spans;
    for (const FeatureStats& f : a.span_stats->features) {
      ++features;
      if (f.type == FeatureType::kCategorical) {
        ++categorical;
        domain_sum += static_cast<double>(f.cat_unique.value_or(0));
      }
    }
  }
  for (const Execution& e : trace.executions) {
    touch(e.start_at);
    touch(e.end_at);
    if (e.op == OperatorKind::kTrainer) ++s.trainer_count;
    if (e.analyzers && e.op == OperatorKind::kTransform) {
      for (Analyzer an : *e.analyzers) ++s.analyzer_usage[static_cast<int>(an)];
    }
    At(s.group_costs, GroupOf(e.op)) += e.cpu_cost;
  }
  if (hi >= lo) s.lifespan_days = static_cast<double>(hi - lo) / kMillisPerDay;
  s.models_per_day = s.trainer_count / std::max(s.lifespan_days, 1.0);
  if (spans > 0) {
    s.feature_count = static_cast<int>(
        std::lround(static_cast<double>(features) / static_cast<double>(spans)));
    s.categorical_fraction =
        features > 0 ? static_cast<double>(categorical) / static_cast<double>(features) : 0.0;
    s.mean_categorical_domain = categorical > 0 ? domain_sum / static_cast<double>(categorical) : 0.0;
  }
  return s;
}

namespace {

std::map<OperatorGroup, double> Normalize(const GroupCosts& totals) {
  double sum = 0.0;
  for (double c : totals) sum += c;
  if (!(sum > 0.0)) throw Error("cost breakdown: total cost is zero");
  std::map<OperatorGroup, double> out;
  for (int g = 0; g < kNumOperatorGroups; ++g) {
    if (totals[g] > 0.0) out[static_cast<OperatorGroup>(g)] = totals[g] / sum;
  }
  return out;
}

}  // namespace

std::map<OperatorGroup, double> CostBreakdown(std::span<const Trace> corpus) {
  if (corpus.empty()) throw Error("cost breakdown: empty corpus");
  GroupCosts totals{};
  for (const Trace& t : corpus) {
    for (const Execution& e : t.executions) At(totals, GroupOf(e.op)) += e.cpu_cost;
  }
  return Normalize(totals);
}

std::map<OperatorGroup, double> CostBreakdown(std::span<const Pipeline> corpus) {
  if (corpus.empty()) throw Error("cost breakdown: empty corpus");
  GroupCosts totals{};
  for (const Pipeline& p : corpus) {
    for (const Execution& e : p.trace.executions) At(totals, GroupOf(e.op)) += e.cpu_cost;
  }
  return Normalize(totals);
}

CadenceStats ComputeCadence(std::span<const Pipeline> corpus) {
  CadenceStats c;
  std::map<ModelType, std::pair<long, long>> pushes;  // type -> (pushed, total)
  for (const Pipeline& p : corpus) {
    auto pairs = ConsecutivePairs(p.graphlets);
    for (const auto& [a, b] : pairs) {
      c.hours_between_graphlets.push_back(
          static_cast<double>(b->trainer_end_at - a->trainer_end_at) / kMillisPerHour);
    }
    // Chronological order, as produced by ConsecutivePairs.
    std::vector<const Graphlet*> ordered;
    if (!pairs.empty()) {
      ordered.push_back(pairs.front().first);
      for (const auto& pr : pairs) ordered.push_back(pr.second);
    } else {
      for (const Graphlet& g : p.graphlets) ordered.push_back(&g);
    }
    const Graphlet* last_pushed = nullptr;
    int unpushed_since = 0;
    for (const Graphlet* g : ordered) {
      const Execution& trainer = p.trace.executions[p.index.execution_index(g->anchor_node)];
      Timestamp start = trainer.start_at;
      for (TraceIndex::Node v : g->nodes) {
        if (p.index.is_execution(v)) {
          start = std::min(start, p.trace.executions[p.index.execution_index(v)].start_at);
        }
      }
      c.graphlet_duration_hours.push_back(static_cast<double>(g->trainer_end_at - start) /
                                          kMillisPerHour);
      auto& counts = pushes[g->model_type];
      ++counts.second;
      if (g->pushed) {
        ++counts.first;
        c.trainer_cpu_pushed.push_back(trainer.cpu_cost);
        if (last_pushed != nullptr) {
          c.graphlets_between_pushes.push_back(unpushed_since);
          c.hours_between_pushed.push_back(
              static_cast<double>(g->trainer_end_at - last_pushed->trainer_end_at) / kMillisPerHour);
        }
        last_pushed = g;
        unpushed_since = 0;
      } else {
        c.trainer_cpu_unpushed.push_back(trainer.cpu_cost);
        ++unpushed_since;
      }
    }
  }
  for (const auto& [type, counts] : pushes) {
    c.push_rate_by_model_type[type] =
        static_cast<double>(counts.first) / static_cast<double>(counts.second);
  }
  return c;
}

bool CodeMatches(const Graphlet& a, const Graphlet& b) {
  return a.trainer_code_version == b.trainer_code_version;
}

std::vector<PairSimilarity> ConsecutiveSimilarities(std::span<const Pipeline> corpus,
                                                    const LshHasher& hasher,
                                                    const SimWeights& weights) {
  CheckWeights(weights);
  std::vector<PairSimilarity> out;
  for (const Pipeline& p : corpus) {
    SpanSignatureCache cache(p, hasher);
    for (const auto& [a, b] : ConsecutivePairs(p.graphlets)) {
      PairSimilarity s;
      s.pipeline_id = p.id();
      s.anchor_a = a->anchor;
      s.anchor_b = b->anchor;
      s.jaccard = Jaccard(*a, *b);
      s.dataset_sim = SequenceSim(cache.InputsOf(*a), cache.InputsOf(*b), weights);
      s.code_match = CodeMatches(*a, *b);
      s.successor_pushed = b->pushed;
      out.push_back(std::move(s));
    }
  }
  return out;
}

DriftCodeTable ComputeDriftCodeTable(std::span<const PairSimilarity> pairs) {
  DriftCodeTable t;
  auto add = [](DriftCodeRow& row, const PairSimilarity& p) {
    row.mean_dataset_sim += p.dataset_sim;
    row.mean_code_match += p.code_match ? 1.0 : 0.0;
    ++row.pairs;
  };
  for (const PairSimilarity& p : pairs) {
    add(p.successor_pushed ? t.pushed : t.unpushed, p);
    add(t.overall, p);
  }
  for (DriftCodeRow* row : {&t.pushed, &t.unpushed, &t.overall}) {
    if (row->pairs == 0) continue;
    row->mean_dataset_sim /= static_cast<double>(row->pairs);
    row->mean_code_match /= static_cast<double>(row->pairs);
  }
  return t;
}

QuartileHistogram Quartiles(std::span<const double> values) {
  QuartileHistogram h;
  for (double v : values) {
    const int bucket = v < 0.25 ? 0 : v < 0.5 ? 1 : v < 0.75 ? 2 : 3;
    ++h.counts[bucket];
  }
  h.mean = Mean(values);
  return h;
}

double Mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double Mean(std::span<const int> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (int v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace mlprov
