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

#include "mlprov/segmentation.h"

#include <algorithm>
#include <ostream>

namespace mlprov {

using Node = TraceIndex::Node;

bool IsWarmstartEdge(const Trace& trace, const TraceIndex& index, Node from, Node to) {
  return !index.is_execution(from) && index.is_execution(to) &&
         trace.artifacts[from].type == ArtifactType::kModel &&
         trace.executions[index.execution_index(to)].op == OperatorKind::kTrainer;
}

bool Graphlet::contains(Node v) const { return std::binary_search(nodes.begin(), nodes.end(), v); }

std::vector<Node> GraphletNodes(const Trace& trace, const TraceIndex& index, Node anchor,
                                const StopSet& stop) {
  std::vector<char> in(index.num_nodes(), 0);
  std::vector<Node> work{anchor};
  in[anchor] = 1;
  auto stops = [&](Node v) {
    return v != anchor && index.is_execution(v) &&
           stop.kinds.count(trace.executions[index.execution_index(v)].op) > 0;
  };
  auto cut = [&](Node from, Node to) {
    return stop.cut_warmstart_edges && IsWarmstartEdge(trace, index, from, to);
  };
  while (!work.empty()) {
    const Node x = work.back();
    work.pop_back();
    for (Node v : index.predecessors(x)) {
      if (!in[v] && !cut(v, x)) {
        in[v] = 1;
        work.push_back(v);
      }
    }
    for (Node v : index.successors(x)) {
      if (!in[v] && !stops(v) && !cut(x, v)) {
        in[v] = 1;
        work.push_back(v);
      }
    }
  }
  std::vector<Node> nodes;
  for (Node v = 0; v < index.num_nodes(); ++v) {
    if (in[v]) nodes.push_back(v);
  }
  return nodes;
}

namespace {

std::vector<Node> InputSpans(const Trace& trace, const TraceIndex& index, Node anchor,
                             const StopSet& stop) {
  std::vector<char> seen(index.num_nodes(), 0);
  std::vector<Node> work{anchor};
  std::vector<Node> spans;
  seen[anchor] = 1;
  while (!work.empty()) {
    const Node x = work.back();
    work.pop_back();
    for (Node v : index.predecessors(x)) {
      if (seen[v]) continue;
      if (stop.cut_warmstart_edges && IsWarmstartEdge(trace, index, v, x)) continue;
      seen[v] = 1;
      work.push_back(v);
      if (!index.is_execution(v) && trace.artifacts[v].type == ArtifactType::kDataSpan) {
        spans.push_back(v);
      }
    }
  }
  std::sort(spans.begin(), spans.end(), [&](Node a, Node b) {
    const Artifact& x = trace.artifacts[a];
    const Artifact& y = trace.artifacts[b];
    if (x.created_at != y.created_at) return x.created_at < y.created_at;
    return x.id < y.id;
  });
  return spans;
}

}  // namespace

std::vector<Graphlet> ExtractGraphlets(const Trace& trace, const TraceIndex& index,
                                       const StopSet& stop) {
  std::vector<Graphlet> out;
  out.reserve(index.trainers().size());
  for (Node anchor : index.trainers()) {
    const Execution& trainer = trace.executions[index.execution_index(anchor)];
    Graphlet g;
    g.anchor = trainer.id;
    g.anchor_node = anchor;
    g.pipeline_id = trace.pipeline_id;
    g.nodes = GraphletNodes(trace, index, anchor, stop);
    g.input_spans = InputSpans(trace, index, anchor, stop);
    g.trainer_end_at = trainer.end_at;
    g.trainer_code_version = trainer.code_version;
    g.model_type = trainer.model_type.value_or(ModelType::kOther);
    g.architecture = trainer.architecture;
    g.pushed = LabelPushed(g, trace, index);
    g.costs = GraphletCosts(g, trace, index);
    out.push_back(std::move(g));
  }
  return out;
}

bool LabelPushed(const Graphlet& g, const Trace& trace, const TraceIndex& index) {
  for (Node v : g.nodes) {
    if (!index.is_execution(v)) continue;
    const Execution& e = trace.executions[index.execution_index(v)];
    if (e.op == OperatorKind::kPusher && e.state == ExecutionState::kComplete) return true;
  }
  return false;
}

std::map<OperatorGroup, double> GraphletCosts(const Graphlet& g, const Trace& trace,
                                              const TraceIndex& index) {
  std::map<OperatorGroup, double> costs;
  for (Node v : g.nodes) {
    if (!index.is_execution(v)) continue;
    const Execution& e = trace.executions[index.execution_index(v)];
    costs[GroupOf(e.op)] += e.cpu_cost;
  }
  return costs;
}

double TotalCost(const Graphlet& g) {
  double total = 0.0;
  for (const auto& [group, cost] : g.costs) total += cost;
  return total;
}

std::vector<std::pair<const Graphlet*, const Graphlet*>> ConsecutivePairs(
    std::span<const Graphlet> graphlets) {
  std::vector<const Graphlet*> ordered;
  for (const Graphlet& g : graphlets) ordered.push_back(&g);
  std::stable_sort(ordered.begin(), ordered.end(), [](const Graphlet* a, const Graphlet* b) {
    if (a->trainer_end_at != b->trainer_end_at) return a->trainer_end_at < b->trainer_end_at;
    return a->anchor < b->anchor;
  });
  std::vector<std::pair<const Graphlet*, const Graphlet*>> pairs;
  for (std::size_t i = 1; i < ordered.size(); ++i) pairs.emplace_back(ordered[i - 1], ordered[i]);
  return pairs;
}

Pipeline SegmentPipeline(Trace trace, const StopSet& stop) {
  TraceIndex index(trace);
  std::vector<Graphlet> graphlets = ExtractGraphlets(trace, index, stop);
  return Pipeline{std::move(trace), std::move(index), std::move(graphlets)};
}

bool IsWarmstartPipeline(const Trace& trace, const TraceIndex& index) {
  for (Node t : index.trainers()) {
    for (Node v : index.predecessors(t)) {
      if (IsWarmstartEdge(trace, index, v, t)) return true;
    }
  }
  return false;
}

std::vector<Pipeline> FilterWarmstart(std::vector<Pipeline> corpus) {
  std::vector<Pipeline> kept;
  for (Pipeline& p : corpus) {
    if (!IsWarmstartPipeline(p.trace, p.index)) kept.push_back(std::move(p));
  }
  return kept;
}

GroupCosts OverlapAdjustedCosts(const Pipeline& pipeline) {
  std::vector<char> counted(pipeline.index.num_nodes(), 0);
  GroupCosts costs{};
  for (const Graphlet& g : pipeline.graphlets) {
    for (Node v : g.nodes) {
      if (counted[v] || !pipeline.index.is_execution(v)) continue;
      counted[v] = 1;
      const Execution& e = pipeline.trace.executions[pipeline.index.execution_index(v)];
      At(costs, GroupOf(e.op)) += e.cpu_cost;
    }
  }
  return costs;
}

void WriteGraphlets(const Pipeline& pipeline, std::ostream& out) {
  for (const Graphlet& g : pipeline.graphlets) {
    nlohmann::json nodes = nlohmann::json::array();
    for (Node v : g.nodes) nodes.push_back(NodeIdOf(pipeline.trace, pipeline.index, v));
    nlohmann::json spans = nlohmann::json::array();
    for (Node v : g.input_spans) spans.push_back(NodeIdOf(pipeline.trace, pipeline.index, v));
    nlohmann::json costs = nlohmann::json::object();
    for (const auto& [group, cost] : g.costs) costs[std::string(ToString(group))] = cost;
    nlohmann::json record = {{"pipeline_id", g.pipeline_id},
                             {"anchor", g.anchor},
                             {"trainer_end_at", g.trainer_end_at},
                             {"pushed", g.pushed},
                             {"nodes", std::move(nodes)},
                             {"input_spans", std::move(spans)},
                             {"costs", std::move(costs)}};
    out << record.dump() << '\n';
  }
}

}  // namespace mlprov
