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

// Model graphlet segmentation.
//
// For a trainer execution n the graphlet g_n is the least fixpoint of
//
//   g(V) :- E(V, X), g(X)               (ancestors)
//   g(V) :- g(X), E(X, V), NOT sc(V)    (descendants, stopped at sc)
//
// seeded with n, where sc(V) holds for executions whose operator is in the
// stop set, other than n itself. Edges from a model artifact into a trainer
// (warm-start edges) are cut by default: neither rule follows them.

#ifndef MLPROV_SEGMENTATION_H_
#define MLPROV_SEGMENTATION_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlprov/trace.h"
#include "mlprov/types.h"

namespace mlprov {

struct StopSet {
  std::set<OperatorKind> kinds{OperatorKind::kTransform, OperatorKind::kTrainer};
  bool cut_warmstart_edges = true;
};

// True for an edge model artifact -> trainer execution.
bool IsWarmstartEdge(const Trace& trace, const TraceIndex& index, TraceIndex::Node from,
                     TraceIndex::Node to);

struct Graphlet {
  std::string anchor;
  TraceIndex::Node anchor_node = -1;
  std::string pipeline_id;
  std::vector<TraceIndex::Node> nodes;        // sorted ascending
  std::vector<TraceIndex::Node> input_spans;  // data spans upstream of the anchor, by created_at
  bool pushed = false;
  std::map<OperatorGroup, double> costs;
  Timestamp trainer_end_at = 0;
  std::optional<std::string> trainer_code_version;
  ModelType model_type = ModelType::kOther;
  std::optional<std::string> architecture;

  bool contains(TraceIndex::Node v) const;
};

// Node set of the graphlet anchored at `anchor`, sorted ascending.
std::vector<TraceIndex::Node> GraphletNodes(const Trace& trace, const TraceIndex& index,
                                            TraceIndex::Node anchor, const StopSet& stop);

// One graphlet per trainer execution, in trainer chronological order.
std::vector<Graphlet> ExtractGraphlets(const Trace& trace, const TraceIndex& index,
                                       const StopSet& stop = {});

// True iff the graphlet contains a pusher execution that completed.
bool LabelPushed(const Graphlet& g, const Trace& trace, const TraceIndex& index);

// Per-group sum of execution costs; only groups present in the graphlet appear.
std::map<OperatorGroup, double> GraphletCosts(const Graphlet& g, const Trace& trace,
                                              const TraceIndex& index);

double TotalCost(const Graphlet& g);

std::vector<std::pair<const Graphlet*, const Graphlet*>> ConsecutivePairs(
    std::span<const Graphlet> graphlets);

// A trace, its index and its graphlets.
struct Pipeline {
  Trace trace;
  TraceIndex index;
  std::vector<Graphlet> graphlets;

  const std::string& id() const { return trace.pipeline_id; }
};

Pipeline SegmentPipeline(Trace trace, const StopSet& stop = {});

// True iff some trainer consumes a model artifact directly.
bool IsWarmstartPipeline(const Trace& trace, const TraceIndex& index);

std::vector<Pipeline> FilterWarmstart(std::vector<Pipeline> corpus);

// Cost of the executions covered by at least one graphlet, each counted once.
GroupCosts OverlapAdjustedCosts(const Pipeline& pipeline);

// One JSON record per graphlet: anchor, nodes, pushed, costs, input spans.
void WriteGraphlets(const Pipeline& pipeline, std::ostream& out);

}  // namespace mlprov

#endif  // MLPROV_SEGMENTATION_H_
