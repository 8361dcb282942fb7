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

// Provenance data model: a trace is a bipartite DAG of artifact and
// execution nodes linked by input (artifact -> execution) and output
// (execution -> artifact) edges.

#ifndef MLPROV_TRACE_H_
#define MLPROV_TRACE_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "mlprov/types.h"

namespace mlprov {

inline constexpr int kHistogramBins = 10;

enum class FeatureType { kNumerical, kCategorical };

std::string_view ToString(FeatureType v);
std::optional<FeatureType> ParseFeatureType(std::string_view s);

// Summary statistics recorded for one feature of a data span.
struct FeatureStats {
  std::string name;
  FeatureType type = FeatureType::kNumerical;
  // Numerical: mass over 10 equi-width bins of the value range rescaled to [0,1].
  std::optional<std::array<double, kHistogramBins>> numerical_hist;
  // Categorical: counts of the (at most 10) most frequent terms, the number
  // of unique terms and the number of datapoints.
  std::optional<std::vector<std::int64_t>> cat_top10;
  std::optional<std::int64_t> cat_unique;
  std::optional<std::int64_t> cat_total;

  bool operator==(const FeatureStats&) const = default;
};

struct SpanStats {
  std::vector<FeatureStats> features;

  bool operator==(const SpanStats&) const = default;
};

// Returns the invariant violations of a FeatureStats, empty when valid.
std::vector<std::string> CheckFeatureStats(const FeatureStats& f);

struct Artifact {
  std::string id;
  ArtifactType type = ArtifactType::kOther;
  Timestamp created_at = 0;
  std::string pipeline_id;
  std::optional<SpanStats> span_stats;
  // Unrecognized property keys, kept verbatim.
  nlohmann::json extra_properties = nlohmann::json::object();

  bool operator==(const Artifact&) const = default;
};

struct Execution {
  std::string id;
  OperatorKind op = OperatorKind::kCustom;
  std::string pipeline_id;
  Timestamp start_at = 0;
  Timestamp end_at = 0;
  ExecutionState state = ExecutionState::kComplete;
  double cpu_cost = 0.0;
  std::optional<std::string> code_version;
  std::optional<ModelType> model_type;
  std::optional<std::string> architecture;
  std::optional<std::vector<Analyzer>> analyzers;
  nlohmann::json extra_properties = nlohmann::json::object();

  bool operator==(const Execution&) const = default;
};

struct Edge {
  std::string from;
  std::string to;
  EdgeRole role = EdgeRole::kInput;

  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

// Nodes are kept sorted by id and edges by (from, to, role), so two traces
// parsed from permutations of the same records compare equal.
struct Trace {
  std::string pipeline_id;
  std::vector<Artifact> artifacts;
  std::vector<Execution> executions;
  std::vector<Edge> edges;

  bool operator==(const Trace&) const = default;
};

// Restores the sorted node and edge order of a hand-built trace.
void SortTrace(Trace& t);

// Raised by ParseTrace. line() is 1-based; 0 when the error is not tied to a
// single record.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Parses newline-delimited JSON records. Blank lines are skipped.
Trace ParseTrace(std::span<const std::string> lines);
Trace ParseTrace(std::istream& in);
Trace ReadTraceFile(const std::string& path);

// Writes one record per line: artifacts, executions, then edges.
void WriteTrace(const Trace& trace, std::ostream& out);

struct Violation {
  std::string subject;  // node id or "from->to"
  std::string rule;

  std::string ToString() const { return rule + ": " + subject; }
};

// Checks every trace invariant. Never throws.
std::vector<Violation> ValidateTrace(const Trace& trace);

// Dense, immutable view over a validated trace. Artifacts take node ids
// [0, num_artifacts()) in trace order, executions follow.
class TraceIndex {
 public:
  using Node = std::int32_t;

  explicit TraceIndex(const Trace& trace);

  int num_nodes() const { return static_cast<int>(succ_.size()); }
  int num_artifacts() const { return num_artifacts_; }
  bool is_execution(Node v) const { return v >= num_artifacts_; }
  int execution_index(Node v) const { return v - num_artifacts_; }
  Node execution_node(int i) const { return num_artifacts_ + i; }
  std::optional<Node> find(std::string_view id) const;

  const std::vector<Node>& successors(Node v) const { return succ_[v]; }
  const std::vector<Node>& predecessors(Node v) const { return pred_[v]; }

  // Artifact created_at or execution end_at.
  Timestamp time(Node v) const { return time_[v]; }
  // All nodes ordered by time, ties by id.
  const std::vector<Node>& by_time() const { return by_time_; }
  // Trainer executions ordered by end_at, ties by id.
  const std::vector<Node>& trainers() const { return trainers_; }

 private:
  int num_artifacts_ = 0;
  std::vector<std::vector<Node>> succ_;
  std::vector<std::vector<Node>> pred_;
  std::vector<Timestamp> time_;
  std::vector<Node> by_time_;
  std::vector<Node> trainers_;
  std::unordered_map<std::string, Node> lookup_;
};

// Convenience accessors for a node of `index` built from `trace`.
const std::string& NodeIdOf(const Trace& trace, const TraceIndex& index, TraceIndex::Node v);

}  // namespace mlprov

#endif  // MLPROV_TRACE_H_
