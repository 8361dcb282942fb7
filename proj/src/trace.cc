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

#include "mlprov/trace.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_set>

namespace mlprov {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(std::size_t line, const std::string& message) {
  throw ParseError(line, message);
}

const json& Require(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) Fail(line, std::string("missing field '") + key + "'");
  return *it;
}

std::string RequireString(const json& obj, const char* key, std::size_t line) {
  const json& v = Require(obj, key, line);
  if (!v.is_string()) Fail(line, std::string("field '") + key + "' must be a string");
  std::string s = v.get<std::string>();
  if (s.empty()) Fail(line, std::string("field '") + key + "' must be non-empty");
  return s;
}

Timestamp RequireTimestamp(const json& obj, const char* key, std::size_t line) {
  const json& v = Require(obj, key, line);
  if (!v.is_number_integer()) Fail(line, std::string("field '") + key + "' must be an integer");
  return v.get<Timestamp>();
}

template <typename Enum>
Enum RequireEnum(const json& obj, const char* key, std::size_t line,
                 std::optional<Enum> (*parse)(std::string_view)) {
  std::string s = RequireString(obj, key, line);
  auto v = parse(s);
  if (!v) Fail(line, std::string("unknown ") + key + " '" + s + "'");
  return *v;
}

FeatureStats ParseFeature(const json& j, std::size_t line) {
  if (!j.is_object()) Fail(line, "feature entry must be an object");
  FeatureStats f;
  f.name = RequireString(j, "name", line);
  f.type = RequireEnum<FeatureType>(j, "type", line, &ParseFeatureType);
  if (auto it = j.find("hist"); it != j.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != kHistogramBins) {
      Fail(line, "feature '" + f.name + "' hist must hold 10 numbers");
    }
    std::array<double, kHistogramBins> h{};
    for (int i = 0; i < kHistogramBins; ++i) {
      if (!(*it)[i].is_number()) Fail(line, "feature '" + f.name + "' hist must hold numbers");
      h[i] = (*it)[i].get<double>();
    }
    f.numerical_hist = h;
  }
  if (auto it = j.find("top10"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) Fail(line, "feature '" + f.name + "' top10 must be an array");
    std::vector<std::int64_t> counts;
    for (const auto& c : *it) {
      if (!c.is_number_integer()) Fail(line, "feature '" + f.name + "' top10 must hold integers");
      counts.push_back(c.get<std::int64_t>());
    }
    f.cat_top10 = std::move(counts);
  }
  auto read_int = [&](const char* key) -> std::optional<std::int64_t> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) Fail(line, std::string("feature field '") + key + "' must be an integer");
    return it->get<std::int64_t>();
  };
  f.cat_unique = read_int("unique");
  f.cat_total = read_int("total");
  return f;
}

json FeatureToJson(const FeatureStats& f) {
  json j = {{"name", f.name}, {"type", std::string(ToString(f.type))}};
  if (f.numerical_hist) j["hist"] = *f.numerical_hist;
  if (f.cat_top10) j["top10"] = *f.cat_top10;
  if (f.cat_unique) j["unique"] = *f.cat_unique;
  if (f.cat_total) j["total"] = *f.cat_total;
  return j;
}

json PropertiesOf(const json& record, std::size_t line) {
  auto it = record.find("properties");
  if (it == record.end() || it->is_null()) return json::object();
  if (!it->is_object()) Fail(line, "field 'properties' must be an object");
  return *it;
}

Artifact ParseArtifact(const json& r, std::size_t line) {
  Artifact a;
  a.id = RequireString(r, "id", line);
  a.type = RequireEnum<ArtifactType>(r, "type", line, &ParseArtifactType);
  a.created_at = RequireTimestamp(r, "created_at", line);
  a.pipeline_id = RequireString(r, "pipeline_id", line);
  json props = PropertiesOf(r, line);
  for (auto it = props.begin(); it != props.end(); ++it) {
    if (it.key() == "span_stats") {
      if (it->is_null()) continue;
      const json& features = Require(*it, "features", line);
      if (!features.is_array()) Fail(line, "span_stats.features must be an array");
      SpanStats stats;
      for (const auto& fj : features) stats.features.push_back(ParseFeature(fj, line));
      a.span_stats = std::move(stats);
    } else {
      a.extra_properties[it.key()] = it.value();
    }
  }
  return a;
}

Execution ParseExecution(const json& r, std::size_t line) {
  Execution e;
  e.id = RequireString(r, "id", line);
  e.op = RequireEnum<OperatorKind>(r, "operator", line, &ParseOperatorKind);
  e.pipeline_id = RequireString(r, "pipeline_id", line);
  e.start_at = RequireTimestamp(r, "start_at", line);
  e.end_at = RequireTimestamp(r, "end_at", line);
  e.state = RequireEnum<ExecutionState>(r, "state", line, &ParseExecutionState);
  const json& cost = Require(r, "cpu_cost", line);
  if (!cost.is_number()) Fail(line, "field 'cpu_cost' must be a number");
  e.cpu_cost = cost.get<double>();
  json props = PropertiesOf(r, line);
  for (auto it = props.begin(); it != props.end(); ++it) {
    const std::string& key = it.key();
    if (it->is_null()) continue;
    if (key == "code_version") {
      if (!it->is_string()) Fail(line, "code_version must be a string");
      e.code_version = it->get<std::string>();
    } else if (key == "model_type") {
      if (!it->is_string()) Fail(line, "model_type must be a string");
      auto mt = ParseModelType(it->get<std::string>());
      if (!mt) Fail(line, "unknown model_type '" + it->get<std::string>() + "'");
      e.model_type = *mt;
    } else if (key == "architecture") {
      if (!it->is_string()) Fail(line, "architecture must be a string");
      e.architecture = it->get<std::string>();
    } else if (key == "analyzers") {
      if (!it->is_array()) Fail(line, "analyzers must be an array");
      std::vector<Analyzer> list;
      for (const auto& aj : *it) {
        auto an = aj.is_string() ? ParseAnalyzer(aj.get<std::string>()) : std::nullopt;
        if (!an) Fail(line, "unknown analyzer " + aj.dump());
        list.push_back(*an);
      }
      e.analyzers = std::move(list);
    } else {
      e.extra_properties[key] = it.value();
    }
  }
  return e;
}

Edge ParseEdge(const json& r, std::size_t line) {
  Edge e;
  e.from = RequireString(r, "from", line);
  e.to = RequireString(r, "to", line);
  e.role = RequireEnum<EdgeRole>(r, "role", line, &ParseEdgeRole);
  return e;
}

// Edge orientation: input edges run artifact->execution, output edges
// execution->artifact.
bool OrientationOk(const Edge& e, bool from_is_exec, bool to_is_exec) {
  if (e.role == EdgeRole::kInput) return !from_is_exec && to_is_exec;
  return from_is_exec && !to_is_exec;
}

}  // namespace

void SortTrace(Trace& t) {
  std::sort(t.artifacts.begin(), t.artifacts.end(),
            [](const Artifact& a, const Artifact& b) { return a.id < b.id; });
  std::sort(t.executions.begin(), t.executions.end(),
            [](const Execution& a, const Execution& b) { return a.id < b.id; });
  std::sort(t.edges.begin(), t.edges.end());
}

std::string_view ToString(FeatureType v) {
  return v == FeatureType::kNumerical ? "numerical" : "categorical";
}

std::optional<FeatureType> ParseFeatureType(std::string_view s) {
  if (s == "numerical") return FeatureType::kNumerical;
  if (s == "categorical") return FeatureType::kCategorical;
  return std::nullopt;
}

std::vector<std::string> CheckFeatureStats(const FeatureStats& f) {
  std::vector<std::string> out;
  if (f.name.empty()) out.push_back("empty feature name");
  if (f.type == FeatureType::kNumerical) {
    if (!f.numerical_hist) {
      out.push_back("numerical feature without histogram");
    } else {
      double sum = 0.0;
      for (double b : *f.numerical_hist) {
        if (!(b >= 0.0) || !std::isfinite(b)) out.push_back("negative or non-finite histogram bin");
        sum += b;
      }
      if (std::abs(sum - 1.0) > 1e-9) out.push_back("histogram mass does not sum to 1");
    }
    if (f.cat_top10 || f.cat_unique || f.cat_total) {
      out.push_back("categorical fields on numerical feature");
    }
    return out;
  }
  if (f.numerical_hist) out.push_back("histogram on categorical feature");
  if (!f.cat_top10 || !f.cat_unique || !f.cat_total) {
    out.push_back("categorical feature missing top10/unique/total");
    return out;
  }
  const auto& top = *f.cat_top10;
  const std::int64_t n = *f.cat_unique;
  const std::int64_t total = *f.cat_total;
  if (n <= 0) out.push_back("unique count must be positive");
  if (total <= 0) out.push_back("total count must be positive");
  if (n > total) out.push_back("unique count exceeds total");
  if (static_cast<std::int64_t>(top.size()) > std::min<std::int64_t>(10, n)) {
    out.push_back("more top terms than min(10, unique)");
  }
  std::int64_t sum = 0;
  for (std::int64_t c : top) {
    if (c <= 0) out.push_back("top term count must be positive");
    sum += c;
  }
  if (sum > total) out.push_back("top term counts exceed total");
  if (static_cast<std::int64_t>(top.size()) == n && sum != total) {
    out.push_back("top terms cover every unique term but do not sum to total");
  }
  return out;
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

Trace ParseTrace(std::span<const std::string> lines) {
  Trace t;
  std::unordered_map<std::string, std::pair<bool, std::size_t>> nodes;  // id -> (is_exec, line)
  std::vector<std::size_t> edge_lines;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line = i + 1;
    const std::string& text = lines[i];
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      Fail(line, std::string("malformed record: ") + e.what());
    }
    if (!record.is_object()) Fail(line, "record must be a JSON object");
    const std::string kind = RequireString(record, "kind", line);
    if (kind == "artifact" || kind == "execution") {
      std::string id;
      std::string pipeline;
      if (kind == "artifact") {
        t.artifacts.push_back(ParseArtifact(record, line));
        id = t.artifacts.back().id;
        pipeline = t.artifacts.back().pipeline_id;
      } else {
        t.executions.push_back(ParseExecution(record, line));
        id = t.executions.back().id;
        pipeline = t.executions.back().pipeline_id;
      }
      auto [it, inserted] = nodes.emplace(id, std::make_pair(kind == "execution", line));
      if (!inserted) {
        Fail(line, "duplicate node id '" + id + "' (first defined on line " +
                       std::to_string(it->second.second) + ")");
      }
      if (t.pipeline_id.empty()) t.pipeline_id = pipeline;
    } else if (kind == "edge") {
      t.edges.push_back(ParseEdge(record, line));
      edge_lines.push_back(line);
    } else {
      Fail(line, "unknown record kind '" + kind + "'");
    }
  }

  for (std::size_t i = 0; i < t.edges.size(); ++i) {
    const Edge& e = t.edges[i];
    auto from = nodes.find(e.from);
    auto to = nodes.find(e.to);
    if (from == nodes.end() || to == nodes.end()) {
      Fail(edge_lines[i], "dangling edge endpoint '" + (from == nodes.end() ? e.from : e.to) + "'");
    }
    if (!OrientationOk(e, from->second.first, to->second.first)) {
      Fail(edge_lines[i], "edge role violates bipartite orientation (" + e.from + " -> " + e.to +
                              ", role " + std::string(ToString(e.role)) + ")");
    }
  }
  SortTrace(t);
  return t;
}

Trace ParseTrace(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  return ParseTrace(lines);
}

Trace ReadTraceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace file " + path);
  try {
    return ParseTrace(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

void WriteTrace(const Trace& trace, std::ostream& out) {
  for (const Artifact& a : trace.artifacts) {
    json props = a.extra_properties.is_object() ? a.extra_properties : json::object();
    if (a.span_stats) {
      json features = json::array();
      for (const auto& f : a.span_stats->features) features.push_back(FeatureToJson(f));
      props["span_stats"] = {{"features", std::move(features)}};
    }
    json r = {{"kind", "artifact"},
              {"id", a.id},
              {"type", std::string(ToString(a.type))},
              {"created_at", a.created_at},
              {"pipeline_id", a.pipeline_id},
              {"properties", std::move(props)}};
    out << r.dump() << '\n';
  }
  for (const Execution& e : trace.executions) {
    json props = e.extra_properties.is_object() ? e.extra_properties : json::object();
    if (e.code_version) props["code_version"] = *e.code_version;
    if (e.model_type) props["model_type"] = std::string(ToString(*e.model_type));
    if (e.architecture) props["architecture"] = *e.architecture;
    if (e.analyzers) {
      json list = json::array();
      for (Analyzer an : *e.analyzers) list.push_back(std::string(ToString(an)));
      props["analyzers"] = std::move(list);
    }
    json r = {{"kind", "execution"},
              {"id", e.id},
              {"operator", std::string(ToString(e.op))},
              {"pipeline_id", e.pipeline_id},
              {"start_at", e.start_at},
              {"end_at", e.end_at},
              {"state", std::string(ToString(e.state))},
              {"cpu_cost", e.cpu_cost},
              {"properties", std::move(props)}};
    out << r.dump() << '\n';
  }
  for (const Edge& e : trace.edges) {
    json r = {{"kind", "edge"}, {"from", e.from}, {"to", e.to}, {"role", std::string(ToString(e.role))}};
    out << r.dump() << '\n';
  }
}

std::vector<Violation> ValidateTrace(const Trace& trace) {
  std::vector<Violation> out;
  auto add = [&](std::string subject, std::string rule) {
    out.push_back({std::move(subject), std::move(rule)});
  };

  // id -> dense node; artifacts first.
  std::unordered_map<std::string, int> ids;
  std::vector<bool> is_exec;
  std::vector<const std::string*> names;
  auto register_node = [&](const std::string& id, bool exec) {
    if (id.empty()) {
      add("<empty>", "empty node id");
      return;
    }
    if (!ids.emplace(id, static_cast<int>(is_exec.size())).second) {
      add(id, "duplicate node id");
      return;
    }
    is_exec.push_back(exec);
    names.push_back(&id);
  };

  int trainers = 0;
  for (const Artifact& a : trace.artifacts) {
    register_node(a.id, false);
    if (a.pipeline_id != trace.pipeline_id) add(a.id, "pipeline_id mismatch");
    if (a.created_at <= 0) add(a.id, "created_at must be positive");
    if (a.type == ArtifactType::kDataSpan && !a.span_stats) add(a.id, "data_span missing span_stats");
    if (a.type != ArtifactType::kDataSpan && a.span_stats) add(a.id, "span_stats on non-data_span artifact");
    if (a.span_stats) {
      std::set<std::string> seen;
      for (const auto& f : a.span_stats->features) {
        if (!seen.insert(f.name).second) add(a.id + "/" + f.name, "duplicate feature name");
        for (const auto& problem : CheckFeatureStats(f)) {
          add(a.id + "/" + f.name, "invalid feature stats (" + problem + ")");
        }
      }
    }
  }
  for (const Execution& e : trace.executions) {
    register_node(e.id, true);
    if (e.pipeline_id != trace.pipeline_id) add(e.id, "pipeline_id mismatch");
    if (e.start_at <= 0) add(e.id, "start_at must be positive");
    if (e.end_at < e.start_at) add(e.id, "end_at before start_at");
    if (!(e.cpu_cost >= 0.0) || !std::isfinite(e.cpu_cost)) add(e.id, "cpu_cost must be non-negative");
    if (e.op == OperatorKind::kTrainer) {
      ++trainers;
      if (!e.model_type) add(e.id, "trainer missing model_type");
    } else if (e.model_type) {
      add(e.id, "model_type on non-trainer execution");
    }
    if (e.analyzers && e.op != OperatorKind::kTransform) add(e.id, "analyzers on non-transform execution");
  }
  if (trainers == 0) add(trace.pipeline_id.empty() ? "<trace>" : trace.pipeline_id, "no trainer execution");

  const int n = static_cast<int>(is_exec.size());
  std::vector<std::vector<int>> succ(n);
  for (const Edge& e : trace.edges) {
    const std::string subject = e.from + "->" + e.to;
    auto from = ids.find(e.from);
    auto to = ids.find(e.to);
    if (from == ids.end() || to == ids.end()) {
      add(subject, "dangling edge endpoint");
      continue;
    }
    if (!OrientationOk(e, is_exec[from->second], is_exec[to->second])) {
      add(subject, "edge role violates bipartite orientation");
      continue;
    }
    succ[from->second].push_back(to->second);
  }

  // Iterative DFS; a gray->gray edge closes a cycle.
  enum Color : char { kWhite, kGray, kBlack };
  std::vector<Color> color(n, kWhite);
  std::vector<int> parent(n, -1);
  for (int root = 0; root < n; ++root) {
    if (color[root] != kWhite) continue;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    color[root] = kGray;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < succ[v].size()) {
        int w = succ[v][next++];
        if (color[w] == kWhite) {
          color[w] = kGray;
          parent[w] = v;
          stack.emplace_back(w, 0);
        } else if (color[w] == kGray) {
          std::vector<std::string> cycle{*names[w]};
          for (int u = v; u != w && u != -1; u = parent[u]) cycle.push_back(*names[u]);
          std::reverse(cycle.begin() + 1, cycle.end());
          std::string path;
          for (const auto& id : cycle) path += id + " -> ";
          path += *names[w];
          add(path, "cycle through");
        }
      } else {
        color[v] = kBlack;
        stack.pop_back();
      }
    }
  }
  return out;
}

TraceIndex::TraceIndex(const Trace& trace) {
  num_artifacts_ = static_cast<int>(trace.artifacts.size());
  const int n = num_artifacts_ + static_cast<int>(trace.executions.size());
  succ_.resize(n);
  pred_.resize(n);
  time_.resize(n);
  lookup_.reserve(n);
  std::vector<const std::string*> names(n);
  for (int i = 0; i < num_artifacts_; ++i) {
    lookup_.emplace(trace.artifacts[i].id, i);
    time_[i] = trace.artifacts[i].created_at;
    names[i] = &trace.artifacts[i].id;
  }
  for (std::size_t i = 0; i < trace.executions.size(); ++i) {
    const Node v = execution_node(static_cast<int>(i));
    lookup_.emplace(trace.executions[i].id, v);
    time_[v] = trace.executions[i].end_at;
    names[v] = &trace.executions[i].id;
  }
  for (const Edge& e : trace.edges) {
    auto from = lookup_.find(e.from);
    auto to = lookup_.find(e.to);
    if (from == lookup_.end() || to == lookup_.end()) {
      throw Error("TraceIndex: dangling edge " + e.from + "->" + e.to);
    }
    succ_[from->second].push_back(to->second);
    pred_[to->second].push_back(from->second);
  }
  auto chronological = [&](Node a, Node b) {
    if (time_[a] != time_[b]) return time_[a] < time_[b];
    return *names[a] < *names[b];
  };
  by_time_.resize(n);
  std::iota(by_time_.begin(), by_time_.end(), 0);
  std::sort(by_time_.begin(), by_time_.end(), chronological);
  for (std::size_t i = 0; i < trace.executions.size(); ++i) {
    if (trace.executions[i].op == OperatorKind::kTrainer) {
      trainers_.push_back(execution_node(static_cast<int>(i)));
    }
  }
  std::sort(trainers_.begin(), trainers_.end(), chronological);
}

std::optional<TraceIndex::Node> TraceIndex::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

const std::string& NodeIdOf(const Trace& trace, const TraceIndex& index, TraceIndex::Node v) {
  return index.is_execution(v) ? trace.executions[index.execution_index(v)].id
                               : trace.artifacts[v].id;
}

}  // namespace mlprov
