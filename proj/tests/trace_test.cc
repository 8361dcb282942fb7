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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "mlprov/trace.h"
#include "testing/builders.h"

using namespace mlprov;
using mlprov::testing::TraceBuilder;

namespace {

bool HasRule(const std::vector<Violation>& v, const std::string& rule) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.rule == rule; });
}

Trace Small() {
  return TraceBuilder("p")
      .Exec("eg", OperatorKind::kExampleGen)
      .Span("s", {{mlprov::testing::Numerical("x", {1, 0, 0, 0, 0, 0, 0, 0, 0, 0})}})
      .Out("eg", "s")
      .Exec("tr", OperatorKind::kTrainer)
      .Model(ModelType::kDnn)
      .In("s", "tr")
      .Art("m", ArtifactType::kModel)
      .Out("tr", "m")
      .Build();
}

}  // namespace

TEST_CASE("enum names round trip") {
  for (int i = 0; i < kNumOperatorKinds; ++i) {
    auto k = static_cast<OperatorKind>(i);
    CHECK(ParseOperatorKind(ToString(k)) == k);
  }
  for (int i = 0; i < kNumArtifactTypes; ++i) {
    auto t = static_cast<ArtifactType>(i);
    CHECK(ParseArtifactType(ToString(t)) == t);
  }
  for (int i = 0; i < kNumModelTypes; ++i) {
    auto t = static_cast<ModelType>(i);
    CHECK(ParseModelType(ToString(t)) == t);
  }
  CHECK_FALSE(ParseOperatorKind("no_such_op"));
  CHECK(GroupOf(OperatorKind::kTrainer) == OperatorGroup::kTraining);
  CHECK(GroupOf(OperatorKind::kPusher) == OperatorGroup::kDeployment);
  CHECK(GroupOf(OperatorKind::kExampleGen) == OperatorGroup::kDataIngestion);
}

TEST_CASE("a well formed trace validates clean and round trips") {
  Trace t = Small();
  CHECK(ValidateTrace(t).empty());
  std::ostringstream out;
  WriteTrace(t, out);
  std::istringstream in(out.str());
  Trace back = ParseTrace(in);
  SortTrace(t);
  SortTrace(back);
  CHECK(back == t);
}

TEST_CASE("write is a fixed point after one round trip") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    Trace t = mlprov::testing::RandomTrace(rng, 60);
    std::ostringstream a;
    WriteTrace(t, a);
    std::istringstream in(a.str());
    std::ostringstream b;
    WriteTrace(ParseTrace(in), b);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("fixture parses") {
  Trace t = ReadTraceFile(mlprov::testing::FixturePath("fig5/fig5.jsonl"));
  CHECK(t.pipeline_id == "fig5");
  CHECK(t.executions.size() == 8);
  CHECK(ValidateTrace(t).empty());
}

TEST_CASE("parse errors carry line numbers") {
  std::vector<std::string> lines{
      R"({"kind": "execution", "id": "e", "operator": "trainer", "pipeline_id": "p", "start_at": 1, "end_at": 2, "state": "complete", "cpu_cost": 1, "properties": {"model_type": "dnn"}})",
      "{not json"};
  try {
    ParseTrace(lines);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::vector<std::string> bad_kind{R"({"kind": "vertex", "id": "x"})"};
  CHECK_THROWS_AS(ParseTrace(bad_kind), ParseError);
  std::vector<std::string> bad_op{
      R"({"kind": "execution", "id": "e", "operator": "warp", "pipeline_id": "p", "start_at": 1, "end_at": 2, "state": "complete", "cpu_cost": 1, "properties": {}})"};
  CHECK_THROWS_AS(ParseTrace(bad_op), ParseError);
}

TEST_CASE("unknown properties are preserved") {
  std::vector<std::string> lines{
      R"({"kind": "execution", "id": "e", "operator": "trainer", "pipeline_id": "p", "start_at": 1, "end_at": 2, "state": "complete", "cpu_cost": 1, "properties": {"model_type": "dnn", "owner": "x"}})"};
  Trace t = ParseTrace(lines);
  CHECK(t.executions[0].extra_properties["owner"] == "x");
  std::ostringstream out;
  WriteTrace(t, out);
  CHECK(out.str().find("\"owner\"") != std::string::npos);
}

TEST_CASE("validation rules") {
  SUBCASE("cycle") {
    Trace t = Small();
    t.edges.push_back({"m", "eg", EdgeRole::kInput});
    CHECK(HasRule(ValidateTrace(t), "cycle through"));
  }
  SUBCASE("dangling edge") {
    Trace t = Small();
    t.edges.push_back({"ghost", "tr", EdgeRole::kInput});
    CHECK(HasRule(ValidateTrace(t), "dangling edge endpoint"));
  }
  SUBCASE("orientation") {
    Trace t = Small();
    t.edges.push_back({"eg", "tr", EdgeRole::kOutput});
    CHECK(HasRule(ValidateTrace(t), "edge role violates bipartite orientation"));
  }
  SUBCASE("no trainer") {
    Trace t = TraceBuilder("p").Exec("eg", OperatorKind::kExampleGen).Build();
    CHECK(HasRule(ValidateTrace(t), "no trainer execution"));
  }
  SUBCASE("trainer needs model type") {
    Trace t = Small();
    t.executions[1].model_type.reset();
    CHECK(HasRule(ValidateTrace(t), "trainer missing model_type"));
  }
  SUBCASE("duplicate id") {
    Trace t = Small();
    t.artifacts.push_back(t.artifacts[0]);
    CHECK(HasRule(ValidateTrace(t), "duplicate node id"));
  }
  SUBCASE("span stats required") {
    Trace t = Small();
    t.artifacts[0].span_stats.reset();
    CHECK(HasRule(ValidateTrace(t), "data_span missing span_stats"));
  }
  SUBCASE("histogram mass") {
    Trace t = Small();
    (*t.artifacts[0].span_stats->features[0].numerical_hist)[0] = 0.5;
    auto v = ValidateTrace(t);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule.find("does not sum to 1") != std::string::npos);
  }
  SUBCASE("time order") {
    Trace t = Small();
    t.executions[0].end_at = t.executions[0].start_at - 1;
    CHECK(HasRule(ValidateTrace(t), "end_at before start_at"));
  }
}

TEST_CASE("categorical statistics checks") {
  using mlprov::testing::Categorical;
  CHECK(CheckFeatureStats(Categorical("c", {5, 3}, 4, 10)).empty());
  CHECK_FALSE(CheckFeatureStats(Categorical("c", {5, 3}, 2, 10)).empty());
  CHECK_FALSE(CheckFeatureStats(Categorical("c", {5, 6}, 4, 10)).empty());
  CHECK_FALSE(CheckFeatureStats(Categorical("c", {5, 0}, 4, 10)).empty());
  CHECK_FALSE(CheckFeatureStats(Categorical("c", {5, 3}, 20, 10)).empty());
}

TEST_CASE("random traces are valid") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Trace t = mlprov::testing::RandomTrace(rng, 200);
    auto v = ValidateTrace(t);
    CHECK_MESSAGE(v.empty(), (v.empty() ? "" : v[0].ToString()));
  }
}

TEST_CASE("index orders nodes by time and finds ids") {
  Trace t = Small();
  TraceIndex idx(t);
  CHECK(idx.num_nodes() == 4);
  REQUIRE(idx.find("tr"));
  CHECK(idx.is_execution(*idx.find("tr")));
  CHECK_FALSE(idx.find("zzz"));
  CHECK(idx.trainers().size() == 1);
  const auto& order = idx.by_time();
  for (std::size_t i = 1; i < order.size(); ++i) CHECK(idx.time(order[i - 1]) <= idx.time(order[i]));
  CHECK(NodeIdOf(t, idx, idx.trainers()[0]) == "tr");
}
