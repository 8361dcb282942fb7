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
#include <sstream>

#include "mlprov/config.h"

using namespace mlprov;

namespace {

RunConfig Parse(const std::string& text, RunConfig base = {}) {
  std::istringstream in(text);
  return ParseConfig(in, base);
}

std::size_t ErrorLine(const std::string& text) {
  try {
    Parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return 9999;
}

}  // namespace

TEST_CASE("defaults parse from an empty file") {
  RunConfig c = Parse("");
  CHECK(c.lsh.k == 4);
  CHECK(c.forest.n_trees == 100);
  CHECK(c.gen.n_pipelines == 120);
  CHECK(c.min_freshness == 0.999);
}

TEST_CASE("keys, comments and whitespace") {
  RunConfig c = Parse(R"(# a comment
lsh.k = 6
  lsh.w=0.25
weights.alpha = 0.3
weights.beta = 0.7

window.w = 5
forest.n_trees = 12
forest.features_per_split = 3
forest.bootstrap = false
stop.kinds = trainer
stop.cut_warmstart_edges = false
split.label_tolerance = 0.03
policy.min_freshness = 1
gen.cost_mix = 0.2,0.2,0.2,0.2,0.1,0.1
gen.push_mode = constant
)");
  CHECK(c.lsh.k == 6);
  CHECK(c.lsh.w == 0.25);
  CHECK(c.weights.alpha == 0.3);
  CHECK(c.window.w == 5);
  CHECK(c.forest.n_trees == 12);
  CHECK(c.forest.features_per_split == 3);
  CHECK_FALSE(c.forest.bootstrap);
  CHECK(c.stop.kinds == std::set<OperatorKind>{OperatorKind::kTrainer});
  CHECK_FALSE(c.stop.cut_warmstart_edges);
  CHECK(c.split.label_tolerance == 0.03);
  CHECK(c.min_freshness == 1.0);
  CHECK(c.gen.cost_mix[4] == 0.1);
  CHECK(c.gen.push.mode == PushMode::kConstant);
}

TEST_CASE("presets set the signal parameters") {
  RunConfig c = Parse("gen.preset = strong\n");
  CHECK(c.gen.push.scale == PresetConfig(SignalPreset::kStrong).push.scale);
  CHECK(c.gen.push.blessing_rate == PresetConfig(SignalPreset::kStrong).push.blessing_rate);
  // Later keys override the preset.
  c = Parse("gen.preset = strong\ngen.signal_scale = 1.5\n");
  CHECK(c.gen.push.scale == 1.5);
}

TEST_CASE("errors report the offending line") {
  CHECK(ErrorLine("lsh.k = 4\nnot a pair\n") == 2);
  CHECK(ErrorLine("\n\nbogus.key = 1\n") == 3);
  CHECK(ErrorLine("lsh.k = four\n") == 1);
  CHECK(ErrorLine("lsh.k = 4x\n") == 1);
  CHECK(ErrorLine("forest.bootstrap = maybe\n") == 1);
  CHECK(ErrorLine("gen.cost_mix = 0.5,0.5\n") == 1);
  CHECK(ErrorLine("stop.kinds = trainer,warp\n") == 1);
  // Cross-field checks run after parsing.
  CHECK(ErrorLine("weights.alpha = 0.9\n") == 0);
  CHECK(ErrorLine("lsh.k = 0\n") == 0);
}

TEST_CASE("seed application") {
  RunConfig c;
  ApplySeed(c, 77);
  CHECK(c.lsh.seed == 77);
  CHECK(c.forest.seed == 77);
  CHECK(c.gen.seed == 77);
  // A file can still pin individual seeds.
  RunConfig d = Parse("forest.seed = 5\n", c);
  CHECK(d.forest.seed == 5);
  CHECK(d.lsh.seed == 77);
}

TEST_CASE("every documented key is accepted") {
  auto keys = ConfigKeys();
  CHECK(keys.size() >= 40);
  for (const char* k : {"lsh.k", "lsh.w", "lsh.seed", "weights.alpha", "weights.beta", "window.w",
                        "forest.n_trees", "forest.max_depth", "forest.min_leaf", "forest.seed",
                        "stop.kinds", "split.max_shuffles", "policy.decision_threshold",
                        "gen.n_pipelines", "gen.base_rate", "gen.model_type_mix"})
    CHECK(std::find(keys.begin(), keys.end(), k) != keys.end());
}

TEST_CASE("derived option structs") {
  RunConfig c = Parse("window.w = 2\npolicy.decision_threshold = 0.4\nforest.n_trees = 7\n");
  CHECK(FeaturizeOptionsOf(c).window.w == 2);
  CHECK(ReportConfigOf(c).decision_threshold == 0.4);
  CHECK(ReportConfigOf(c).forest.n_trees == 7);
}
