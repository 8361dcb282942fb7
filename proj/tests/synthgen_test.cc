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

#include <filesystem>
#include <sstream>

#include "mlprov/analytics.h"
#include "mlprov/corpus.h"
#include "mlprov/synthgen.h"

using namespace mlprov;

namespace {

GenConfig Tiny(int pipelines, int graphlets) {
  GenConfig cfg;
  cfg.n_pipelines = pipelines;
  cfg.min_graphlets = graphlets;
  cfg.max_graphlets = graphlets;
  return cfg;
}

}  // namespace

TEST_CASE("preset names") {
  for (auto p : {SignalPreset::kWeak, SignalPreset::kMedium, SignalPreset::kStrong})
    CHECK(ParseSignalPreset(ToString(p)) == p);
  CHECK_FALSE(ParseSignalPreset("huge"));
  CHECK(PresetConfig(SignalPreset::kStrong).push.scale > PresetConfig(SignalPreset::kMedium).push.scale);
  CHECK(PresetConfig(SignalPreset::kWeak).push.scale < PresetConfig(SignalPreset::kMedium).push.scale);
}

TEST_CASE("config checks") {
  GenConfig cfg;
  CHECK_NOTHROW(CheckGenConfig(cfg));
  cfg.min_graphlets = 10;
  cfg.max_graphlets = 5;
  CHECK_THROWS(CheckGenConfig(cfg));
  cfg = {};
  cfg.push.target_rate = 0.7;  // above the blessing rate
  CHECK_THROWS(CheckGenConfig(cfg));
  cfg = {};
  cfg.cost_mix[0] = 0.5;
  CHECK_THROWS(CheckGenConfig(cfg));
  cfg = {};
  cfg.push.mode = PushMode::kConstant;
  cfg.push.target_rate = 0.7;
  CHECK_NOTHROW(CheckGenConfig(cfg));
}

TEST_CASE("generation is deterministic") {
  auto a = Generate(Tiny(3, 10));
  auto b = Generate(Tiny(3, 10));
  CHECK(a.traces == b.traces);
  CHECK(a.truth.intercept == b.truth.intercept);
  GenConfig other = Tiny(3, 10);
  other.seed = 7;
  CHECK_FALSE(Generate(other).traces == a.traces);
}

TEST_CASE("generated traces are valid and agree with the truth") {
  GenConfig cfg = Tiny(8, 25);
  cfg.warmstart_fraction = 0.25;
  auto gen = Generate(cfg);
  REQUIRE(gen.traces.size() == 8);
  for (const auto& t : gen.traces) CHECK(ValidateTrace(t).empty());
  auto corpus = SegmentCorpus(gen.traces);
  std::size_t graphlets = 0;
  for (const auto& p : corpus) {
    CHECK(p.graphlets.size() == 25);
    const bool warm = std::find(gen.truth.warmstart_pipelines.begin(), gen.truth.warmstart_pipelines.end(),
                                p.id()) != gen.truth.warmstart_pipelines.end();
    CHECK(IsWarmstartPipeline(p.trace, p.index) == warm);
    for (const auto& g : p.graphlets) {
      const GraphletTruth* t = gen.truth.find(p.id(), g.anchor);
      REQUIRE(t != nullptr);
      CHECK(t->pushed == g.pushed);
      if (t->pushed) CHECK(t->blessed);
      if (!t->blessed) CHECK(t->push_probability == 0.0);
      CHECK(t->drift >= 0.0);
      CHECK(t->drift <= cfg.max_drift);
      ++graphlets;
    }
  }
  CHECK(graphlets == gen.truth.graphlets.size());
}

TEST_CASE("planted push rate is calibrated") {
  GenConfig cfg = Tiny(50, 220);
  auto gen = Generate(cfg);
  REQUIRE(gen.truth.graphlets.size() >= 10000);
  double pushed = 0, p = 0;
  for (const auto& g : gen.truth.graphlets) {
    pushed += g.pushed;
    p += g.push_probability;
  }
  const double n = static_cast<double>(gen.truth.graphlets.size());
  CHECK(std::abs(pushed / n - 0.2) <= 0.01);
  CHECK(std::abs(p / n - 0.2) <= 0.01);
}

TEST_CASE("warm start fraction") {
  GenConfig cfg = Tiny(100, 3);
  cfg.warmstart_fraction = 0.3;
  auto gen = Generate(cfg);
  const auto n = static_cast<int>(gen.truth.warmstart_pipelines.size());
  CHECK(n >= 22);
  CHECK(n <= 38);
}

TEST_CASE("constant push mode ignores the features") {
  GenConfig cfg = Tiny(40, 100);
  cfg.push.mode = PushMode::kConstant;
  cfg.push.target_rate = 0.25;
  cfg.warmstart_fraction = 0.0;
  auto gen = Generate(cfg);
  for (const auto& g : gen.truth.graphlets) CHECK(g.push_probability == 0.25);
  auto corpus = SegmentCorpus(gen.traces);
  auto c = ComputeCadence(corpus);
  CHECK(std::abs(Mean(c.graphlets_between_pushes) - 3.0) <= 0.3);
}

TEST_CASE("cost mix is reproduced") {
  auto gen = Generate(Tiny(10, 30));
  auto mix = CostBreakdown(std::span<const Trace>(gen.traces));
  GenConfig cfg;
  for (int g = 0; g < kNumOperatorGroups; ++g)
    CHECK(mix.at(static_cast<OperatorGroup>(g)) == doctest::Approx(cfg.cost_mix[g]).epsilon(1e-9));
}

TEST_CASE("bayes balanced accuracy examples") {
  CHECK(BayesBalancedAccuracy(std::vector<double>{1.0, 0.0}) == 1.0);
  CHECK(BayesBalancedAccuracy(std::vector<double>{0.8, 0.2}) == doctest::Approx(0.8));
  CHECK(BayesBalancedAccuracy(std::vector<double>{0.5, 0.5}) == 0.5);
  CHECK(BayesBalancedAccuracy(std::vector<double>{0.0, 0.0}) == 0.5);
  // Thresholding at 0.6 gives TPR 1.5/1.6, TNR 1.4/2.4 or better at 0.9.
  const double got = BayesBalancedAccuracy(std::vector<double>{0.9, 0.6, 0.1, 0.0});
  const double at_high = 0.5 * (0.9 / 1.6 + 2.3 / 2.4);
  const double at_mid = 0.5 * (1.5 / 1.6 + 1.9 / 2.4);
  CHECK(got == doctest::Approx(std::max(at_high, at_mid)));
}

TEST_CASE("bayes reference ordering across presets") {
  double prev = 0.0;
  for (auto preset : {SignalPreset::kWeak, SignalPreset::kMedium, SignalPreset::kStrong}) {
    const double ba = MonteCarloBayesBalancedAccuracy(PresetConfig(preset), 20000, 1);
    CHECK(ba > prev);
    CHECK(ba <= 1.0);
    prev = ba;
  }
}

TEST_CASE("calibrated intercept hits the target rate") {
  GenConfig a;
  GenConfig b;
  b.push.target_rate = 0.3;
  CHECK(CalibrateIntercept(b) > CalibrateIntercept(a));
}

TEST_CASE("truth and corpus files round trip") {
  auto gen = Generate(Tiny(2, 5));
  std::stringstream s;
  WriteTruth(gen.truth, s);
  PlantedTruth back = ReadTruth(s);
  REQUIRE(back.graphlets.size() == gen.truth.graphlets.size());
  CHECK(back.intercept == gen.truth.intercept);
  CHECK(back.graphlets[3].anchor == gen.truth.graphlets[3].anchor);
  CHECK(back.graphlets[3].push_probability == gen.truth.graphlets[3].push_probability);

  const auto dir = std::filesystem::temp_directory_path() / "mlprov_synth_test";
  std::filesystem::remove_all(dir);
  WriteCorpus(gen, dir.string());
  CHECK(std::filesystem::exists(dir / "truth.json"));
  auto traces = ReadCorpus(dir.string());
  CHECK(traces == gen.traces);
  std::filesystem::remove_all(dir);

  std::istringstream junk("{}");
  CHECK_THROWS(ReadTruth(junk));
}
