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
#include <set>

#include "mlprov/corpus.h"
#include "mlprov/featurization.h"
#include "mlprov/synthgen.h"
#include "testing/builders.h"

using namespace mlprov;

namespace {

std::vector<Pipeline> SmallCorpus() {
  GenConfig cfg;
  cfg.n_pipelines = 4;
  cfg.min_graphlets = 12;
  cfg.max_graphlets = 16;
  cfg.warmstart_fraction = 0.0;
  return SegmentCorpus(Generate(cfg).traces);
}

}  // namespace

TEST_CASE("stage names") {
  for (FeatureStage s : kAllStages) CHECK(ParseFeatureStage(ToString(s)) == s);
  CHECK_FALSE(ParseFeatureStage("training"));
}

TEST_CASE("stage schemas are nested") {
  ArchitectureVocabulary vocab({"a", "b"});
  WindowConfig w{2};
  std::vector<std::string> prev;
  for (FeatureStage s : kAllStages) {
    auto names = StageSchema(s, w, vocab);
    CHECK(names.size() > prev.size());
    CHECK(std::equal(prev.begin(), prev.end(), names.begin()));
    prev = names;
  }
  auto input = StageSchema(FeatureStage::kInput, w, vocab);
  CHECK(input.size() == 7 + 3 + 6);
  CHECK(std::none_of(input.begin(), input.end(), [](const auto& n) { return IsShapeFeature(n); }));
  for (const auto& n : prev) CHECK(IsShapeFeature(n) + IsHistoryFeature(n) + IsModelFeature(n) == 1);
}

TEST_CASE("architecture vocabulary") {
  ArchitectureVocabulary v({"wide", "deep", "wide"});
  CHECK(v.names() == std::vector<std::string>{"deep", "wide"});
  CHECK(v.SlotOf(std::string("wide")) == 1u);
  CHECK(v.SlotOf(std::string("unknown")) == 2u);
  CHECK_FALSE(v.SlotOf(std::nullopt));
  std::vector<std::string> many;
  for (int i = 0; i < 40; ++i) many.push_back("a" + std::to_string(i));
  CHECK_THROWS(ArchitectureVocabulary(many));
}

TEST_CASE("missing history uses the sentinel") {
  Pipeline p = SegmentPipeline(ReadTraceFile(mlprov::testing::FixturePath("fig5/fig5.jsonl")));
  LshHasher h({});
  SpanSignatureCache cache(p, h);
  WindowConfig w{3};
  std::vector<const Graphlet*> preds{&p.graphlets[0]};
  auto values = HistoryFeatures(p.graphlets[1], preds, w, cache, {});
  REQUIRE(values.size() == 9);
  CHECK(values[0].first == "jaccard_1");
  CHECK(values[0].second == doctest::Approx(0.5));
  CHECK(values[2].first == "code_match_1");
  CHECK(values[2].second == 0.0);
  for (std::size_t i = 3; i < 9; ++i) CHECK(values[i].second == kMissingHistory);
  CHECK_THROWS(HistoryFeatures(p.graphlets[1], preds, WindowConfig{0}, cache, {}));
}

TEST_CASE("acquisition cost grows with the stage") {
  Pipeline p = SegmentPipeline(ReadTraceFile(mlprov::testing::FixturePath("fig5/fig5.jsonl")));
  const Graphlet& g = p.graphlets[1];
  CHECK(AcquisitionCost(g, FeatureStage::kInput) == 3.0);
  CHECK(AcquisitionCost(g, FeatureStage::kInputPre) == 3.0);
  CHECK(AcquisitionCost(g, FeatureStage::kInputPreTrainer) == 4.0);
  CHECK(AcquisitionCost(g, FeatureStage::kValidation) == 5.0);
}

TEST_CASE("corpus matrix agrees with per-graphlet assembly") {
  auto corpus = SmallCorpus();
  FeaturizeOptions opt;
  opt.window.w = 2;
  auto vocab = ArchitectureVocabulary::FromCorpus(corpus);
  FeatureMatrix m = FeaturizeCorpus(corpus, opt, vocab);
  std::size_t total = 0;
  for (const auto& p : corpus) total += p.graphlets.size();
  REQUIRE(m.num_rows() == total);
  CHECK(m.values.size() == total * m.num_cols());

  for (FeatureStage stage : kAllStages) {
    FeatureMatrix s = SelectStage(m, stage);
    CHECK(s.names == StageSchema(stage, opt.window, vocab));
    LshHasher hasher(opt.lsh);
    std::size_t row = 0;
    for (const auto& p : corpus) {
      SpanSignatureCache cache(p, hasher);
      for (std::size_t i = 0; i < p.graphlets.size(); ++i, ++row) {
        std::vector<const Graphlet*> preds;
        for (std::size_t k = 1; k <= 2 && k <= i; ++k) preds.push_back(&p.graphlets[i - k]);
        auto fv = Assemble(p, p.graphlets[i], preds, stage, opt.window, vocab, cache, opt.weights);
        CHECK(fv.names == s.names);
        auto r = s.row(row);
        CHECK(std::equal(r.begin(), r.end(), fv.values.begin()));
        CHECK(fv.cost_to_acquire == s.cost_to_acquire(row));
        CHECK(fv.label == s.rows[row].label);
      }
    }
  }
}

TEST_CASE("feature value ranges") {
  auto corpus = SmallCorpus();
  FeatureMatrix m = FeaturizeCorpus(corpus, {}, ArchitectureVocabulary::FromCorpus(corpus));
  for (std::size_t i = 0; i < m.num_rows(); ++i) {
    auto r = m.row(i);
    double model_one_hot = 0.0;
    for (std::size_t j = 0; j < m.num_cols(); ++j) {
      const auto& n = m.names[j];
      if (IsHistoryFeature(n)) CHECK((r[j] == kMissingHistory || (r[j] >= 0.0 && r[j] <= 1.0)));
      if (IsShapeFeature(n)) CHECK(r[j] >= 0.0);
      if (n.starts_with("model_type_")) model_one_hot += r[j];
    }
    CHECK(model_one_hot == 1.0);
    const auto& c = m.rows[i].stage_costs;
    CHECK(std::is_sorted(c.begin(), c.end()));
    CHECK(c.back() <= m.rows[i].graphlet_cost + 1e-12);
  }
  CHECK_THROWS(m.column("nope"));
  CHECK(m.names[m.column("jaccard_1")] == "jaccard_1");
}

TEST_CASE("column selection keeps rows") {
  auto corpus = SmallCorpus();
  FeatureMatrix m = FeaturizeCorpus(corpus, {}, ArchitectureVocabulary::FromCorpus(corpus));
  FeatureMatrix h = SelectColumns(m, FeatureStage::kInputPreTrainer,
                                  [](std::string_view n) { return IsHistoryFeature(n); });
  CHECK(h.num_cols() == 9);
  CHECK(h.num_rows() == m.num_rows());
  CHECK(h.stage == FeatureStage::kInputPreTrainer);
  CHECK(h.row(3)[0] == m.row(3)[m.column(h.names[0])]);
}
