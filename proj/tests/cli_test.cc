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
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mlprov/cli.h"
#include "mlprov/corpus.h"
#include "mlprov/table.h"
#include "testing/builders.h"

using namespace mlprov;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mlprov_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

const std::string kFig5 = mlprov::testing::FixturePath("fig5");

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(Run({}).code == kExitUsage);
  CHECK(Run({"frobnicate"}).code == kExitUsage);
  CHECK(Run({"segment", "--no-such-flag"}).code == kExitUsage);
  CHECK(Run({"segment"}).code == kExitUsage);
  CHECK(Run({"segment", "--corpus", kFig5, "--seed", "abc"}).code == kExitUsage);
  auto dir = TempDir("badcfg");
  std::ofstream(dir / "bad.cfg") << "nonsense.key = 3\n";
  CHECK(Run({"segment", "--corpus", kFig5, "--config", (dir / "bad.cfg").string()}).code == kExitUsage);
  CHECK(Run({"train", "--features", "x", "--stage", "sideways"}).code != kExitOk);
}

TEST_CASE("help exits 0") {
  auto r = Run({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("segment") != std::string::npos);
  CHECK(Run({"report", "--help"}).code == kExitOk);
}

TEST_CASE("validate") {
  CHECK(Run({"validate", "--corpus", kFig5}).code == kExitOk);
  auto dir = TempDir("cyclic");
  Trace t = mlprov::testing::TraceBuilder("cyc")
                .Exec("a", OperatorKind::kTrainer)
                .Model(ModelType::kDnn)
                .Art("m", ArtifactType::kModel)
                .Out("a", "m")
                .In("m", "a")
                .Build();
  {
    std::ofstream f(dir / "cyc.jsonl");
    WriteTrace(t, f);
  }
  auto r = Run({"validate", "--corpus", dir.string()});
  CHECK(r.code == kExitViolations);
  CHECK(r.out.find("cyc.jsonl: cycle through") != std::string::npos);
  std::ofstream(dir / "garbage.jsonl") << "{oops\n";
  r = Run({"validate", "--corpus", dir.string()});
  CHECK(r.code == kExitViolations);
  CHECK(r.out.find("garbage.jsonl: line 1") != std::string::npos);
  // Segmenting refuses invalid input.
  CHECK(Run({"segment", "--corpus", dir.string()}).code == kExitViolations);
  CHECK(Run({"validate", "--corpus", (dir / "missing").string()}).code == kExitViolations);
}

TEST_CASE("segment the figure 5 fixture") {
  auto r = Run({"segment", "--corpus", kFig5});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::vector<nlohmann::json> records;
  while (std::getline(in, line)) records.push_back(nlohmann::json::parse(line));
  REQUIRE(records.size() == 2);
  CHECK(records[0]["anchor"] == "trainer1");
  CHECK(records[1]["pushed"] == true);
  CHECK(records[1]["input_spans"].size() == 2);
}

TEST_CASE("stats and similarity tables") {
  auto r = Run({"stats", "--corpus", kFig5});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("# mlprov pipeline_stats v1") != std::string::npos);
  CHECK(r.out.find("# mlprov cost_breakdown v1") != std::string::npos);
  CHECK(r.out.find("# mlprov cadence v1") != std::string::npos);
  r = Run({"similarity", "--corpus", kFig5});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("# mlprov pair_similarity v1") != std::string::npos);
  std::istringstream in(r.out);
  Table t = ReadTable(in, "pair_similarity");
  REQUIRE(t.rows.size() == 1);
  CHECK(ParseDouble(t.rows[0][t.column("jaccard")]) == 0.5);
  Table q = ReadTable(in, "similarity_quartiles");
  CHECK_FALSE(q.rows.empty());
}

TEST_CASE("full chain on a small synthetic corpus") {
  auto dir = TempDir("chain");
  const auto corpus = (dir / "corpus").string();
  REQUIRE(Run({"synth", "--out", corpus, "--pipelines", "10", "--min-graphlets", "30",
               "--max-graphlets", "40", "--seed", "3"})
              .code == kExitOk);
  CHECK(fs::exists(fs::path(corpus) / "truth.json"));
  CHECK(Run({"validate", "--corpus", corpus}).code == kExitOk);

  const auto features = (dir / "features.tsv").string();
  REQUIRE(Run({"featurize", "--corpus", corpus, "--out", features}).code == kExitOk);
  {
    std::ifstream f(features);
    FeatureMatrix m = ReadFeatureMatrix(f);
    CHECK(m.num_rows() > 200);
    std::ostringstream again;
    WriteFeatureMatrix(m, again);
    CHECK(again.str() == Slurp(features));
  }

  const auto model = (dir / "model.json").string();
  auto cfg = dir / "run.cfg";
  std::ofstream(cfg) << "forest.n_trees = 10\nsplit.label_tolerance = 0.05\nsplit.relaxed_label_tolerance = 0.1\n";
  REQUIRE(Run({"train", "--features", features, "--stage", "input_pre", "--out", model, "--config",
               cfg.string()})
              .code == kExitOk);
  auto j = nlohmann::json::parse(Slurp(model));
  CHECK(j["format"] == "mlprov-model");
  CHECK(j["stage"] == "input_pre");

  const auto scores = (dir / "scores.tsv").string();
  auto ev = Run({"evaluate", "--features", features, "--model", model, "--out", scores});
  REQUIRE(ev.code == kExitOk);
  CHECK(ev.err.find("balanced_accuracy") != std::string::npos);

  auto sw = Run({"sweep", "--scores", scores});
  REQUIRE(sw.code == kExitOk);
  std::istringstream in(sw.out);
  Table curve = ReadTable(in, "curve");
  CHECK(ParseDouble(curve.rows.front()[curve.column("freshness")]) == 1.0);
  CHECK(ParseDouble(curve.rows.back()[curve.column("wasted_fraction")]) == 0.0);

  auto rep = Run({"report", "--features", features, "--config", cfg.string()});
  REQUIRE(rep.code == kExitOk);
  CHECK(rep.out.find("rf_validation") != std::string::npos);
  CHECK(rep.out.find("code_match_1") != std::string::npos);

  // A model does not accept features of a different stage.
  const auto other = (dir / "val.tsv").string();
  REQUIRE(Run({"featurize", "--corpus", corpus, "--stage", "input", "--out", other}).code == kExitOk);
  CHECK(Run({"evaluate", "--features", other, "--model", model}).code == kExitViolations);
  fs::remove_all(dir);
}
