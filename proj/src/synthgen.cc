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

#include "mlprov/synthgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include "json.hpp"
#include "mlprov/policy.h"
#include "mlprov/random.h"

namespace mlprov {
namespace {

using nlohmann::json;
using Rng = std::mt19937_64;

// Stream ids outside the per-pipeline range.
constexpr std::uint64_t kTypeStream = 1ULL << 40;
constexpr std::uint64_t kCalibrationStream = (1ULL << 40) + 1;
constexpr std::size_t kCalibrationSamples = 200'000;
// Per-pipeline latent streams start here.
constexpr std::uint64_t kLatentStreamBase = 1ULL << 41;

constexpr Timestamp kEpoch = 1'700'000'000'000;
constexpr Timestamp kMinute = 60'000;
constexpr Timestamp kHour = 60 * kMinute;

constexpr std::array<const char*, 12> kArchitectures{
    "feedforward", "wide_deep", "dcn", "resnet", "transformer", "lstm",
    "cnn",         "two_tower", "autoencoder", "mixture_of_experts", "attention", "embedding_mlp"};

double Logit(double p) { return std::log(p / (1.0 - p)); }
double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double Uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
int UniformInt(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool Bernoulli(Rng& rng, double p) { return Uniform(rng) < p; }

std::string Padded(const char* prefix, long n, int width = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*ld", prefix, width, n);
  return buf;
}

struct Latents {
  ModelType model_type = ModelType::kOther;
  double drift = 0.0;
  int custom_ops = 0;
  int extra_outputs = 0;
  bool blessed = true;
};

double Reflect(double x, double hi) {
  if (hi <= 0.0) return 0.0;
  const double period = 2.0 * hi;
  x = std::fmod(x, period);
  if (x < 0) x += period;
  return x > hi ? period - x : x;
}

// Draws the per-graphlet latents other than the model type. `prev_drift`
// continues a pipeline's walk.
void DrawLatents(const GenConfig& cfg, Rng& rng, Latents& z,
                 std::optional<double> prev_drift = std::nullopt) {
  z.drift = prev_drift ? Reflect(*prev_drift + cfg.drift_step * cfg.max_drift *
                                                   std::normal_distribution<double>(0.0, 1.0)(rng),
                                 cfg.max_drift)
                       : cfg.max_drift * Uniform(rng);
  z.custom_ops = UniformInt(rng, 0, 3);
  z.extra_outputs = UniformInt(rng, 0, 3);
  z.blessed = cfg.push.mode == PushMode::kConstant || Bernoulli(rng, cfg.push.blessing_rate);
}

ModelType DrawModelType(const GenConfig& cfg, Rng& rng) {
  std::discrete_distribution<int> d(cfg.model_type_mix.begin(), cfg.model_type_mix.end());
  return static_cast<ModelType>(d(rng));
}

double PushProbability(const GenConfig& cfg, const Latents& z, double intercept) {
  const PushModel& pm = cfg.push;
  if (pm.mode == PushMode::kConstant) return pm.target_rate;
  if (!z.blessed) return 0.0;
  const double u = cfg.max_drift > 0 ? z.drift / cfg.max_drift : 0.5;
  const double zd = (u - 0.5) / std::sqrt(1.0 / 12.0);
  const double zs = (z.custom_ops - 1.5) / std::sqrt(1.25);
  const double zk = (z.extra_outputs - 1.5) / std::sqrt(1.25);
  const double signal = pm.w_drift * zd + pm.w_shape * zs + pm.w_trainer * zk;
  return Sigmoid(Logit(pm.base_rate[static_cast<int>(z.model_type)]) + pm.scale * signal +
                 intercept);
}

std::vector<Latents> LatentSample(const GenConfig& cfg, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Latents> out(n);
  for (auto& z : out) {
    z.model_type = DrawModelType(cfg, rng);
    DrawLatents(cfg, rng, z);
  }
  return out;
}

FeatureStats RandomFeature(const std::string& name, FeatureType type, Rng& rng) {
  FeatureStats f;
  f.name = name;
  f.type = type;
  if (type == FeatureType::kNumerical) {
    std::array<double, kHistogramBins> h{};
    std::gamma_distribution<double> g(0.7, 1.0);
    double sum = 0.0;
    for (double& b : h) sum += (b = g(rng) + 1e-3);
    for (double& b : h) b /= sum;
    // Push the rounding residue into the largest bin so the mass is exact.
    double s = 0.0;
    for (double b : h) s += b;
    *std::max_element(h.begin(), h.end()) += 1.0 - s;
    f.numerical_hist = h;
    return f;
  }
  const int unique = UniformInt(rng, 2, 400);
  const int k = std::min(10, unique);
  std::vector<std::int64_t> top(k);
  for (auto& c : top) c = UniformInt(rng, 20, 5000);
  std::sort(top.rbegin(), top.rend());
  std::int64_t total = std::accumulate(top.begin(), top.end(), std::int64_t{0});
  const std::int64_t smallest = top.back();
  for (int i = k; i < unique; ++i) total += UniformInt(rng, 1, static_cast<int>(smallest));
  f.cat_top10 = std::move(top);
  f.cat_unique = unique;
  f.cat_total = total;
  return f;
}

struct PipelineBuilder {
  const GenConfig& cfg;
  Rng rng;
  Trace trace;
  std::vector<double> raw_cost;

  Execution& Exec(std::string id, OperatorKind op, Timestamp& t, Timestamp duration, double base) {
    Execution e;
    e.id = std::move(id);
    e.op = op;
    e.pipeline_id = trace.pipeline_id;
    e.start_at = t;
    e.end_at = t + duration;
    t = e.end_at + UniformInt(rng, 1, 120) * 1000;
    e.cpu_cost = base * std::exp(0.3 * std::normal_distribution<double>(0.0, 1.0)(rng));
    trace.executions.push_back(std::move(e));
    return trace.executions.back();
  }

  Artifact& Art(std::string id, ArtifactType type, Timestamp created) {
    Artifact a;
    a.id = std::move(id);
    a.type = type;
    a.created_at = created;
    a.pipeline_id = trace.pipeline_id;
    trace.artifacts.push_back(std::move(a));
    return trace.artifacts.back();
  }

  void In(const std::string& art, const std::string& exec) {
    trace.edges.push_back({art, exec, EdgeRole::kInput});
  }
  void Out(const std::string& exec, const std::string& art) {
    trace.edges.push_back({exec, art, EdgeRole::kOutput});
  }

  // Scales costs so each group holds exactly its planted share.
  void RescaleCosts() {
    GroupCosts sums{};
    for (const auto& e : trace.executions) At(sums, GroupOf(e.op)) += e.cpu_cost;
    const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
    for (auto& e : trace.executions) {
      const double s = At(sums, GroupOf(e.op));
      e.cpu_cost *= At(cfg.cost_mix, GroupOf(e.op)) * total / s;
    }
  }
};

}  // namespace

std::string_view ToString(SignalPreset p) {
  switch (p) {
    case SignalPreset::kWeak: return "weak";
    case SignalPreset::kMedium: return "medium";
    case SignalPreset::kStrong: return "strong";
  }
  return "medium";
}

std::optional<SignalPreset> ParseSignalPreset(std::string_view s) {
  if (s == "weak") return SignalPreset::kWeak;
  if (s == "medium") return SignalPreset::kMedium;
  if (s == "strong") return SignalPreset::kStrong;
  return std::nullopt;
}

GenConfig PresetConfig(SignalPreset preset) {
  GenConfig cfg;
  switch (preset) {
    case SignalPreset::kWeak:
      cfg.push.scale = 0.5;
      cfg.push.blessing_rate = 0.75;
      break;
    case SignalPreset::kMedium:
      break;
    case SignalPreset::kStrong:
      cfg.push.scale = 2.0;
      cfg.push.blessing_rate = 0.45;
      break;
  }
  return cfg;
}

void CheckGenConfig(const GenConfig& cfg) {
  auto prob = [](double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(std::string("synth: ") + what + " must be in [0,1]");
  };
  if (cfg.n_pipelines <= 0) throw Error("synth: n_pipelines must be positive");
  if (cfg.min_graphlets <= 0 || cfg.max_graphlets < cfg.min_graphlets)
    throw Error("synth: graphlet range must satisfy 0 < min <= max");
  if (cfg.window <= 0) throw Error("synth: window must be positive");
  if (cfg.min_features <= 0 || cfg.max_features < cfg.min_features)
    throw Error("synth: feature range must satisfy 0 < min <= max");
  double mix = 0.0;
  for (double v : cfg.cost_mix) {
    if (!(v >= 0.0)) throw Error("synth: cost fractions must be non-negative");
    mix += v;
  }
  if (std::abs(mix - 1.0) > 1e-9) throw Error("synth: cost fractions must sum to 1");
  double types = 0.0;
  for (double v : cfg.model_type_mix) {
    if (!(v >= 0.0)) throw Error("synth: model type mix must be non-negative");
    types += v;
  }
  if (std::abs(types - 1.0) > 1e-9) throw Error("synth: model type mix must sum to 1");
  for (double v : cfg.push.base_rate)
    if (!(v > 0.0 && v < 1.0)) throw Error("synth: base push rates must be in (0,1)");
  prob(cfg.push.target_rate, "target push rate");
  prob(cfg.push.blessing_rate, "blessing rate");
  prob(cfg.warmstart_fraction, "warmstart_fraction");
  prob(cfg.code_stability, "code_stability");
  prob(cfg.max_drift, "max_drift");
  if (!(cfg.drift_step >= 0.0)) throw Error("synth: drift_step must be non-negative");
  prob(cfg.categorical_fraction, "categorical_fraction");
  if (cfg.push.mode == PushMode::kPlanted &&
      !(cfg.push.target_rate > 0.0 && cfg.push.target_rate < cfg.push.blessing_rate))
    throw Error("synth: target push rate must be in (0, blessing_rate)");
  if (!(cfg.push.scale >= 0.0)) throw Error("synth: signal scale must be non-negative");
}

namespace {

// Intercept at which the mean push probability over `sample` is the target.
double BisectIntercept(const GenConfig& cfg, std::span<const Latents> sample) {
  if (cfg.push.mode == PushMode::kConstant || sample.empty()) return 0.0;
  auto mean_p = [&](double c) {
    double s = 0.0;
    for (const auto& z : sample) s += PushProbability(cfg, z, c);
    return s / static_cast<double>(sample.size());
  };
  double lo = -30.0, hi = 30.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_p(mid) < cfg.push.target_rate ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct PlannedGraphlet {
  Latents z;
  double u = 0.0;  // compared with p to draw the label
};

}  // namespace

double CalibrateIntercept(const GenConfig& cfg) {
  if (cfg.push.mode == PushMode::kConstant) return 0.0;
  return BisectIntercept(cfg, LatentSample(cfg, kCalibrationSamples,
                                           DeriveSeed(cfg.seed, kCalibrationStream)));
}

const GraphletTruth* PlantedTruth::find(std::string_view pipeline_id, std::string_view anchor) const {
  auto it = std::lower_bound(graphlets.begin(), graphlets.end(), std::pair(pipeline_id, anchor),
                             [](const GraphletTruth& g, const auto& key) {
                               return std::pair<std::string_view, std::string_view>(
                                          g.pipeline_id, g.anchor) < key;
                             });
  if (it == graphlets.end() || it->pipeline_id != pipeline_id || it->anchor != anchor) return nullptr;
  return &*it;
}

GeneratedCorpus Generate(const GenConfig& cfg) {
  CheckGenConfig(cfg);
  GeneratedCorpus out;

  // Stratified model types: largest-remainder quotas, shuffled.
  std::vector<ModelType> types;
  {
    std::vector<std::pair<double, int>> rem;
    for (int t = 0; t < kNumModelTypes; ++t) {
      const double q = cfg.model_type_mix[t] * cfg.n_pipelines;
      types.insert(types.end(), static_cast<std::size_t>(std::floor(q)), static_cast<ModelType>(t));
      rem.push_back({-(q - std::floor(q)), t});
    }
    std::sort(rem.begin(), rem.end());
    for (std::size_t i = 0; types.size() < static_cast<std::size_t>(cfg.n_pipelines); ++i)
      types.push_back(static_cast<ModelType>(rem[i % rem.size()].second));
    Rng rng(DeriveSeed(cfg.seed, kTypeStream));
    std::shuffle(types.begin(), types.end(), rng);
  }

  // Latents and label draws come first, from their own streams, so that the
  // intercept can be fitted to the graphlets actually generated.
  std::vector<std::vector<PlannedGraphlet>> plan(cfg.n_pipelines);
  std::vector<Latents> all;
  for (int pi = 0; pi < cfg.n_pipelines; ++pi) {
    Rng rng(DeriveSeed(cfg.seed, kLatentStreamBase + static_cast<std::uint64_t>(pi)));
    plan[pi].resize(UniformInt(rng, cfg.min_graphlets, cfg.max_graphlets));
    std::optional<double> prev_drift;
    for (auto& pg : plan[pi]) {
      pg.z.model_type = types[pi];
      DrawLatents(cfg, rng, pg.z, prev_drift);
      prev_drift = pg.z.drift;
      pg.u = Uniform(rng);
      all.push_back(pg.z);
    }
  }
  const double intercept = BisectIntercept(cfg, all);
  out.truth.intercept = intercept;

  for (int pi = 0; pi < cfg.n_pipelines; ++pi) {
    PipelineBuilder b{cfg, Rng(DeriveSeed(cfg.seed, static_cast<std::uint64_t>(pi))), {}, {}};
    Rng& rng = b.rng;
    const std::string pid = Padded("p", pi);
    b.trace.pipeline_id = pid;
    const ModelType model_type = types[pi];
    const bool warmstart = Bernoulli(rng, cfg.warmstart_fraction);
    if (warmstart) out.truth.warmstart_pipelines.push_back(pid);
    std::optional<std::string> arch;
    if (model_type == ModelType::kDnn || model_type == ModelType::kDnnLinear)
      arch = kArchitectures[UniformInt(rng, 0, kArchitectures.size() - 1)];
    std::vector<Analyzer> analyzers;
    for (int a = 0; a < kNumAnalyzers; ++a)
      if (Bernoulli(rng, 0.4)) analyzers.push_back(static_cast<Analyzer>(a));
    if (analyzers.empty()) analyzers.push_back(Analyzer::kVocabulary);

    const int n_features = UniformInt(rng, cfg.min_features, cfg.max_features);
    std::vector<FeatureType> ftypes(n_features);
    for (auto& t : ftypes)
      t = Bernoulli(rng, cfg.categorical_fraction) ? FeatureType::kCategorical : FeatureType::kNumerical;
    const int n_graphlets = static_cast<int>(plan[pi].size());

    Timestamp t = kEpoch + static_cast<Timestamp>(UniformInt(rng, 0, 30 * 24)) * kHour;
    SpanStats current;
    for (int f = 0; f < n_features; ++f)
      current.features.push_back(RandomFeature(Padded("f", f, 2), ftypes[f], rng));

    std::vector<std::string> spans;
    std::string newest_stats, schema, prev_model;
    int span_count = 0, code = 1;
    std::optional<std::string> prev_code;

    for (int gi = 0; gi < n_graphlets; ++gi) {
      const std::string g = Padded("", gi);
      const Latents& z = plan[pi][gi].z;
      const double p = PushProbability(cfg, z, intercept);
      const bool pushed = plan[pi][gi].u < p;

      int n_new;
      if (gi == 0) {
        n_new = cfg.window;
      } else {
        const double u = Uniform(rng);
        n_new = u < 0.1 ? 0 : (u < 0.8 ? 1 : 2);
      }
      for (int s = 0; s < n_new; ++s) {
        if (span_count > 0) {
          for (int f = 0; f < n_features; ++f)
            if (Bernoulli(rng, z.drift))
              current.features[f] = RandomFeature(current.features[f].name, ftypes[f], rng);
        }
        const std::string k = Padded("", span_count++, 6);
        b.Exec("eg_" + k, OperatorKind::kExampleGen, t, UniformInt(rng, 10, 30) * kMinute, 1.0);
        Artifact& span = b.Art("span_" + k, ArtifactType::kDataSpan, t);
        span.span_stats = current;
        b.Out("eg_" + k, "span_" + k);
        spans.push_back("span_" + k);
        b.In("span_" + k, "statsgen_" + k);
        b.Exec("statsgen_" + k, OperatorKind::kStatisticsGen, t, UniformInt(rng, 5, 15) * kMinute, 0.8);
        b.Art("stats_" + k, ArtifactType::kStatistics, t);
        b.Out("statsgen_" + k, "stats_" + k);
        newest_stats = "stats_" + k;
      }
      // Schema inference and data validation run only on fresh data.
      if (n_new > 0) {
        b.In(newest_stats, "schemagen_" + g);
        b.Exec("schemagen_" + g, OperatorKind::kSchemaGen, t, UniformInt(rng, 1, 3) * kMinute, 0.1);
        schema = "schema_" + g;
        b.Art(schema, ArtifactType::kSchema, t);
        b.Out("schemagen_" + g, schema);
        b.In(newest_stats, "exval_" + g);
        b.In(schema, "exval_" + g);
        b.Exec("exval_" + g, OperatorKind::kExampleValidator, t, UniformInt(rng, 1, 5) * kMinute, 0.2);
        b.Art("anomalies_" + g, ArtifactType::kOther, t);
        b.Out("exval_" + g, "anomalies_" + g);
      }
      const std::span<const std::string> window(spans.end() - cfg.window, spans.end());

      for (const auto& s : window) b.In(s, "transform_" + g);
      b.In(schema, "transform_" + g);
      Execution& tr = b.Exec("transform_" + g, OperatorKind::kTransform, t,
                             UniformInt(rng, 15, 45) * kMinute, 1.0);
      tr.analyzers = analyzers;
      b.Art("tgraph_" + g, ArtifactType::kTransformGraph, t);
      b.Out("transform_" + g, "tgraph_" + g);

      std::vector<std::string> trainer_inputs(window.begin(), window.end());
      trainer_inputs.push_back("tgraph_" + g);
      for (int c = 0; c < z.custom_ops; ++c) {
        const std::string id = g + "_" + std::to_string(c);
        b.In("tgraph_" + g, "custom_" + id);
        b.Exec("custom_" + id, OperatorKind::kCustom, t, UniformInt(rng, 5, 20) * kMinute, 0.3);
        b.Art("customout_" + id, ArtifactType::kOther, t);
        b.Out("custom_" + id, "customout_" + id);
        trainer_inputs.push_back("customout_" + id);
      }
      if (warmstart && !prev_model.empty()) trainer_inputs.push_back(prev_model);

      const std::string trainer = "trainer_" + g;
      for (const auto& in : trainer_inputs) b.In(in, trainer);
      if (!prev_code || !Bernoulli(rng, cfg.code_stability)) prev_code = "v" + std::to_string(code++);
      Execution& te = b.Exec(trainer, OperatorKind::kTrainer, t, UniformInt(rng, 60, 180) * kMinute,
                             3.0 * (1.0 + 0.3 * z.extra_outputs));
      te.model_type = model_type;
      te.architecture = arch;
      te.code_version = prev_code;
      const std::string model = "model_" + g;
      b.Art(model, ArtifactType::kModel, t);
      b.Out(trainer, model);
      for (int k = 0; k < z.extra_outputs; ++k) {
        const std::string id = "trainerout_" + g + "_" + std::to_string(k);
        b.Art(id, ArtifactType::kOther, t);
        b.Out(trainer, id);
      }
      prev_model = model;

      b.In(model, "evaluator_" + g);
      b.Exec("evaluator_" + g, OperatorKind::kEvaluator, t, UniformInt(rng, 10, 30) * kMinute, 1.0);
      b.Art("eval_" + g, ArtifactType::kEvalResult, t);
      b.Out("evaluator_" + g, "eval_" + g);
      b.In(model, "modelval_" + g);
      b.In("eval_" + g, "modelval_" + g);
      // The evaluator's threshold verdict, emitted only for passing models.
      if (z.blessed) {
        b.Art("verdict_" + g, ArtifactType::kOther, t);
        b.Out("evaluator_" + g, "verdict_" + g);
        b.In("verdict_" + g, "modelval_" + g);
      }
      b.Exec("modelval_" + g, OperatorKind::kModelValidator, t, UniformInt(rng, 2, 8) * kMinute, 0.5);
      b.In(model, "pusher_" + g);
      if (z.blessed) {
        b.Art("blessing_" + g, ArtifactType::kOther, t);
        b.Out("modelval_" + g, "blessing_" + g);
        b.In("blessing_" + g, "pusher_" + g);
      }
      Execution& pe =
          b.Exec("pusher_" + g, OperatorKind::kPusher, t, UniformInt(rng, 1, 4) * kMinute, 0.1);
      pe.state = pushed ? ExecutionState::kComplete : ExecutionState::kFailed;
      if (pushed) {
        b.Art("push_" + g, ArtifactType::kPushResult, t);
        b.Out("pusher_" + g, "push_" + g);
      }

      GraphletTruth truth;
      truth.pipeline_id = pid;
      truth.anchor = trainer;
      truth.push_probability = p;
      truth.pushed = pushed;
      truth.blessed = z.blessed;
      truth.drift = z.drift;
      truth.custom_ops = z.custom_ops;
      truth.trainer_extra_outputs = z.extra_outputs;
      out.truth.graphlets.push_back(std::move(truth));

      t += 2 * kHour +
           static_cast<Timestamp>(std::exponential_distribution<double>(1.0)(rng) * 10.0 * kHour);
    }
    b.RescaleCosts();
    SortTrace(b.trace);
    out.traces.push_back(std::move(b.trace));
  }
  std::sort(out.truth.graphlets.begin(), out.truth.graphlets.end(),
            [](const GraphletTruth& a, const GraphletTruth& b) {
              return std::tie(a.pipeline_id, a.anchor) < std::tie(b.pipeline_id, b.anchor);
            });
  return out;
}

void WriteTruth(const PlantedTruth& truth, std::ostream& out) {
  json j;
  j["format"] = "mlprov-truth";
  j["version"] = 1;
  j["intercept"] = truth.intercept;
  j["warmstart_pipelines"] = truth.warmstart_pipelines;
  json gs = json::array();
  for (const auto& g : truth.graphlets)
    gs.push_back({{"pipeline_id", g.pipeline_id},
                  {"anchor", g.anchor},
                  {"push_probability", g.push_probability},
                  {"pushed", g.pushed},
                  {"blessed", g.blessed},
                  {"drift", g.drift},
                  {"custom_ops", g.custom_ops},
                  {"trainer_extra_outputs", g.trainer_extra_outputs}});
  j["graphlets"] = std::move(gs);
  out << j.dump() << '\n';
}

PlantedTruth ReadTruth(std::istream& in) {
  try {
    json j;
    in >> j;
    if (j.at("format") != "mlprov-truth" || j.at("version") != 1)
      throw Error("truth: unsupported file format");
    PlantedTruth t;
    t.intercept = j.at("intercept").get<double>();
    t.warmstart_pipelines = j.at("warmstart_pipelines").get<std::vector<std::string>>();
    for (const auto& g : j.at("graphlets")) {
      GraphletTruth r;
      r.pipeline_id = g.at("pipeline_id").get<std::string>();
      r.anchor = g.at("anchor").get<std::string>();
      r.push_probability = g.at("push_probability").get<double>();
      r.pushed = g.at("pushed").get<bool>();
      r.blessed = g.at("blessed").get<bool>();
      r.drift = g.at("drift").get<double>();
      r.custom_ops = g.at("custom_ops").get<int>();
      r.trainer_extra_outputs = g.at("trainer_extra_outputs").get<int>();
      t.graphlets.push_back(std::move(r));
    }
    return t;
  } catch (const json::exception& e) {
    throw Error(std::string("truth: malformed file: ") + e.what());
  }
}

void WriteCorpus(const GeneratedCorpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& t : corpus.traces) {
    const auto path = std::filesystem::path(dir) / (t.pipeline_id + ".jsonl");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("synth: cannot write " + path.string());
    WriteTrace(t, f);
  }
  std::ofstream f(std::filesystem::path(dir) / "truth.json", std::ios::binary);
  if (!f) throw Error("synth: cannot write truth file in " + dir);
  WriteTruth(corpus.truth, f);
}

double BayesBalancedAccuracy(std::span<const double> p) {
  std::vector<double> v(p.begin(), p.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  const double pos = std::accumulate(v.begin(), v.end(), 0.0);
  const double neg = static_cast<double>(v.size()) - pos;
  if (pos <= 0.0 || neg <= 0.0) return 0.5;
  // Predict pushed for the top block; cut only between distinct values.
  double best = 0.5, tp = 0.0, fp = 0.0;
  for (std::size_t i = 0; i < v.size();) {
    const double x = v[i];
    for (; i < v.size() && v[i] == x; ++i) {
      tp += v[i];
      fp += 1.0 - v[i];
    }
    best = std::max(best, 0.5 * (tp / pos + (neg - fp) / neg));
  }
  return std::min(best, 1.0);
}

double MonteCarloBayesBalancedAccuracy(const GenConfig& cfg, std::size_t samples,
                                       std::uint64_t seed) {
  const double c = CalibrateIntercept(cfg);
  const auto z = LatentSample(cfg, samples, seed);
  std::vector<double> p(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) p[i] = PushProbability(cfg, z[i], c);
  return BayesBalancedAccuracy(p);
}

BayesReference ComputeBayesReference(const PlantedTruth& truth, std::span<const Pipeline> corpus) {
  std::vector<double> p;
  std::vector<EvalRecord> records;
  for (const auto& pipe : corpus) {
    for (const auto& g : pipe.graphlets) {
      const GraphletTruth* t = truth.find(pipe.id(), g.anchor);
      if (!t) throw Error("truth: no entry for " + pipe.id() + "/" + g.anchor);
      p.push_back(t->push_probability);
      EvalRecord r;
      r.anchor = g.anchor;
      r.label = g.pushed;
      r.score = t->push_probability;
      r.unpushed_cost = g.pushed ? 0.0 : TotalCost(g);
      records.push_back(std::move(r));
    }
  }
  BayesReference ref;
  ref.balanced_accuracy = BayesBalancedAccuracy(p);
  ref.waste_elimination = WasteElimination(Sweep(records), 1.0);
  return ref;
}

}  // namespace mlprov
