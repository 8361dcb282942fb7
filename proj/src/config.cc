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

#include "mlprov/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mlprov/table.h"

namespace mlprov {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitCommas(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(Trim(item));
  return out;
}

long long ToInt(const std::string& v) {
  long long x = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || end != v.data() + v.size()) throw Error("expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t ToU64(const std::string& v) {
  std::uint64_t x = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || end != v.data() + v.size())
    throw Error("expected an unsigned integer, got '" + v + "'");
  return x;
}

int ToI32(const std::string& v) {
  const long long x = ToInt(v);
  if (x < INT32_MIN || x > INT32_MAX) throw Error("integer out of range: '" + v + "'");
  return static_cast<int>(x);
}

bool ToBool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error("expected true or false, got '" + v + "'");
}

template <std::size_t N>
std::array<double, N> ToArray(const std::string& v) {
  const auto parts = SplitCommas(v);
  if (parts.size() != N)
    throw Error("expected " + std::to_string(N) + " comma-separated numbers, got " +
                std::to_string(parts.size()));
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = ParseDouble(parts[i]);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> table = {
      {"lsh.k", [](RunConfig& c, const std::string& v) { c.lsh.k = ToI32(v); }},
      {"lsh.w", [](RunConfig& c, const std::string& v) { c.lsh.w = ParseDouble(v); }},
      {"lsh.seed", [](RunConfig& c, const std::string& v) { c.lsh.seed = ToU64(v); }},
      {"weights.alpha", [](RunConfig& c, const std::string& v) { c.weights.alpha = ParseDouble(v); }},
      {"weights.beta", [](RunConfig& c, const std::string& v) { c.weights.beta = ParseDouble(v); }},
      {"window.w", [](RunConfig& c, const std::string& v) { c.window.w = ToI32(v); }},
      {"forest.n_trees", [](RunConfig& c, const std::string& v) { c.forest.n_trees = ToI32(v); }},
      {"forest.max_depth", [](RunConfig& c, const std::string& v) { c.forest.max_depth = ToI32(v); }},
      {"forest.min_leaf", [](RunConfig& c, const std::string& v) { c.forest.min_leaf = ToI32(v); }},
      {"forest.features_per_split",
       [](RunConfig& c, const std::string& v) { c.forest.features_per_split = ToI32(v); }},
      {"forest.seed", [](RunConfig& c, const std::string& v) { c.forest.seed = ToU64(v); }},
      {"forest.balanced_class_weights",
       [](RunConfig& c, const std::string& v) { c.forest.balanced_class_weights = ToBool(v); }},
      {"forest.bootstrap", [](RunConfig& c, const std::string& v) { c.forest.bootstrap = ToBool(v); }},
      {"stop.kinds",
       [](RunConfig& c, const std::string& v) {
         c.stop.kinds.clear();
         for (const auto& name : SplitCommas(v)) {
           if (name.empty()) continue;
           auto k = ParseOperatorKind(name);
           if (!k) throw Error("unknown operator kind '" + name + "'");
           c.stop.kinds.insert(*k);
         }
       }},
      {"stop.cut_warmstart_edges",
       [](RunConfig& c, const std::string& v) { c.stop.cut_warmstart_edges = ToBool(v); }},
      {"split.target_train_fraction",
       [](RunConfig& c, const std::string& v) { c.split.target_train_fraction = ParseDouble(v); }},
      {"split.fraction_slack",
       [](RunConfig& c, const std::string& v) { c.split.fraction_slack = ParseDouble(v); }},
      {"split.label_tolerance",
       [](RunConfig& c, const std::string& v) { c.split.label_tolerance = ParseDouble(v); }},
      {"split.relaxed_label_tolerance",
       [](RunConfig& c, const std::string& v) { c.split.relaxed_label_tolerance = ParseDouble(v); }},
      {"split.max_shuffles", [](RunConfig& c, const std::string& v) { c.split.max_shuffles = ToI32(v); }},
      {"policy.min_freshness", [](RunConfig& c, const std::string& v) { c.min_freshness = ParseDouble(v); }},
      {"policy.decision_threshold",
       [](RunConfig& c, const std::string& v) { c.decision_threshold = ParseDouble(v); }},
      {"gen.preset",
       [](RunConfig& c, const std::string& v) {
         auto p = ParseSignalPreset(v);
         if (!p) throw Error("unknown preset '" + v + "'");
         const GenConfig preset = PresetConfig(*p);
         c.gen.push.scale = preset.push.scale;
         c.gen.push.blessing_rate = preset.push.blessing_rate;
       }},
      {"gen.seed", [](RunConfig& c, const std::string& v) { c.gen.seed = ToU64(v); }},
      {"gen.n_pipelines", [](RunConfig& c, const std::string& v) { c.gen.n_pipelines = ToI32(v); }},
      {"gen.min_graphlets", [](RunConfig& c, const std::string& v) { c.gen.min_graphlets = ToI32(v); }},
      {"gen.max_graphlets", [](RunConfig& c, const std::string& v) { c.gen.max_graphlets = ToI32(v); }},
      {"gen.push_mode",
       [](RunConfig& c, const std::string& v) {
         if (v == "planted") c.gen.push.mode = PushMode::kPlanted;
         else if (v == "constant") c.gen.push.mode = PushMode::kConstant;
         else throw Error("push_mode must be planted or constant");
       }},
      {"gen.target_rate", [](RunConfig& c, const std::string& v) { c.gen.push.target_rate = ParseDouble(v); }},
      {"gen.base_rate",
       [](RunConfig& c, const std::string& v) { c.gen.push.base_rate = ToArray<kNumModelTypes>(v); }},
      {"gen.w_drift", [](RunConfig& c, const std::string& v) { c.gen.push.w_drift = ParseDouble(v); }},
      {"gen.w_shape", [](RunConfig& c, const std::string& v) { c.gen.push.w_shape = ParseDouble(v); }},
      {"gen.w_trainer", [](RunConfig& c, const std::string& v) { c.gen.push.w_trainer = ParseDouble(v); }},
      {"gen.signal_scale", [](RunConfig& c, const std::string& v) { c.gen.push.scale = ParseDouble(v); }},
      {"gen.blessing_rate",
       [](RunConfig& c, const std::string& v) { c.gen.push.blessing_rate = ParseDouble(v); }},
      {"gen.cost_mix",
       [](RunConfig& c, const std::string& v) { c.gen.cost_mix = ToArray<kNumOperatorGroups>(v); }},
      {"gen.model_type_mix",
       [](RunConfig& c, const std::string& v) { c.gen.model_type_mix = ToArray<kNumModelTypes>(v); }},
      {"gen.warmstart_fraction",
       [](RunConfig& c, const std::string& v) { c.gen.warmstart_fraction = ParseDouble(v); }},
      {"gen.code_stability",
       [](RunConfig& c, const std::string& v) { c.gen.code_stability = ParseDouble(v); }},
      {"gen.max_drift", [](RunConfig& c, const std::string& v) { c.gen.max_drift = ParseDouble(v); }},
      {"gen.drift_step", [](RunConfig& c, const std::string& v) { c.gen.drift_step = ParseDouble(v); }},
      {"gen.window", [](RunConfig& c, const std::string& v) { c.gen.window = ToI32(v); }},
      {"gen.min_features", [](RunConfig& c, const std::string& v) { c.gen.min_features = ToI32(v); }},
      {"gen.max_features", [](RunConfig& c, const std::string& v) { c.gen.max_features = ToI32(v); }},
      {"gen.categorical_fraction",
       [](RunConfig& c, const std::string& v) { c.gen.categorical_fraction = ParseDouble(v); }},
  };
  return table;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : Error("config line " + std::to_string(line) + ": " + message), line_(line) {}

RunConfig ParseConfig(std::istream& in, RunConfig base) {
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const std::string line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(n, "expected key = value");
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    auto it = Setters().find(key);
    if (it == Setters().end()) throw ConfigError(n, "unknown key '" + key + "'");
    try {
      it->second(base, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(n, key + ": " + e.what());
    }
  }
  try {
    CheckRunConfig(base);
  } catch (const Error& e) {
    throw ConfigError(0, e.what());
  }
  return base;
}

RunConfig LoadConfig(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config file " + path);
  return ParseConfig(f, std::move(base));
}

void CheckRunConfig(const RunConfig& c) {
  if (c.lsh.k <= 0) throw Error("lsh.k must be positive");
  if (!(c.lsh.w > 0.0)) throw Error("lsh.w must be positive");
  CheckWeights(c.weights);
  if (c.window.w < 1) throw Error("window.w must be at least 1");
  CheckForestConfig(c.forest);
  CheckGenConfig(c.gen);
  if (!(c.split.target_train_fraction > 0.0 && c.split.target_train_fraction < 1.0))
    throw Error("split.target_train_fraction must be in (0,1)");
  if (c.split.max_shuffles <= 0) throw Error("split.max_shuffles must be positive");
  if (!(c.min_freshness >= 0.0 && c.min_freshness <= 1.0))
    throw Error("policy.min_freshness must be in [0,1]");
}

void ApplySeed(RunConfig& cfg, std::uint64_t seed) {
  cfg.lsh.seed = seed;
  cfg.forest.seed = seed;
  cfg.gen.seed = seed;
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : Setters()) keys.push_back(k);
  return keys;
}

FeaturizeOptions FeaturizeOptionsOf(const RunConfig& cfg) {
  return {cfg.window, cfg.lsh, cfg.weights};
}

ReportConfig ReportConfigOf(const RunConfig& cfg) {
  ReportConfig r;
  r.forest = cfg.forest;
  r.decision_threshold = cfg.decision_threshold;
  r.min_freshness = cfg.min_freshness;
  return r;
}

}  // namespace mlprov
