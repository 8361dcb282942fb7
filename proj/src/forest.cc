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

#include "mlprov/forest.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "json.hpp"
#include "mlprov/random.h"

namespace mlprov {
namespace {

using nlohmann::json;

// Per-feature sorted unique values and the rank of every row's value.
struct RankedColumns {
  std::vector<std::vector<double>> values;
  std::vector<std::vector<std::uint32_t>> ranks;
};

RankedColumns RankColumns(std::span<const double> x, std::size_t rows, std::size_t cols) {
  RankedColumns rc;
  rc.values.resize(cols);
  rc.ranks.resize(cols);
  std::vector<double> col(rows);
  for (std::size_t f = 0; f < cols; ++f) {
    for (std::size_t i = 0; i < rows; ++i) col[i] = x[i * cols + f];
    auto& u = rc.values[f];
    u = col;
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    auto& r = rc.ranks[f];
    r.resize(rows);
    for (std::size_t i = 0; i < rows; ++i)
      r[i] = static_cast<std::uint32_t>(std::lower_bound(u.begin(), u.end(), col[i]) - u.begin());
  }
  return rc;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  std::uint32_t rank = 0;  // left side holds ranks <= this
  double impurity = 0.0;
};

double Gini(double w0, double w1) {
  const double w = w0 + w1;
  if (w <= 0) return 0.0;
  const double p = w1 / w;
  return w * (1.0 - p * p - (1.0 - p) * (1.0 - p));
}

class TreeBuilder {
 public:
  TreeBuilder(const RankedColumns& rc, std::span<const int> y, std::array<double, 2> class_w,
              const ForestConfig& cfg, int mtry)
      : rc_(rc), y_(y), cw_(class_w), cfg_(cfg), mtry_(mtry) {
    std::size_t max_u = 0;
    for (const auto& v : rc.values) max_u = std::max(max_u, v.size());
    h0_.assign(max_u, 0.0);
    h1_.assign(max_u, 0.0);
    hc_.assign(max_u, 0);
  }

  Tree Build(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = y_.size();
    std::vector<std::uint32_t> sample(n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    if (cfg_.bootstrap) {
      for (auto& s : sample) s = static_cast<std::uint32_t>(pick(rng));
    } else {
      std::iota(sample.begin(), sample.end(), 0u);
    }
    Tree t;
    Grow(t, sample, 0, rng);
    return t;
  }

 private:
  int AddNode(Tree& t) {
    t.feature.push_back(-1);
    t.threshold.push_back(0.0);
    t.left.push_back(-1);
    t.right.push_back(-1);
    t.value.push_back(0.0);
    t.samples.push_back(0);
    return static_cast<int>(t.feature.size() - 1);
  }

  int Grow(Tree& t, std::vector<std::uint32_t>& idx, int depth, std::mt19937_64& rng) {
    const int node = AddNode(t);
    double w0 = 0, w1 = 0;
    for (auto i : idx) (y_[i] ? w1 : w0) += cw_[y_[i]];
    t.value[node] = (w0 + w1) > 0 ? w1 / (w0 + w1) : 0.0;
    t.samples[node] = static_cast<int>(idx.size());
    if (depth >= cfg_.max_depth || idx.size() < 2 * static_cast<std::size_t>(cfg_.min_leaf) ||
        w0 == 0 || w1 == 0)
      return node;

    // Partial Fisher-Yates draw of the candidate features.
    const int d = static_cast<int>(rc_.values.size());
    std::vector<int> feats(d);
    std::iota(feats.begin(), feats.end(), 0);
    const int k = std::min(mtry_, d);
    for (int j = 0; j < k; ++j) {
      std::uniform_int_distribution<int> u(j, d - 1);
      std::swap(feats[j], feats[u(rng)]);
    }
    feats.resize(k);
    std::sort(feats.begin(), feats.end());

    Split best;
    best.impurity = Gini(w0, w1);
    const double eps = 1e-12 * (w0 + w1);
    for (int f : feats) ScanFeature(f, idx, w0, w1, eps, best);
    if (best.feature < 0) return node;

    const auto& ranks = rc_.ranks[best.feature];
    std::vector<std::uint32_t> left, right;
    left.reserve(idx.size());
    right.reserve(idx.size());
    for (auto i : idx) (ranks[i] <= best.rank ? left : right).push_back(i);
    std::vector<std::uint32_t>().swap(idx);
    t.feature[node] = best.feature;
    t.threshold[node] = best.threshold;
    const int l = Grow(t, left, depth + 1, rng);
    t.left[node] = l;
    const int r = Grow(t, right, depth + 1, rng);
    t.right[node] = r;
    return node;
  }

  void ScanFeature(int f, const std::vector<std::uint32_t>& idx, double w0, double w1, double eps,
                   Split& best) {
    const auto& ranks = rc_.ranks[f];
    const auto& vals = rc_.values[f];
    const std::size_t u = vals.size();
    if (u < 2) return;
    const std::size_t min_leaf = cfg_.min_leaf;
    const std::size_t n = idx.size();
    double l0 = 0, l1 = 0;
    std::size_t lc = 0;
    auto consider = [&](std::uint32_t ra, std::uint32_t rb) {
      if (lc < min_leaf || n - lc < min_leaf) return;
      const double imp = Gini(l0, l1) + Gini(w0 - l0, w1 - l1);
      if (imp < best.impurity - eps) {
        best.impurity = imp;
        best.feature = f;
        best.rank = ra;
        best.threshold = 0.5 * (vals[ra] + vals[rb]);
      }
    };
    if (u <= 4 * n) {
      for (auto i : idx) {
        const auto r = ranks[i];
        (y_[i] ? h1_[r] : h0_[r]) += cw_[y_[i]];
        ++hc_[r];
      }
      std::int64_t prev = -1;
      for (std::size_t r = 0; r < u; ++r) {
        if (hc_[r] == 0) continue;
        if (prev >= 0) consider(static_cast<std::uint32_t>(prev), static_cast<std::uint32_t>(r));
        l0 += h0_[r];
        l1 += h1_[r];
        lc += hc_[r];
        prev = static_cast<std::int64_t>(r);
        h0_[r] = h1_[r] = 0.0;
        hc_[r] = 0;
      }
    } else {
      std::vector<std::uint32_t> order(idx);
      std::sort(order.begin(), order.end(),
                [&](std::uint32_t a, std::uint32_t b) { return ranks[a] < ranks[b]; });
      std::size_t i = 0;
      std::int64_t prev = -1;
      while (i < n) {
        const auto r = ranks[order[i]];
        if (prev >= 0) consider(static_cast<std::uint32_t>(prev), r);
        for (; i < n && ranks[order[i]] == r; ++i) {
          (y_[order[i]] ? l1 : l0) += cw_[y_[order[i]]];
          ++lc;
        }
        prev = r;
      }
    }
  }

  const RankedColumns& rc_;
  std::span<const int> y_;
  std::array<double, 2> cw_;
  const ForestConfig& cfg_;
  int mtry_;
  std::vector<double> h0_, h1_;
  std::vector<std::uint32_t> hc_;
};

json ConfigToJson(const ForestConfig& c) {
  json j{{"n_trees", c.n_trees},
         {"max_depth", c.max_depth},
         {"min_leaf", c.min_leaf},
         {"seed", c.seed},
         {"balanced_class_weights", c.balanced_class_weights},
         {"bootstrap", c.bootstrap}};
  j["features_per_split"] = c.features_per_split ? json(*c.features_per_split) : json(nullptr);
  return j;
}

ForestConfig ConfigFromJson(const json& j) {
  ForestConfig c;
  c.n_trees = j.at("n_trees").get<int>();
  c.max_depth = j.at("max_depth").get<int>();
  c.min_leaf = j.at("min_leaf").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.balanced_class_weights = j.at("balanced_class_weights").get<bool>();
  c.bootstrap = j.at("bootstrap").get<bool>();
  if (!j.at("features_per_split").is_null())
    c.features_per_split = j.at("features_per_split").get<int>();
  return c;
}

}  // namespace

void CheckForestConfig(const ForestConfig& cfg) {
  if (cfg.n_trees <= 0) throw Error("forest: n_trees must be positive");
  if (cfg.max_depth <= 0) throw Error("forest: max_depth must be positive");
  if (cfg.min_leaf <= 0) throw Error("forest: min_leaf must be positive");
  if (cfg.features_per_split && *cfg.features_per_split <= 0)
    throw Error("forest: features_per_split must be positive");
}

double Tree::Predict(std::span<const double> x) const {
  int n = 0;
  while (feature[n] >= 0) n = x[feature[n]] <= threshold[n] ? left[n] : right[n];
  return value[n];
}

Forest Forest::Fit(std::span<const double> x, std::size_t num_features, std::span<const int> y,
                   const ForestConfig& cfg, std::vector<std::string> schema) {
  CheckForestConfig(cfg);
  if (num_features == 0 || y.empty()) throw Error("forest: empty feature matrix");
  if (x.size() != y.size() * num_features) throw Error("forest: matrix shape does not match labels");
  if (!schema.empty() && schema.size() != num_features)
    throw Error("forest: schema size does not match feature count");
  std::size_t pos = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw Error("forest: labels must be 0 or 1");
    pos += v;
  }
  for (double v : x)
    if (!std::isfinite(v)) throw Error("forest: non-finite feature value");

  std::array<double, 2> cw{1.0, 1.0};
  const std::size_t n = y.size();
  if (cfg.balanced_class_weights && pos > 0 && pos < n) {
    cw[0] = static_cast<double>(n) / (2.0 * static_cast<double>(n - pos));
    cw[1] = static_cast<double>(n) / (2.0 * static_cast<double>(pos));
  }
  const int mtry = cfg.features_per_split.value_or(
      static_cast<int>(std::ceil(std::sqrt(static_cast<double>(num_features)))));

  const RankedColumns rc = RankColumns(x, n, num_features);
  Forest forest;
  forest.config_ = cfg;
  forest.num_features_ = num_features;
  forest.schema_ = std::move(schema);
  forest.trees_.resize(cfg.n_trees);

  const unsigned workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), cfg.n_trees));
  std::atomic<int> next{0};
  auto work = [&] {
    TreeBuilder builder(rc, y, cw, cfg, mtry);
    for (int t; (t = next.fetch_add(1)) < cfg.n_trees;)
      forest.trees_[t] = builder.Build(DeriveSeed(cfg.seed, static_cast<std::uint64_t>(t)));
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return forest;
}

double Forest::Score(std::span<const double> x) const {
  if (x.size() != num_features_)
    throw Error("forest: expected " + std::to_string(num_features_) + " features, got " +
                std::to_string(x.size()));
  double s = 0.0;
  for (const auto& t : trees_) s += t.Predict(x);
  return trees_.empty() ? 0.0 : s / static_cast<double>(trees_.size());
}

std::vector<double> Forest::ScoreRows(std::span<const double> x) const {
  if (num_features_ == 0 || x.size() % num_features_ != 0)
    throw Error("forest: matrix width does not match schema");
  std::vector<double> out(x.size() / num_features_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Score(x.subspan(i * num_features_, num_features_));
  return out;
}

void Forest::CheckSchema(std::span<const std::string> names) const {
  if (names.size() != num_features_)
    throw Error("forest: schema mismatch: expected " + std::to_string(num_features_) +
                " features, got " + std::to_string(names.size()));
  if (schema_.empty()) return;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] != schema_[i])
      throw Error("forest: schema mismatch at column " + std::to_string(i) + ": expected '" +
                  schema_[i] + "', got '" + names[i] + "'");
}

void Forest::Save(std::ostream& out) const {
  json j;
  j["format"] = "mlprov-forest";
  j["version"] = kFormatVersion;
  j["config"] = ConfigToJson(config_);
  j["num_features"] = num_features_;
  j["schema"] = schema_;
  json trees = json::array();
  for (const auto& t : trees_)
    trees.push_back({{"feature", t.feature},
                     {"threshold", t.threshold},
                     {"left", t.left},
                     {"right", t.right},
                     {"value", t.value},
                     {"samples", t.samples}});
  j["trees"] = std::move(trees);
  out << j.dump() << '\n';
}

Forest Forest::Load(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(std::string("forest: malformed model file: ") + e.what());
  }
  try {
    if (j.at("format") != "mlprov-forest") throw Error("forest: not a forest model file");
    if (j.at("version").get<int>() != kFormatVersion)
      throw Error("forest: unsupported model version " + j.at("version").dump());
    Forest f;
    f.config_ = ConfigFromJson(j.at("config"));
    f.num_features_ = j.at("num_features").get<std::size_t>();
    f.schema_ = j.at("schema").get<std::vector<std::string>>();
    if (!f.schema_.empty() && f.schema_.size() != f.num_features_)
      throw Error("forest: schema size does not match feature count");
    for (const auto& jt : j.at("trees")) {
      Tree t;
      jt.at("feature").get_to(t.feature);
      jt.at("threshold").get_to(t.threshold);
      jt.at("left").get_to(t.left);
      jt.at("right").get_to(t.right);
      jt.at("value").get_to(t.value);
      jt.at("samples").get_to(t.samples);
      const std::size_t m = t.feature.size();
      if (m == 0 || t.threshold.size() != m || t.left.size() != m || t.right.size() != m ||
          t.value.size() != m || t.samples.size() != m)
        throw Error("forest: inconsistent tree arrays");
      for (std::size_t i = 0; i < m; ++i) {
        if (t.feature[i] < 0) continue;
        if (t.feature[i] >= static_cast<int>(f.num_features_) || t.left[i] <= static_cast<int>(i) ||
            t.right[i] <= static_cast<int>(i) || t.left[i] >= static_cast<int>(m) ||
            t.right[i] >= static_cast<int>(m))
          throw Error("forest: malformed tree node " + std::to_string(i));
      }
      f.trees_.push_back(std::move(t));
    }
    return f;
  } catch (const json::exception& e) {
    throw Error(std::string("forest: malformed model file: ") + e.what());
  }
}

double BalancedAccuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.empty()) throw Error("balanced accuracy: empty input");
  if (y_true.size() != y_pred.size()) throw Error("balanced accuracy: length mismatch");
  std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i]) (y_pred[i] ? tp : fn)++;
    else (y_pred[i] ? fp : tn)++;
  }
  if (tp + fn == 0 || tn + fp == 0) throw Error("balanced accuracy: y_true holds a single class");
  const double tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double tnr = static_cast<double>(tn) / static_cast<double>(tn + fp);
  return (tpr + tnr) / 2.0;
}

SplitSpec SplitCorpus(std::span<const PipelineSummary> pipelines, std::uint64_t seed,
                      const SplitOptions& options, std::ostream* warn) {
  if (pipelines.size() < 2) throw Error("split: need at least two pipelines");
  double total = 0, total_pos = 0;
  for (const auto& p : pipelines) {
    if (p.graphlets < 0 || p.pushed < 0 || p.pushed > p.graphlets)
      throw Error("split: bad counts for pipeline " + p.id);
    total += p.graphlets;
    total_pos += p.pushed;
  }
  if (total <= 0) throw Error("split: corpus has no graphlets");
  const double lo = options.target_train_fraction - options.fraction_slack;
  const double hi = options.target_train_fraction + options.fraction_slack;

  std::vector<std::size_t> order(pipelines.size());
  auto attempt = [&](double tol, std::uint64_t stream_base) -> std::optional<SplitSpec> {
    for (int a = 0; a < options.max_shuffles; ++a) {
      std::iota(order.begin(), order.end(), 0);
      std::mt19937_64 rng(DeriveSeed(seed, stream_base + static_cast<std::uint64_t>(a)));
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<bool> in_train(pipelines.size(), false);
      double tr = 0, tr_pos = 0;
      for (auto i : order) {
        if ((tr + pipelines[i].graphlets) / total <= hi) {
          in_train[i] = true;
          tr += pipelines[i].graphlets;
          tr_pos += pipelines[i].pushed;
        }
      }
      const double te = total - tr;
      const double frac = tr / total;
      if (tr <= 0 || te <= 0 || frac < lo || frac > hi) continue;
      const double gap = std::abs(tr_pos / tr - (total_pos - tr_pos) / te);
      if (gap > tol) continue;
      SplitSpec s;
      for (std::size_t i = 0; i < pipelines.size(); ++i)
        (in_train[i] ? s.train_pipeline_ids : s.test_pipeline_ids).push_back(pipelines[i].id);
      std::sort(s.train_pipeline_ids.begin(), s.train_pipeline_ids.end());
      std::sort(s.test_pipeline_ids.begin(), s.test_pipeline_ids.end());
      s.train_fraction = frac;
      s.rate_gap = gap;
      return s;
    }
    return std::nullopt;
  };
  if (auto s = attempt(options.label_tolerance, 0)) return *s;
  if (warn)
    *warn << "warning: no split within label tolerance " << options.label_tolerance << " after "
          << options.max_shuffles << " shuffles; relaxing to " << options.relaxed_label_tolerance
          << '\n';
  if (auto s = attempt(options.relaxed_label_tolerance, 1u << 20)) {
    s->relaxed = true;
    return *s;
  }
  throw Error("split: corpus too small to satisfy the train fraction and label-rate constraints");
}

}  // namespace mlprov
