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

#include "mlprov/similarity.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "mlprov/random.h"
#include "mlprov/transport.h"

namespace mlprov {
namespace {

constexpr double kMassTolerance = 1e-9;

double Overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

CanonicalDistribution Canonicalize(const FeatureStats& f) {
  CanonicalDistribution out;
  if (f.type == FeatureType::kNumerical) {
    if (!f.numerical_hist) throw Error("numerical feature '" + f.name + "' has no histogram");
    out.bins = *f.numerical_hist;
    return out;
  }
  if (!f.cat_top10 || !f.cat_unique || !f.cat_total) {
    throw Error("categorical feature '" + f.name + "' lacks top10/unique/total");
  }
  const std::int64_t n = *f.cat_unique;
  const std::int64_t total = *f.cat_total;
  if (n <= 0) throw Error("categorical feature '" + f.name + "' has N = 0");
  if (total <= 0) throw Error("categorical feature '" + f.name + "' has total = 0");
  std::vector<std::int64_t> top = *f.cat_top10;
  if (static_cast<std::int64_t>(top.size()) > n) {
    throw Error("categorical feature '" + f.name + "' has more top terms than unique terms");
  }
  std::sort(top.begin(), top.end(), std::greater<>());

  const double width = 1.0 / static_cast<double>(n);
  const std::int64_t k = static_cast<std::int64_t>(top.size());
  double head_mass = 0.0;
  for (std::int64_t i = 0; i < k; ++i) {
    const double mass = static_cast<double>(top[i]) / static_cast<double>(total);
    head_mass += mass;
    const double lo = static_cast<double>(i) * width;
    const double hi = static_cast<double>(i + 1) * width;
    for (int c = 0; c < kHistogramBins; ++c) {
      const double ov = Overlap(lo, hi, c / 10.0, (c + 1) / 10.0);
      if (ov > 0.0) out.bins[c] += mass * ov / width;
    }
  }
  double tail_mass = 1.0 - head_mass;
  if (tail_mass < -kMassTolerance) {
    throw Error("categorical feature '" + f.name + "' violates mass conservation");
  }
  tail_mass = std::max(0.0, tail_mass);
  if (k == n) {
    if (tail_mass > kMassTolerance) {
      throw Error("categorical feature '" + f.name + "' violates mass conservation");
    }
  } else if (tail_mass > 0.0) {
    const double lo = static_cast<double>(k) * width;
    const double density = tail_mass / (1.0 - lo);
    for (int c = 0; c < kHistogramBins; ++c) {
      const double ov = Overlap(lo, 1.0, c / 10.0, (c + 1) / 10.0);
      if (ov > 0.0) out.bins[c] += density * ov;
    }
  }
  double sum = 0.0;
  for (double b : out.bins) sum += b;
  if (std::abs(sum - 1.0) > kMassTolerance) {
    throw Error("categorical feature '" + f.name + "' violates mass conservation");
  }
  return out;
}

LshHasher::LshHasher(const LshParams& params) : params_(params) {
  if (params.k < 1) throw Error("LSH k must be at least 1");
  if (!(params.w > 0.0)) throw Error("LSH w must be positive");
  for (int j = 0; j < params.k; ++j) {
    std::mt19937_64 rng(DeriveSeed(params.seed, static_cast<std::uint64_t>(j)));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::array<double, kHistogramBins> a{};
    for (double& x : a) x = normal(rng);
    directions_.push_back(a);
    offsets_.push_back(std::uniform_real_distribution<double>(0.0, params.w)(rng));
  }
}

LshHash LshHasher::Hash(const CanonicalDistribution& d) const {
  LshHash h(params_.k);
  for (int j = 0; j < params_.k; ++j) {
    double dot = 0.0;
    for (int i = 0; i < kHistogramBins; ++i) dot += directions_[j][i] * std::sqrt(d.bins[i]);
    h[j] = static_cast<std::int64_t>(std::floor((dot + offsets_[j]) / params_.w));
  }
  return h;
}

void CheckWeights(const SimWeights& w) {
  if (w.alpha < 0.0 || w.alpha > 1.0 || w.beta < 0.0 || w.beta > 1.0) {
    throw Error("similarity weights must lie in [0,1]");
  }
  if (std::abs(w.alpha + w.beta - 1.0) > 1e-12) throw Error("similarity weights must sum to 1");
}

SpanSignature Sign(const SpanStats& span, const LshHasher& hasher) {
  SpanSignature sig;
  sig.reserve(span.features.size());
  for (const FeatureStats& f : span.features) {
    sig.push_back({f.name, f.type, hasher.Hash(Canonicalize(f))});
  }
  return sig;
}

double FeatureSim(const FeatureSignature& a, const FeatureSignature& b, const SimWeights& w) {
  if (a.type != b.type) return 0.0;
  return (a.hash == b.hash ? w.alpha : 0.0) + (a.name == b.name ? w.beta : 0.0);
}

double FeatureSim(const FeatureStats& a, const FeatureStats& b, const LshHasher& hasher,
                  const SimWeights& w) {
  if (a.type != b.type) return 0.0;
  return FeatureSim(FeatureSignature{a.name, a.type, hasher.Hash(Canonicalize(a))},
                    FeatureSignature{b.name, b.type, hasher.Hash(Canonicalize(b))}, w);
}

double SpanSim(const SpanSignature& a, const SpanSignature& b, const SimWeights& w) {
  if (a.empty() || b.empty()) return 0.0;
  // A fixed argument order makes the result bit-for-bit symmetric.
  const bool swap = a.size() != b.size() ? a.size() > b.size() : b < a;
  const SpanSignature& rows = swap ? b : a;
  const SpanSignature& cols = swap ? a : b;
  const int n = static_cast<int>(rows.size());
  const int m = static_cast<int>(cols.size());
  std::vector<double> cost(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) cost[static_cast<std::size_t>(i) * m + j] = 1.0 - FeatureSim(rows[i], cols[j], w);
  }
  const double emd = UniformTransportCost(n, m, cost);
  return std::clamp(1.0 - emd, 0.0, 1.0);
}

double SpanSim(const SpanStats& a, const SpanStats& b, const LshHasher& hasher,
               const SimWeights& w) {
  return SpanSim(Sign(a, hasher), Sign(b, hasher), w);
}

double SequenceSim(std::span<const SpanSignature> a, std::span<const SpanSignature> b,
                   const SimWeights& w) {
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t common = std::min(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < common; ++i) sum += SpanSim(a[i], b[i], w);
  return sum / static_cast<double>(std::max(a.size(), b.size()));
}

double SequenceSim(std::span<const SpanStats> a, std::span<const SpanStats> b,
                   const LshHasher& hasher, const SimWeights& w) {
  std::vector<SpanSignature> sa;
  std::vector<SpanSignature> sb;
  for (const auto& s : a) sa.push_back(Sign(s, hasher));
  for (const auto& s : b) sb.push_back(Sign(s, hasher));
  return SequenceSim(sa, sb, w);
}

double Jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : sa) inter += sb.count(x);
  return static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size() - inter);
}

double Jaccard(const Graphlet& a, const Graphlet& b) {
  if (a.pipeline_id != b.pipeline_id) {
    throw Error("node-level Jaccard requires graphlets of one pipeline");
  }
  std::vector<TraceIndex::Node> x = a.input_spans;
  std::vector<TraceIndex::Node> y = b.input_spans;
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  std::sort(y.begin(), y.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  if (x.empty() && y.empty()) return 1.0;
  std::vector<TraceIndex::Node> inter;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(inter));
  return static_cast<double>(inter.size()) /
         static_cast<double>(x.size() + y.size() - inter.size());
}

SpanSignatureCache::SpanSignatureCache(const Pipeline& pipeline, const LshHasher& hasher)
    : signatures_(pipeline.index.num_nodes()) {
  for (int v = 0; v < pipeline.index.num_artifacts(); ++v) {
    const Artifact& a = pipeline.trace.artifacts[v];
    if (a.span_stats) signatures_[v] = Sign(*a.span_stats, hasher);
  }
}

std::vector<SpanSignature> SpanSignatureCache::InputsOf(const Graphlet& g) const {
  std::vector<SpanSignature> out;
  out.reserve(g.input_spans.size());
  for (TraceIndex::Node v : g.input_spans) out.push_back(signatures_[v]);
  return out;
}

}  // namespace mlprov
