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

// Data reuse and dataset similarity between graphlets.
//
// Feature distributions are brought to a common 10-bin form over [0,1],
// hashed with a square-root-embedding LSH (S2JSD-LSH), and compared with
//
//   s(f1, f2) = alpha * [h(f1) == h(f2)] + beta * [name1 == name2]
//
// (0 across feature types). Two spans are compared by optimal transport
// between their features with uniform weights and cost 1 - s; the span
// similarity is 1 - cost. Span sequences are matched by ordinal position.

#ifndef MLPROV_SIMILARITY_H_
#define MLPROV_SIMILARITY_H_

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlprov/segmentation.h"
#include "mlprov/trace.h"

namespace mlprov {

struct CanonicalDistribution {
  std::array<double, kHistogramBins> bins{};

  bool operator==(const CanonicalDistribution&) const = default;
};

// Numerical features pass through. Categorical features become an N-bin
// distribution (sorted top-term frequencies, then the remaining mass spread
// evenly over the other N - k terms) re-binned by mass onto 10 equi-width
// cells, splitting bins that straddle a cell boundary proportionally.
CanonicalDistribution Canonicalize(const FeatureStats& f);

struct LshParams {
  int k = 4;
  double w = 0.5;
  std::uint64_t seed = 42;
};

using LshHash = std::vector<std::int64_t>;

// h_j(d) = floor((a_j . sqrt(d) + b_j) / w), a_j ~ N(0, I), b_j ~ U[0, w).
// Projections are drawn once per parameter set; the hasher is immutable.
class LshHasher {
 public:
  explicit LshHasher(const LshParams& params);

  LshHash Hash(const CanonicalDistribution& d) const;
  const LshParams& params() const { return params_; }

 private:
  LshParams params_;
  std::vector<std::array<double, kHistogramBins>> directions_;
  std::vector<double> offsets_;
};

struct SimWeights {
  double alpha = 0.5;
  double beta = 0.5;
};

// Throws unless alpha, beta lie in [0,1] and sum to 1.
void CheckWeights(const SimWeights& w);

// What span comparison needs from one feature.
struct FeatureSignature {
  std::string name;
  FeatureType type = FeatureType::kNumerical;
  LshHash hash;

  auto operator<=>(const FeatureSignature&) const = default;
};

using SpanSignature = std::vector<FeatureSignature>;

SpanSignature Sign(const SpanStats& span, const LshHasher& hasher);

double FeatureSim(const FeatureSignature& a, const FeatureSignature& b, const SimWeights& w);
double FeatureSim(const FeatureStats& a, const FeatureStats& b, const LshHasher& hasher,
                  const SimWeights& w);

// Span similarity in [0,1]; 0 when either side has no features.
double SpanSim(const SpanSignature& a, const SpanSignature& b, const SimWeights& w);
double SpanSim(const SpanStats& a, const SpanStats& b, const LshHasher& hasher,
               const SimWeights& w);

// (1 / max(n, m)) * sum_{i < min(n, m)} SpanSim(a[i], b[i]); 0 if either is empty.
double SequenceSim(std::span<const SpanSignature> a, std::span<const SpanSignature> b,
                   const SimWeights& w);
double SequenceSim(std::span<const SpanStats> a, std::span<const SpanStats> b,
                   const LshHasher& hasher, const SimWeights& w);

// Intersection over union of two id sets; 1 when both are empty.
double Jaccard(std::span<const std::string> a, std::span<const std::string> b);
// Jaccard over the input spans of two graphlets of the same pipeline.
double Jaccard(const Graphlet& a, const Graphlet& b);

// Signatures of every data span in a pipeline, indexed by node.
class SpanSignatureCache {
 public:
  SpanSignatureCache(const Pipeline& pipeline, const LshHasher& hasher);

  const SpanSignature& at(TraceIndex::Node span) const { return signatures_[span]; }
  // Input-span signatures of g in ingestion order.
  std::vector<SpanSignature> InputsOf(const Graphlet& g) const;

 private:
  std::vector<SpanSignature> signatures_;
};

}  // namespace mlprov

#endif  // MLPROV_SIMILARITY_H_
