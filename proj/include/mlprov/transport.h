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

// Exact solver for the balanced transportation problem (transportation
// simplex with u-v potentials). Supplies and demands are integers so that
// degenerate pivots are detected exactly.

#ifndef MLPROV_TRANSPORT_H_
#define MLPROV_TRANSPORT_H_

#include <cstdint>
#include <span>
#include <vector>

namespace mlprov {

inline constexpr int kMaxTransportSide = 256;

struct TransportPlan {
  double cost = 0.0;
  // Row-major rows x cols.
  std::vector<std::int64_t> flow;
  int pivots = 0;
};

// Minimizes sum_ij cost[i*cols+j] * flow_ij subject to row sums = supply and
// column sums = demand. Requires sum(supply) == sum(demand), all entries
// positive, and both sides at most kMaxTransportSide.
TransportPlan SolveTransport(std::span<const std::int64_t> supply,
                             std::span<const std::int64_t> demand, std::span<const double> cost);

// Optimal transport cost between uniform distributions over `rows` and
// `cols` points (each row carries 1/rows, each column 1/cols).
double UniformTransportCost(int rows, int cols, std::span<const double> cost);

}  // namespace mlprov

#endif  // MLPROV_TRANSPORT_H_
