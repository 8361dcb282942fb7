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

#include "mlprov/transport.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mlprov/types.h"

namespace mlprov {
namespace {

constexpr double kReducedCostTol = 1e-12;

struct BasicCell {
  int row;
  int col;
  std::int64_t flow;
};

// The basis of a transportation problem with n rows and m columns is a
// spanning tree on n + m vertices (rows first, then columns) with n + m - 1
// edges, one per basic cell.
class TransportationSimplex {
 public:
  TransportationSimplex(std::span<const std::int64_t> supply, std::span<const std::int64_t> demand,
                        std::span<const double> cost)
      : n_(static_cast<int>(supply.size())),
        m_(static_cast<int>(demand.size())),
        cost_(cost),
        cell_basis_(static_cast<std::size_t>(n_) * m_, -1),
        u_(n_),
        v_(m_),
        adj_(n_ + m_),
        parent_edge_(n_ + m_),
        visited_(n_ + m_) {
    NorthwestCorner(supply, demand);
  }

  TransportPlan Solve() {
    int degenerate_streak = 0;
    bool bland = false;
    const long max_pivots = 50'000'000L / std::max(1, n_ * m_) + 100L * (n_ + m_);
    int pivots = 0;
    while (true) {
      ComputePotentials();
      int enter = bland ? FirstImproving() : MostImproving();
      if (enter < 0) break;
      if (++pivots > max_pivots) throw Error("transport solver exceeded pivot limit");
      const bool degenerate = Pivot(enter / m_, enter % m_, bland);
      degenerate_streak = degenerate ? degenerate_streak + 1 : 0;
      if (degenerate_streak > 2 * (n_ + m_)) bland = true;
    }
    TransportPlan plan;
    plan.flow.assign(static_cast<std::size_t>(n_) * m_, 0);
    for (const BasicCell& c : basis_) {
      plan.flow[static_cast<std::size_t>(c.row) * m_ + c.col] = c.flow;
      plan.cost += static_cast<double>(c.flow) * Cost(c.row, c.col);
    }
    plan.pivots = pivots;
    return plan;
  }

 private:
  double Cost(int i, int j) const { return cost_[static_cast<std::size_t>(i) * m_ + j]; }

  void AddBasic(int i, int j, std::int64_t flow) {
    cell_basis_[static_cast<std::size_t>(i) * m_ + j] = static_cast<int>(basis_.size());
    basis_.push_back({i, j, flow});
  }

  void NorthwestCorner(std::span<const std::int64_t> supply, std::span<const std::int64_t> demand) {
    std::vector<std::int64_t> s(supply.begin(), supply.end());
    std::vector<std::int64_t> d(demand.begin(), demand.end());
    int i = 0;
    int j = 0;
    while (static_cast<int>(basis_.size()) < n_ + m_ - 1) {
      const std::int64_t x = std::min(s[i], d[j]);
      AddBasic(i, j, x);
      s[i] -= x;
      d[j] -= x;
      if (i == n_ - 1) {
        ++j;
      } else if (j == m_ - 1) {
        ++i;
      } else if (s[i] == 0) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void BuildTree() {
    for (auto& a : adj_) a.clear();
    for (int e = 0; e < static_cast<int>(basis_.size()); ++e) {
      adj_[basis_[e].row].push_back(e);
      adj_[n_ + basis_[e].col].push_back(e);
    }
  }

  int Other(int e, int vertex) const {
    const BasicCell& c = basis_[e];
    return vertex == c.row ? n_ + c.col : c.row;
  }

  void ComputePotentials() {
    BuildTree();
    std::fill(visited_.begin(), visited_.end(), 0);
    std::vector<int> stack{0};
    visited_[0] = 1;
    u_[0] = 0.0;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int e : adj_[x]) {
        const int y = Other(e, x);
        if (visited_[y]) continue;
        visited_[y] = 1;
        const BasicCell& c = basis_[e];
        if (y >= n_) {
          v_[c.col] = Cost(c.row, c.col) - u_[c.row];
        } else {
          u_[c.row] = Cost(c.row, c.col) - v_[c.col];
        }
        stack.push_back(y);
      }
    }
  }

  double Reduced(int i, int j) const { return Cost(i, j) - u_[i] - v_[j]; }

  int MostImproving() const {
    int best = -1;
    double best_r = -kReducedCostTol;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) {
        if (cell_basis_[static_cast<std::size_t>(i) * m_ + j] >= 0) continue;
        const double r = Reduced(i, j);
        if (r < best_r) {
          best_r = r;
          best = i * m_ + j;
        }
      }
    }
    return best;
  }

  int FirstImproving() const {
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) {
        if (cell_basis_[static_cast<std::size_t>(i) * m_ + j] >= 0) continue;
        if (Reduced(i, j) < -kReducedCostTol) return i * m_ + j;
      }
    }
    return -1;
  }

  // Returns true when the pivot moved zero flow.
  bool Pivot(int row, int col, bool bland) {
    // Tree path from column `col` to row `row`.
    std::fill(visited_.begin(), visited_.end(), 0);
    std::vector<int> queue{row};
    visited_[row] = 1;
    parent_edge_[row] = -1;
    const int target = n_ + col;
    for (std::size_t q = 0; q < queue.size() && !visited_[target]; ++q) {
      const int x = queue[q];
      for (int e : adj_[x]) {
        const int y = Other(e, x);
        if (visited_[y]) continue;
        visited_[y] = 1;
        parent_edge_[y] = e;
        queue.push_back(y);
      }
    }
    std::vector<int> path;  // edges from col back to row; even positions lose flow
    for (int x = target; x != row;) {
      const int e = parent_edge_[x];
      path.push_back(e);
      x = Other(e, x);
    }
    std::int64_t theta = std::numeric_limits<std::int64_t>::max();
    int leave = -1;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const BasicCell& c = basis_[path[k]];
      const bool better = c.flow < theta;
      const bool tie_break =
          bland && leave >= 0 && c.flow == theta &&
          c.row * m_ + c.col < basis_[leave].row * m_ + basis_[leave].col;
      if (better || tie_break) {
        theta = c.flow;
        leave = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      basis_[path[k]].flow += (k % 2 == 0) ? -theta : theta;
    }
    BasicCell& out = basis_[leave];
    cell_basis_[static_cast<std::size_t>(out.row) * m_ + out.col] = -1;
    out = {row, col, theta};
    cell_basis_[static_cast<std::size_t>(row) * m_ + col] = leave;
    return theta == 0;
  }

  int n_;
  int m_;
  std::span<const double> cost_;
  std::vector<BasicCell> basis_;
  std::vector<int> cell_basis_;
  std::vector<double> u_;
  std::vector<double> v_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_edge_;
  std::vector<char> visited_;
};

}  // namespace

TransportPlan SolveTransport(std::span<const std::int64_t> supply,
                             std::span<const std::int64_t> demand, std::span<const double> cost) {
  const std::size_t n = supply.size();
  const std::size_t m = demand.size();
  if (n == 0 || m == 0) throw Error("transport: empty side");
  if (n > kMaxTransportSide || m > kMaxTransportSide) {
    throw Error("transport: problem " + std::to_string(n) + "x" + std::to_string(m) +
                " exceeds the " + std::to_string(kMaxTransportSide) + " limit");
  }
  if (cost.size() != n * m) throw Error("transport: cost matrix has wrong size");
  if (std::any_of(supply.begin(), supply.end(), [](std::int64_t s) { return s <= 0; }) ||
      std::any_of(demand.begin(), demand.end(), [](std::int64_t d) { return d <= 0; })) {
    throw Error("transport: supplies and demands must be positive");
  }
  if (std::accumulate(supply.begin(), supply.end(), std::int64_t{0}) !=
      std::accumulate(demand.begin(), demand.end(), std::int64_t{0})) {
    throw Error("transport: unbalanced problem");
  }
  if (std::any_of(cost.begin(), cost.end(), [](double c) { return !std::isfinite(c); })) {
    throw Error("transport: non-finite cost");
  }
  return TransportationSimplex(supply, demand, cost).Solve();
}

double UniformTransportCost(int rows, int cols, std::span<const double> cost) {
  std::vector<std::int64_t> supply(rows, cols);
  std::vector<std::int64_t> demand(cols, rows);
  const TransportPlan plan = SolveTransport(supply, demand, cost);
  return plan.cost / (static_cast<double>(rows) * cols);
}

}  // namespace mlprov
