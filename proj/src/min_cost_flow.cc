// Copyright 2026 The WProj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "min_cost_flow.h"

#include <algorithm>
#include <limits>

namespace wproj::internal {

MinCostFlow::MinCostFlow(int num_nodes)
    : num_nodes_(num_nodes), adjacency_(num_nodes) {}

int MinCostFlow::AddArc(int from, int to, double capacity, double cost) {
  const int id = static_cast<int>(arcs_.size() / 2);
  adjacency_[from].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({to, std::max(capacity, 0.0), cost});
  adjacency_[to].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({from, 0.0, -cost});
  return id;
}

double MinCostFlow::TotalCost() const {
  double total = 0.0;
  for (std::size_t a = 0; a < arcs_.size(); a += 2) {
    total += arcs_[a].cost * arcs_[a + 1].capacity;
  }
  return total;
}

double MinCostFlow::Solve(int source, int sink, double amount) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> potential(num_nodes_, 0.0);
  std::vector<double> dist(num_nodes_);
  std::vector<int> parent_arc(num_nodes_);
  std::vector<char> done(num_nodes_);
  double sent = 0.0;

  while (amount - sent > kCapacityEpsilon) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    dist[source] = 0.0;
    for (;;) {
      int u = -1;
      for (int v = 0; v < num_nodes_; ++v) {
        if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
      }
      if (u < 0) break;
      done[u] = 1;
      for (int a : adjacency_[u]) {
        const Arc& arc = arcs_[a];
        if (arc.capacity <= kCapacityEpsilon || done[arc.to]) continue;
        // Reduced costs are >= 0 up to rounding; clamp so Dijkstra stays sane.
        const double reduced =
            std::max(0.0, arc.cost + potential[u] - potential[arc.to]);
        if (dist[u] + reduced < dist[arc.to]) {
          dist[arc.to] = dist[u] + reduced;
          parent_arc[arc.to] = a;
        }
      }
    }
    if (dist[sink] == kInf) break;
    for (int v = 0; v < num_nodes_; ++v) {
      if (dist[v] < kInf) potential[v] += dist[v];
    }

    double push = amount - sent;
    for (int v = sink; v != source;) {
      const Arc& arc = arcs_[parent_arc[v]];
      push = std::min(push, arc.capacity);
      v = arcs_[parent_arc[v] ^ 1].to;
    }
    for (int v = sink; v != source;) {
      const int a = parent_arc[v];
      arcs_[a].capacity -= push;
      arcs_[a ^ 1].capacity += push;
      v = arcs_[a ^ 1].to;
    }
    sent += push;
    ++augmentations_;
  }
  return sent;
}

}  // namespace wproj::internal
