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

#ifndef WPROJ_SRC_MIN_COST_FLOW_H_
#define WPROJ_SRC_MIN_COST_FLOW_H_

#include <vector>

namespace wproj::internal {

// Successive shortest augmenting paths with Johnson potentials over real
// capacities. Arc costs must be nonnegative. Dijkstra runs in O(V^2), which
// suits the dense bipartite transport networks built here.
class MinCostFlow {
 public:
  // Residual capacities at or below this are treated as saturated.
  static constexpr double kCapacityEpsilon = 1e-14;

  explicit MinCostFlow(int num_nodes);

  // Returns the arc id.
  int AddArc(int from, int to, double capacity, double cost);

  // Pushes up to `amount` units from source to sink at minimum cost and
  // returns the amount actually sent.
  double Solve(int source, int sink, double amount);

  double Flow(int arc) const { return arcs_[2 * arc + 1].capacity; }
  double TotalCost() const;
  int augmentations() const { return augmentations_; }

 private:
  struct Arc {
    int to;
    double capacity;
    double cost;
  };

  int num_nodes_;
  std::vector<Arc> arcs_;  // arc 2a is forward, 2a + 1 its reverse.
  std::vector<std::vector<int>> adjacency_;
  int augmentations_ = 0;
};

}  // namespace wproj::internal

#endif  // WPROJ_SRC_MIN_COST_FLOW_H_
