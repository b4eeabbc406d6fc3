// Copyright 2026 The hmimo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <iosfwd>
#include <utility>
#include <vector>

#include "hmimo/corrmat.hpp"

namespace hmimo {

using UserSet = std::vector<int>;  // sorted ascending, no duplicates

// Bipartite BS-user graph. An edge (k, n) marks a link whose path gain is
// within a factor theta of the serving link.
class TopologyGraph {
 public:
  TopologyGraph() = default;
  TopologyGraph(int num_bs, std::vector<int> serving, std::vector<std::pair<int, int>> edges, double theta);

  int num_bs() const { return num_bs_; }
  int num_users() const { return static_cast<int>(serving_.size()); }
  double theta() const { return theta_; }

  int serving(int user) const { return serving_.at(static_cast<std::size_t>(user)); }
  const std::vector<int>& serving() const { return serving_; }
  // (user, bs) pairs sorted by user then BS.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge(int user, int bs) const;

  const UserSet& assoc_users(int bs) const { return assoc_.at(static_cast<std::size_t>(bs)); }
  const UserSet& neighbor_users(int bs) const { return neighbor_users_.at(static_cast<std::size_t>(bs)); }
  const std::vector<int>& neighbor_bs(int user) const { return neighbor_bs_.at(static_cast<std::size_t>(user)); }

  // "# K N theta" header then one "k n" line per edge.
  void write_edge_list(std::ostream& os) const;

 private:
  int num_bs_ = 0;
  double theta_ = 0.0;
  std::vector<int> serving_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<UserSet> assoc_;
  std::vector<UserSet> neighbor_users_;
  std::vector<std::vector<int>> neighbor_bs_;
};

// Edge (k, n), n != b_k, iff Tr(Theta_{k,b_k}) < theta * Tr(Theta_{k,n}).
// b_k is the set's serving hint when present, else the strongest link
// (lowest BS index on ties). theta is linear and must exceed 1.
TopologyGraph build_topology(const CorrelationSet& corr, double theta);

// S_bar_n = neighbor_users(n) intersected with `selected`, per BS.
std::vector<UserSet> scheduled_neighbors(const TopologyGraph& graph, const UserSet& selected);

// Users of `selected` served by `bs`.
UserSet served_subset(const TopologyGraph& graph, const UserSet& selected, int bs);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace hmimo
