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

#include "hmimo/topology.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "hmimo/error.hpp"

namespace hmimo {

TopologyGraph::TopologyGraph(int num_bs, std::vector<int> serving_bs, std::vector<std::pair<int, int>> edges,
                             double theta)
    : num_bs_(num_bs), theta_(theta), serving_(std::move(serving_bs)), edges_(std::move(edges)) {
  const int K = num_users();
  for (int k = 0; k < K; ++k) {
    const int b = serving_[static_cast<std::size_t>(k)];
    if (b < 0 || b >= num_bs_) throw ParameterError("serving BS out of range for user " + std::to_string(k));
    edges_.emplace_back(k, b);
  }
  for (const auto& [k, n] : edges_) {
    if (k < 0 || k >= K || n < 0 || n >= num_bs_) throw ParameterError("edge index out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  assoc_.assign(static_cast<std::size_t>(num_bs_), {});
  neighbor_users_.assign(static_cast<std::size_t>(num_bs_), {});
  neighbor_bs_.assign(static_cast<std::size_t>(K), {});
  for (int k = 0; k < K; ++k) assoc_[static_cast<std::size_t>(serving(k))].push_back(k);
  for (const auto& [k, n] : edges_) {
    if (n == serving(k)) continue;
    neighbor_users_[static_cast<std::size_t>(n)].push_back(k);
    neighbor_bs_[static_cast<std::size_t>(k)].push_back(n);
  }
  for (auto& u : neighbor_users_) std::sort(u.begin(), u.end());
}

bool TopologyGraph::has_edge(int user, int bs) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(user, bs));
}

void TopologyGraph::write_edge_list(std::ostream& os) const {
  os << "# K=" << num_users() << " N=" << num_bs_ << " theta=" << theta_ << '\n';
  for (const auto& [k, n] : edges_) os << k << ' ' << n << '\n';
}

TopologyGraph build_topology(const CorrelationSet& corr, double theta) {
  if (!(theta > 1.0)) throw ParameterError("topology threshold theta must exceed 1 (linear scale)");
  const int K = corr.num_users();
  const int N = corr.num_bs();
  std::vector<int> serving(static_cast<std::size_t>(K));
  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k < K; ++k) {
    int b = corr.serving_hint(k);
    if (b < 0) {
      b = 0;
      for (int n = 1; n < N; ++n) {
        if (corr.at(k, n).trace() > corr.at(k, b).trace()) b = n;
      }
    } else if (b >= N) {
      throw ParameterError("serving hint out of range for user " + std::to_string(k));
    }
    serving[static_cast<std::size_t>(k)] = b;
    const double direct = corr.at(k, b).trace();
    for (int n = 0; n < N; ++n) {
      if (n != b && direct < theta * corr.at(k, n).trace()) edges.emplace_back(k, n);
    }
  }
  return TopologyGraph(N, std::move(serving), std::move(edges), theta);
}

std::vector<UserSet> scheduled_neighbors(const TopologyGraph& graph, const UserSet& selected) {
  for (int k : selected) {
    if (k < 0 || k >= graph.num_users()) throw ParameterError("unknown user index " + std::to_string(k));
  }
  UserSet sorted = selected;
  std::sort(sorted.begin(), sorted.end());
  std::vector<UserSet> out(static_cast<std::size_t>(graph.num_bs()));
  for (int n = 0; n < graph.num_bs(); ++n) {
    const UserSet& nb = graph.neighbor_users(n);
    std::set_intersection(nb.begin(), nb.end(), sorted.begin(), sorted.end(),
                          std::back_inserter(out[static_cast<std::size_t>(n)]));
  }
  return out;
}

UserSet served_subset(const TopologyGraph& graph, const UserSet& selected, int bs) {
  UserSet out;
  for (int k : selected) {
    if (graph.serving(k) == bs) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hmimo
