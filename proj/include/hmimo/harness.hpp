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

// Monte Carlo validation of policies and the FFR / clustered-CoMP baselines.

#include <cstdint>
#include <string>
#include <vector>

#include "hmimo/scheduler.hpp"

namespace hmimo {

enum class MonteCarloMode {
  sampled,  // draw one control per slot with probability q
  mixture,  // every control on every draw, weighted by q
};

MonteCarloMode parse_monte_carlo_mode(const std::string& name);
std::string monte_carlo_mode_name(MonteCarloMode mode);

struct MonteCarloOptions {
  int draws = 500;
  std::uint64_t seed = 1;
  MonteCarloMode mode = MonteCarloMode::sampled;
  int threads = 0;  // 0: hardware concurrency
};

struct MonteCarloReport {
  int draws = 0;
  std::uint64_t seed = 0;

  RVector rate_mean, rate_se;          // per user, intra-cell interference only
  RVector rate_ici_mean, rate_ici_se;  // per user, all other BSs counted as noise
  RVector intercell_mean;              // per user, received inter-cell power
  RVector power_mean, power_se;        // per BS
  double sum_rate_mean = 0.0, sum_rate_se = 0.0;
  double sum_rate_ici_mean = 0.0, sum_rate_ici_se = 0.0;
  std::vector<double> sum_rate_ici_draws;  // per draw, for paired comparisons
  // Policies: max over draws and scheduled neighbor users of nulled ICI / (signal + 1).
  // Baselines: max intra-cell (FFR) or intra-cluster (CoMP) interference / (signal + 1).
  double max_ici_ratio = 0.0;

  // Deterministic equivalents mixed over the policy (empty for baselines).
  RVector de_rate, de_power;
  RVector full_de_rate, full_de_power;
  std::string full_de_note;  // non-empty when the full equivalents are unavailable
  RVector rate_rel_err, power_rel_err;
};

MonteCarloReport monte_carlo_policy(const ControlPolicy& policy, const CorrelationSet& corr,
                                    const TopologyGraph& graph, double nu, const MonteCarloOptions& opts = {});

// Partition index per BS from greedy coloring of the BS adjacency induced by
// shared neighbor users; BSs take the least used admissible color.
std::vector<int> ffr_coloring(const TopologyGraph& graph, int partitions);

// Each cell serves all of its users by ZF on its partition (bandwidth 1/P,
// power spectral density boosted by P), equal power P_c / |U_n|.
MonteCarloReport ffr_baseline(const CorrelationSet& corr, const TopologyGraph& graph, double pc, int partitions,
                              const MonteCarloOptions& opts = {});

inline constexpr double kZfNu = 1e-8;

// Consecutive BS clusters of size min(cluster_size, N). Cooperative ZF over the
// cluster with equal column powers, scaled so the most loaded BS uses P_c.
// Precoders see rho h + sqrt(1 - rho^2) h_indep; rates use h.
MonteCarloReport comp_baseline(const CorrelationSet& corr, const TopologyGraph& graph, double pc, int cluster_size,
                               double delay_rho, const MonteCarloOptions& opts = {});

}  // namespace hmimo
