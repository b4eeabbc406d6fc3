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

// User selection, power allocation and time-sharing over composite controls.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hmimo/det_equiv.hpp"
#include "hmimo/precoder.hpp"
#include "hmimo/utility.hpp"

namespace hmimo {

enum class SchedulerMode { exhaustive, greedy };

SchedulerMode parse_scheduler_mode(const std::string& name);
std::string scheduler_mode_name(SchedulerMode mode);

inline constexpr int kMaxEnumerationUsers = 20;
inline constexpr double kTieTol = 1e-12;

struct WsrResult {
  UserSet selected;
  double value = 0.0;  // sum_k mu_k log(1 + p_k)
  RVector xi;          // per user
  RVector power;       // per user
};

// Evaluates R(S) for a fixed scenario. Gains xi depend only on (n, S_n, S_bar_n),
// not on mu, so they are memoized across calls. Not thread-safe.
class SchedulerEvaluator {
 public:
  SchedulerEvaluator(const CorrelationSet& corr, const TopologyGraph& graph, double nu, double pc,
                     FixedPointOptions fp = {});

  const CorrelationSet& corr() const { return *corr_; }
  const TopologyGraph& graph() const { return *graph_; }
  double nu() const { return nu_; }
  double pc() const { return pc_; }
  int num_users() const { return graph_->num_users(); }

  // Throws ConvergenceError when a fixed point fails.
  WsrResult weighted_sum_rate(const UserSet& selected, const RVector& mu);

  CompositeControl build_control(const WsrResult& wsr) const;

  std::size_t cache_size() const { return cache_.size(); }

 private:
  struct Gains {
    bool ok = false;
    RVector xi;
    std::string error;
    int iterations = 0;
    double residual = 0.0;
  };
  const Gains& gains(int bs, const UserSet& served, const UserSet& blocked);

  const CorrelationSet* corr_;
  const TopologyGraph* graph_;
  double nu_;
  double pc_;
  FixedPointOptions fp_;
  std::map<std::tuple<int, UserSet, UserSet>, Gains> cache_;
};

WsrResult weighted_sum_rate(const UserSet& selected, const RVector& mu, const CorrelationSet& corr,
                            const TopologyGraph& graph, double nu, double pc);

// log(1 + p_k) for selected users, 0 elsewhere.
RVector control_rates(const CompositeControl& control);

struct Selection {
  CompositeControl control;
  WsrResult wsr;
  RVector rates;
};

// Exhaustive search; ties within kTieTol go to the lexicographically smallest subset.
Selection procedure_w_star(SchedulerEvaluator& eval, const RVector& mu);
// Greedy: add the best strictly improving user (ties to the lowest index).
// Candidates whose fixed point fails are skipped and reported in warnings.
Selection procedure_w_greedy(SchedulerEvaluator& eval, const RVector& mu, std::vector<std::string>* warnings = nullptr);
Selection procedure_w(SchedulerEvaluator& eval, const RVector& mu, SchedulerMode mode,
                      std::vector<std::string>* warnings = nullptr);

struct ControlPolicy {
  std::vector<CompositeControl> controls;
  std::vector<double> probs;
  std::vector<RVector> rates;  // DE rate vector of each control

  RVector mean_rate() const;
  std::size_t size() const { return controls.size(); }
  // Simplex, support <= K, control invariants and DE power <= P_c + 1e-6.
  void validate(const CorrelationSet& corr, const TopologyGraph& graph, double nu, double pc) const;
};

struct QOptions {
  double grad_tol = 1e-8;
  int max_iter = 10000;
  double snap = 1e-10;
};

struct QResult {
  std::vector<double> q;
  double utility = 0.0;
  int iterations = 0;
  double grad_map_norm = 0.0;
  bool converged = false;
};

// Maximizes U(sum_j q_j r_j) over the simplex. `start` (optional) must lie on the simplex.
QResult procedure_q(const std::vector<RVector>& rates, const UtilityFunction& u, const QOptions& opts = {},
                    const std::vector<double>& start = {});

// Removes controls until at most K remain without lowering any mixed rate.
std::vector<double> reduce_support(const std::vector<RVector>& rates, std::vector<double> q);

struct Certificate {
  bool available = false;
  double value = 0.0;
  std::string note;
};

Certificate optimality_certificate(const ControlPolicy& policy, const UtilityFunction& u, SchedulerEvaluator& eval,
                                   SchedulerMode mode);

struct TraceRecord {
  int iter = 0;
  double utility = 0.0;
  int support = 0;
  std::optional<double> certificate;
  RVector mean_rate;
  // Diagnostics of the step that produced this iterate (unset at iter 0).
  double fw_gap = 0.0;              // mu^T (r_new - rbar_prev)
  double line_search_utility = 0.0; // best U((1-eta) rbar_prev + eta r_new)
  RVector new_rates;
};

struct AlgorithmEOptions {
  SchedulerMode mode = SchedulerMode::greedy;
  double eps_stop = 1e-6;
  int max_outer = 100;
  QOptions q;
};

struct AlgorithmEResult {
  ControlPolicy policy;
  std::vector<TraceRecord> trace;
  Certificate certificate;
  bool converged = false;
  std::vector<std::string> warnings;
};

AlgorithmEResult algorithm_e(SchedulerEvaluator& eval, const UtilityFunction& u, const AlgorithmEOptions& opts = {});

}  // namespace hmimo
