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

#include <doctest.h>

#include <cmath>

#include "hmimo/error.hpp"
#include "hmimo/harness.hpp"
#include "hmimo/rng.hpp"
#include "scenarios.hpp"

using namespace hmimo;

namespace {

ControlPolicy single_control_policy(const CorrelationSet& corr, const TopologyGraph& g, const UserSet& s,
                                    const RVector& p) {
  ControlPolicy policy;
  policy.controls.push_back(make_control(corr, g, s, p));
  policy.probs.push_back(1.0);
  policy.rates.push_back(control_rates(policy.controls.back()));
  return policy;
}

}  // namespace

TEST_CASE("policy Monte Carlo") {
  SUBCASE("zero power gives zero rate and power") {
    const auto corr = testing::two_cell_scenario(16, 4, 3, 1);
    const auto g = build_topology(corr, 10.0);
    const auto r = monte_carlo_policy(single_control_policy(corr, g, {0, 1, 3}, RVector::Zero(6)), corr, g, 0.01,
                                      {50, 1, MonteCarloMode::sampled, 1});
    CHECK(r.rate_mean.cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.power_mean.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single user at M = 32 tracks its deterministic equivalent") {
    const auto corr = testing::single_cell_scenario(32, 8, 1, 12);
    const auto g = build_topology(corr, 10.0);
    const auto r = monte_carlo_policy(single_control_policy(corr, g, {0}, RVector::Constant(1, 10.0)), corr, g,
                                      0.01, {500, 3, MonteCarloMode::sampled, 1});
    CHECK(std::abs(r.rate_mean(0) - std::log1p(10.0)) <= 0.10 * std::log1p(10.0));
    CHECK(r.de_rate(0) == doctest::Approx(std::log1p(10.0)));
  }
  SUBCASE("results do not depend on the thread count") {
    const auto corr = testing::desk_scenario(2);
    const auto g = build_topology(corr, 10.0);
    SchedulerEvaluator eval(corr, g, 0.01, 10.0);
    const auto res = algorithm_e(eval, make_utility(UtilityKind::pfs, 6));
    for (auto mode : {MonteCarloMode::sampled, MonteCarloMode::mixture}) {
      const auto a = monte_carlo_policy(res.policy, corr, g, 0.01, {64, 9, mode, 1});
      const auto b = monte_carlo_policy(res.policy, corr, g, 0.01, {64, 9, mode, 3});
      CHECK((a.rate_mean - b.rate_mean).cwiseAbs().maxCoeff() == 0.0);
      CHECK(a.sum_rate_ici_draws == b.sum_rate_ici_draws);
      CHECK(a.sum_rate_se == b.sum_rate_se);
    }
  }
  CHECK_THROWS_AS(parse_monte_carlo_mode("stratified"), ParameterError);
}

TEST_CASE("FFR baseline") {
  SUBCASE("one cell, one partition is single-cell ZF") {
    const int M = 8, K = 3;
    const double pc = 10.0;
    const auto corr = testing::single_cell_scenario(M, 6, K, 14);
    const auto g = build_topology(corr, 10.0);
    const int draws = 40;
    const auto r = ffr_baseline(corr, g, pc, 1, {draws, 5, MonteCarloMode::sampled, 1});
    const ChannelSampler sampler(corr);
    RVector oracle = RVector::Zero(K);
    for (int d = 0; d < draws; ++d) {
      Rng rng(derive_seed(5, static_cast<std::uint64_t>(d)));
      const auto h = sampler.sample(rng);
      const CMatrix hs = stack_channels(h, 1, {0, 1, 2}, 0);
      const CMatrix ginv = (hs * hs.adjoint()).inverse();
      for (int k = 0; k < K; ++k) oracle(k) += std::log1p(pc / K / ginv(k, k).real()) / draws;
    }
    CHECK((r.rate_mean - oracle).cwiseAbs().maxCoeff() <= 1e-5 * oracle.maxCoeff());
    CHECK(r.max_ici_ratio <= 1e-6);
  }
  SUBCASE("one partition per cell removes inter-cell interference") {
    const auto corr = testing::two_cell_scenario(16, 4, 3, 6);
    const auto g = build_topology(corr, 10.0);
    const auto colors = ffr_coloring(g, 2);
    CHECK(colors[0] != colors[1]);
    const auto r = ffr_baseline(corr, g, 10.0, 2, {30, 1, MonteCarloMode::sampled, 1});
    CHECK(r.intercell_mean.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("more users than antennas is rejected") {
    const auto corr = testing::single_cell_scenario(4, 2, 5, 1);
    const auto g = build_topology(corr, 10.0);
    CHECK_THROWS_AS(ffr_baseline(corr, g, 10.0, 1, {10, 1, MonteCarloMode::sampled, 1}), ValidationError);
  }
}

TEST_CASE("CoMP baseline") {
  const auto corr = testing::two_cell_scenario(16, 8, 3, 8, 0.5, 0.2);
  const auto g = build_topology(corr, 10.0);
  SUBCASE("one global cluster with perfect CSI has no inter-user interference") {
    const auto r = comp_baseline(corr, g, 10.0, 2, 1.0, {50, 2, MonteCarloMode::sampled, 1});
    CHECK(r.max_ici_ratio <= 1e-10);
    CHECK(r.power_mean.maxCoeff() <= 10.0 * (1.0 + 1e-12));
  }
  SUBCASE("stale CSI loses rate") {
    const auto fresh = comp_baseline(corr, g, 10.0, 2, 1.0, {200, 2, MonteCarloMode::sampled, 1});
    const auto stale = comp_baseline(corr, g, 10.0, 2, 0.0, {200, 2, MonteCarloMode::sampled, 1});
    CHECK(fresh.sum_rate_mean > stale.sum_rate_mean);
  }
  CHECK_THROWS_AS(comp_baseline(corr, g, 10.0, 2, 1.5), ParameterError);
  CHECK_THROWS_AS(comp_baseline(corr, g, 10.0, 0, 1.0), ParameterError);
}
