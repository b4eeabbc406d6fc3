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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "hmimo/app/pipeline.hpp"
#include "hmimo/det_equiv.hpp"
#include "hmimo/rng.hpp"
#include "hmimo/error.hpp"
#include "hmimo/harness.hpp"
#include "hmimo/scheduler.hpp"
#include "hmimo/topology.hpp"
#include "hmimo/waterfill.hpp"
#include "scenarios.hpp"

using namespace hmimo;

namespace {

// Pinned tolerances.
constexpr double kC1XiExpected = 0.938159;
constexpr double kC1XiTol = 1e-6;
constexpr double kC1MaxSeconds = 1.0;
constexpr double kC2RelTol = 0.10;
constexpr int kC2Draws = 500;
constexpr int kC2TrendSeeds = 20;
constexpr int kC2TrendDraws = 200;
constexpr double kC2MaxSeconds = 120.0;
constexpr double kC3IciRatio = 1e-16;
constexpr int kC4Scenarios = 50;
constexpr double kC4MonoTol = 1e-9;
constexpr double kC4Eps = 1e-6;
constexpr int kC4MaxOuter = 100;
constexpr int kC4TypicalIter = 30;
constexpr double kC5SlackTol = 1e-6;
constexpr double kC6Tol = 1e-8;
constexpr double kC7PowerTol = 1e-8;
constexpr double kC7StationarityTol = 1e-6;
constexpr double kC8RatioMax = 0.15;
constexpr int kC9Draws = 500;
constexpr double kC9PairedZ = 3.0;

const double kNu = 1e-2;
const double kTheta = db_to_linear(10.0);
const double kPc = db_to_linear(10.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Every user selected, powers water-filled with equal weights.
CompositeControl full_load_control(const CorrelationSet& corr, const TopologyGraph& graph, double nu, double pc) {
  SchedulerEvaluator eval(corr, graph, nu, pc);
  UserSet all;
  for (int k = 0; k < graph.num_users(); ++k) all.push_back(k);
  const auto wsr = eval.weighted_sum_rate(all, RVector::Constant(graph.num_users(), 1.0));
  return eval.build_control(wsr);
}

ControlPolicy single_policy(CompositeControl c) {
  ControlPolicy p;
  p.rates.push_back(control_rates(c));
  p.controls.push_back(std::move(c));
  p.probs.push_back(1.0);
  return p;
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const int M = 16;
  const std::vector<CMatrix> th{CMatrix::Identity(M, M)};
  const auto sol = solve_xi_fixed_point(th, kNu);
  const double secs = seconds_since(t0);
  const double err = std::abs(sol.xi(0) - kC1XiExpected);
  return {err <= kC1XiTol && secs < kC1MaxSeconds, fmt("xi=%.9f |err|=%.2e time=%.3fs", sol.xi(0), err, secs)};
}

struct C2Data {
  double max_rate_err = 0.0;
  double max_power_err = 0.0;
  double max_ici = 0.0;
  std::vector<double> trend;  // median relative error at M = 16, 32, 64
  double seconds = 0.0;
};

const C2Data& c2_data() {
  static const C2Data data = [] {
    C2Data d;
    const auto t0 = std::chrono::steady_clock::now();
    const auto corr = testing::two_cell_scenario(32, 6, 4, 2024);
    const auto graph = build_topology(corr, kTheta);
    const auto policy = single_policy(full_load_control(corr, graph, kNu, kPc));
    MonteCarloOptions mc;
    mc.draws = kC2Draws;
    mc.seed = 7;
    mc.mode = MonteCarloMode::mixture;
    const auto rep = monte_carlo_policy(policy, corr, graph, kNu, mc);
    d.max_rate_err = rep.rate_rel_err.maxCoeff();
    d.max_power_err = rep.power_rel_err.maxCoeff();
    d.max_ici = rep.max_ici_ratio;

    // Rank and load grow with M; error against the full equivalents.
    const int dims[3][3] = {{16, 3, 2}, {32, 6, 4}, {64, 12, 8}};
    for (const auto& dim : dims) {
      std::vector<double> errs;
      for (int s = 0; s < kC2TrendSeeds; ++s) {
        const auto c = testing::two_cell_scenario(dim[0], dim[1], dim[2], 5000 + static_cast<std::uint64_t>(s));
        const auto g = build_topology(c, kTheta);
        const auto pol = single_policy(full_load_control(c, g, kNu, kPc));
        MonteCarloOptions o;
        o.draws = kC2TrendDraws;
        o.seed = 100 + static_cast<std::uint64_t>(s);
        o.mode = MonteCarloMode::mixture;
        const auto r = monte_carlo_policy(pol, c, g, kNu, o);
        double e = 0.0;
        for (Eigen::Index k = 0; k < r.rate_mean.size(); ++k) {
          e += std::abs(r.rate_mean(k) - r.full_de_rate(k)) / r.full_de_rate(k);
        }
        errs.push_back(e / static_cast<double>(r.rate_mean.size()));
      }
      d.trend.push_back(median(errs));
    }
    d.seconds = seconds_since(t0);
    return d;
  }();
  return data;
}

Outcome criterion2() {
  const auto& d = c2_data();
  const bool trend = d.trend[0] > d.trend[1] && d.trend[1] > d.trend[2];
  const bool pass = d.max_rate_err <= kC2RelTol && d.max_power_err <= kC2RelTol && trend && d.seconds < kC2MaxSeconds;
  std::ostringstream os;
  os << fmt("max rate err=%.4f max power err=%.4f", d.max_rate_err, d.max_power_err)
     << fmt(" median err M=16/32/64: %.4f/%.4f/%.4f", d.trend[0], d.trend[1], d.trend[2])
     << fmt(" time=%.1fs", d.seconds);
  return {pass, os.str()};
}

Outcome criterion3() {
  const auto& d = c2_data();
  return {d.max_ici <= kC3IciRatio, fmt("max ICI/(signal+1)=%.3e over %.0f draws", d.max_ici, static_cast<double>(kC2Draws))};
}

struct DeskRun {
  AlgorithmEResult greedy;
  AlgorithmEResult exhaustive;
  bool greedy_wsr_ok = true;
  double worst_wsr_excess = -INFINITY;
  double worst_kkt_power = 0.0;
  double worst_kkt_station = 0.0;
};

double max_step_drop(const AlgorithmEResult& r) {
  double worst = 0.0;
  for (std::size_t i = 1; i < r.trace.size(); ++i) worst = std::max(worst, r.trace[i - 1].utility - r.trace[i].utility);
  return worst;
}

const std::vector<DeskRun>& desk_runs() {
  static const std::vector<DeskRun> runs = [] {
    std::vector<DeskRun> out;
    for (int s = 1; s <= kC4Scenarios; ++s) {
      const auto corr = testing::desk_scenario(static_cast<std::uint64_t>(s));
      const auto graph = build_topology(corr, kTheta);
      SchedulerEvaluator eval(corr, graph, kNu, kPc);
      const auto u = make_utility(UtilityKind::pfs, graph.num_users());
      AlgorithmEOptions opts;
      opts.eps_stop = kC4Eps;
      opts.max_outer = kC4MaxOuter;
      DeskRun run;
      opts.mode = SchedulerMode::greedy;
      run.greedy = algorithm_e(eval, u, opts);
      opts.mode = SchedulerMode::exhaustive;
      run.exhaustive = algorithm_e(eval, u, opts);

      // Greedy vs exhaustive weighted sum rate at every mu visited by either run.
      std::vector<RVector> mus{u.weights};
      for (const auto* r : {&run.greedy, &run.exhaustive}) {
        for (const auto& t : r->trace) mus.push_back(utility_value_grad(u, t.mean_rate).grad);
      }
      for (const auto& mu : mus) {
        const double g = procedure_w_greedy(eval, mu).wsr.value;
        const double x = procedure_w_star(eval, mu).wsr.value;
        run.worst_wsr_excess = std::max(run.worst_wsr_excess, g - x);
        if (g > x) run.greedy_wsr_ok = false;

        // Water-filling KKT at every BS of the full-load selection.
        UserSet all;
        for (int k = 0; k < graph.num_users(); ++k) all.push_back(k);
        const auto w = eval.weighted_sum_rate(all, mu);
        for (int n = 0; n < graph.num_bs(); ++n) {
          const auto& un = graph.assoc_users(n);
          RVector m(static_cast<Eigen::Index>(un.size()));
          RVector xi(m.size());
          for (std::size_t i = 0; i < un.size(); ++i) {
            m(static_cast<Eigen::Index>(i)) = mu(un[i]);
            xi(static_cast<Eigen::Index>(i)) = w.xi(un[i]);
          }
          const auto wf = waterfill(m, xi, corr.dim(), kPc);
          if (wf.active == 0) continue;
          run.worst_kkt_power =
              std::max(run.worst_kkt_power, std::abs(waterfill_power(wf.power, xi, corr.dim()) - kPc) / kPc);
          for (Eigen::Index i = 0; i < m.size(); ++i) {
            if (wf.power(i) > 0.0) {
              const double r = std::abs(m(i) * corr.dim() * xi(i) / (1.0 + wf.power(i)) - wf.lambda);
              run.worst_kkt_station = std::max(run.worst_kkt_station, r);
            }
          }
        }
      }
      out.push_back(std::move(run));
    }
    return out;
  }();
  return runs;
}

Outcome criterion4() {
  const auto& runs = desk_runs();
  double worst_drop = 0.0;
  int max_iter = 0;
  bool all_converged = true;
  std::vector<double> iters;
  for (const auto& r : runs) {
    for (const auto* a : {&r.greedy, &r.exhaustive}) {
      worst_drop = std::max(worst_drop, max_step_drop(*a));
      max_iter = std::max(max_iter, static_cast<int>(a->trace.size()));
      all_converged = all_converged && a->converged;
      iters.push_back(static_cast<double>(a->trace.size()));
    }
  }
  const double med = median(iters);
  const bool pass = worst_drop <= kC4MonoTol && all_converged && max_iter <= kC4MaxOuter && med <= kC4TypicalIter;
  return {pass, fmt("worst step drop=%.2e max iterations=%.0f median iterations=%.1f all converged=%.0f",
                    worst_drop, max_iter, med, all_converged ? 1.0 : 0.0)};
}

Outcome criterion5() {
  double worst = -INFINITY;
  for (const auto& r : desk_runs()) worst = std::max(worst, r.exhaustive.certificate.value);
  return {worst <= kC5SlackTol, fmt("max exhaustive slack=%.3e over %.0f scenarios", worst, static_cast<double>(kC4Scenarios))};
}

Outcome criterion6() {
  double worst = -INFINITY;
  bool wsr_ok = true;
  double worst_excess = -INFINITY;
  for (const auto& r : desk_runs()) {
    const double ug = r.greedy.trace.back().utility;
    const double ux = r.exhaustive.trace.back().utility;
    worst = std::max(worst, ux - r.greedy.certificate.value - kC6Tol - ug);
    wsr_ok = wsr_ok && r.greedy_wsr_ok;
    worst_excess = std::max(worst_excess, r.worst_wsr_excess);
  }
  return {worst <= 0.0 && wsr_ok,
          fmt("max(U_exh - bound - tol - U_greedy)=%.3e max greedy-minus-exhaustive WSR=%.3e", worst, worst_excess)};
}

Outcome criterion7() {
  double p = 0.0;
  double s = 0.0;
  for (const auto& r : desk_runs()) {
    p = std::max(p, r.worst_kkt_power);
    s = std::max(s, r.worst_kkt_station);
  }
  return {p <= kC7PowerTol && s <= kC7StationarityTol,
          fmt("max relative power residual=%.2e max stationarity residual=%.2e", p, s)};
}

Outcome criterion8() {
  const auto corr = testing::single_cell_scenario(16, 4, 3, 31);
  const auto graph = build_topology(corr, kTheta);
  RVector p(3);
  p << 4.0, 8.0, 12.0;
  const auto control = make_control(corr, graph, {0, 1, 2}, p);
  std::vector<double> err;
  for (double nu : {1e-2, 1e-3, 1e-4}) {
    const auto full = full_de(control, corr, graph, nu);
    double e = 0.0;
    for (int k = 0; k < 3; ++k) e = std::max(e, std::abs(full.rate_hat(k) - std::log1p(p(k))));
    err.push_back(e);
  }
  const double r1 = err[1] / err[0];
  const double r2 = err[2] / err[1];
  return {r1 <= kC8RatioMax && r2 <= kC8RatioMax,
          fmt("errors %.3e %.3e %.3e ratios %.3f", err[0], err[1], err[2], r1) + fmt(" %.3f", r2)};
}

const std::string kDeskConfig = std::string(HMIMO_SOURCE_DIR) + "/configs/desk.yaml";

Outcome criterion9() {
  app::Scenario s = app::load_scenario(kDeskConfig);
  s.draws = kC9Draws;
  const auto corr = app::scenario_correlations(s);
  const auto graph = build_topology(corr, s.theta);
  SchedulerEvaluator eval(corr, graph, s.nu, s.pc);
  AlgorithmEOptions opts;
  opts.mode = s.mode;
  const auto alg = algorithm_e(eval, s.utility(), opts);
  MonteCarloOptions mc;
  mc.draws = s.draws;
  mc.seed = derive_seed(s.seed, SeedStream::monte_carlo);
  mc.mode = s.mc_mode;
  const auto prop = monte_carlo_policy(alg.policy, corr, graph, s.nu, mc);
  const auto ffr = ffr_baseline(corr, graph, s.pc, s.ffr_partitions, mc);
  const auto c1 = comp_baseline(corr, graph, s.pc, s.comp_cluster_size, 1.0, mc);
  const auto c0 = comp_baseline(corr, graph, s.pc, s.comp_cluster_size, 0.0, mc);

  // Paired one-sided test on per-draw sum rates (same channels).
  std::vector<double> diff;
  for (std::size_t d = 0; d < c1.sum_rate_ici_draws.size(); ++d) {
    diff.push_back(c1.sum_rate_ici_draws[d] - c0.sum_rate_ici_draws[d]);
  }
  double mean = 0.0;
  for (double x : diff) mean += x;
  mean /= static_cast<double>(diff.size());
  double var = 0.0;
  for (double x : diff) var += (x - mean) * (x - mean);
  var /= static_cast<double>(diff.size() - 1);
  const double z = mean / std::sqrt(var / static_cast<double>(diff.size()));

  const double de = prop.de_rate.sum();
  const double validated = prop.sum_rate_ici_mean;
  const bool pass = validated >= ffr.sum_rate_ici_mean && de >= ffr.sum_rate_ici_mean && z >= kC9PairedZ;
  std::ostringstream os;
  os << fmt("proposed MC (with residual ICI)=%.3f DE=%.3f FFR=%.3f", validated, de, ffr.sum_rate_ici_mean)
     << fmt(" CoMP rho=1: %.3f rho=0: %.3f paired z=%.1f", c1.sum_rate_ici_mean, c0.sum_rate_ici_mean, z);
  return {pass, os.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion10() {
  const auto root = std::filesystem::temp_directory_path() /
                    ("hmimo_acceptance_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  app::Scenario s = app::load_scenario(kDeskConfig);
  const std::vector<int> threads{1, 1, 4};
  std::vector<std::filesystem::path> dirs;
  for (std::size_t i = 0; i < threads.size(); ++i) {
    s.threads = threads[i];
    dirs.push_back(root / ("run" + std::to_string(i)));
    app::run_pipeline(s, dirs.back().string(), true);
  }
  int files = 0;
  bool same = true;
  for (const char* f : {"policy.json", "trace.csv", "validation.csv", "summary.json", "comparison.csv"}) {
    const std::string ref = slurp(dirs[0] / f);
    same = same && !ref.empty();
    for (std::size_t i = 1; i < dirs.size(); ++i) same = same && slurp(dirs[i] / f) == ref;
    ++files;
  }
  std::filesystem::remove_all(root);
  return {same, fmt("%.0f files compared across 3 runs (threads 1, 1, 4): ", files) + (same ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 fixed-point closed form", criterion1},
      {"C2 deterministic-equivalent accuracy", criterion2},
      {"C3 zero inter-cell interference", criterion3},
      {"C4 monotone convergence", criterion4},
      {"C5 exhaustive optimality slack", criterion5},
      {"C6 greedy quality bound", criterion6},
      {"C7 water-filling KKT", criterion7},
      {"C8 O(nu) consistency of full equivalents", criterion8},
      {"C9 directional baseline comparison", criterion9},
      {"C10 determinism", criterion10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
