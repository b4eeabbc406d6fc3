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

#include "hmimo/app/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hmimo/app/policy_io.hpp"
#include "hmimo/rng.hpp"
#include "hmimo/topology.hpp"

namespace hmimo::app {

using Json = nlohmann::ordered_json;

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error("cannot write '" + p.string() + "'");
  return os;
}

std::vector<double> to_vec(const RVector& v) { return {v.data(), v.data() + v.size()}; }

ComparisonRow row_from(const std::string& scheme, const MonteCarloReport& r, bool with_ici) {
  ComparisonRow row;
  row.scheme = scheme;
  row.sum_rate = with_ici ? r.sum_rate_ici_mean : r.sum_rate_mean;
  row.sum_rate_se = with_ici ? r.sum_rate_ici_se : r.sum_rate_se;
  row.worst_decile_rate = quantile(to_vec(with_ici ? r.rate_ici_mean : r.rate_mean), 0.1);
  row.intercell = r.intercell_mean.mean();
  return row;
}

Json report_json(const MonteCarloReport& r) {
  Json j;
  j["draws"] = r.draws;
  j["sum_rate"] = r.sum_rate_mean;
  j["sum_rate_se"] = r.sum_rate_se;
  j["sum_rate_with_ici"] = r.sum_rate_ici_mean;
  j["sum_rate_with_ici_se"] = r.sum_rate_ici_se;
  j["power"] = to_vec(r.power_mean);
  j["power_se"] = to_vec(r.power_se);
  return j;
}

}  // namespace

void apply_overrides(Scenario& s, const Overrides& o) {
  if (o.mode) s.mode = *o.mode;
  if (o.seed) s.seed = *o.seed;
  if (o.draws) {
    if (*o.draws < 1) throw ConfigError(s.source, 0, "--draws must be at least 1");
    s.draws = *o.draws;
  }
  if (o.threads) {
    if (*o.threads < 0) throw ConfigError(s.source, 0, "--threads must be >= 0");
    s.threads = *o.threads;
  }
}

double quantile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

PipelineResult run_pipeline(const Scenario& s, const std::string& out_dir, bool compare) {
  s.validate();
  CorrelationSet corr = scenario_correlations(s);
  try {
    corr.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(s.correlation_file.empty() ? s.source : s.correlation_file, 0, e.what());
  }
  const TopologyGraph graph = build_topology(corr, s.theta);
  const UtilityFunction u = s.utility();

  SchedulerEvaluator eval(corr, graph, s.nu, s.pc);
  AlgorithmEOptions opts;
  opts.mode = s.mode;
  opts.eps_stop = s.eps_stop;
  opts.max_outer = s.max_outer;
  const AlgorithmEResult alg = algorithm_e(eval, u, opts);
  alg.policy.validate(corr, graph, s.nu, s.pc);

  MonteCarloOptions mc;
  mc.draws = s.draws;
  mc.seed = derive_seed(s.seed, SeedStream::monte_carlo);
  mc.mode = s.mc_mode;
  mc.threads = s.threads;
  const MonteCarloReport rep = monte_carlo_policy(alg.policy, corr, graph, s.nu, mc);

  PipelineResult res;
  res.utility = alg.trace.back().utility;
  res.de_sum_rate = rep.de_rate.sum();
  res.mc_sum_rate = rep.sum_rate_mean;
  res.mc_sum_rate_with_ici = rep.sum_rate_ici_mean;
  res.warnings = alg.warnings;

  std::vector<MonteCarloReport> comp_reports;
  MonteCarloReport ffr;
  if (compare) {
    res.comparison.push_back(row_from("proposed", rep, true));
    ffr = ffr_baseline(corr, graph, s.pc, s.ffr_partitions, mc);
    res.comparison.push_back(row_from("ffr", ffr, true));
    for (double rho : s.comp_delay_rho) {
      comp_reports.push_back(comp_baseline(corr, graph, s.pc, s.comp_cluster_size, rho, mc));
      res.comparison.push_back(row_from("comp_rho_" + num(rho), comp_reports.back(), true));
    }
  }

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  {
    auto os = open_out(dir / "policy.json");
    write_policy_json(os, alg.policy, graph.num_bs(), corr.dim());
  }
  {
    auto os = open_out(dir / "trace.csv");
    os << "iter,U_E,support,certificate\n";
    for (const auto& t : alg.trace) {
      os << t.iter << ',' << num(t.utility) << ',' << t.support << ',' << (t.certificate ? num(*t.certificate) : "")
         << '\n';
    }
  }
  {
    auto os = open_out(dir / "validation.csv");
    os << "user,serving_bs,de_rate,full_de_rate,mc_rate,mc_rate_se,rel_err,mc_rate_with_ici,mc_rate_with_ici_se\n";
    for (int k = 0; k < graph.num_users(); ++k) {
      os << k << ',' << graph.serving(k) << ',' << num(rep.de_rate(k)) << ','
         << (rep.full_de_rate.size() ? num(rep.full_de_rate(k)) : "") << ',' << num(rep.rate_mean(k)) << ','
         << num(rep.rate_se(k)) << ',' << num(rep.rate_rel_err(k)) << ',' << num(rep.rate_ici_mean(k)) << ','
         << num(rep.rate_ici_se(k)) << '\n';
    }
  }
  if (compare) {
    auto os = open_out(dir / "comparison.csv");
    os << "scheme,sum_rate,sum_rate_se,worst_decile_rate,intercell_interference,seed\n";
    for (const auto& r : res.comparison) {
      os << r.scheme << ',' << num(r.sum_rate) << ',' << num(r.sum_rate_se) << ',' << num(r.worst_decile_rate) << ','
         << num(r.intercell) << ',' << s.seed << '\n';
    }
  }
  {
    Json j;
    j["scenario"] = s.name;
    j["seed"] = s.seed;
    j["seeds"] = Json{{"geometry", derive_seed(s.seed, SeedStream::geometry)},
                      {"correlation", derive_seed(s.seed, SeedStream::correlation)},
                      {"monte_carlo", mc.seed}};
    j["N"] = s.N;
    j["K"] = s.K;
    j["M"] = s.M;
    j["mode"] = scheduler_mode_name(s.mode);
    j["utility_kind"] = utility_kind_name(s.utility_kind);
    j["conversions"] = Json{{"pc_db", s.pc_db}, {"pc_linear", s.pc}, {"theta_db", s.theta_db}, {"theta_linear", s.theta}};
    j["nu"] = s.nu;
    j["edges"] = graph.edges();
    j["utility"] = res.utility;
    j["iterations"] = alg.trace.size();
    j["converged"] = alg.converged;
    Json cert;
    cert["available"] = alg.certificate.available;
    cert["kind"] = alg.certificate.note;
    if (alg.certificate.available) cert["value"] = alg.certificate.value;
    j["certificate"] = cert;
    j["policy_support"] = alg.policy.size();
    j["de_sum_rate"] = res.de_sum_rate;
    j["de_power"] = to_vec(rep.de_power);
    if (rep.full_de_rate.size()) {
      j["full_de_sum_rate"] = rep.full_de_rate.sum();
      j["full_de_power"] = to_vec(rep.full_de_power);
    } else {
      j["full_de_note"] = rep.full_de_note;
    }
    Json m = report_json(rep);
    m["mode"] = monte_carlo_mode_name(s.mc_mode);
    m["max_power_rel_err"] = rep.power_rel_err.maxCoeff();
    m["max_rate_rel_err"] = rep.rate_rel_err.maxCoeff();
    m["max_nulled_ici_ratio"] = rep.max_ici_ratio;
    j["monte_carlo"] = m;
    if (compare) {
      Json b;
      b["ffr"] = report_json(ffr);
      b["ffr"]["partitions"] = s.ffr_partitions;
      Json comps = Json::array();
      for (std::size_t i = 0; i < comp_reports.size(); ++i) {
        Json c = report_json(comp_reports[i]);
        c["cluster_size"] = s.comp_cluster_size;
        c["delay_rho"] = s.comp_delay_rho[i];
        comps.push_back(c);
      }
      b["comp"] = comps;
      j["baselines"] = b;
    }
    j["warnings"] = res.warnings;
    auto os = open_out(dir / "summary.json");
    os << j.dump(2) << '\n';
  }
  return res;
}

}  // namespace hmimo::app
