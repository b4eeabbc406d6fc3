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

// Scenario configuration (YAML). See configs/README.md for the schema.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmimo/error.hpp"
#include "hmimo/harness.hpp"
#include "hmimo/layout.hpp"
#include "hmimo/scheduler.hpp"

namespace hmimo::app {

class ConfigError : public Error {
 public:
  // line is 1-based; 0 when unknown.
  ConfigError(const std::string& file, int line, const std::string& what)
      : Error(file + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Scenario {
  std::string name = "scenario";
  std::string source;  // config path

  int N = 0;
  int K = 0;
  int M = 0;
  int rank = 4;

  double pc_db = 10.0;
  double pc = 10.0;  // linear
  double nu = 1e-2;
  double theta_db = 10.0;
  double theta = 10.0;  // linear

  UtilityKind utility_kind = UtilityKind::pfs;
  double alpha = 1.0;
  double epsilon = 1e-4;
  std::vector<double> weights;  // empty: 1/K

  LayoutSpec geometry;
  std::string correlation_file;  // resolved path; empty: generate from geometry

  std::uint64_t seed = 1;
  SchedulerMode mode = SchedulerMode::greedy;
  double eps_stop = 1e-6;
  int max_outer = 100;

  int draws = 500;
  MonteCarloMode mc_mode = MonteCarloMode::mixture;
  int threads = 0;

  int ffr_partitions = 0;  // 0: min(3, N)
  int comp_cluster_size = 0;  // 0: N
  std::vector<double> comp_delay_rho{1.0};

  UtilityFunction utility() const;
  // Cross-field checks (e.g. exhaustive mode needs K <= 20). Throws ConfigError.
  void validate() const;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& name = "<string>");

CorrelationSet scenario_correlations(const Scenario& s);

}  // namespace hmimo::app
