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

// generate -> topology -> optimize -> validate -> emit.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hmimo/app/scenario.hpp"

namespace hmimo::app {

struct Overrides {
  std::optional<SchedulerMode> mode;
  std::optional<std::uint64_t> seed;
  std::optional<int> draws;
  std::optional<int> threads;
};

void apply_overrides(Scenario& s, const Overrides& o);

struct ComparisonRow {
  std::string scheme;
  double sum_rate = 0.0;
  double sum_rate_se = 0.0;
  double worst_decile_rate = 0.0;
  double intercell = 0.0;  // mean received inter-cell power per user
};

struct PipelineResult {
  double utility = 0.0;
  double de_sum_rate = 0.0;
  double mc_sum_rate = 0.0;           // intra-cell interference only
  double mc_sum_rate_with_ici = 0.0;  // every other BS counted as noise
  std::vector<ComparisonRow> comparison;
  std::vector<std::string> warnings;
};

// Writes policy.json, trace.csv, validation.csv, summary.json and, when
// `compare` is set, comparison.csv into out_dir (created if missing).
PipelineResult run_pipeline(const Scenario& s, const std::string& out_dir, bool compare);

// Type-7 quantile of a sample.
double quantile(std::vector<double> v, double p);

}  // namespace hmimo::app
