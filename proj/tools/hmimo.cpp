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

// Command-line front end: `hmimo run <config>` and `hmimo compare <config>`.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "hmimo/app/pipeline.hpp"
#include "hmimo/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Statistical multi-cell massive MIMO scheduler"};
  cli.require_subcommand(1);
  std::string config;
  std::string out_dir = "out";
  std::string mode;
  std::uint64_t seed = 0;
  int draws = 0;
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config, "Scenario YAML file")->required();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--mode", mode, "Selection procedure")->check(CLI::IsMember({"exhaustive", "greedy"}));
    sub->add_option("--seed", seed, "Master seed (overrides the config)");
    sub->add_option("--draws", draws, "Monte Carlo draws (overrides the config)")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "Monte Carlo worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  };
  CLI::App* run = cli.add_subcommand("run", "Optimize the policy and validate it by Monte Carlo");
  CLI::App* compare = cli.add_subcommand("compare", "As run, plus FFR and clustered-CoMP baselines");
  add_common(run);
  add_common(compare);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = run->parsed() ? run : compare;
  try {
    hmimo::app::Scenario s = hmimo::app::load_scenario(config);
    hmimo::app::Overrides o;
    if (!mode.empty()) o.mode = hmimo::parse_scheduler_mode(mode);
    if (sub->count("--seed")) o.seed = seed;
    if (sub->count("--draws")) o.draws = draws;
    if (sub->count("--threads")) o.threads = threads;
    hmimo::app::apply_overrides(s, o);
    const auto res = hmimo::app::run_pipeline(s, out_dir, sub == compare);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
    std::printf("utility %.9g  DE sum rate %.6g  MC sum rate %.6g (with residual ICI %.6g)\n", res.utility,
                res.de_sum_rate, res.mc_sum_rate, res.mc_sum_rate_with_ici);
    for (const auto& r : res.comparison) {
      std::printf("  %-14s sum rate %.6g +- %.2g  worst decile %.4g\n", r.scheme.c_str(), r.sum_rate, r.sum_rate_se,
                  r.worst_decile_rate);
    }
    std::printf("outputs written to %s\n", out_dir.c_str());
    return kExitOk;
  } catch (const hmimo::app::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hmimo::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hmimo::CapabilityError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hmimo::ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const hmimo::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const hmimo::ValidationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}
