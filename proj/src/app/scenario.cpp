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

#include "hmimo/app/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "hmimo/topology.hpp"

namespace hmimo::app {

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

class Reader {
 public:
  Reader(std::string file) : file_(std::move(file)) {}

  [[noreturn]] void fail(const YAML::Node& n, const std::string& what) const {
    throw ConfigError(file_, line_of(n), what);
  }

  void known_keys(const YAML::Node& map, const std::string& where, std::initializer_list<const char*> keys) const {
    if (!map.IsMap()) fail(map, "'" + where + "' must be a mapping");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown field '" + (where.empty() ? key : where + "." + key) + "'");
    }
  }

  template <class T>
  T get(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, "field '" + field + "' must be a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      fail(n, "field '" + field + "' has invalid value '" + n.Scalar() + "'");
    }
  }

  template <class T>
  void opt(const YAML::Node& map, const char* key, const std::string& field, T& out) const {
    const YAML::Node n = map[key];
    if (n) out = get<T>(n, field);
  }

  template <class T>
  T req(const YAML::Node& map, const char* key, const std::string& field) const {
    const YAML::Node n = map[key];
    if (!n) fail(map, "missing required field '" + field + "'");
    return get<T>(n, field);
  }

  std::vector<double> list(const YAML::Node& n, const std::string& field) const {
    if (!n.IsSequence()) fail(n, "field '" + field + "' must be a list");
    std::vector<double> out;
    for (const auto& x : n) out.push_back(get<double>(x, field));
    return out;
  }

  void positive(const YAML::Node& map, const char* key, const std::string& field, double v) const {
    if (!(v > 0.0)) fail(map[key] ? map[key] : map, "field '" + field + "' must be positive");
  }

  const std::string& file() const { return file_; }

 private:
  std::string file_;
};

Scenario parse_node(const YAML::Node& root, const Reader& r, const std::string& base_dir) {
  Scenario s;
  if (!root || root.IsNull()) throw ConfigError(r.file(), 0, "empty configuration");
  r.known_keys(root, "",
               {"name", "N", "K", "M", "rank", "pc_db", "nu", "theta_db", "utility", "geometry", "correlation_file",
                "seed", "scheduler", "monte_carlo", "baselines"});
  r.opt(root, "name", "name", s.name);
  s.N = r.req<int>(root, "N", "N");
  s.K = r.req<int>(root, "K", "K");
  s.M = r.req<int>(root, "M", "M");
  r.opt(root, "rank", "rank", s.rank);
  for (const auto& [key, v] : {std::pair{"N", s.N}, {"K", s.K}, {"M", s.M}, {"rank", s.rank}}) {
    if (v < 1) r.fail(root[key] ? root[key] : root, std::string("field '") + key + "' must be a positive integer");
  }
  if (s.rank > s.M) r.fail(root["rank"], "field 'rank' must not exceed M");
  r.opt(root, "pc_db", "pc_db", s.pc_db);
  r.opt(root, "nu", "nu", s.nu);
  r.opt(root, "theta_db", "theta_db", s.theta_db);
  r.positive(root, "nu", "nu", s.nu);
  if (!(s.theta_db > 0.0)) r.fail(root["theta_db"] ? root["theta_db"] : root, "field 'theta_db' must be positive");
  s.pc = db_to_linear(s.pc_db);
  s.theta = db_to_linear(s.theta_db);

  if (const auto u = root["utility"]) {
    r.known_keys(u, "utility", {"kind", "alpha", "epsilon", "weights"});
    if (u["kind"]) {
      const auto kind = r.get<std::string>(u["kind"], "utility.kind");
      try {
        s.utility_kind = parse_utility_kind(kind);
      } catch (const ParameterError& e) {
        r.fail(u["kind"], e.what());
      }
    }
    r.opt(u, "alpha", "utility.alpha", s.alpha);
    r.opt(u, "epsilon", "utility.epsilon", s.epsilon);
    r.positive(u, "alpha", "utility.alpha", s.alpha);
    if (!(s.epsilon >= 0.0)) r.fail(u["epsilon"], "field 'utility.epsilon' must be non-negative");
    if (u["weights"]) {
      s.weights = r.list(u["weights"], "utility.weights");
      if (static_cast<int>(s.weights.size()) != s.K) r.fail(u["weights"], "field 'utility.weights' needs K entries");
      for (double w : s.weights) {
        if (!(w >= 0.0)) r.fail(u["weights"], "field 'utility.weights' must be non-negative");
      }
    }
  }

  if (root["geometry"] && root["correlation_file"]) {
    r.fail(root["correlation_file"], "give either 'geometry' or 'correlation_file', not both");
  }
  s.geometry.num_bs = s.N;
  s.geometry.antennas = s.M;
  s.geometry.rank = s.rank;
  if (const auto f = root["correlation_file"]) {
    std::filesystem::path p(r.get<std::string>(f, "correlation_file"));
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    s.correlation_file = p.lexically_normal().string();
  } else {
    if (s.K % s.N != 0) r.fail(root["K"], "field 'K' must be a multiple of N for generated geometry");
    s.geometry.users_per_cell = s.K / s.N;
    if (const auto g = root["geometry"]) {
      r.known_keys(g, "geometry",
                   {"inter_site_distance", "hotspots_per_cell", "hotspot_radius", "hotspot_fraction",
                    "min_distance", "path_loss_exponent", "ref_gain_db"});
      auto& G = s.geometry;
      r.opt(g, "inter_site_distance", "geometry.inter_site_distance", G.inter_site_distance);
      r.opt(g, "hotspots_per_cell", "geometry.hotspots_per_cell", G.hotspots_per_cell);
      r.opt(g, "hotspot_radius", "geometry.hotspot_radius", G.hotspot_radius);
      r.opt(g, "hotspot_fraction", "geometry.hotspot_fraction", G.hotspot_fraction);
      r.opt(g, "min_distance", "geometry.min_distance", G.min_distance);
      r.opt(g, "path_loss_exponent", "geometry.path_loss_exponent", G.path_loss_exponent);
      r.opt(g, "ref_gain_db", "geometry.ref_gain_db", G.ref_gain_db);
      r.positive(g, "inter_site_distance", "geometry.inter_site_distance", G.inter_site_distance);
      r.positive(g, "hotspot_radius", "geometry.hotspot_radius", G.hotspot_radius);
      r.positive(g, "min_distance", "geometry.min_distance", G.min_distance);
      r.positive(g, "path_loss_exponent", "geometry.path_loss_exponent", G.path_loss_exponent);
      if (G.hotspots_per_cell < 0) r.fail(g["hotspots_per_cell"], "field 'geometry.hotspots_per_cell' must be >= 0");
      if (!(G.hotspot_fraction >= 0.0 && G.hotspot_fraction <= 1.0)) {
        r.fail(g["hotspot_fraction"], "field 'geometry.hotspot_fraction' must lie in [0, 1]");
      }
    }
  }

  if (const auto sd = root["seed"]) {
    s.seed = r.get<std::uint64_t>(sd, "seed");
  }

  if (const auto sc = root["scheduler"]) {
    r.known_keys(sc, "scheduler", {"mode", "eps_stop", "max_outer"});
    if (sc["mode"]) {
      try {
        s.mode = parse_scheduler_mode(r.get<std::string>(sc["mode"], "scheduler.mode"));
      } catch (const ParameterError& e) {
        r.fail(sc["mode"], e.what());
      }
    }
    r.opt(sc, "eps_stop", "scheduler.eps_stop", s.eps_stop);
    r.opt(sc, "max_outer", "scheduler.max_outer", s.max_outer);
    r.positive(sc, "eps_stop", "scheduler.eps_stop", s.eps_stop);
    if (s.max_outer < 1) r.fail(sc["max_outer"], "field 'scheduler.max_outer' must be at least 1");
  }

  if (const auto mc = root["monte_carlo"]) {
    r.known_keys(mc, "monte_carlo", {"draws", "mode", "threads"});
    r.opt(mc, "draws", "monte_carlo.draws", s.draws);
    if (s.draws < 1) r.fail(mc["draws"], "field 'monte_carlo.draws' must be at least 1");
    if (mc["mode"]) {
      try {
        s.mc_mode = parse_monte_carlo_mode(r.get<std::string>(mc["mode"], "monte_carlo.mode"));
      } catch (const ParameterError& e) {
        r.fail(mc["mode"], e.what());
      }
    }
    r.opt(mc, "threads", "monte_carlo.threads", s.threads);
    if (s.threads < 0) r.fail(mc["threads"], "field 'monte_carlo.threads' must be >= 0");
  }

  if (const auto b = root["baselines"]) {
    r.known_keys(b, "baselines", {"ffr_partitions", "comp_cluster_size", "comp_delay_rho"});
    r.opt(b, "ffr_partitions", "baselines.ffr_partitions", s.ffr_partitions);
    r.opt(b, "comp_cluster_size", "baselines.comp_cluster_size", s.comp_cluster_size);
    if (s.ffr_partitions < 0) r.fail(b["ffr_partitions"], "field 'baselines.ffr_partitions' must be >= 0 (0 picks the default)");
    if (s.comp_cluster_size < 0) r.fail(b["comp_cluster_size"], "field 'baselines.comp_cluster_size' must be >= 0 (0 picks the default)");
    if (b["comp_delay_rho"]) {
      s.comp_delay_rho = r.list(b["comp_delay_rho"], "baselines.comp_delay_rho");
      for (double rho : s.comp_delay_rho) {
        if (!(rho >= 0.0 && rho <= 1.0)) r.fail(b["comp_delay_rho"], "field 'baselines.comp_delay_rho' must lie in [0, 1]");
      }
    }
  }
  if (s.ffr_partitions == 0) s.ffr_partitions = std::min(3, s.N);
  if (s.comp_cluster_size == 0) s.comp_cluster_size = s.N;
  return s;
}

}  // namespace

UtilityFunction Scenario::utility() const {
  UtilityFunction u = make_utility(utility_kind, K, alpha, epsilon);
  if (!weights.empty()) {
    u.weights = Eigen::Map<const RVector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  }
  return u;
}

void Scenario::validate() const {
  if (mode == SchedulerMode::exhaustive && K > kMaxEnumerationUsers) {
    throw ConfigError(source, 0,
                      "exhaustive mode supports at most " + std::to_string(kMaxEnumerationUsers) + " users (K = " +
                          std::to_string(K) + "); use greedy mode");
  }
}

Scenario parse_scenario(const std::string& text, const std::string& name) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(name, e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
  }
  Scenario s = parse_node(root, Reader(name), ".");
  s.source = name;
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open configuration file");
  std::stringstream buf;
  buf << in.rdbuf();
  YAML::Node root;
  try {
    root = YAML::Load(buf.str());
  } catch (const YAML::Exception& e) {
    throw ConfigError(path, e.mark.line >= 0 ? e.mark.line + 1 : 0, e.msg);
  }
  const auto dir = std::filesystem::path(path).parent_path().string();
  Scenario s = parse_node(root, Reader(path), dir.empty() ? "." : dir);
  s.source = path;
  return s;
}

CorrelationSet scenario_correlations(const Scenario& s) {
  if (s.correlation_file.empty()) return generate_layout(s.geometry, s.seed).corr;
  std::ifstream in(s.correlation_file);
  if (!in) throw ConfigError(s.source, 0, "cannot open correlation file '" + s.correlation_file + "'");
  CorrelationSet c;
  try {
    c = CorrelationSet::read_text(in);
  } catch (const Error& e) {
    throw ConfigError(s.correlation_file, 0, e.what());
  }
  if (c.num_bs() != s.N || c.num_users() != s.K || c.dim() != s.M) {
    throw ConfigError(s.source, 0, "correlation file dimensions do not match N, K, M");
  }
  return c;
}

}  // namespace hmimo::app
