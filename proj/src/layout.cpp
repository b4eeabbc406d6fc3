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

#include "hmimo/layout.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "hmimo/error.hpp"

namespace hmimo {

namespace {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point uniform_in_annulus(Rng& rng, const Point& c, double r0, double r1) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::sqrt(u(rng) * (r1 * r1 - r0 * r0) + r0 * r0);
  const double a = 2.0 * std::numbers::pi * u(rng);
  return {c.x + r * std::cos(a), c.y + r * std::sin(a)};
}

}  // namespace

std::vector<Point> hex_sites(int count, double isd) {
  // Axial hex coordinates walked ring by ring.
  static constexpr std::array<std::array<int, 2>, 6> kDirs{{{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};
  std::vector<Point> out;
  auto push = [&](int q, int r) {
    out.push_back({isd * (q + 0.5 * r), isd * (std::sqrt(3.0) / 2.0 * r)});
  };
  if (count <= 0) return out;
  push(0, 0);
  for (int ring = 1; static_cast<int>(out.size()) < count; ++ring) {
    int q = kDirs[4][0] * ring;
    int r = kDirs[4][1] * ring;
    for (int side = 0; side < 6; ++side) {
      for (int step = 0; step < ring; ++step) {
        if (static_cast<int>(out.size()) < count) push(q, r);
        q += kDirs[static_cast<std::size_t>(side)][0];
        r += kDirs[static_cast<std::size_t>(side)][1];
      }
    }
  }
  // Put the ring-1 site on the +x axis second so N = 2 is a horizontal pair.
  if (count >= 2) {
    auto it = std::find_if(out.begin() + 1, out.end(), [&](const Point& p) {
      return std::abs(p.y) < 1e-9 && p.x > 0.0;
    });
    if (it != out.end()) std::iter_swap(out.begin() + 1, it);
  }
  return out;
}

Layout generate_layout(const LayoutSpec& cfg, std::uint64_t seed) {
  if (cfg.num_bs < 1 || cfg.users_per_cell < 1) throw ParameterError("layout needs N >= 1 and users per cell >= 1");
  if (cfg.rank < 1 || cfg.rank > cfg.antennas) throw ParameterError("layout needs 1 <= rank <= M");
  if (cfg.hotspots_per_cell < 0) throw ParameterError("hotspot count must be non-negative");
  if (!(cfg.hotspot_fraction >= 0.0 && cfg.hotspot_fraction <= 1.0)) {
    throw ParameterError("hotspot fraction must lie in [0, 1]");
  }
  const double cell_radius = cfg.inter_site_distance / 2.0;
  if (!(cfg.min_distance > 0.0) || cfg.min_distance + 2.0 * cfg.hotspot_radius >= cell_radius) {
    throw ParameterError("layout distances inconsistent with the cell radius");
  }

  const int N = cfg.num_bs;
  const int K = N * cfg.users_per_cell;
  Layout out;
  out.bs_positions = hex_sites(N, cfg.inter_site_distance);
  out.corr = CorrelationSet(N, K, cfg.antennas);

  Rng geo(derive_seed(seed, SeedStream::geometry));
  const std::uint64_t corr_seed = derive_seed(seed, SeedStream::correlation);

  const int hot_users = cfg.hotspots_per_cell == 0
                            ? 0
                            : static_cast<int>(std::lround(cfg.hotspot_fraction * cfg.users_per_cell));

  for (int cell = 0; cell < N; ++cell) {
    const Point& site = out.bs_positions[static_cast<std::size_t>(cell)];
    std::vector<Point> hotspot_centers;
    for (int h = 0; h < cfg.hotspots_per_cell; ++h) {
      hotspot_centers.push_back(uniform_in_annulus(geo, site, cfg.min_distance + cfg.hotspot_radius,
                                                   cell_radius - cfg.hotspot_radius));
    }
    for (int i = 0; i < cfg.users_per_cell; ++i) {
      const int k = cell * cfg.users_per_cell + i;
      out.home_cell.push_back(cell);
      if (i < hot_users) {
        const int h = i % cfg.hotspots_per_cell;
        const int cluster = cell * cfg.hotspots_per_cell + h;
        const Point& c = hotspot_centers[static_cast<std::size_t>(h)];
        out.user_positions.push_back(uniform_in_annulus(geo, c, 0.0, cfg.hotspot_radius));
        out.corr.set_cluster_id(k, cluster);
        for (int n = 0; n < N; ++n) {
          const double gain = path_gain_log_distance(
              distance(c, out.bs_positions[static_cast<std::size_t>(n)]), cfg.path_loss_exponent,
              cfg.ref_gain_db);
          const std::uint64_t key = (1ULL << 40) | static_cast<std::uint64_t>(cluster * N + n);
          out.corr.set(k, n, random_clustered_correlation(cfg.antennas, cfg.rank, gain,
                                                          derive_seed(corr_seed, key)));
        }
      } else {
        const Point p = uniform_in_annulus(geo, site, cfg.min_distance, cell_radius);
        out.user_positions.push_back(p);
        for (int n = 0; n < N; ++n) {
          const double gain = path_gain_log_distance(distance(p, out.bs_positions[static_cast<std::size_t>(n)]),
                                                     cfg.path_loss_exponent, cfg.ref_gain_db);
          const auto key = static_cast<std::uint64_t>(k * N + n);
          out.corr.set(k, n, random_clustered_correlation(cfg.antennas, cfg.rank, gain,
                                                          derive_seed(corr_seed, key)));
        }
      }
    }
  }
  return out;
}

}  // namespace hmimo
