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

// Cellular drop: hexagonal BS grid, hotspot and uniform users, log-distance
// path gains and rank-d random correlation matrices. Users sharing a hotspot
// share one correlation matrix per BS.

#include <cstdint>
#include <vector>

#include "hmimo/corrmat.hpp"

namespace hmimo {

struct LayoutSpec {
  int num_bs = 2;
  int users_per_cell = 3;
  int antennas = 16;
  int rank = 4;
  double inter_site_distance = 500.0;
  int hotspots_per_cell = 2;
  double hotspot_radius = 50.0;
  double hotspot_fraction = 2.0 / 3.0;
  double min_distance = 35.0;
  double path_loss_exponent = 3.76;
  // Gain at 1 m relative to unit receiver noise.
  double ref_gain_db = 89.7;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Layout {
  std::vector<Point> bs_positions;
  std::vector<Point> user_positions;
  std::vector<int> home_cell;
  CorrelationSet corr;
};

// First `count` sites of a hexagonal grid, center first, then ring by ring.
std::vector<Point> hex_sites(int count, double inter_site_distance);

Layout generate_layout(const LayoutSpec& cfg, std::uint64_t seed);

}  // namespace hmimo
