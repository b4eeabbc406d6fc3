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

// Spatial correlation matrices and channel sampling.
//
// A correlation matrix Theta_{k,n} describes the second-order statistics of
// the channel between BS n and user k; its trace is M times the path gain.
// Instantaneous channels are drawn as h = sqrt(M) Theta^{1/2} z with z
// i.i.d. CN(0, 1/M).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hmimo/linalg.hpp"
#include "hmimo/rng.hpp"

namespace hmimo {

class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  // Infers path_gain from the trace; rank_hint defaults to dim.
  explicit CorrelationMatrix(CMatrix entries, int rank_hint = -1);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  int rank_hint() const { return rank_hint_; }
  double path_gain() const { return path_gain_; }
  double trace() const { return entries_.trace().real(); }

  // Throws ValidationError naming the first violated invariant
  // (Hermitian, PSD, rank <= rank_hint, trace == M * path_gain).
  void validate() const;

 private:
  CMatrix entries_;
  int rank_hint_ = 0;
  double path_gain_ = 0.0;
};

// Theta = path_gain * A A^H rescaled to trace M * path_gain, with A an M x d
// matrix of i.i.d. standard complex Gaussians drawn from `seed`.
CorrelationMatrix random_clustered_correlation(int M, int d, double path_gain, std::uint64_t seed);

// Uniform-linear-array one-ring model: entry (p, q) is the average of
// exp(-i 2 pi spacing (p - q) sin a) over a in [center - spread, center + spread],
// scaled by path_gain. Evaluated with 256-point Gauss-Legendre quadrature.
CorrelationMatrix one_ring_correlation(int M, double center_angle, double angular_spread,
                                       double antenna_spacing, double path_gain);

// 10^((ref_gain_db - 10 * exponent * log10(distance_m)) / 10).
double path_gain_log_distance(double distance_m, double exponent, double ref_gain_db);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// One channel realization of length M, deterministic in `seed`.
CVector sample_channel(const CorrelationMatrix& corr, std::uint64_t seed);

// All Theta_{k,n} of a network plus the clustering metadata.
class CorrelationSet {
 public:
  CorrelationSet() = default;
  CorrelationSet(int num_bs, int num_users, int dim);

  int num_bs() const { return num_bs_; }
  int num_users() const { return num_users_; }
  int dim() const { return dim_; }

  const CorrelationMatrix& at(int user, int bs) const;
  void set(int user, int bs, CorrelationMatrix m);

  // -1 when the user belongs to no cluster.
  int cluster_id(int user) const { return cluster_ids_.at(static_cast<std::size_t>(user)); }
  void set_cluster_id(int user, int id) { cluster_ids_.at(static_cast<std::size_t>(user)) = id; }

  // Explicit serving BS, or -1 when the topology should pick the strongest link.
  int serving_hint(int user) const { return serving_.at(static_cast<std::size_t>(user)); }
  void set_serving_hint(int user, int bs) { serving_.at(static_cast<std::size_t>(user)) = bs; }

  // Every matrix valid, all dims equal, clustered users share the matrix of
  // their serving BS.
  void validate() const;

  // Text dump: header "M N K", then for each (k, n) in row-major (k outer)
  // order M lines of M "re,im" tokens.
  void write_text(std::ostream& os) const;
  static CorrelationSet read_text(std::istream& is);

 private:
  int num_bs_ = 0;
  int num_users_ = 0;
  int dim_ = 0;
  std::vector<CorrelationMatrix> matrices_;  // index user * num_bs + bs
  std::vector<int> cluster_ids_;
  std::vector<int> serving_;
};

// Precomputed square roots for repeated sampling of a whole network.
class ChannelSampler {
 public:
  explicit ChannelSampler(const CorrelationSet& corr);

  // h_{k,n} for every (k, n), index user * num_bs + bs. Draw order is
  // user-major and fixed, so the result depends only on the engine state.
  std::vector<CVector> sample(Rng& rng) const;

  int num_bs() const { return num_bs_; }
  int num_users() const { return num_users_; }
  int dim() const { return dim_; }

 private:
  int num_bs_;
  int num_users_;
  int dim_;
  std::vector<CMatrix> sqrt_;  // sqrt(M) Theta^{1/2}
};

}  // namespace hmimo
