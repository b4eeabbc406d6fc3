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

// Hierarchical precoding: statistics-adaptive outer precoders F_n that null
// inter-cell interference, and CSI-adaptive RZF inner precoders G_n.

#include <vector>

#include "hmimo/corrmat.hpp"
#include "hmimo/topology.hpp"

namespace hmimo {

// Gamma = {F, S, p}. Immutable once built.
struct CompositeControl {
  std::vector<CMatrix> outer;      // per BS, M x M_n (M_n may be 0)
  std::vector<UserSet> selected;   // per BS, S_n
  RVector power;                   // per user, 0 outside S

  int num_bs() const { return static_cast<int>(outer.size()); }
  int num_users() const { return static_cast<int>(power.size()); }
  UserSet all_selected() const;
  bool is_selected(int user) const;
};

// Semi-unitarity of every F_n, zero-ICI toward every scheduled neighbor,
// finite non-negative powers, S_n served by BS n.
void validate_control(const CompositeControl& control, const CorrelationSet& corr, const TopologyGraph& graph);

// orth(sum_{k in blocked} Theta_{k,bs}); zero columns for an empty set.
CMatrix interference_nullspace_basis(const CorrelationSet& corr, const UserSet& blocked, int bs);

// orth((I - U U^H) sum_{k in selected} Theta_{k,bs}) with U the nullspace
// basis of `blocked`. The rank cut is relative to the unprojected sum, so a
// fully annihilated sum yields an empty F.
CMatrix outer_precoder(const CorrelationSet& corr, const UserSet& selected, const UserSet& blocked, int bs);

// Outer precoders for every BS given the global selection S.
CompositeControl make_control(const CorrelationSet& corr, const TopologyGraph& graph, const UserSet& selected,
                              RVector power);

// G = (F^H H^H H F + M nu I)^{-1} F^H H^H for H of shape |S| x M (rows are
// h^H). Empty F gives an M_n = 0 precoder.
CMatrix rzf_inner_precoder(const CMatrix& channels, const CMatrix& outer, double nu);

// One draw of every h_{k,n}, index user * num_bs + bs.
using ChannelRealization = std::vector<CVector>;

// Per-draw quantities of one control on one realization.
struct RealizationMetrics {
  RVector rate;          // treating intra-cell interference as noise, nats
  RVector rate_with_ici; // same, also counting every other BS's signal as noise
  RVector signal;        // p_k |h_k^H v_k|^2
  RVector intercell;     // received power at k from all BSs n != b_k
  RVector neighbor_ici;  // worst per-BS interference at k from a BS nulling it (k in S_bar_n)
  RVector power;         // per BS, Tr(P_n H F A^{-2} F^H H^H)
};

RealizationMetrics evaluate_realization(const CompositeControl& control, const TopologyGraph& graph,
                                        const ChannelRealization& h, double nu);

double instantaneous_rate(int user, const CompositeControl& control, const TopologyGraph& graph,
                          const ChannelRealization& h, double nu);

// Tr(P_n H F (F^H H^H H F + M nu I)^{-2} F^H H^H) evaluated by two
// Hermitian solves.
double transmit_power(const CompositeControl& control, const ChannelRealization& h, int bs, double nu);

// H_{S_n} for BS `bs`: rows h_{l,bs}^H for l in `users`.
CMatrix stack_channels(const ChannelRealization& h, int num_bs, const UserSet& users, int bs);

}  // namespace hmimo
