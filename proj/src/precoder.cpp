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

#include "hmimo/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmimo/error.hpp"
#include "hmimo/kernels.hpp"

namespace hmimo {

UserSet CompositeControl::all_selected() const {
  UserSet all;
  for (const auto& s : selected) all.insert(all.end(), s.begin(), s.end());
  std::sort(all.begin(), all.end());
  return all;
}

bool CompositeControl::is_selected(int user) const {
  return std::any_of(selected.begin(), selected.end(), [user](const UserSet& s) {
    return std::binary_search(s.begin(), s.end(), user);
  });
}

void validate_control(const CompositeControl& control, const CorrelationSet& corr, const TopologyGraph& graph) {
  const int N = graph.num_bs();
  const int M = corr.dim();
  if (control.num_bs() != N || static_cast<int>(control.selected.size()) != N) {
    throw ValidationError("control has the wrong number of BSs");
  }
  if (control.num_users() != graph.num_users()) throw ValidationError("control power vector has the wrong size");
  for (int k = 0; k < control.num_users(); ++k) {
    const double p = control.power(k);
    if (!std::isfinite(p) || p < 0.0) throw ValidationError("power of user " + std::to_string(k) + " is invalid");
    if (p > 0.0 && !control.is_selected(k)) {
      throw ValidationError("unselected user " + std::to_string(k) + " carries power");
    }
  }
  for (int n = 0; n < N; ++n) {
    const auto& sn = control.selected[static_cast<std::size_t>(n)];
    if (!std::is_sorted(sn.begin(), sn.end()) || std::adjacent_find(sn.begin(), sn.end()) != sn.end()) {
      throw ValidationError("selection of BS " + std::to_string(n) + " is not a sorted set");
    }
    for (int k : sn) {
      if (k < 0 || k >= graph.num_users() || graph.serving(k) != n) {
        throw ValidationError("user " + std::to_string(k) + " selected at BS " + std::to_string(n) +
                              " is not served by it");
      }
    }
    const CMatrix& f = control.outer[static_cast<std::size_t>(n)];
    if (f.cols() > 0 && f.rows() != M) throw ValidationError("outer precoder has the wrong row count");
    if (f.cols() > 0) {
      const double err = (f.adjoint() * f - CMatrix::Identity(f.cols(), f.cols())).norm();
      if (err > 1e-9) {
        throw ValidationError("outer precoder of BS " + std::to_string(n) + " is not semi-unitary (" +
                              std::to_string(err) + ")");
      }
    }
  }
  const auto sbar = scheduled_neighbors(graph, control.all_selected());
  for (int n = 0; n < N; ++n) {
    const CMatrix& f = control.outer[static_cast<std::size_t>(n)];
    if (f.cols() == 0) continue;
    for (int k : sbar[static_cast<std::size_t>(n)]) {
      const CMatrix& theta = corr.at(k, n).entries();
      const double leak = (f.adjoint() * theta).norm();
      if (leak > 1e-8 * theta.norm()) {
        throw ValidationError("outer precoder of BS " + std::to_string(n) + " leaks into neighbor user " +
                              std::to_string(k));
      }
    }
  }
}

CMatrix interference_nullspace_basis(const CorrelationSet& corr, const UserSet& blocked, int bs) {
  const int M = corr.dim();
  if (blocked.empty()) return CMatrix(M, 0);
  CMatrix sum = CMatrix::Zero(M, M);
  for (int k : blocked) sum += corr.at(k, bs).entries();
  return orth_psd(sum);
}

CMatrix outer_precoder(const CorrelationSet& corr, const UserSet& selected, const UserSet& blocked, int bs) {
  const int M = corr.dim();
  for (int k : selected) {
    if (std::find(blocked.begin(), blocked.end(), k) != blocked.end()) {
      throw ParameterError("selected and blocked sets must be disjoint");
    }
  }
  if (selected.empty()) return CMatrix(M, 0);
  CMatrix sum = CMatrix::Zero(M, M);
  for (int k : selected) sum += corr.at(k, bs).entries();
  const double top = spectral_norm_hermitian(sum);
  if (!(top > 0.0)) return CMatrix(M, 0);
  const CMatrix u = interference_nullspace_basis(corr, blocked, bs);
  if (u.cols() == 0) return orth_psd(sum, top);
  const CMatrix proj = CMatrix::Identity(M, M) - u * u.adjoint();
  return orth_psd(proj * sum * proj, top);
}

CompositeControl make_control(const CorrelationSet& corr, const TopologyGraph& graph, const UserSet& selected,
                              RVector power) {
  if (power.size() != graph.num_users()) throw ParameterError("power vector must have one entry per user");
  UserSet sorted = selected;
  std::sort(sorted.begin(), sorted.end());
  const auto sbar = scheduled_neighbors(graph, sorted);
  CompositeControl c;
  c.power = std::move(power);
  for (int n = 0; n < graph.num_bs(); ++n) {
    UserSet sn = served_subset(graph, sorted, n);
    c.outer.push_back(outer_precoder(corr, sn, sbar[static_cast<std::size_t>(n)], n));
    c.selected.push_back(std::move(sn));
  }
  return c;
}

CMatrix rzf_inner_precoder(const CMatrix& channels, const CMatrix& outer, double nu) {
  if (!(nu > 0.0)) throw ParameterError("RZF regularization nu must be positive");
  const Eigen::Index s = channels.rows();
  const Eigen::Index mn = outer.cols();
  if (mn == 0 || s == 0) return CMatrix::Zero(mn, s);
  if (channels.cols() != outer.rows()) throw ParameterError("channel and outer precoder dimensions differ");
  const double M = static_cast<double>(channels.cols());
  const CMatrix heff = channels * outer;  // |S| x M_n
  CMatrix a = heff.adjoint() * heff;
  a.diagonal().array() += M * nu;
  Eigen::LLT<CMatrix> llt(a);
  return llt.solve(heff.adjoint());
}

CMatrix stack_channels(const ChannelRealization& h, int num_bs, const UserSet& users, int bs) {
  const Eigen::Index M = h.front().size();
  CMatrix out(static_cast<Eigen::Index>(users.size()), M);
  for (std::size_t i = 0; i < users.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        h[static_cast<std::size_t>(users[i] * num_bs + bs)].adjoint();
  }
  return out;
}

RealizationMetrics evaluate_realization(const CompositeControl& control, const TopologyGraph& graph,
                                        const ChannelRealization& h, double nu) {
  const int N = control.num_bs();
  const int K = control.num_users();
  const auto M = static_cast<std::size_t>(h.front().size());
  RealizationMetrics out;
  out.rate = RVector::Zero(K);
  out.rate_with_ici = RVector::Zero(K);
  out.signal = RVector::Zero(K);
  out.intercell = RVector::Zero(K);
  out.neighbor_ici = RVector::Zero(K);
  out.power = RVector::Zero(N);

  // V_n = F_n G_n for every BS.
  std::vector<CMatrix> precoders(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    const auto& sn = control.selected[static_cast<std::size_t>(n)];
    const CMatrix& f = control.outer[static_cast<std::size_t>(n)];
    if (sn.empty() || f.cols() == 0) {
      precoders[static_cast<std::size_t>(n)] = CMatrix::Zero(static_cast<Eigen::Index>(M),
                                                             static_cast<Eigen::Index>(sn.size()));
      continue;
    }
    const CMatrix g = rzf_inner_precoder(stack_channels(h, N, sn, n), f, nu);
    double p = 0.0;
    for (std::size_t l = 0; l < sn.size(); ++l) {
      p += control.power(sn[l]) * kernels::squared_norm(g.col(static_cast<Eigen::Index>(l)).data(),
                                                        static_cast<std::size_t>(g.rows()));
    }
    out.power(n) = p;
    precoders[static_cast<std::size_t>(n)] = f * g;
  }

  // Received power at user k from every stream of BS n.
  auto received = [&](int k, int n, int skip) {
    const auto& sn = control.selected[static_cast<std::size_t>(n)];
    const CMatrix& v = precoders[static_cast<std::size_t>(n)];
    const CVector& hk = h[static_cast<std::size_t>(k * N + n)];
    double acc = 0.0;
    for (std::size_t l = 0; l < sn.size(); ++l) {
      if (sn[l] == skip) continue;
      const cd z = kernels::dot(hk.data(), v.col(static_cast<Eigen::Index>(l)).data(), M);
      acc += control.power(sn[l]) * std::norm(z);
    }
    return acc;
  };

  for (int b = 0; b < N; ++b) {
    const auto& sb = control.selected[static_cast<std::size_t>(b)];
    const CMatrix& v = precoders[static_cast<std::size_t>(b)];
    for (std::size_t i = 0; i < sb.size(); ++i) {
      const int k = sb[i];
      const CVector& hk = h[static_cast<std::size_t>(k * N + b)];
      const cd z = kernels::dot(hk.data(), v.col(static_cast<Eigen::Index>(i)).data(), M);
      const double signal = control.power(k) * std::norm(z);
      const double intra = received(k, b, k);
      double inter = 0.0;
      double worst_neighbor = 0.0;
      for (int n = 0; n < N; ++n) {
        if (n == b) continue;
        const double r = received(k, n, -1);
        inter += r;
        if (graph.has_edge(k, n)) worst_neighbor = std::max(worst_neighbor, r);
      }
      out.signal(k) = signal;
      out.intercell(k) = inter;
      out.neighbor_ici(k) = worst_neighbor;
      out.rate(k) = std::log1p(signal / (intra + 1.0));
      out.rate_with_ici(k) = std::log1p(signal / (intra + inter + 1.0));
    }
  }
  return out;
}

double instantaneous_rate(int user, const CompositeControl& control, const TopologyGraph& graph,
                          const ChannelRealization& h, double nu) {
  if (user < 0 || user >= control.num_users()) throw ParameterError("user index out of range");
  if (!control.is_selected(user)) return 0.0;
  return evaluate_realization(control, graph, h, nu).rate(user);
}

double transmit_power(const CompositeControl& control, const ChannelRealization& h, int bs, double nu) {
  const int N = control.num_bs();
  const auto& sn = control.selected.at(static_cast<std::size_t>(bs));
  const CMatrix& f = control.outer.at(static_cast<std::size_t>(bs));
  if (sn.empty() || f.cols() == 0) return 0.0;
  const CMatrix hs = stack_channels(h, N, sn, bs);
  const double M = static_cast<double>(hs.cols());
  const CMatrix heff = hs * f;
  CMatrix a = heff.adjoint() * heff;
  a.diagonal().array() += M * nu;
  Eigen::LLT<CMatrix> llt(a);
  const CMatrix y = llt.solve(llt.solve(heff.adjoint()));  // A^{-2} F^H H^H
  double tr = 0.0;
  for (std::size_t l = 0; l < sn.size(); ++l) {
    const auto li = static_cast<Eigen::Index>(l);
    tr += control.power(sn[l]) * (heff.row(li) * y.col(li)).value().real();
  }
  return tr;
}

}  // namespace hmimo
