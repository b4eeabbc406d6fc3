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

#include "hmimo/corrmat.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hmimo/error.hpp"

namespace hmimo {

CorrelationMatrix::CorrelationMatrix(CMatrix entries, int rank_hint)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw ParameterError("correlation matrix must be square");
  }
  rank_hint_ = rank_hint < 0 ? dim() : rank_hint;
  path_gain_ = dim() > 0 ? trace() / dim() : 0.0;
}

void CorrelationMatrix::validate() const {
  if (dim() == 0) throw ValidationError("correlation matrix has zero dimension");
  const double norm = spectral_norm_hermitian(entries_);
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * norm) {
    throw ValidationError("correlation matrix is not Hermitian (max asymmetry " + std::to_string(asym) + ")");
  }
  if (norm == 0.0) return;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(entries_), Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-10 * norm) {
    throw ValidationError("correlation matrix is not positive semidefinite");
  }
  if (numerical_rank(entries_) > rank_hint_) {
    throw ValidationError("correlation matrix rank exceeds its declared rank " + std::to_string(rank_hint_));
  }
  const double expected = dim() * path_gain_;
  if (std::abs(trace() - expected) > 1e-10 * std::abs(expected)) {
    throw ValidationError("correlation matrix trace does not equal M * path_gain");
  }
}

CorrelationMatrix random_clustered_correlation(int M, int d, double path_gain, std::uint64_t seed) {
  if (M < 1 || d < 1 || d > M) {
    throw ParameterError("random_clustered_correlation needs 1 <= d <= M (got M=" + std::to_string(M) +
                         ", d=" + std::to_string(d) + ")");
  }
  if (!(path_gain >= 0.0) || !std::isfinite(path_gain)) {
    throw ParameterError("path gain must be finite and non-negative");
  }
  Rng rng(seed);
  const CMatrix a = complex_gaussian(rng, M, d, 1.0);
  CMatrix theta = a * a.adjoint();
  theta = hermitize(theta);
  theta *= path_gain * M / theta.trace().real();
  CorrelationMatrix out(std::move(theta), d);
  return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ParameterError("quadrature order must be positive");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

CorrelationMatrix one_ring_correlation(int M, double center_angle, double angular_spread,
                                       double antenna_spacing, double path_gain) {
  if (M < 1) throw ParameterError("antenna count must be positive");
  if (!(angular_spread > 0.0 && angular_spread < std::numbers::pi)) {
    throw ParameterError("angular spread must lie in (0, pi)");
  }
  if (!(antenna_spacing > 0.0)) throw ParameterError("antenna spacing must be positive");
  if (!(path_gain >= 0.0)) throw ParameterError("path gain must be non-negative");

  constexpr int kOrder = 256;
  static const auto rule = [] {
    std::pair<std::vector<double>, std::vector<double>> r;
    gauss_legendre(kOrder, r.first, r.second);
    return r;
  }();
  const auto& [x, w] = rule;

  // Entry (p, q) depends only on p - q; tabulate the first column.
  CVector col(M);
  for (int delta = 0; delta < M; ++delta) {
    cd acc = 0.0;
    for (int i = 0; i < kOrder; ++i) {
      const double a = center_angle + angular_spread * x[static_cast<std::size_t>(i)];
      const double phase = -2.0 * std::numbers::pi * antenna_spacing * delta * std::sin(a);
      acc += w[static_cast<std::size_t>(i)] * cd(std::cos(phase), std::sin(phase));
    }
    // (1 / (2 spread)) * spread * sum w f = sum w f / 2
    col(delta) = path_gain * acc * 0.5;
  }
  CMatrix theta(M, M);
  for (int p = 0; p < M; ++p) {
    for (int q = 0; q < M; ++q) {
      theta(p, q) = p >= q ? col(p - q) : std::conj(col(q - p));
    }
  }
  for (int p = 0; p < M; ++p) theta(p, p) = cd(path_gain, 0.0);
  return CorrelationMatrix(std::move(theta));
}

double path_gain_log_distance(double distance_m, double exponent, double ref_gain_db) {
  if (!(distance_m > 0.0)) throw ParameterError("distance must be positive");
  return std::pow(10.0, (ref_gain_db - 10.0 * exponent * std::log10(distance_m)) / 10.0);
}

CVector sample_channel(const CorrelationMatrix& corr, std::uint64_t seed) {
  const int M = corr.dim();
  Rng rng(seed);
  const CVector z = complex_gaussian(rng, M, 1.0 / M);
  return std::sqrt(static_cast<double>(M)) * (psd_sqrt(corr.entries()) * z);
}

CorrelationSet::CorrelationSet(int num_bs, int num_users, int dim)
    : num_bs_(num_bs), num_users_(num_users), dim_(dim) {
  if (num_bs < 1 || num_users < 0 || dim < 1) {
    throw ParameterError("correlation set needs N >= 1, K >= 0, M >= 1");
  }
  matrices_.assign(static_cast<std::size_t>(num_bs) * static_cast<std::size_t>(num_users),
                   CorrelationMatrix(CMatrix::Zero(dim, dim)));
  cluster_ids_.assign(static_cast<std::size_t>(num_users), -1);
  serving_.assign(static_cast<std::size_t>(num_users), -1);
}

const CorrelationMatrix& CorrelationSet::at(int user, int bs) const {
  if (user < 0 || user >= num_users_ || bs < 0 || bs >= num_bs_) {
    throw ParameterError("correlation index out of range (user " + std::to_string(user) + ", bs " +
                         std::to_string(bs) + ")");
  }
  return matrices_[static_cast<std::size_t>(user) * static_cast<std::size_t>(num_bs_) +
                   static_cast<std::size_t>(bs)];
}

void CorrelationSet::set(int user, int bs, CorrelationMatrix m) {
  if (user < 0 || user >= num_users_ || bs < 0 || bs >= num_bs_) {
    throw ParameterError("correlation index out of range");
  }
  if (m.dim() != dim_) throw ParameterError("correlation matrix dimension mismatch");
  matrices_[static_cast<std::size_t>(user) * static_cast<std::size_t>(num_bs_) +
            static_cast<std::size_t>(bs)] = std::move(m);
}

void CorrelationSet::validate() const {
  for (int k = 0; k < num_users_; ++k) {
    for (int n = 0; n < num_bs_; ++n) {
      const auto& m = at(k, n);
      if (m.dim() != dim_) throw ValidationError("correlation matrix dimension mismatch");
      try {
        m.validate();
      } catch (const ValidationError& e) {
        throw ValidationError("Theta(" + std::to_string(k) + "," + std::to_string(n) + "): " + e.what());
      }
    }
  }
  for (int a = 0; a < num_users_; ++a) {
    for (int b = a + 1; b < num_users_; ++b) {
      if (cluster_id(a) < 0 || cluster_id(a) != cluster_id(b)) continue;
      for (int n = 0; n < num_bs_; ++n) {
        const CMatrix& x = at(a, n).entries();
        const CMatrix& y = at(b, n).entries();
        const double tx = x.trace().real();
        const double ty = y.trace().real();
        if (tx == 0.0 && ty == 0.0) continue;
        if (tx == 0.0 || ty == 0.0 || (x / tx - y / ty).norm() > 1e-10 * (x / tx).norm()) {
          throw ValidationError("users " + std::to_string(a) + " and " + std::to_string(b) +
                                " share cluster " + std::to_string(cluster_id(a)) +
                                " but differ at BS " + std::to_string(n));
        }
      }
    }
  }
}

void CorrelationSet::write_text(std::ostream& os) const {
  os << dim_ << ' ' << num_bs_ << ' ' << num_users_ << '\n';
  std::ostringstream tok;
  tok << std::setprecision(17);
  for (int k = 0; k < num_users_; ++k) {
    for (int n = 0; n < num_bs_; ++n) {
      const CMatrix& m = at(k, n).entries();
      for (int p = 0; p < dim_; ++p) {
        tok.str("");
        for (int q = 0; q < dim_; ++q) {
          if (q > 0) tok << ' ';
          tok << m(p, q).real() << ',' << m(p, q).imag();
        }
        os << tok.str() << '\n';
      }
    }
  }
}

CorrelationSet CorrelationSet::read_text(std::istream& is) {
  int M = 0;
  int N = 0;
  int K = 0;
  if (!(is >> M >> N >> K)) throw ParameterError("correlation file: bad header, expected \"M N K\"");
  CorrelationSet set(N, K, M);
  std::string token;
  for (int k = 0; k < K; ++k) {
    for (int n = 0; n < N; ++n) {
      CMatrix m(M, M);
      for (int p = 0; p < M; ++p) {
        for (int q = 0; q < M; ++q) {
          if (!(is >> token)) throw ParameterError("correlation file: truncated matrix data");
          const auto comma = token.find(',');
          if (comma == std::string::npos) {
            throw ParameterError("correlation file: token \"" + token + "\" is not re,im");
          }
          try {
            m(p, q) = cd(std::stod(token.substr(0, comma)), std::stod(token.substr(comma + 1)));
          } catch (const std::exception&) {
            throw ParameterError("correlation file: token \"" + token + "\" is not numeric");
          }
        }
      }
      set.set(k, n, CorrelationMatrix(std::move(m)));
    }
  }
  return set;
}

ChannelSampler::ChannelSampler(const CorrelationSet& corr)
    : num_bs_(corr.num_bs()), num_users_(corr.num_users()), dim_(corr.dim()) {
  sqrt_.reserve(static_cast<std::size_t>(num_bs_ * num_users_));
  const double scale = std::sqrt(static_cast<double>(dim_));
  for (int k = 0; k < num_users_; ++k) {
    for (int n = 0; n < num_bs_; ++n) {
      sqrt_.push_back(scale * psd_sqrt(corr.at(k, n).entries()));
    }
  }
}

std::vector<CVector> ChannelSampler::sample(Rng& rng) const {
  std::vector<CVector> h;
  h.reserve(sqrt_.size());
  for (const auto& s : sqrt_) {
    h.push_back(s * complex_gaussian(rng, dim_, 1.0 / dim_));
  }
  return h;
}

}  // namespace hmimo
