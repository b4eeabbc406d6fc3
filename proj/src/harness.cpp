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

#include "hmimo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "hmimo/error.hpp"
#include "hmimo/kernels.hpp"
#include "hmimo/rng.hpp"

namespace hmimo {

MonteCarloMode parse_monte_carlo_mode(const std::string& name) {
  if (name == "sampled") return MonteCarloMode::sampled;
  if (name == "mixture") return MonteCarloMode::mixture;
  throw ParameterError("unknown Monte Carlo mode '" + name + "' (expected sampled or mixture)");
}

std::string monte_carlo_mode_name(MonteCarloMode mode) {
  return mode == MonteCarloMode::sampled ? "sampled" : "mixture";
}

namespace {

struct DrawSample {
  RVector rate, rate_ici, intercell, power;
  double ici_ratio = 0.0;
};

DrawSample zero_sample(int K, int N) {
  DrawSample s;
  s.rate = RVector::Zero(K);
  s.rate_ici = RVector::Zero(K);
  s.intercell = RVector::Zero(K);
  s.power = RVector::Zero(N);
  return s;
}

// Runs fn(d) for every draw on a worker pool; results are kept in draw order so
// aggregation does not depend on scheduling.
template <class Fn>
std::vector<DrawSample> run_draws(int draws, int threads, Fn fn) {
  std::vector<DrawSample> out(static_cast<std::size_t>(draws));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(draws));
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, draws));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int d = next++; d < draws; d = next++) {
      try {
        out[static_cast<std::size_t>(d)] = fn(d);
      } catch (...) {
        errors[static_cast<std::size_t>(d)] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// Neumaier-compensated accumulator.
class Sum {
 public:
  void add(double x) {
    const double t = s_ + x;
    c_ += std::abs(s_) >= std::abs(x) ? (s_ - t) + x : (x - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

template <class Get>
std::pair<double, double> mean_se(const std::vector<DrawSample>& samples, Get get) {
  const double n = static_cast<double>(samples.size());
  Sum s;
  for (const auto& x : samples) s.add(get(x));
  const double mean = s.value() / n;
  if (samples.size() < 2) return {mean, 0.0};
  Sum v;
  for (const auto& x : samples) {
    const double d = get(x) - mean;
    v.add(d * d);
  }
  return {mean, std::sqrt(v.value() / (n - 1.0) / n)};
}

void aggregate(const std::vector<DrawSample>& samples, int K, int N, MonteCarloReport& r) {
  r.draws = static_cast<int>(samples.size());
  r.rate_mean.resize(K);
  r.rate_se.resize(K);
  r.rate_ici_mean.resize(K);
  r.rate_ici_se.resize(K);
  r.intercell_mean.resize(K);
  r.power_mean.resize(N);
  r.power_se.resize(N);
  for (int k = 0; k < K; ++k) {
    std::tie(r.rate_mean(k), r.rate_se(k)) = mean_se(samples, [k](const DrawSample& s) { return s.rate(k); });
    std::tie(r.rate_ici_mean(k), r.rate_ici_se(k)) =
        mean_se(samples, [k](const DrawSample& s) { return s.rate_ici(k); });
    r.intercell_mean(k) = mean_se(samples, [k](const DrawSample& s) { return s.intercell(k); }).first;
  }
  for (int n = 0; n < N; ++n) {
    std::tie(r.power_mean(n), r.power_se(n)) = mean_se(samples, [n](const DrawSample& s) { return s.power(n); });
  }
  std::tie(r.sum_rate_mean, r.sum_rate_se) = mean_se(samples, [](const DrawSample& s) { return s.rate.sum(); });
  std::tie(r.sum_rate_ici_mean, r.sum_rate_ici_se) =
      mean_se(samples, [](const DrawSample& s) { return s.rate_ici.sum(); });
  r.max_ici_ratio = 0.0;
  r.sum_rate_ici_draws.clear();
  for (const auto& s : samples) {
    r.max_ici_ratio = std::max(r.max_ici_ratio, s.ici_ratio);
    r.sum_rate_ici_draws.push_back(s.rate_ici.sum());
  }
}

RVector relative_error(const RVector& mc, const RVector& de) {
  RVector e(mc.size());
  for (Eigen::Index i = 0; i < mc.size(); ++i) {
    e(i) = de(i) > 0.0 ? std::abs(mc(i) - de(i)) / de(i) : std::abs(mc(i));
  }
  return e;
}

void check_draws(const MonteCarloOptions& opts) {
  if (opts.draws < 1) throw ParameterError("draw count must be at least 1");
}

}  // namespace

MonteCarloReport monte_carlo_policy(const ControlPolicy& policy, const CorrelationSet& corr,
                                    const TopologyGraph& graph, double nu, const MonteCarloOptions& opts) {
  check_draws(opts);
  if (policy.controls.empty()) throw ParameterError("policy has no controls");
  const int K = graph.num_users();
  const int N = graph.num_bs();
  const ChannelSampler sampler(corr);

  auto sample_control = [&](const CompositeControl& c, const ChannelRealization& h, double weight, DrawSample& s) {
    const auto m = evaluate_realization(c, graph, h, nu);
    s.rate += weight * m.rate;
    s.rate_ici += weight * m.rate_with_ici;
    s.intercell += weight * m.intercell;
    s.power += weight * m.power;
    for (int k = 0; k < K; ++k) {
      if (m.neighbor_ici(k) > 0.0) s.ici_ratio = std::max(s.ici_ratio, m.neighbor_ici(k) / (m.signal(k) + 1.0));
    }
  };

  const auto samples = run_draws(opts.draws, opts.threads, [&](int d) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(d)));
    const ChannelRealization h = sampler.sample(rng);
    DrawSample s = zero_sample(K, N);
    if (opts.mode == MonteCarloMode::mixture) {
      for (std::size_t j = 0; j < policy.size(); ++j) {
        if (policy.probs[j] > 0.0) sample_control(policy.controls[j], h, policy.probs[j], s);
      }
    } else {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      std::size_t j = 0;
      double cum = policy.probs[0];
      while (u >= cum && j + 1 < policy.size()) cum += policy.probs[++j];
      sample_control(policy.controls[j], h, 1.0, s);
    }
    return s;
  });

  MonteCarloReport r;
  r.seed = opts.seed;
  aggregate(samples, K, N, r);

  r.de_rate = RVector::Zero(K);
  r.de_power = RVector::Zero(N);
  r.full_de_rate = RVector::Zero(K);
  r.full_de_power = RVector::Zero(N);
  for (std::size_t j = 0; j < policy.size(); ++j) {
    const double q = policy.probs[j];
    const auto de = de_rate_power(policy.controls[j], corr, graph, nu);
    r.de_rate += q * de.rate;
    r.de_power += q * de.power;
    if (r.full_de_note.empty()) {
      try {
        const auto full = full_de(policy.controls[j], corr, graph, nu);
        r.full_de_rate += q * full.rate_hat;
        r.full_de_power += q * full.power_hat;
      } catch (const NumericalError& e) {
        r.full_de_note = std::string("control ") + std::to_string(j) + ": " + e.what();
      }
    }
  }
  if (!r.full_de_note.empty()) {
    r.full_de_rate = RVector(0);
    r.full_de_power = RVector(0);
  }
  r.rate_rel_err = relative_error(r.rate_mean, r.de_rate);
  r.power_rel_err = relative_error(r.power_mean, r.de_power);
  return r;
}

std::vector<int> ffr_coloring(const TopologyGraph& graph, int partitions) {
  if (partitions < 1) throw ParameterError("reuse partitions must be at least 1");
  const int N = graph.num_bs();
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(N), std::vector<bool>(static_cast<std::size_t>(N)));
  for (int k = 0; k < graph.num_users(); ++k) {
    std::vector<int> bss = graph.neighbor_bs(k);
    bss.push_back(graph.serving(k));
    for (int a : bss) {
      for (int b : bss) {
        if (a != b) adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
      }
    }
  }
  std::vector<int> color(static_cast<std::size_t>(N), -1);
  std::vector<int> load(static_cast<std::size_t>(partitions), 0);
  for (int n = 0; n < N; ++n) {
    std::vector<int> conflicts(static_cast<std::size_t>(partitions), 0);
    for (int m = 0; m < n; ++m) {
      if (adj[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)]) ++conflicts[static_cast<std::size_t>(color[static_cast<std::size_t>(m)])];
    }
    const int fewest = *std::min_element(conflicts.begin(), conflicts.end());
    int best = -1;
    for (int c = 0; c < partitions; ++c) {
      if (conflicts[static_cast<std::size_t>(c)] != fewest) continue;
      if (best < 0 || load[static_cast<std::size_t>(c)] < load[static_cast<std::size_t>(best)]) best = c;
    }
    color[static_cast<std::size_t>(n)] = best;
    ++load[static_cast<std::size_t>(best)];
  }
  return color;
}

namespace {

void normalize_columns(CMatrix& g) {
  for (Eigen::Index l = 0; l < g.cols(); ++l) {
    const double nrm = g.col(l).norm();
    if (nrm > 0.0) g.col(l) /= nrm;
  }
}

double received(const CVector& h, const CMatrix& v, Eigen::Index col) {
  return std::norm(kernels::dot(h.data(), v.col(col).data(), static_cast<std::size_t>(h.size())));
}

}  // namespace

MonteCarloReport ffr_baseline(const CorrelationSet& corr, const TopologyGraph& graph, double pc, int partitions,
                              const MonteCarloOptions& opts) {
  check_draws(opts);
  if (!(pc > 0.0)) throw ParameterError("P_c must be positive");
  const int K = graph.num_users();
  const int N = graph.num_bs();
  const int M = corr.dim();
  const auto color = ffr_coloring(graph, partitions);
  for (int n = 0; n < N; ++n) {
    if (static_cast<int>(graph.assoc_users(n).size()) > M) {
      throw ValidationError("FFR: BS " + std::to_string(n) + " serves more users than antennas");
    }
  }
  const double P = partitions;
  const ChannelSampler sampler(corr);
  const CMatrix eye = CMatrix::Identity(M, M);

  const auto samples = run_draws(opts.draws, opts.threads, [&](int d) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(d)));
    const ChannelRealization h = sampler.sample(rng);
    DrawSample s = zero_sample(K, N);
    std::vector<CMatrix> v(static_cast<std::size_t>(N));
    std::vector<double> pw(static_cast<std::size_t>(N), 0.0);
    for (int n = 0; n < N; ++n) {
      const auto& un = graph.assoc_users(n);
      if (un.empty()) continue;
      CMatrix g = rzf_inner_precoder(stack_channels(h, N, un, n), eye, kZfNu);
      normalize_columns(g);
      v[static_cast<std::size_t>(n)] = std::move(g);
      pw[static_cast<std::size_t>(n)] = pc / static_cast<double>(un.size());
      s.power(n) = pc;
    }
    for (int b = 0; b < N; ++b) {
      const auto& ub = graph.assoc_users(b);
      for (std::size_t i = 0; i < ub.size(); ++i) {
        const int k = ub[i];
        const CVector& hk = h[static_cast<std::size_t>(k * N + b)];
        const double signal = pw[static_cast<std::size_t>(b)] * received(hk, v[static_cast<std::size_t>(b)], static_cast<Eigen::Index>(i));
        double intra = 0.0;
        for (std::size_t l = 0; l < ub.size(); ++l) {
          if (l != i) intra += pw[static_cast<std::size_t>(b)] * received(hk, v[static_cast<std::size_t>(b)], static_cast<Eigen::Index>(l));
        }
        double inter = 0.0;
        for (int m = 0; m < N; ++m) {
          if (m == b || color[static_cast<std::size_t>(m)] != color[static_cast<std::size_t>(b)]) continue;
          const CVector& hkm = h[static_cast<std::size_t>(k * N + m)];
          for (Eigen::Index l = 0; l < v[static_cast<std::size_t>(m)].cols(); ++l) {
            inter += pw[static_cast<std::size_t>(m)] * received(hkm, v[static_cast<std::size_t>(m)], l);
          }
        }
        const double rate = std::log1p(P * signal / (P * (intra + inter) + 1.0)) / P;
        s.rate(k) = rate;
        s.rate_ici(k) = rate;
        s.intercell(k) = inter;
        s.ici_ratio = std::max(s.ici_ratio, intra / (signal + 1.0));
      }
    }
    return s;
  });

  MonteCarloReport r;
  r.seed = opts.seed;
  aggregate(samples, K, N, r);
  return r;
}

MonteCarloReport comp_baseline(const CorrelationSet& corr, const TopologyGraph& graph, double pc, int cluster_size,
                               double delay_rho, const MonteCarloOptions& opts) {
  check_draws(opts);
  if (!(pc > 0.0)) throw ParameterError("P_c must be positive");
  if (cluster_size < 1) throw ParameterError("cluster size must be at least 1");
  if (!(delay_rho >= 0.0 && delay_rho <= 1.0)) throw ParameterError("delay rho must lie in [0, 1]");
  const int K = graph.num_users();
  const int N = graph.num_bs();
  const int M = corr.dim();
  const int c = std::min(cluster_size, N);
  const int num_clusters = (N + c - 1) / c;
  std::vector<std::vector<int>> bs_of(static_cast<std::size_t>(num_clusters));
  std::vector<UserSet> users_of(static_cast<std::size_t>(num_clusters));
  for (int n = 0; n < N; ++n) bs_of[static_cast<std::size_t>(n / c)].push_back(n);
  for (int k = 0; k < K; ++k) users_of[static_cast<std::size_t>(graph.serving(k) / c)].push_back(k);
  for (int cl = 0; cl < num_clusters; ++cl) {
    const auto dim = static_cast<std::size_t>(bs_of[static_cast<std::size_t>(cl)].size()) * static_cast<std::size_t>(M);
    if (users_of[static_cast<std::size_t>(cl)].size() > dim) {
      throw ValidationError("CoMP: cluster " + std::to_string(cl) + " has more users than antennas");
    }
  }
  const double rho_c = std::sqrt(std::max(0.0, 1.0 - delay_rho * delay_rho));
  const ChannelSampler sampler(corr);

  // Row k: channel of user k to every BS of the cluster, stacked.
  auto stacked = [&](const ChannelRealization& h, int k, const std::vector<int>& bss) {
    CVector out(static_cast<Eigen::Index>(bss.size()) * M);
    for (std::size_t i = 0; i < bss.size(); ++i) {
      out.segment(static_cast<Eigen::Index>(i) * M, M) = h[static_cast<std::size_t>(k * N + bss[i])];
    }
    return out;
  };

  const auto samples = run_draws(opts.draws, opts.threads, [&](int d) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(d)));
    const ChannelRealization h = sampler.sample(rng);
    const ChannelRealization h_indep = sampler.sample(rng);
    ChannelRealization hd(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) hd[i] = delay_rho * h[i] + rho_c * h_indep[i];

    DrawSample s = zero_sample(K, N);
    std::vector<CMatrix> v(static_cast<std::size_t>(num_clusters));
    std::vector<double> scale(static_cast<std::size_t>(num_clusters), 0.0);
    for (int cl = 0; cl < num_clusters; ++cl) {
      const auto& bss = bs_of[static_cast<std::size_t>(cl)];
      const auto& us = users_of[static_cast<std::size_t>(cl)];
      if (us.empty()) continue;
      const auto dim = static_cast<Eigen::Index>(bss.size()) * M;
      CMatrix H(static_cast<Eigen::Index>(us.size()), dim);
      for (std::size_t i = 0; i < us.size(); ++i) H.row(static_cast<Eigen::Index>(i)) = stacked(hd, us[i], bss).adjoint();
      const CMatrix gram = H * H.adjoint();
      Eigen::LLT<CMatrix> llt(gram);
      if (llt.info() != Eigen::Success) throw NumericalError("CoMP: singular cluster channel Gram matrix", INFINITY);
      CMatrix g = H.adjoint() * llt.solve(CMatrix::Identity(gram.rows(), gram.cols()));
      normalize_columns(g);
      double worst = 0.0;
      std::vector<double> load(bss.size(), 0.0);
      for (std::size_t i = 0; i < bss.size(); ++i) {
        load[i] = g.middleRows(static_cast<Eigen::Index>(i) * M, M).squaredNorm();
        worst = std::max(worst, load[i]);
      }
      scale[static_cast<std::size_t>(cl)] = pc / worst;
      for (std::size_t i = 0; i < bss.size(); ++i) s.power(bss[i]) = scale[static_cast<std::size_t>(cl)] * load[i];
      v[static_cast<std::size_t>(cl)] = std::move(g);
    }
    for (int cl = 0; cl < num_clusters; ++cl) {
      const auto& us = users_of[static_cast<std::size_t>(cl)];
      for (std::size_t i = 0; i < us.size(); ++i) {
        const int k = us[i];
        double signal = 0.0;
        double intra = 0.0;
        double inter = 0.0;
        for (int other = 0; other < num_clusters; ++other) {
          const CMatrix& g = v[static_cast<std::size_t>(other)];
          if (g.cols() == 0) continue;
          const CVector hk = stacked(h, k, bs_of[static_cast<std::size_t>(other)]);
          const double sc = scale[static_cast<std::size_t>(other)];
          for (Eigen::Index l = 0; l < g.cols(); ++l) {
            const double rx = sc * received(hk, g, l);
            if (other != cl) {
              inter += rx;
            } else if (l == static_cast<Eigen::Index>(i)) {
              signal = rx;
            } else {
              intra += rx;
            }
          }
        }
        const double rate = std::log1p(signal / (intra + inter + 1.0));
        s.rate(k) = rate;
        s.rate_ici(k) = rate;
        s.intercell(k) = inter;
        s.ici_ratio = std::max(s.ici_ratio, intra / (signal + 1.0));
      }
    }
    return s;
  });

  MonteCarloReport r;
  r.seed = opts.seed;
  aggregate(samples, K, N, r);
  return r;
}

}  // namespace hmimo
