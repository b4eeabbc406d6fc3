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

#include "hmimo/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hmimo/error.hpp"
#include "hmimo/waterfill.hpp"

namespace hmimo {

SchedulerMode parse_scheduler_mode(const std::string& name) {
  if (name == "exhaustive") return SchedulerMode::exhaustive;
  if (name == "greedy") return SchedulerMode::greedy;
  throw ParameterError("unknown scheduler mode '" + name + "' (expected exhaustive or greedy)");
}

std::string scheduler_mode_name(SchedulerMode mode) {
  return mode == SchedulerMode::exhaustive ? "exhaustive" : "greedy";
}

SchedulerEvaluator::SchedulerEvaluator(const CorrelationSet& corr, const TopologyGraph& graph, double nu, double pc,
                                       FixedPointOptions fp)
    : corr_(&corr), graph_(&graph), nu_(nu), pc_(pc), fp_(fp) {
  if (corr.num_users() != graph.num_users() || corr.num_bs() != graph.num_bs()) {
    throw ParameterError("correlation set and topology graph disagree on N or K");
  }
  if (!(nu > 0.0)) throw ParameterError("nu must be positive");
  if (!(pc > 0.0)) throw ParameterError("P_c must be positive");
}

const SchedulerEvaluator::Gains& SchedulerEvaluator::gains(int bs, const UserSet& served, const UserSet& blocked) {
  auto key = std::make_tuple(bs, served, blocked);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Gains g;
  try {
    const auto projected = projected_correlations(*corr_, *graph_, served, blocked, bs);
    auto sol = solve_xi_fixed_point(projected, nu_, fp_);
    g.ok = true;
    g.xi = sol.xi;
    g.iterations = sol.iterations;
    g.residual = sol.residual;
  } catch (const ConvergenceError& e) {
    g.error = "BS " + std::to_string(bs) + ": " + e.what();
    g.iterations = e.iterations();
    g.residual = e.residual();
  }
  return cache_.emplace(std::move(key), std::move(g)).first->second;
}

WsrResult SchedulerEvaluator::weighted_sum_rate(const UserSet& selected, const RVector& mu) {
  const int K = graph_->num_users();
  if (mu.size() != K) throw ParameterError("mu must have one entry per user");
  WsrResult out;
  out.selected = selected;
  std::sort(out.selected.begin(), out.selected.end());
  if (std::adjacent_find(out.selected.begin(), out.selected.end()) != out.selected.end()) {
    throw ParameterError("user set contains duplicates");
  }
  out.xi = RVector::Zero(K);
  out.power = RVector::Zero(K);
  const auto sbar = scheduled_neighbors(*graph_, out.selected);
  const double M = corr_->dim();
  for (int n = 0; n < graph_->num_bs(); ++n) {
    const UserSet sn = served_subset(*graph_, out.selected, n);
    if (sn.empty()) continue;
    const Gains& g = gains(n, sn, sbar[static_cast<std::size_t>(n)]);
    if (!g.ok) throw ConvergenceError(g.error, g.iterations, g.residual);
    RVector mu_n(static_cast<Eigen::Index>(sn.size()));
    for (std::size_t i = 0; i < sn.size(); ++i) mu_n(static_cast<Eigen::Index>(i)) = mu(sn[i]);
    const auto wf = waterfill(mu_n, g.xi, M, pc_);
    for (std::size_t i = 0; i < sn.size(); ++i) {
      out.xi(sn[i]) = g.xi(static_cast<Eigen::Index>(i));
      out.power(sn[i]) = wf.power(static_cast<Eigen::Index>(i));
    }
  }
  for (int k : out.selected) out.value += mu(k) * std::log1p(out.power(k));
  return out;
}

CompositeControl SchedulerEvaluator::build_control(const WsrResult& wsr) const {
  return make_control(*corr_, *graph_, wsr.selected, wsr.power);
}

WsrResult weighted_sum_rate(const UserSet& selected, const RVector& mu, const CorrelationSet& corr,
                            const TopologyGraph& graph, double nu, double pc) {
  SchedulerEvaluator eval(corr, graph, nu, pc);
  return eval.weighted_sum_rate(selected, mu);
}

RVector control_rates(const CompositeControl& control) {
  RVector r = RVector::Zero(control.num_users());
  for (const auto& sn : control.selected) {
    for (int k : sn) r(k) = std::log1p(control.power(k));
  }
  return r;
}

namespace {

Selection finish(SchedulerEvaluator& eval, WsrResult wsr) {
  Selection s;
  s.control = eval.build_control(wsr);
  s.rates = control_rates(s.control);
  s.wsr = std::move(wsr);
  return s;
}

}  // namespace

Selection procedure_w_star(SchedulerEvaluator& eval, const RVector& mu) {
  const int K = eval.num_users();
  if (K > kMaxEnumerationUsers) {
    throw CapabilityError("exhaustive selection supports at most " + std::to_string(kMaxEnumerationUsers) +
                          " users (K = " + std::to_string(K) + "); use greedy mode");
  }
  WsrResult best;
  bool have = false;
  const std::uint64_t count = std::uint64_t{1} << K;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    UserSet s;
    for (int k = 0; k < K; ++k) {
      if (mask & (std::uint64_t{1} << k)) s.push_back(k);
    }
    WsrResult r = eval.weighted_sum_rate(s, mu);
    const bool better = !have || r.value > best.value + kTieTol ||
                        (std::abs(r.value - best.value) <= kTieTol && r.selected < best.selected);
    if (better) {
      best = std::move(r);
      have = true;
    }
  }
  return finish(eval, std::move(best));
}

Selection procedure_w_greedy(SchedulerEvaluator& eval, const RVector& mu, std::vector<std::string>* warnings) {
  const int K = eval.num_users();
  WsrResult cur = eval.weighted_sum_rate({}, mu);
  while (static_cast<int>(cur.selected.size()) < K) {
    WsrResult best;
    bool have = false;
    for (int k = 0; k < K; ++k) {
      if (std::binary_search(cur.selected.begin(), cur.selected.end(), k)) continue;
      UserSet cand = cur.selected;
      cand.insert(std::upper_bound(cand.begin(), cand.end(), k), k);
      try {
        WsrResult r = eval.weighted_sum_rate(cand, mu);
        if (!have || r.value > best.value + kTieTol) {
          best = std::move(r);
          have = true;
        }
      } catch (const ConvergenceError& e) {
        if (warnings) warnings->push_back("greedy selection skipped user " + std::to_string(k) + ": " + e.what());
      }
    }
    if (!have || !(best.value > cur.value + kTieTol)) break;
    cur = std::move(best);
  }
  return finish(eval, std::move(cur));
}

Selection procedure_w(SchedulerEvaluator& eval, const RVector& mu, SchedulerMode mode,
                      std::vector<std::string>* warnings) {
  return mode == SchedulerMode::exhaustive ? procedure_w_star(eval, mu) : procedure_w_greedy(eval, mu, warnings);
}

RVector ControlPolicy::mean_rate() const {
  if (controls.empty()) return RVector(0);
  RVector r = RVector::Zero(rates.front().size());
  for (std::size_t j = 0; j < rates.size(); ++j) r += probs[j] * rates[j];
  return r;
}

void ControlPolicy::validate(const CorrelationSet& corr, const TopologyGraph& graph, double nu, double pc) const {
  if (controls.empty()) throw ValidationError("policy has no controls");
  if (probs.size() != controls.size() || rates.size() != controls.size()) {
    throw ValidationError("policy controls, probabilities and rates differ in length");
  }
  if (static_cast<int>(controls.size()) > graph.num_users()) {
    throw ValidationError("policy support " + std::to_string(controls.size()) + " exceeds K");
  }
  double total = 0.0;
  for (double q : probs) {
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("probability outside [0, 1]");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-10) throw ValidationError("probabilities do not sum to one");
  for (std::size_t j = 0; j < controls.size(); ++j) {
    try {
      validate_control(controls[j], corr, graph);
      const auto de = de_rate_power(controls[j], corr, graph, nu);
      for (int n = 0; n < graph.num_bs(); ++n) {
        if (de.power(n) > pc + 1e-6) {
          std::ostringstream msg;
          msg << "BS " << n << " DE power " << de.power(n) << " exceeds P_c " << pc;
          throw ValidationError(msg.str());
        }
      }
    } catch (const ValidationError& e) {
      throw ValidationError("control " + std::to_string(j) + ": " + e.what());
    }
  }
}

Certificate optimality_certificate(const ControlPolicy& policy, const UtilityFunction& u, SchedulerEvaluator& eval,
                                   SchedulerMode mode) {
  Certificate c;
  if (eval.num_users() > kMaxEnumerationUsers) {
    c.note = "unavailable: K exceeds the enumeration limit";
    return c;
  }
  const RVector rbar = policy.mean_rate();
  const RVector mu = utility_value_grad(u, rbar).grad;
  const Selection star = procedure_w_star(eval, mu);
  if (mode == SchedulerMode::exhaustive) {
    c.value = mu.dot(star.rates - rbar);
    c.note = "slack";
  } else {
    const Selection greedy = procedure_w_greedy(eval, mu);
    c.value = mu.dot(star.rates - greedy.rates);
    c.note = "greedy bound";
  }
  c.available = true;
  return c;
}

namespace {

bool same_control(const CompositeControl& a, const CompositeControl& b) {
  if (a.selected != b.selected) return false;
  const double scale = 1.0 + std::max(a.power.cwiseAbs().maxCoeff(), b.power.cwiseAbs().maxCoeff());
  return (a.power - b.power).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

// Best eta in [0, 1] for U((1 - eta) a + eta b): grid, then golden section around the best node.
std::pair<double, double> line_search(const UtilityFunction& u, const RVector& a, const RVector& b) {
  auto f = [&](double eta) { return utility_value(u, (1.0 - eta) * a + eta * b); };
  double best_eta = 0.0;
  double best = f(0.0);
  for (int i = 1; i <= 100; ++i) {
    const double eta = i / 100.0;
    const double v = f(eta);
    if (v > best) {
      best = v;
      best_eta = eta;
    }
  }
  double lo = std::max(0.0, best_eta - 0.01);
  double hi = std::min(1.0, best_eta + 0.01);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  for (double eta : {x1, x2}) {
    const double v = f(eta);
    if (v > best) {
      best = v;
      best_eta = eta;
    }
  }
  return {best_eta, best};
}

template <class Fn>
auto with_context(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(where + ": " + e.what(), e.iterations(), e.residual());
  } catch (const NumericalError& e) {
    throw NumericalError(where + ": " + e.what(), e.condition());
  }
}

void prune(ControlPolicy& p) {
  ControlPolicy kept;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p.probs[j] > 0.0) {
      kept.controls.push_back(std::move(p.controls[j]));
      kept.probs.push_back(p.probs[j]);
      kept.rates.push_back(std::move(p.rates[j]));
    }
  }
  double total = 0.0;
  for (double q : kept.probs) total += q;
  for (double& q : kept.probs) q /= total;
  p = std::move(kept);
}

}  // namespace

AlgorithmEResult algorithm_e(SchedulerEvaluator& eval, const UtilityFunction& u, const AlgorithmEOptions& opts) {
  const int K = eval.num_users();
  if (u.weights.size() != K) throw ParameterError("utility weights must have one entry per user");
  if (opts.mode == SchedulerMode::exhaustive && K > kMaxEnumerationUsers) {
    throw CapabilityError("exhaustive mode supports at most " + std::to_string(kMaxEnumerationUsers) +
                          " users (K = " + std::to_string(K) + "); use greedy mode");
  }
  if (opts.max_outer < 1) throw ParameterError("max_outer must be at least 1");
  AlgorithmEResult res;
  ControlPolicy& pol = res.policy;

  Selection first = with_context("initialization", [&] { return procedure_w(eval, u.weights, opts.mode, &res.warnings); });
  pol.controls.push_back(std::move(first.control));
  pol.rates.push_back(std::move(first.rates));
  pol.probs.push_back(1.0);

  TraceRecord rec;
  rec.mean_rate = pol.mean_rate();
  rec.utility = utility_value(u, rec.mean_rate);
  rec.support = 1;
  res.trace.push_back(rec);

  for (int i = 0;; ++i) {
    if (i > 0 && std::abs(res.trace[static_cast<std::size_t>(i)].utility -
                          res.trace[static_cast<std::size_t>(i - 1)].utility) <= opts.eps_stop) {
      res.converged = true;
      break;
    }
    if (i + 1 >= opts.max_outer) break;
    const std::string where = "iteration " + std::to_string(i + 1);

    const RVector rbar = res.trace.back().mean_rate;
    const RVector mu = utility_value_grad(u, rbar).grad;
    Selection next = with_context(where, [&] { return procedure_w(eval, mu, opts.mode, &res.warnings); });
    const double gap = mu.dot(next.rates - rbar);
    if (opts.mode == SchedulerMode::exhaustive) res.trace.back().certificate = gap;
    const auto [eta, ls_value] = line_search(u, rbar, next.rates);

    std::size_t idx = pol.size();
    for (std::size_t j = 0; j < pol.size(); ++j) {
      if (same_control(pol.controls[j], next.control)) {
        idx = j;
        break;
      }
    }
    const RVector new_rates = next.rates;
    if (idx == pol.size()) {
      pol.controls.push_back(std::move(next.control));
      pol.rates.push_back(std::move(next.rates));
      pol.probs.push_back(0.0);
    }
    std::vector<double> start(pol.size());
    for (std::size_t j = 0; j < pol.size(); ++j) start[j] = (1.0 - eta) * pol.probs[j];
    start[idx] += eta;

    const QResult q = procedure_q(pol.rates, u, opts.q, start);
    if (!q.converged) {
      std::ostringstream msg;
      msg << where << ": probability optimization stopped at gradient-map norm " << q.grad_map_norm;
      res.warnings.push_back(msg.str());
    }
    pol.probs = q.q;
    prune(pol);
    pol.probs = reduce_support(pol.rates, pol.probs);
    prune(pol);

    TraceRecord r;
    r.iter = i + 1;
    r.mean_rate = pol.mean_rate();
    r.utility = utility_value(u, r.mean_rate);
    r.support = static_cast<int>(pol.size());
    r.fw_gap = gap;
    r.line_search_utility = ls_value;
    r.new_rates = new_rates;
    res.trace.push_back(std::move(r));
  }

  res.certificate = with_context("certificate", [&] { return optimality_certificate(pol, u, eval, opts.mode); });
  if (res.certificate.available) res.trace.back().certificate = res.certificate.value;
  return res;
}

}  // namespace hmimo
