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

#include <doctest.h>

#include <cmath>

#include "hmimo/error.hpp"
#include "hmimo/precoder.hpp"
#include "hmimo/rng.hpp"
#include "scenarios.hpp"

using namespace hmimo;

namespace {

CMatrix random_unitary(int M, std::uint64_t seed) {
  Rng rng(seed);
  const CMatrix a = complex_gaussian(rng, M, M, 1.0);
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ() * CMatrix::Identity(M, M);
}

CMatrix projector(const CMatrix& basis) { return basis * basis.adjoint(); }

// Theta = scale * V V^H for the given columns of a unitary.
CorrelationMatrix span_correlation(const CMatrix& u, int first, int count, double scale = 1.0) {
  const CMatrix v = u.middleCols(first, count);
  return CorrelationMatrix(scale * v * v.adjoint(), count);
}

ChannelRealization draw(const CorrelationSet& corr, std::uint64_t seed) {
  Rng rng(seed);
  return ChannelSampler(corr).sample(rng);
}

}  // namespace

TEST_CASE("interference nullspace basis") {
  const int M = 8;
  const CMatrix u = random_unitary(M, 11);
  CorrelationSet c(1, 3, M);
  c.set(0, 0, span_correlation(u, 0, 2));
  c.set(1, 0, span_correlation(u, 0, 2, 3.0));
  c.set(2, 0, span_correlation(u, 4, 4));

  CHECK(interference_nullspace_basis(c, {}, 0).cols() == 0);
  const CMatrix b = interference_nullspace_basis(c, {0}, 0);
  REQUIRE(b.cols() == 2);
  CHECK((b.adjoint() * b - CMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((projector(b) - projector(u.leftCols(2))).norm() <= 1e-9);
  const CMatrix both = interference_nullspace_basis(c, {0, 1}, 0);
  CHECK((projector(both) - projector(b)).norm() <= 1e-9);
}

TEST_CASE("outer precoder") {
  const int M = 8;
  const CMatrix u = random_unitary(M, 12);
  CorrelationSet c(1, 3, M);
  c.set(0, 0, span_correlation(u, 0, 4));  // selected span F
  c.set(1, 0, span_correlation(u, 2, 2));  // blocked span F_c inside F
  c.set(2, 0, span_correlation(u, 0, 4, 0.5));

  SUBCASE("no blocked users spans the selected range") {
    const CMatrix f = outer_precoder(c, {0}, {}, 0);
    CHECK(f.cols() == 4);
    CHECK((projector(f) - projector(u.leftCols(4))).norm() < 1e-9);
  }
  SUBCASE("nested blocked subspace leaves the orthogonal complement inside F") {
    const CMatrix f = outer_precoder(c, {0}, {1}, 0);
    REQUIRE(f.cols() == 2);
    CHECK((f.adjoint() * u.middleCols(2, 2)).norm() < 1e-9);
    CHECK((projector(f) - projector(u.leftCols(2))).norm() < 1e-9);
    CHECK((f.adjoint() * f - CMatrix::Identity(2, 2)).norm() < 1e-12);
  }
  SUBCASE("fully blocked range gives an empty precoder") {
    CHECK(outer_precoder(c, {1}, {0}, 0).cols() == 0);
  }
  CHECK_THROWS_AS(outer_precoder(c, {0, 1}, {1}, 0), ParameterError);
}

TEST_CASE("RZF inner precoder") {
  Rng rng(5);
  const int M = 16;
  SUBCASE("single user with F = I is the Sherman-Morrison closed form") {
    const double nu = 0.01;
    const CVector h = complex_gaussian(rng, M, 1.0);
    const CMatrix g = rzf_inner_precoder(h.adjoint(), CMatrix::Identity(M, M), nu);
    const CVector expect = h / (h.squaredNorm() + M * nu);
    CHECK((g.col(0) - expect).norm() < 1e-12 * expect.norm());
  }
  SUBCASE("large regularizer approaches the scaled matched filter") {
    const double nu = 1e6;
    const CMatrix hs = complex_gaussian(rng, 3, M, 1.0);
    const CMatrix f = random_unitary(M, 3).leftCols(6);
    const CMatrix g = rzf_inner_precoder(hs, f, nu);
    const CMatrix mf = (f.adjoint() * hs.adjoint()) / (M * nu);
    CHECK((g - mf).norm() <= 1e-4 * mf.norm());
  }
  SUBCASE("random four-user instance against an explicit inverse") {
    const double nu = 0.05;
    const CMatrix hs = complex_gaussian(rng, 4, M, 1.0);
    const CMatrix f = random_unitary(M, 4).leftCols(10);
    const CMatrix heff = hs * f;
    const CMatrix a = heff.adjoint() * heff + M * nu * CMatrix::Identity(10, 10);
    const CMatrix oracle = a.inverse() * heff.adjoint();
    CHECK((rzf_inner_precoder(hs, f, nu) - oracle).norm() < 1e-10 * oracle.norm());
  }
  CHECK(rzf_inner_precoder(complex_gaussian(rng, 2, M, 1.0), CMatrix(M, 0), 0.1).size() == 0);
  CHECK_THROWS_AS(rzf_inner_precoder(complex_gaussian(rng, 2, M, 1.0), CMatrix::Identity(M, M), 0.0),
                  ParameterError);
}

TEST_CASE("instantaneous rate") {
  SUBCASE("single user along its own channel") {
    // F = h/||h||, ||h||^2 = 2, p = 3: the RZF gain is ||h||^2/(||h||^2 + M nu).
    const int M = 4;
    const double nu = 0.01;
    const auto corr = testing::isotropic_single_user(M);
    const auto g = build_topology(corr, 10.0);
    CVector h = CVector::Zero(M);
    h(0) = cd(1.0, 0.0);
    h(2) = cd(0.0, 1.0);
    CompositeControl control;
    control.outer = {h / h.norm()};
    control.selected = {{0}};
    control.power = RVector::Constant(1, 3.0);
    const double gain = 2.0 / (2.0 + M * nu);
    const auto m = evaluate_realization(control, g, {h}, nu);
    CHECK(m.signal(0) == doctest::Approx(3.0 * gain * gain).epsilon(1e-12));
    CHECK(m.rate(0) == doctest::Approx(std::log1p(3.0 * gain * gain)).epsilon(1e-12));
    CHECK(m.power(0) == doctest::Approx(3.0 * 2.0 / std::pow(2.0 + M * nu, 2)).epsilon(1e-12));
  }
  SUBCASE("unselected user has zero rate") {
    const auto corr = testing::single_cell_scenario(8, 2, 2, 9);
    const auto g = build_topology(corr, 10.0);
    const auto control = make_control(corr, g, {0}, (RVector(2) << 1.0, 0.0).finished());
    CHECK(instantaneous_rate(1, control, g, draw(corr, 1), 0.01) == 0.0);
  }
  SUBCASE("two-user random instance against a scalar formula") {
    const int M = 8;
    const double nu = 0.02;
    const auto corr = testing::single_cell_scenario(M, 4, 2, 21);
    const auto g = build_topology(corr, 10.0);
    RVector p(2);
    p << 1.5, 0.7;
    const auto control = make_control(corr, g, {0, 1}, p);
    const auto h = draw(corr, 22);
    const CMatrix hs = stack_channels(h, 1, {0, 1}, 0);
    const CMatrix f = control.outer[0];
    const CMatrix v = f * rzf_inner_precoder(hs, f, nu);
    for (int k = 0; k < 2; ++k) {
      double sig = 0.0, intra = 0.0;
      for (int l = 0; l < 2; ++l) {
        double acc_re = 0.0, acc_im = 0.0;
        for (int m = 0; m < M; ++m) {
          const cd t = std::conj(h[static_cast<std::size_t>(k)](m)) * v(m, l);
          acc_re += t.real();
          acc_im += t.imag();
        }
        const double r = p(l) * (acc_re * acc_re + acc_im * acc_im);
        (l == k ? sig : intra) += r;
      }
      CHECK(std::abs(instantaneous_rate(k, control, g, h, nu) - std::log(1.0 + sig / (intra + 1.0))) < 1e-12);
    }
  }
}

TEST_CASE("transmit power") {
  const int M = 16;
  const double nu = 0.01;
  SUBCASE("single user closed form") {
    const auto corr = testing::isotropic_single_user(M);
    const auto g = build_topology(corr, 10.0);
    CompositeControl control;
    control.outer = {CMatrix::Identity(M, M)};
    control.selected = {{0}};
    control.power = RVector::Constant(1, 2.5);
    const auto h = draw(corr, 3);
    const double n2 = h[0].squaredNorm();
    const double expect = 2.5 * n2 / std::pow(n2 + M * nu, 2);
    CHECK(transmit_power(control, h, 0, nu) == doctest::Approx(expect).epsilon(1e-12));
    control.selected = {{}};
    control.power(0) = 0.0;
    CHECK(transmit_power(control, h, 0, nu) == 0.0);
  }
  SUBCASE("trace form equals the column-norm form") {
    const auto corr = testing::two_cell_scenario(M, 4, 3, 17);
    const auto g = build_topology(corr, 10.0);
    RVector p(6);
    p << 1.0, 2.0, 0.5, 3.0, 0.0, 1.2;
    const auto control = make_control(corr, g, {0, 1, 2, 3, 5}, p);
    const auto h = draw(corr, 18);
    const auto m = evaluate_realization(control, g, h, nu);
    for (int n = 0; n < 2; ++n) {
      const auto& sn = control.selected[static_cast<std::size_t>(n)];
      const CMatrix& f = control.outer[static_cast<std::size_t>(n)];
      const CMatrix gn = rzf_inner_precoder(stack_channels(h, 2, sn, n), f, nu);
      double alt = 0.0;
      for (std::size_t l = 0; l < sn.size(); ++l) {
        alt += p(sn[l]) * (f * gn.col(static_cast<Eigen::Index>(l))).squaredNorm();
      }
      CHECK(std::abs(transmit_power(control, h, n, nu) - alt) <= 1e-10 * (1.0 + alt));
      CHECK(std::abs(m.power(n) - alt) <= 1e-10 * (1.0 + alt));
    }
  }
}

TEST_CASE("outer basis rotation leaves rate and power unchanged") {
  const int M = 16;
  const double nu = 0.01;
  const auto corr = testing::two_cell_scenario(M, 4, 3, 31);
  const auto g = build_topology(corr, 10.0);
  const auto control = make_control(corr, g, {0, 2, 3, 5}, (RVector(6) << 1, 0, 1, 1, 0, 1).finished());
  auto rotated = control;
  for (int n = 0; n < 2; ++n) {
    auto& f = rotated.outer[static_cast<std::size_t>(n)];
    f = f * random_unitary(static_cast<int>(f.cols()), 40 + static_cast<std::uint64_t>(n));
  }
  const auto h = draw(corr, 32);
  const auto a = evaluate_realization(control, g, h, nu);
  const auto b = evaluate_realization(rotated, g, h, nu);
  CHECK((a.rate - b.rate).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.power - b.power).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("zero inter-cell interference toward scheduled neighbors") {
  const int M = 16;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto corr = testing::two_cell_scenario(M, 4, 3, seed);
    const auto g = build_topology(corr, 10.0);
    REQUIRE(!g.neighbor_users(0).empty());
    const auto control = make_control(corr, g, {0, 1, 2, 3, 4, 5}, RVector::Constant(6, 2.0));
    validate_control(control, corr, g);
    for (std::uint64_t d = 0; d < 20; ++d) {
      const auto m = evaluate_realization(control, g, draw(corr, derive_seed(seed, d)), 0.01);
      for (int k = 0; k < 6; ++k) CHECK(m.neighbor_ici(k) <= 1e-16 * (m.signal(k) + 1.0));
    }
  }
}

TEST_CASE("validate_control rejects broken controls") {
  const auto corr = testing::two_cell_scenario(16, 4, 3, 7);
  const auto g = build_topology(corr, 10.0);
  const auto good = make_control(corr, g, {0, 2, 3, 5}, (RVector(6) << 1, 0, 1, 1, 0, 1).finished());
  CHECK_NOTHROW(validate_control(good, corr, g));

  auto bad = good;
  bad.power(1) = 1.0;
  CHECK_THROWS_AS(validate_control(bad, corr, g), ValidationError);
  bad = good;
  bad.power(0) = -1.0;
  CHECK_THROWS_AS(validate_control(bad, corr, g), ValidationError);
  bad = good;
  bad.outer[0] *= 2.0;
  CHECK_THROWS_AS(validate_control(bad, corr, g), ValidationError);
  bad = good;
  bad.selected[0] = {3};
  CHECK_THROWS_AS(validate_control(bad, corr, g), ValidationError);
  bad = good;
  bad.outer[0] = random_unitary(16, 1).leftCols(4);
  CHECK_THROWS_AS(validate_control(bad, corr, g), ValidationError);
}
