#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "spinlab/toda.hpp"

using namespace spinlab;
using namespace spinlab::toda;

namespace {

SolitonSpec single(int n, int k, double eta, double v0) {
  SolitonSpec s = one_soliton(1.0, 1.0, eta, v0);
  s.n = n;
  s.theta(0) = 2 * M_PI * k / (n + 1);
  return s;
}

Grid small_grid(int points) {
  Grid g;
  g.x_plus_min = g.x_minus_min = -1.5;
  g.x_plus_max = g.x_minus_max = 1.5;
  g.n_plus = g.n_minus = points;
  return g;
}

}  // namespace

TEST_SUITE("toda") {

TEST_CASE("Lambda matrices") {
  SolitonSpec s = one_soliton(1.0, 1.0, 0.0, 1.0);
  CHECK(lambda(s, 1)(0, 0).real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(lambda(s, -1)(0, 0).real() == doctest::Approx(-std::sqrt(2.0)));

  SolitonSpec r = random_spec(2, 3, 4);
  Mat prod = lambda(r, 1) * lambda(r, -1);
  SolitonSpec flipped = r;
  flipped.eta = -r.eta;
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(prod(j, j) + 2.0 * r.m * r.m * std::pow(std::sin(r.theta(j) / 2), 2)) < 1e-14);
  }
  CHECK((lambda(r, -1) + lambda(flipped, 1)).norm() < 1e-15);
}

TEST_CASE("spec validation") {
  SolitonSpec s = single(2, 1, 0.1, 1.0);
  CHECK_NOTHROW(validate(s));
  s.theta(0) = 1.0;
  CHECK_THROWS_AS(validate(s), InvalidInput);
  SolitonSpec t = single(1, 1, 0.1, 1.0);
  t.V0(0, 0) = cd(0, -1.0);
  CHECK_THROWS_AS(validate(t), InvalidInput);
  SolitonSpec u = random_spec(2, 3, 1);
  u.V0(0, 1) += 0.2;
  CHECK_THROWS_AS(validate(u), InvalidInput);
}

TEST_CASE("V evolution") {
  SolitonSpec r = random_spec(2, 3, 7);
  CHECK((evolve_V(r, 0, 0) - r.V0).norm() == 0.0);
  SolitonSpec s = one_soliton(1.0, 1.0, 0.3, 0.8);
  double lp = lambda(s, 1)(0, 0).real(), lm = lambda(s, -1)(0, 0).real();
  CHECK(std::abs(evolve_V(s, 0.4, -0.7)(0, 0) - s.V0(0, 0) * std::exp(lp * 0.4 - lm * 0.7)) < 1e-14);

  gen::Source src(3);
  for (int t = 0; t < 10; ++t) {
    double xp = src.uniform(-1, 1), xm = src.uniform(-1, 1), h = 1e-4;
    Mat V = evolve_V(r, xp, xm);
    CHECK((V + V.adjoint()).norm() < 1e-13);
    auto Vp = [&](double s) { return evolve_V(r, xp + s, xm); };
    auto Vm = [&](double s) { return evolve_V(r, xp, xm + s); };
    Mat dp = (Vp(-2 * h) - 8.0 * Vp(-h) + 8.0 * Vp(h) - Vp(2 * h)) / (12 * h);
    Mat dm = (Vm(-2 * h) - 8.0 * Vm(-h) + 8.0 * Vm(h) - Vm(2 * h)) / (12 * h);
    Mat Lp = lambda(r, 1), Lm = lambda(r, -1);
    CHECK((dp - 0.5 * (Lp * V + V * Lp)).norm() < 1e-8);
    CHECK((dm - 0.5 * (Lm * V + V * Lm)).norm() < 1e-8);
  }
  CHECK_THROWS_AS(evolve_V(r, 1e3, 0.0), NumericalBreakdown);
}

TEST_CASE("gauge diagonalization") {
  Mat V = Mat::Zero(2, 2);
  V(0, 0) = cd(0, std::exp(1.0));
  V(1, 1) = cd(0, std::exp(2.0));
  Diagonalization d = diagonalize_gauge(V);
  CHECK(std::abs(d.q(0) - 1.0) < 1e-14);
  CHECK(std::abs(d.q(1) - 2.0) < 1e-14);
  CHECK((d.U - Mat::Identity(2, 2)).norm() < 1e-14);

  SolitonSpec r = random_spec(2, 3, 9);
  Mat W = evolve_V(r, 0.2, -0.1);
  Diagonalization a = diagonalize_gauge(W);
  CHECK((a.U * a.U.adjoint() - Mat::Identity(3, 3)).norm() < 1e-12);
  Mat ieq = cd(0, 1) * diag_matrix(CVec(a.q.array().exp().cast<cd>()));
  CHECK((ieq - a.U * W * a.U.adjoint()).norm() < 1e-10);

  Mat P = random_element(Subspace::full, 3, 2).householderQr().householderQ();
  Diagonalization b = diagonalize_gauge(P * W * P.adjoint());
  CHECK((a.q - b.q).norm() < 1e-10);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(std::abs((b.U * P).row(k).dot(a.U.row(k))) - 1.0) < 1e-10);

  /// continuation along a path varies smoothly
  Diagonalization prev = a;
  double worst = 0.0;
  for (int s = 1; s <= 20; ++s) {
    Diagonalization next = diagonalize_gauge(evolve_V(r, 0.2 + 1e-3 * s, -0.1), prev.U);
    worst = std::max(worst, (next.U - prev.U).norm());
    prev = next;
  }
  CHECK(worst < 1e-2);
}

TEST_CASE("frames and tau functions") {
  SolitonSpec s = one_soliton(1.0, 1.0, 0.2, 0.7);
  TodaFrame f = rs_frame(s, 0.3, -0.4);
  double lp = lambda(s, 1)(0, 0).real(), lm = lambda(s, -1)(0, 0).real();
  for (int j = 0; j <= 1; ++j) {
    cd expected = 1.0 + s.V0(0, 0) * std::exp(cd(0, j * s.theta(0))) * std::exp(lp * 0.3 + lm * -0.4);
    CHECK(std::abs(f.tau(j) - expected) < 1e-13);
  }
  CHECK(std::abs(f.g_plus(0, 0) - lp) < 1e-14);

  SolitonSpec r = random_spec(2, 3, 5);
  TodaFrame g = rs_frame(r, 0.1, 0.2);
  CHECK((g.g_plus - g.g_plus.adjoint()).norm() < 1e-13);
  CHECK((g.g_minus - g.g_minus.adjoint()).norm() < 1e-13);
  CHECK((g.U * g.U.adjoint() - Mat::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("RS equations along both light-cone directions") {
  SolitonSpec s = one_soliton(1.0, 1.0, 0.2, 0.7);
  CHECK(rs_residual(s, 0.1, 0.2, 1, 1e-4).residual < 1e-10);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SolitonSpec r = random_spec(2, 3, seed);
    for (int dir : {1, -1}) {
      RSResidual res = rs_residual(r, 0.3, -0.2, dir, 1e-4);
      CHECK(res.residual < 1e-6);
      CHECK(res.halved_diagonal_residual > 1e3 * res.residual);
    }
  }
}

TEST_CASE("field equation for a single soliton") {
  Grid g;
  SolitonSpec s = one_soliton(1.0, 1.0, 0.3, 1.0);
  CHECK(pde_residual(s, g, 1e-3).maxCoeff() < 1e-5);

  /// the same data with beta = 2 gives the same residual up to the 1/beta scaling of phi
  SolitonSpec b = s;
  b.beta = 2.0;
  Grid gs = small_grid(10);
  CHECK(std::abs(2.0 * pde_residual(b, gs, 1e-3).maxCoeff() - pde_residual(s, gs, 1e-3).maxCoeff()) < 1e-6);

  /// rescaling V0 translates the soliton
  SolitonSpec c = s;
  c.V0 *= 3.0;
  CHECK(pde_residual(c, gs, 1e-3).maxCoeff() < 1e-5);
}

TEST_CASE("tau ratio convention") {
  /// for n = 1 both ratios solve the equation; for n = 2 only tau_j / tau_{j+1} does
  Grid gs = small_grid(8);
  SolitonSpec one = single(1, 1, 0.2, 1.0);
  CHECK(pde_residual(one, gs, 1e-3, FieldConvention::pinned).maxCoeff() < 1e-5);
  CHECK(pde_residual(one, gs, 1e-3, FieldConvention::printed).maxCoeff() < 1e-5);
  for (int k : {1, 2}) {
    SolitonSpec two = single(2, k, 0.2, 1.0);
    CHECK(pde_residual(two, gs, 1e-4, FieldConvention::pinned).maxCoeff() < 1e-5);
    CHECK(pde_residual(two, gs, 1e-4, FieldConvention::printed).maxCoeff() > 1e-2);
  }
}

TEST_CASE("field values") {
  CVec tau(3);
  tau << cd(1, 0.5), cd(0.3, -1), cd(2, 0.1);
  CVec e = field_exponentials(tau);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(e(j) - tau(j) / tau((j + 1) % 3)) < 1e-15);
  CVec phi = field_values(tau, 2.0);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(std::exp(cd(0, 2.0) * phi(j)) - e(j)) < 1e-14);

  /// the sum of the fields is constant over a grid
  SolitonSpec s = single(2, 1, 0.1, 1.0);
  std::vector<CVec> grid = field_grid(s, small_grid(6));
  for (const CVec& v : grid) CHECK(std::abs(v.sum() - grid.front().sum()) < 1e-10);
}

}
