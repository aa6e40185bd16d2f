#include <doctest.h>

#include "generators.hpp"
#include "spinlab/cm_dynamics.hpp"
#include "spinlab/rmatrix.hpp"

using namespace spinlab;

namespace {

CMState two_body(double gap, cd xi12) {
  CMState x;
  x.form = Form::compact;
  x.q = RVec(2);
  x.q << gap, 0.0;
  x.p = RVec::Zero(2);
  x.xi = Mat::Zero(2, 2);
  x.xi(0, 1) = xi12;
  x.xi(1, 0) = -std::conj(xi12);
  return x;
}

Mat unitary_diagonal(gen::Source& src, int n) {
  CVec d(n);
  for (int k = 0; k < n; ++k) d(k) = std::polar(1.0, src.uniform(0.0, 2 * M_PI));
  return diag_matrix(d);
}

}  // namespace

TEST_SUITE("cm_dynamics") {

TEST_CASE("Hamiltonian values") {
  CMState free = two_body(1.0, 0.0);
  free.p << 1.0, -1.0;
  CHECK(cm::hamiltonian(free) == doctest::Approx(1.0));
  CHECK(cm::hamiltonian(two_body(M_PI, cd(0, 1))) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  gen::Source src(3);
  CMState x = cm::random_state(4, Form::compact, 3);
  Mat d = unitary_diagonal(src, 4);
  CMState y = x;
  y.xi = d * x.xi * d.adjoint();
  CHECK(std::abs(cm::hamiltonian(x) - cm::hamiltonian(y)) < 1e-13);
}

TEST_CASE("vector field examples") {
  CMState x = cm::random_state(3, Form::compact, 1);
  x.xi.setZero();
  cm::Tangent t = cm::vector_field(x);
  CHECK((t.qdot - x.p).norm() == 0.0);
  CHECK(t.pdot.norm() == 0.0);
  CHECK(t.xidot.norm() == 0.0);

  cm::Tangent s = cm::vector_field(two_body(M_PI, cd(0.3, 0.4)));
  CHECK(s.pdot.norm() < 1e-15);
  CHECK(std::abs(std::real(std::conj(cd(0.3, 0.4)) * s.xidot(0, 1))) < 1e-15);

  for (Form form : {Form::compact, Form::normal})
    for (int k = 0; k < 100; ++k) {
      CMState y = cm::random_state(4, form, 10 + k);
      cm::Tangent v = cm::vector_field(y);
      CHECK(v.xidot.diagonal().norm() < 1e-14);
      CHECK(membership(v.xidot, spin_subspace(form), 1e-12));
    }

  CMState bad = cm::random_state(3, Form::compact, 2);
  bad.xi(0, 0) = cd(0, 0.1);
  CHECK_THROWS_AS(cm::vector_field(bad), InvalidInput);
}

TEST_CASE("validation") {
  CMState x = cm::random_state(3, Form::compact, 2);
  CMState coll = x;
  coll.q(1) = coll.q(0) + 2 * M_PI;
  CHECK_THROWS(cm::validate(coll));
  CMState wrong = x;
  wrong.form = Form::normal;
  CHECK_THROWS_AS(cm::validate(wrong), InvalidInput);
}

TEST_CASE("momentum") {
  CHECK(cm::momentum(cm::random_state(3, Form::normal, 1)).norm() == 0.0);
  CMState x = two_body(1.0, 0.5);
  x.xi(0, 0) = cd(0, 1);
  CHECK(std::abs(cm::momentum(x)(0, 0) - cd(0, -1)) == 0.0);
}

TEST_CASE("free motion is linear") {
  CMState x = cm::random_state(3, Form::compact, 4);
  x.xi.setZero();
  cm::Trajectory tr = cm::integrate(x, 1.0, 1e-2, Scheme::rk4);
  const CMState& last = tr.states.back();
  CHECK((last.q - (x.q + x.p)).norm() < 1e-13);
  CHECK(tr.times.back() == 1.0);
  CHECK(tr.times.size() == tr.energy.size());
}

TEST_CASE("conservation along the flow") {
  for (Form form : {Form::compact, Form::normal}) {
    CMState x = cm::random_state(3, form, 17);
    cm::Trajectory tr = cm::integrate(x, 10.0, 1e-3, Scheme::rk4);
    const double e0 = tr.energy.front();
    double drift = 0.0, mom = 0.0, defect = 0.0;
    for (size_t s = 0; s < tr.times.size(); ++s) {
      drift = std::max(drift, std::abs(tr.energy[s] - e0) / std::abs(e0));
      mom = std::max(mom, tr.momentum_norm[s]);
      defect = std::max(defect, tr.subspace_defect[s]);
    }
    CHECK(drift < 1e-8);
    CHECK(mom < 1e-10);
    CHECK(defect < 1e-10);

    const cd z0(0.3, 0.4);
    CVec ev0 = lax_cm(x.q, x.p, x.xi, z0).eigenvalues();
    double iso = 0.0, lax = 0.0;
    for (size_t s = 0; s < tr.states.size(); s += 500) {
      const CMState& y = tr.states[s];
      CVec ev = lax_cm(y.q, y.p, y.xi, z0).eigenvalues();
      for (Eigen::Index i = 0; i < ev0.size(); ++i) iso = std::max(iso, (ev.array() - ev0(i)).abs().minCoeff());
      if (s >= 2 && s + 2 < tr.states.size()) {
        auto L = [&](size_t i) { return lax_cm(tr.states[i].q, tr.states[i].p, tr.states[i].xi, z0); };
        Mat Ldot = (L(s - 2) - 8.0 * L(s - 1) + 8.0 * L(s + 1) - L(s + 2)) / (12.0 * 1e-3);
        lax = std::max(lax, (Ldot - commutator(L(s), lax_connection(y.q, y.p, y.xi, z0))).norm());
      }
    }
    CHECK(iso < 1e-6);
    CHECK(lax < 1e-6);
  }
}

TEST_CASE("energy is conserved for two bodies with dopri") {
  CMState x = cm::random_state(2, Form::compact, 8);
  cm::Trajectory tr = cm::integrate(x, 10.0, 0.05, Scheme::dopri);
  double drift = 0.0;
  for (double e : tr.energy) drift = std::max(drift, std::abs(e - tr.energy.front()) / std::abs(tr.energy.front()));
  CHECK(drift < 1e-9);
  CHECK(tr.times.back() == 10.0);
}

TEST_CASE("flows commute with torus conjugation") {
  gen::Source src(23);
  CMState x = cm::random_state(3, Form::compact, 23);
  Mat d = unitary_diagonal(src, 3);
  CMState y = x;
  y.xi = d * x.xi * d.adjoint();
  CMState a = cm::integrate(x, 5.0, 1e-3, Scheme::rk4).states.back();
  CMState b = cm::integrate(y, 5.0, 1e-3, Scheme::rk4).states.back();
  CHECK((a.q - b.q).norm() < 1e-9);
  CHECK((d * a.xi * d.adjoint() - b.xi).norm() < 1e-9);
}

TEST_CASE("Lax equation holds pointwise") {
  for (Form form : {Form::compact, Form::normal})
    for (int k = 0; k < 20; ++k) {
      CMState x = cm::random_state(4, form, 500 + k);
      cm::Tangent v = cm::vector_field(x);
      cd z(0.7, -0.4);
      Mat lhs = lax_cm_derivative(x.q, x.xi, v.qdot, v.pdot, v.xidot, z);
      Mat L = lax_cm(x.q, x.p, x.xi, z);
      CHECK((lhs - commutator(L, lax_connection(x.q, x.p, x.xi, z))).norm() < 1e-10 * (1 + L.norm()));
    }
}

TEST_CASE("gauge fixing") {
  Mat red = Mat::Zero(2, 2);
  red(0, 1) = 0.7;
  red(1, 0) = -0.7;
  cm::GaugeFix g0 = cm::gauge_fix(red);
  CHECK((g0.h - Mat::Identity(2, 2)).norm() < 1e-15);

  cm::GaugeFix g1 = cm::gauge_fix(two_body(1.0, cd(0, 1)).xi);
  CHECK(std::abs(g1.h(1, 1) - cd(0, -1)) < 1e-15);
  CHECK(std::abs(g1.xi_red(0, 1) - 1.0) < 1e-15);

  gen::Source src(41);
  for (int k = 0; k < 20; ++k) {
    Mat xi = cm::random_state(4, Form::compact, 700 + k).xi;
    cm::GaugeFix a = cm::gauge_fix(xi);
    for (int i = 0; i + 1 < 4; ++i) {
      CHECK(a.xi_red(i, i + 1).real() > 0);
      CHECK(std::abs(a.xi_red(i, i + 1).imag()) < 1e-14);
    }
    Mat d = unitary_diagonal(src, 4);
    cm::GaugeFix b = cm::gauge_fix(d * xi * d.adjoint());
    CHECK((a.xi_red - b.xi_red).norm() < 1e-12);
  }
  Mat deg = two_body(1.0, 0.0).xi;
  CHECK_THROWS_AS(cm::gauge_fix(deg), InvalidInput);
}

TEST_CASE("collision is reported") {
  CMState x = two_body(0.5, 0.0);
  x.p << -1.0, 0.0;
  CHECK_THROWS_AS(cm::integrate(x, 1.0, 1e-3, Scheme::rk4), CollisionError);
}

}
