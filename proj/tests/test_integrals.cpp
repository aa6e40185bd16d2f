#include <doctest.h>

#include "generators.hpp"
#include "spinlab/cm_dynamics.hpp"
#include "spinlab/integrals.hpp"
#include "spinlab/rmatrix.hpp"

using namespace spinlab;

namespace {

/// Elementary symmetric polynomials of p.
RVec elementary(const RVec& p) {
  const int n = int(p.size());
  RVec e = RVec::Zero(n + 1);
  e(0) = 1.0;
  for (int i = 0; i < n; ++i)
    for (int r = i + 1; r >= 1; --r) e(r) += p(i) * e(r - 1);
  return e;
}

}  // namespace

TEST_SUITE("integrals") {

TEST_CASE("characteristic polynomial coefficients") {
  Mat A = random_element(Subspace::full, 4, 3);
  CVec c = char_poly_coefficients(A);
  gen::Source src(5);
  for (int t = 0; t < 5; ++t) {
    cd w(src.normal(), src.normal());
    cd poly = 0.0;
    for (int r = 0; r <= 4; ++r) poly += c(r) * std::pow(w, 4 - r);
    cd det = (A - w * Mat::Identity(4, 4)).determinant();
    CHECK(std::abs(poly - det) < 1e-11 * (1 + std::abs(det)));
  }
}

TEST_CASE("zero spin reduces to symmetric functions of p") {
  CMState x = cm::random_state(3, Form::compact, 2);
  x.xi.setZero();
  IntegralsTable tbl = extract(x);
  RVec e = elementary(x.p);
  for (int r = 0; r <= 3; ++r) {
    CHECK(std::abs(tbl.coeffs(r, 0) - std::pow(-1.0, 3 + r) * e(r)) < 1e-10);
    for (int k = 1; k <= r; ++k) CHECK(std::abs(tbl.coeffs(r, k)) < 1e-10);
  }
  for (double s : sum_rule_residual(tbl)) CHECK(s < 1e-10);
}

TEST_CASE("first coefficients") {
  for (int t = 0; t < 20; ++t) {
    CMState x = cm::random_state(3, Form::compact, 40 + t);
    IntegralsTable tbl = extract(x);
    CHECK(std::abs(tbl.I(1, 0) - std::pow(-1.0, 2) * x.p.sum()) < 1e-10);
    CHECK(std::abs(tbl.I(1, 1)) < 1e-10);
    CHECK(std::abs(tbl.I(0, 0) - std::pow(-1.0, 3)) < 1e-10);
    CHECK(tbl.fit_residual < 1e-8);
    CHECK(tbl.conditioning < 1e10);
  }
}

TEST_CASE("compact reality pattern") {
  for (int t = 0; t < 100; ++t) {
    CMState x = cm::random_state(3 + t % 2, Form::compact, 100 + t);
    IntegralsTable tbl = extract(x);
    for (int r = 0; r <= x.n(); ++r)
      for (int k = 0; k <= r; ++k) {
        cd v = tbl.coeffs(r, k);
        double scale = std::max(1.0, std::abs(v));
        CHECK((k % 2 == 0 ? std::abs(v.imag()) : std::abs(v.real())) < 1e-10 * scale);
      }
  }
}

TEST_CASE("odd coefficients obey the relation from the limits at plus and minus i infinity") {
  for (int t = 0; t < 100; ++t) {
    CMState x = cm::random_state(3, Form::compact, 300 + t);
    IntegralsTable tbl = extract(x);
    std::vector<double> s = scaled_sum_rule_residual(tbl);
    for (double v : s) CHECK(v < 1e-10);
    CHECK(std::abs(tbl.I(3, 1) - tbl.I(3, 3) / 4.0) < 1e-10);
  }
  CHECK_THROWS_AS(sum_rule_residual(extract(cm::random_state(3, Form::normal, 1))), InvalidInput);
}

TEST_CASE("characteristic polynomial is conjugation covariant") {
  /// det(L~(z)* - w) = conj det(L~(z) - conj w) gives the reality pattern above
  CMState x = cm::random_state(3, Form::compact, 4);
  gen::Source src(6);
  for (int t = 0; t < 10; ++t) {
    cd z = src.z_off_axis();
    Mat a = lax_cm_tilde(x.q, x.p, x.xi, z).adjoint();
    Mat b = lax_cm_tilde(x.q, x.p, x.xi, -std::conj(z));
    CHECK((a - b).norm() < 1e-12);
  }
}

TEST_CASE("normal form is even in c(z)") {
  for (int t = 0; t < 100; ++t) {
    IntegralsTable tbl = extract(cm::random_state(3 + t % 3, Form::normal, 900 + t));
    CHECK(tbl.odd_defect() < 1e-10);
  }
}

TEST_CASE("torus invariance") {
  gen::Source src(7);
  CMState x = cm::random_state(4, Form::compact, 7);
  CVec ph(4);
  for (int k = 0; k < 4; ++k) ph(k) = std::polar(1.0, src.uniform(0, 2 * M_PI));
  Mat d = diag_matrix(ph);
  CMState y = x;
  y.xi = d * x.xi * d.adjoint();
  CHECK((extract(x).coeffs - extract(y).coeffs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("extraction preconditions") {
  CMState x = cm::random_state(3, Form::compact, 3);
  x.xi(0, 0) = cd(0, 0.2);
  CHECK_THROWS_AS(extract(x), InvalidInput);
  CMState y = cm::random_state(3, Form::compact, 3);
  std::vector<cd> few{cd(0, 1), cd(0, 2)};
  CHECK_THROWS_AS(extract(y, few), InvalidInput);
  std::vector<cd> clustered(6, cd(0, 1));
  CHECK_THROWS_AS(extract(y, clustered), InvalidInput);
}

TEST_CASE("family sizes and names") {
  CHECK(nontrivial_family(Form::compact, 2).size() == 2);
  CHECK(nontrivial_family(Form::compact, 3).size() == 4);
  CHECK(nontrivial_family(Form::normal, 3).size() == 4);
  std::vector<std::string> names;
  for (const auto& m : nontrivial_family(Form::normal, 3)) names.push_back(m.name);
  CHECK(names == std::vector<std::string>{"I10", "I20", "I30", "I31"});
}

TEST_CASE("independence rank") {
  for (int n : {2, 3}) {
    auto fam = nontrivial_family(Form::compact, n);
    CMState x = cm::random_state(n, Form::compact, 11 + n);
    CHECK(independence_rank(x, fam) == 1 + n * (n - 1) / 2);
    fam.push_back(fam.front());
    CHECK(independence_rank(x, fam) == 1 + n * (n - 1) / 2);
  }
  CHECK(independence_rank(cm::random_state(3, Form::normal, 5), nontrivial_family(Form::normal, 3)) == 4);
}

TEST_CASE("involution") {
  auto fam = nontrivial_family(Form::compact, 3);
  Observable i10 = integral_observable(Form::compact, 3, fam[0]);
  Observable i20 = integral_observable(Form::compact, 3, fam[1]);
  Observable h = cm::hamiltonian_observable(Form::compact, 3);
  for (int t = 0; t < 20; ++t) {
    CMState x = cm::random_state(3, Form::compact, 60 + t);
    CHECK(involution_residual(x, i10, i20) < 1e-5);
    CHECK(involution_residual(x, i20, i20) == 0.0);
    for (const auto& m : fam) CHECK(involution_residual(x, h, integral_observable(Form::compact, 3, m)) < 1e-5);
  }
}

TEST_CASE("integrals are conserved by the flow") {
  CMState x = cm::random_state(3, Form::compact, 99);
  auto fam = nontrivial_family(Form::compact, 3);
  IntegralsTable t0 = extract(x);
  cm::Trajectory tr = cm::integrate(x, 10.0, 1e-3, Scheme::rk4);
  for (size_t s = 0; s < tr.states.size(); s += 1000) {
    CMState y = tr.states[s];
    y.xi.diagonal().setZero();
    IntegralsTable tbl = extract(y);
    for (const auto& m : fam)
      CHECK(std::abs(member_value(tbl, m) - member_value(t0, m)) < 1e-6 * std::max(1.0, std::abs(member_value(t0, m))));
  }
}

}
