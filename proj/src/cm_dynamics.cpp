#include "spinlab/cm_dynamics.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "spinlab/rmatrix.hpp"

namespace spinlab {

Subspace spin_subspace(Form form) {
  return form == Form::compact ? Subspace::skew_hermitian : Subspace::skew_symmetric_real;
}

namespace cm {

namespace {

constexpr double kCollisionGap = 1e-6;

/// Flat state used by the integrator: q, p, Re xi, Im xi (row-major).
RVec flatten(const CMState& x) {
  const int n = x.n();
  RVec y(2 * n + 2 * n * n);
  y.head(n) = x.q;
  y.segment(n, n) = x.p;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      y(2 * n + i * n + j) = x.xi(i, j).real();
      y(2 * n + n * n + i * n + j) = x.xi(i, j).imag();
    }
  return y;
}

CMState unflatten(Form form, int n, const RVec& y) {
  CMState x;
  x.form = form;
  x.q = y.head(n);
  x.p = y.segment(n, n);
  x.xi.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x.xi(i, j) = cd(y(2 * n + i * n + j), y(2 * n + n * n + i * n + j));
  return x;
}

double sin_half(double a) {
  double s = std::sin(0.5 * a);
  if (std::abs(s) < kPoleCutoff) throw CollisionError("spin CM: particles collide");
  return s;
}

}  // namespace

double min_sin_gap(const RVec& q) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < q.size(); ++i)
    for (Eigen::Index j = i + 1; j < q.size(); ++j)
      gap = std::min(gap, std::abs(std::sin(0.5 * (q(i) - q(j)))));
  return gap;
}

void validate(const CMState& x, double tol) {
  const int n = x.n();
  if (n < 1) throw InvalidInput("CM state: N must be at least 1");
  if (x.p.size() != n || x.xi.rows() != n || x.xi.cols() != n)
    throw InvalidInput("CM state: inconsistent dimensions");
  if (!x.q.allFinite() || !x.p.allFinite() || !x.xi.allFinite())
    throw InvalidInput("CM state: non-finite entries");
  if (min_sin_gap(x.q) < kCollisionGap) throw CollisionError("CM state: colliding positions", 0.0, min_sin_gap(x.q));
  if (!membership(x.xi, spin_subspace(x.form), tol * (1.0 + x.xi.norm())))
    throw InvalidInput("CM state: spin variable is not in the subspace of its form");
}

CMState random_state(int n, Form form, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("random_state: N must be at least 1");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMState x;
  x.form = form;
  x.q.resize(n);
  x.p.resize(n);
  x.q(0) = 2.0 * unif(gen) - 1.0;
  if (n > 1) {
    RVec w(n - 1);
    for (int i = 0; i < n - 1; ++i) w(i) = 0.5 + unif(gen);
    double span = (2.0 * M_PI - 1.0) * (0.6 + 0.4 * unif(gen));
    w *= span / w.sum();
    for (int i = 1; i < n; ++i) x.q(i) = x.q(i - 1) - w(i - 1);
  }
  for (int i = 0; i < n; ++i) x.p(i) = normal(gen);
  x.xi = off_diag_part(random_element(spin_subspace(form), n, gen()));
  return x;
}

RVec to_coords(const CMState& x) { return pack_cm_stable(x.form, x.q, x.p, x.xi); }

CMState from_coords(Form form, int n, const RVec& coords) {
  CMState x;
  x.form = form;
  unpack_cm_stable(form, n, coords, x.q, x.p, x.xi);
  return x;
}

double hamiltonian(const CMState& x) {
  const int n = x.n();
  double h = 0.5 * x.p.squaredNorm();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double s = sin_half(x.q(i) - x.q(j));
      h += 0.125 * (1.0 / (s * s) - 1.0 / 3.0) * std::norm(x.xi(i, j));
    }
  return h;
}

Observable hamiltonian_observable(Form form, int n) {
  Observable H;
  H.eval = [form, n](const RVec& c) { return hamiltonian(from_coords(form, n, c)); };
  H.grad = [form, n](const RVec& c) {
    CMState x = from_coords(form, n, c);
    RVec g = RVec::Zero(c.size());
    for (int i = 0; i < n; ++i) {
      g(n + i) = x.p(i);
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double a = x.q(i) - x.q(j);
        double s = sin_half(a);
        g(i) += -0.25 * std::cos(0.5 * a) / (s * s * s) * std::norm(x.xi(i, j));
      }
    }
    int o = 2 * n + (form == Form::compact ? n : 0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double s = sin_half(x.q(i) - x.q(j));
        double w = 1.0 / (s * s) - 1.0 / 3.0;
        g(o++) = 0.5 * w * x.xi(i, j).real();
        if (form == Form::compact) g(o++) = 0.5 * w * x.xi(i, j).imag();
      }
    return g;
  };
  return H;
}

Tangent vector_field(const CMState& x) {
  const int n = x.n();
  if (x.xi.diagonal().norm() > 1e-8 * (1.0 + x.xi.norm()))
    throw InvalidInput("CM vector field: requires zero momentum (diagonal of xi must vanish)");
  Tangent t;
  t.qdot = x.p;
  t.pdot = RVec::Zero(n);
  Mat K = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      double a = x.q(i) - x.q(k);
      double s = sin_half(a);
      t.pdot(i) += 0.25 * std::cos(0.5 * a) / (s * s * s) * std::norm(x.xi(i, k));
      K(i, k) = -0.25 * x.xi(i, k) / (s * s);
    }
  t.xidot = commutator(x.xi, K);
  return t;
}

RVec vector_field_coords(const CMState& x) {
  Tangent t = vector_field(x);
  return pack_cm_stable(x.form, t.qdot, t.pdot, t.xidot);
}

Mat momentum(const CMState& x) { return -diag_part(x.xi); }

GaugeFix gauge_fix(const Mat& xi) {
  const Eigen::Index n = xi.rows();
  if (xi.cols() != n) throw InvalidInput("gauge_fix: square matrix required");
  if (xi.diagonal().norm() > 1e-10 * (1.0 + xi.norm()))
    throw InvalidInput("gauge_fix: requires zero momentum");
  CVec d(n);
  d(0) = 1.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    cd e = xi(i, i + 1);
    if (std::abs(e) < 1e-12) throw InvalidInput("gauge_fix: vanishing superdiagonal entry");
    d(i + 1) = d(i) * std::conj(e / std::abs(e));
  }
  GaugeFix out;
  out.h = diag_matrix(d);
  out.xi_red = out.h.adjoint() * xi * out.h;
  return out;
}

Trajectory integrate(const CMState& x0, double t_final, double dt, Scheme scheme) {
  validate(x0, 1e-12);
  const int n = x0.n();
  const Form form = x0.form;
  vector_field(x0);

  Trajectory traj;
  auto record = [&](double t, const CMState& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.energy.push_back(hamiltonian(x));
    traj.momentum_norm.push_back(momentum(x).norm());
    traj.subspace_defect.push_back(subspace_defect(x.xi, spin_subspace(form)));
  };
  record(0.0, x0);

  ode::Rhs rhs = [form, n](double, const RVec& y) {
    CMState x = unflatten(form, n, y);
    Tangent t = vector_field(x);
    return flatten(CMState{form, t.qdot, t.pdot, t.xidot});
  };
  ode::Observer observe = [&](double t, const RVec& y) {
    CMState x = unflatten(form, n, y);
    double gap = min_sin_gap(x.q);
    if (gap < kCollisionGap) throw CollisionError("spin CM: collision approach", t, gap);
    record(t, x);
  };
  ode::integrate(rhs, flatten(x0), t_final, dt, scheme, observe);
  return traj;
}

}  // namespace cm
}  // namespace spinlab
