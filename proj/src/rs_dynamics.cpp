#include "spinlab/rs_dynamics.hpp"

#include <cmath>
#include <random>

#include "spinlab/rmatrix.hpp"

namespace spinlab {
namespace rs {

namespace {

double min_gap(const RVec& q) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < q.size(); ++i)
    for (Eigen::Index j = i + 1; j < q.size(); ++j) gap = std::min(gap, std::abs(q(i) - q(j)));
  return gap;
}

RVec flatten(const RSState& x) {
  const int n = x.n();
  RVec y(n + 2 * n * n);
  y.head(n) = x.q;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      y(n + i * n + j) = x.g(i, j).real();
      y(n + n * n + i * n + j) = x.g(i, j).imag();
    }
  return y;
}

RSState unflatten(int n, const RVec& y) {
  RSState x;
  x.q = y.head(n);
  x.g.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x.g(i, j) = cd(y(n + i * n + j), y(n + n * n + i * n + j));
  return x;
}

RVec sorted_eigenvalues(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(proj(g, Subspace::hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

void validate(const RSState& x, double tol) {
  const int n = x.n();
  if (n < 1) throw InvalidInput("RS state: N must be at least 1");
  if (x.g.rows() != n || x.g.cols() != n) throw InvalidInput("RS state: inconsistent dimensions");
  if (!x.q.allFinite() || !x.g.allFinite()) throw InvalidInput("RS state: non-finite entries");
  if (!membership(x.g, Subspace::hermitian, tol * (1.0 + x.g.norm())))
    throw InvalidInput("RS state: g is not Hermitian");
  if (n > 1 && min_gap(x.q) < kCollisionThreshold)
    throw CollisionError("RS state: colliding positions", 0.0, min_gap(x.q));
  Eigen::JacobiSVD<Mat> svd(x.g);
  RVec sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-12 * std::max(1.0, sv(0))) throw InvalidInput("RS state: g is singular");
}

RSState random_state(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("random_state: N must be at least 1");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RSState x;
  x.q.resize(n);
  double q = 2.0 * unif(gen) - 1.0;
  for (int i = 0; i < n; ++i) {
    x.q(i) = q;
    q -= 0.6 + unif(gen);
  }
  /// eigenvalues spaced by at least 0.5, rotated by a random unitary
  RVec lam(n);
  double l = 0.5 + unif(gen);
  for (int i = 0; i < n; ++i) {
    lam(i) = l;
    l += 0.5 + unif(gen);
  }
  Mat z = random_element(Subspace::full, n, gen());
  Eigen::HouseholderQR<Mat> qr(z);
  Mat u = qr.householderQ();
  x.g = proj(u * diag_matrix(lam.cast<cd>()) * u.adjoint(), Subspace::hermitian);
  return x;
}

RVec to_coords(const RSState& x) { return pack_rs_stable(x.q.cast<cd>(), x.g); }

RSState from_coords(int n, const RVec& coords) {
  CVec u;
  RSState x;
  unpack_rs_stable(n, coords, u, x.g);
  x.q = u.real();
  return x;
}

Tangent vector_field(const RSState& x) {
  if (x.n() > 1 && min_gap(x.q) < kCollisionThreshold) throw CollisionError("RS: colliding positions");
  Tangent t;
  t.qdot = x.g.diagonal().real();
  Mat Rg = r_hyp_apply(x.q, x.g);
  t.gdot = x.g * Rg - Rg * x.g;
  return t;
}

RVec vector_field_coords(const RSState& x) {
  Tangent t = vector_field(x);
  return pack_rs_stable(t.qdot.cast<cd>(), t.gdot);
}

Invariants invariants(const RSState& x, int k_max) {
  Invariants inv;
  Mat gk = Mat::Identity(x.n(), x.n());
  for (int k = 1; k <= k_max; ++k) {
    gk = gk * x.g;
    inv.traces.push_back(2.0 * gk.trace().real() / k);
  }
  inv.eigenvalues = sorted_eigenvalues(x.g);
  return inv;
}

Observable central_observable(int n, int k) {
  if (k < 1) throw InvalidInput("central_observable: k must be at least 1");
  Observable F;
  F.eval = [n, k](const RVec& c) {
    CVec u;
    Mat g;
    unpack_rs_stable(n, c, u, g);
    Mat gk = Mat::Identity(n, n);
    for (int i = 0; i < k; ++i) gk = gk * g;
    return 2.0 * gk.trace().real() / k;
  };
  F.grad = [n, k](const RVec& c) {
    CVec u;
    Mat g;
    unpack_rs_stable(n, c, u, g);
    Mat gk1 = Mat::Identity(n, n);
    for (int i = 0; i < k - 1; ++i) gk1 = gk1 * g;
    /// derivative along Hermitian eta is 2 Re tr(g^(k-1) eta)
    RVec grad = RVec::Zero(c.size());
    int o = 2 * n;
    for (int i = 0; i < n; ++i) grad(o++) = 2.0 * gk1(i, i).real();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        cd s = gk1(j, i) + gk1(i, j);
        cd d = gk1(j, i) - gk1(i, j);
        grad(o++) = 2.0 * s.real();
        grad(o++) = -2.0 * d.imag();
      }
    return grad;
  };
  return F;
}

Tangent central_flow(const RSState& x, int k, double tol) {
  if (k < 1) throw InvalidInput("central_flow: k must be at least 1");
  validate(x, 1e-10);
  const int n = x.n();
  Mat gk = Mat::Identity(n, n);
  for (int i = 0; i < k; ++i) gk = gk * x.g;
  Tangent t;
  t.qdot = gk.diagonal().real();
  t.gdot = commutator(x.g, r_hyp_apply(x.q, gk));

  PhaseSpace space{Space::rs_stable, n, Form::compact};
  RVec v = pack_rs_stable(t.qdot.cast<cd>(), t.gdot);
  double res = hamiltonian_flow_residual(space, central_observable(n, k), [&v](const RVec&) { return v; },
                                         to_coords(x));
  if (!(res < tol * (1.0 + v.norm())))
    throw NumericalBreakdown("central_flow: closed form disagrees with the bracket flow (residual " +
                             std::to_string(res) + ")");
  return t;
}

Trajectory integrate(const RSState& x0, double t_final, double dt, Scheme scheme) {
  validate(x0, 1e-12);
  const int n = x0.n();
  const int k_max = n;
  Invariants inv0 = invariants(x0, k_max);

  Trajectory traj;
  auto record = [&](double t, const RSState& x) {
    Invariants inv = invariants(x, k_max);
    double tr = 0.0;
    for (int k = 0; k < k_max; ++k)
      tr = std::max(tr, std::abs(inv.traces[k] - inv0.traces[k]));
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.hermiticity_defect.push_back((x.g - x.g.adjoint()).norm());
    traj.eigen_drift.push_back((inv.eigenvalues - inv0.eigenvalues).cwiseAbs().maxCoeff());
    traj.trace_drift.push_back(tr);
  };
  record(0.0, x0);

  ode::Rhs rhs = [n](double, const RVec& y) {
    RSState x = unflatten(n, y);
    Tangent t = vector_field(x);
    return flatten(RSState{t.qdot, t.gdot});
  };
  ode::Observer observe = [&](double t, const RVec& y) {
    RSState x = unflatten(n, y);
    if (n > 1 && min_gap(x.q) < kCollisionThreshold)
      throw CollisionError("RS: collision approach", t, min_gap(x.q));
    record(t, x);
  };
  ode::integrate(rhs, flatten(x0), t_final, dt, scheme, observe);
  return traj;
}

}  // namespace rs
}  // namespace spinlab
