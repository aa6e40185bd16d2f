#pragma once

#include "spinlab/lie_core.hpp"

namespace spinlab {

/// Distance to poles below which kernels refuse to evaluate.
constexpr double kPoleCutoff = 1e-8;

/// c(z) = cot(z/2)/2.
cd c_of_z(cd z, double cutoff = kPoleCutoff);
/// d(z) = c(z) + z/12.
cd d_of_z(cd z, double cutoff = kPoleCutoff);
/// c'(z) = -1/(4 sin^2(z/2)).
cd c_prime_of_z(cd z, double cutoff = kPoleCutoff);

/// Hyperbolic dynamical r-matrix: (R(q)xi)_ij = -coth((q_i - q_j)/2) xi_ij / 2 off the diagonal.
/// Works for real q and for complex q (groupoid base points).
template <typename Derived>
Mat r_hyp_apply(const Eigen::MatrixBase<Derived>& q, const Mat& xi, double cutoff = kPoleCutoff) {
  const Eigen::Index n = q.size();
  if (xi.rows() != n || xi.cols() != n) throw InvalidInput("r_hyp_apply: dimension mismatch");
  Mat out = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      cd a = 0.5 * (cd(q(i)) - cd(q(j)));
      cd sh = std::sinh(a);
      if (std::abs(sh) < cutoff) throw PoleError("r_hyp_apply: coincident q");
      out(i, j) = -0.5 * std::cosh(a) / sh * xi(i, j);
    }
  return out;
}

/// Directional derivative of R at q along the diagonal direction h.
template <typename DQ, typename DH>
Mat dr_hyp_apply(const Eigen::MatrixBase<DQ>& q, const Eigen::MatrixBase<DH>& h, const Mat& xi,
                 double cutoff = kPoleCutoff) {
  const Eigen::Index n = q.size();
  if (h.size() != n || xi.rows() != n || xi.cols() != n)
    throw InvalidInput("dr_hyp_apply: dimension mismatch");
  Mat out = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      cd a = 0.5 * (cd(q(i)) - cd(q(j)));
      cd sh = std::sinh(a);
      if (std::abs(sh) < cutoff) throw PoleError("dr_hyp_apply: coincident q");
      out(i, j) = 0.25 * (cd(h(i)) - cd(h(j))) / (sh * sh) * xi(i, j);
    }
  return out;
}

struct MdybeResult {
  Mat residual;
  double fitted_c2 = 0.0;
};

/// Left side of the modified dynamical Yang-Baxter equation for R(q), before the -c^2 [X,Y] term.
Mat mdybe_lhs(const RVec& q, const Mat& X, const Mat& Y);
MdybeResult mdybe_residual(const RVec& q, const Mat& X, const Mat& Y);

/// Trigonometric spin Calogero-Moser Lax matrix L(z).
Mat lax_cm(const RVec& q, const RVec& p, const Mat& xi, cd z);
/// Directional derivative of L(z) along (qdot, pdot, xidot).
Mat lax_cm_derivative(const RVec& q, const Mat& xi, const RVec& qdot, const RVec& pdot, const Mat& xidot, cd z);
/// Same matrix without the exp(z(q_i - q_j)/12) factors.
Mat lax_cm_tilde(const RVec& q, const RVec& p, const Mat& xi, cd z);
/// Coefficient of 1/z in the Laurent expansion of L(z) at z = 0.
Mat lax_laurent_m1(const RVec& q, const RVec& p, const Mat& xi);
/// Companion B(z) with dL/dt = [L, B] along the momentum-zero flow.
Mat lax_connection(const RVec& q, const RVec& p, const Mat& xi, cd z);

}  // namespace spinlab
