#include "spinlab/rmatrix.hpp"

namespace spinlab {

namespace {

cd checked_sin_half(cd z, double cutoff) {
  cd s = std::sin(0.5 * z);
  if (std::abs(s) < cutoff) throw PoleError("spectral parameter too close to a pole of c(z)");
  return s;
}

void check_trig_gaps(const RVec& q) {
  for (Eigen::Index i = 0; i < q.size(); ++i)
    for (Eigen::Index j = i + 1; j < q.size(); ++j)
      if (std::abs(std::sin(0.5 * (q(i) - q(j)))) < kPoleCutoff)
        throw CollisionError("trigonometric kernel: q_i - q_j is a multiple of 2 pi");
}

void check_lax_args(const RVec& q, const RVec& p, const Mat& xi) {
  const Eigen::Index n = q.size();
  if (p.size() != n || xi.rows() != n || xi.cols() != n)
    throw InvalidInput("lax: dimension mismatch");
  check_trig_gaps(q);
}

/// F(q,w)[eta] and its w-derivative: contraction of the trigonometric kernel with eta.
Mat kernel_contraction(const RVec& q, cd w, const Mat& eta, bool derivative) {
  const Eigen::Index n = q.size();
  Mat out = Mat::Zero(n, n);
  cd cw = c_of_z(w);
  cd dcw = c_prime_of_z(w);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, i) = (derivative ? dcw + 1.0 / 12.0 : d_of_z(w)) * eta(i, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      double a = q(i) - q(j);
      cd ex = std::exp(w * a / 12.0);
      cd k = derivative ? (dcw + (cw + c_of_z(a)) * a / 12.0) * ex : (cw + c_of_z(a)) * ex;
      out(j, i) = k * eta(j, i);
    }
  }
  return out;
}

}  // namespace

cd c_of_z(cd z, double cutoff) {
  cd s = checked_sin_half(z, cutoff);
  if (std::abs(z) < 0.05) {
    /// Laurent series near the origin
    cd z2 = z * z;
    return 1.0 / z - z * (1.0 / 12.0 + z2 * (1.0 / 720.0 + z2 * (1.0 / 30240.0 + z2 / 1209600.0)));
  }
  return 0.5 * std::cos(0.5 * z) / s;
}

cd d_of_z(cd z, double cutoff) { return c_of_z(z, cutoff) + z / 12.0; }

cd c_prime_of_z(cd z, double cutoff) {
  cd s = checked_sin_half(z, cutoff);
  return -0.25 / (s * s);
}

Mat mdybe_lhs(const RVec& q, const Mat& X, const Mat& Y) {
  const Eigen::Index n = q.size();
  if (X.rows() != n || Y.rows() != n || X.cols() != n || Y.cols() != n)
    throw InvalidInput("mdybe: dimension mismatch");
  Mat RX = r_hyp_apply(q, X);
  Mat RY = r_hyp_apply(q, Y);
  Mat lhs = commutator(RX, RY) - r_hyp_apply(q, Mat(commutator(RX, Y) + commutator(X, RY)));
  lhs += dr_hyp_apply(q, X.diagonal(), Y) - dr_hyp_apply(q, Y.diagonal(), X);

  /// h-valued term: Z with pair(Z, h) = pair(dR(q)[h] X, Y) over the real basis {e_kk, i e_kk}.
  for (Eigen::Index k = 0; k < n; ++k) {
    CVec e = CVec::Zero(n);
    e(k) = 1.0;
    double a = pair(dr_hyp_apply(q, e, X), Y);
    double b = pair(dr_hyp_apply(q, CVec(cd(0, 1) * e), X), Y);
    lhs(k, k) += cd(0.5 * a, -0.5 * b);
  }
  return lhs;
}

MdybeResult mdybe_residual(const RVec& q, const Mat& X, const Mat& Y) {
  Mat lhs = mdybe_lhs(q, X, Y);
  Mat xy = commutator(X, Y);
  MdybeResult out;
  double nrm2 = xy.squaredNorm();
  if (nrm2 > 1e-24 * (1.0 + X.squaredNorm() * Y.squaredNorm()))
    out.fitted_c2 = -std::real(xy.cwiseProduct(lhs.conjugate()).sum()) / nrm2;
  out.residual = lhs + out.fitted_c2 * xy;
  return out;
}

Mat lax_cm(const RVec& q, const RVec& p, const Mat& xi, cd z) {
  check_lax_args(q, p, xi);
  const Eigen::Index n = q.size();
  cd cz = c_of_z(z);
  Mat L = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    L(i, i) = p(i) + d_of_z(z) * xi(i, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      double a = q(i) - q(j);
      L(i, j) = (cz + c_of_z(a)) * std::exp(z * a / 12.0) * xi(i, j);
    }
  }
  return L;
}

Mat lax_cm_derivative(const RVec& q, const Mat& xi, const RVec& qdot, const RVec& pdot, const Mat& xidot, cd z) {
  check_lax_args(q, pdot, xi);
  const Eigen::Index n = q.size();
  cd cz = c_of_z(z);
  Mat dL = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dL(i, i) = pdot(i) + d_of_z(z) * xidot(i, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      double a = q(i) - q(j), adot = qdot(i) - qdot(j);
      cd k = cz + c_of_z(a);
      cd ex = std::exp(z * a / 12.0);
      dL(i, j) = ex * ((c_prime_of_z(a) + k * z / 12.0) * adot * xi(i, j) + k * xidot(i, j));
    }
  }
  return dL;
}

Mat lax_cm_tilde(const RVec& q, const RVec& p, const Mat& xi, cd z) {
  check_lax_args(q, p, xi);
  const Eigen::Index n = q.size();
  cd cz = c_of_z(z);
  Mat L = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    L(i, i) = p(i) + d_of_z(z) * xi(i, i);
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) L(i, j) = (cz + c_of_z(q(i) - q(j))) * xi(i, j);
  }
  return L;
}

Mat lax_laurent_m1(const RVec& q, const RVec& p, const Mat& xi) {
  check_lax_args(q, p, xi);
  const Eigen::Index n = q.size();
  Mat m = diag_matrix(p.cast<cd>());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      double a = q(i) - q(j);
      m(i, j) = (c_of_z(a) + a / 12.0) * xi(i, j);
    }
  return m;
}

Mat lax_connection(const RVec& q, const RVec& p, const Mat& xi, cd z) {
  check_lax_args(q, p, xi);
  if (xi.diagonal().norm() > 1e-10 * (1.0 + xi.norm()))
    throw InvalidInput("lax_connection: requires zero momentum (diagonal of xi must vanish)");
  Mat M = lax_cm(q, p, xi, z) / z;
  return 0.5 * M + kernel_contraction(q, -z, lax_laurent_m1(q, p, xi), false) +
         kernel_contraction(q, -z, xi, true);
}

}  // namespace spinlab
