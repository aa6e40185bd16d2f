#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>

#include "spinlab/errors.hpp"

namespace spinlab {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

/// Real subspaces of gl(N,C) used throughout.
enum class Subspace {
  full,
  diag_real,            ///< real diagonal matrices
  diag_imag,            ///< imaginary diagonal matrices
  skew_hermitian,       ///< u(N)
  skew_symmetric_real,  ///< so(N)
  hermitian,
  diag_free             ///< zero diagonal
};

enum class Involution { tau, s, theta };

Subspace parse_subspace(const std::string& name);
std::string to_string(Subspace tag);

/// Real pairing 2 Re tr(xy) on gl(N,C) regarded as a real Lie algebra.
template <typename A, typename B>
double pair(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  if (x.rows() != x.cols() || x.rows() != y.rows() || x.cols() != y.cols())
    throw InvalidInput("pair: dimension mismatch");
  return 2.0 * std::real((x.array() * y.transpose().array()).sum());
}

template <typename A, typename B>
typename A::PlainObject commutator(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  return x * y - y * x;
}

/// Diagonal matrix with the given entries.
template <typename Derived>
Mat diag_matrix(const Eigen::MatrixBase<Derived>& d) {
  Mat m = Mat::Zero(d.size(), d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
  return m;
}

/// Pi_h: keep the diagonal, drop the rest.
Mat diag_part(const Mat& xi);
Mat off_diag_part(const Mat& xi);

Mat proj(const Mat& xi, Subspace tag);
Mat involution(const Mat& xi, Involution which);

/// Deterministic Gaussian sample projected onto the subspace.
Mat random_element(Subspace tag, int n, std::uint64_t seed);

/// Frobenius distance to the subspace below tol.
bool membership(const Mat& xi, Subspace tag, double tol = 1e-12);
double subspace_defect(const Mat& xi, Subspace tag);

}  // namespace spinlab
