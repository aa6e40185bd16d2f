#include "spinlab/lie_core.hpp"

#include <random>

namespace spinlab {

Subspace parse_subspace(const std::string& name) {
  if (name == "full") return Subspace::full;
  if (name == "diag_real") return Subspace::diag_real;
  if (name == "diag_imag") return Subspace::diag_imag;
  if (name == "skew_hermitian") return Subspace::skew_hermitian;
  if (name == "skew_symmetric_real") return Subspace::skew_symmetric_real;
  if (name == "hermitian") return Subspace::hermitian;
  if (name == "diag_free") return Subspace::diag_free;
  throw InvalidInput("unknown subspace tag: " + name);
}

std::string to_string(Subspace tag) {
  switch (tag) {
    case Subspace::full: return "full";
    case Subspace::diag_real: return "diag_real";
    case Subspace::diag_imag: return "diag_imag";
    case Subspace::skew_hermitian: return "skew_hermitian";
    case Subspace::skew_symmetric_real: return "skew_symmetric_real";
    case Subspace::hermitian: return "hermitian";
    case Subspace::diag_free: return "diag_free";
  }
  return "full";
}

Mat diag_part(const Mat& xi) {
  Mat out = Mat::Zero(xi.rows(), xi.cols());
  out.diagonal() = xi.diagonal();
  return out;
}

Mat off_diag_part(const Mat& xi) {
  Mat out = xi;
  out.diagonal().setZero();
  return out;
}

Mat proj(const Mat& xi, Subspace tag) {
  switch (tag) {
    case Subspace::full:
      return xi;
    case Subspace::diag_real: {
      Mat out = Mat::Zero(xi.rows(), xi.cols());
      out.diagonal() = xi.diagonal().real().cast<cd>();
      return out;
    }
    case Subspace::diag_imag: {
      Mat out = Mat::Zero(xi.rows(), xi.cols());
      out.diagonal() = cd(0, 1) * xi.diagonal().imag().cast<cd>();
      return out;
    }
    case Subspace::skew_hermitian:
      return (xi - xi.adjoint()) / 2.0;
    case Subspace::skew_symmetric_real: {
      Eigen::MatrixXd re = xi.real();
      return ((re - re.transpose()) / 2.0).cast<cd>();
    }
    case Subspace::hermitian:
      return (xi + xi.adjoint()) / 2.0;
    case Subspace::diag_free:
      return off_diag_part(xi);
  }
  return xi;
}

Mat involution(const Mat& xi, Involution which) {
  switch (which) {
    case Involution::tau: return -xi.adjoint();
    case Involution::s: return xi.adjoint();
    case Involution::theta: return -xi.transpose();
  }
  return xi;
}

Mat random_element(Subspace tag, int n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("random_element: n must be positive");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat xi(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double re = normal(gen);
      double im = normal(gen);
      xi(i, j) = cd(re, im);
    }
  return proj(xi, tag);
}

double subspace_defect(const Mat& xi, Subspace tag) { return (xi - proj(xi, tag)).norm(); }

bool membership(const Mat& xi, Subspace tag, double tol) {
  if (!(tol > 0)) throw InvalidInput("membership: tolerance must be positive");
  return subspace_defect(xi, tag) < tol;
}

}  // namespace spinlab
