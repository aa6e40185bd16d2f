#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spinlab/lie_core.hpp"

namespace spinlab {
namespace toda {

/// Affine Toda soliton data: rank n (fields mod n+1), N solitons, mass m, coupling beta.
struct SolitonSpec {
  int n = 1;
  int N = 1;
  double m = 1.0;
  double beta = 1.0;
  RVec theta;  ///< each in {2 pi k/(n+1) : k = 1..n}
  RVec eta;    ///< rapidities
  Mat V0;      ///< skew-Hermitian with -i V0 positive definite
};

void validate(const SolitonSpec& spec);

/// Single soliton with n = 1, theta = pi and V0 = i v0.
SolitonSpec one_soliton(double m, double beta, double eta, double v0);
/// N solitons with lattice angles and a random V0 = i P, P positive definite.
SolitonSpec random_spec(int n, int N, std::uint64_t seed);

/// Lambda_+ (sign > 0) or Lambda_- (sign < 0): diag(+-sqrt(2) m exp(-+eta_j) sin(theta_j/2)).
Mat lambda(const SolitonSpec& spec, int sign);

/// V = E V0 E with E = exp((Lambda_+ x_+ + Lambda_- x_-)/2).
Mat evolve_V(const SolitonSpec& spec, double x_plus, double x_minus);

struct Diagonalization {
  RVec q;  ///< ascending
  Mat U;   ///< rows are eigenvectors: U V U* = i exp(diag q)
};

/// Without U_prev, the largest entry of each eigenvector is made real positive; with U_prev,
/// each eigenvector's phase maximizes the real part of its overlap with the previous one.
Diagonalization diagonalize_gauge(const Mat& V, const std::optional<Mat>& U_prev = std::nullopt);

/// Which ratio of neighbouring tau functions defines exp(i beta phi_j).
enum class FieldConvention {
  pinned,  ///< exp(i beta phi_j) = tau_j / tau_{j+1}
  printed  ///< exp(i beta phi_j) = tau_{j+1} / tau_j
};

struct TodaFrame {
  double x_plus = 0.0;
  double x_minus = 0.0;
  Mat V;
  RVec q;
  Mat U;
  Mat g_plus;
  Mat g_minus;
  CVec tau;  ///< j = 0..n
  CVec phi;  ///< j = 0..n, principal branch
};

/// tau_j = det(1 + e^{ij Theta/2} V e^{ij Theta/2}), j = 0..n.
CVec tau_functions(const SolitonSpec& spec, const Mat& V);

/// exp(i beta phi_j) for j = 0..n.
CVec field_exponentials(const CVec& tau, FieldConvention conv = FieldConvention::pinned);

/// phi_j with the logarithm branch nearest to reference (principal branch without one).
CVec field_values(const CVec& tau, double beta, FieldConvention conv = FieldConvention::pinned,
                  const CVec* reference = nullptr);

TodaFrame rs_frame(const SolitonSpec& spec, double x_plus, double x_minus,
                   const std::optional<Mat>& U_prev = std::nullopt);

struct RSResidual {
  double residual = 0.0;                  ///< matrix form of the RS equations
  double halved_diagonal_residual = 0.0;  ///< same with the diagonal of gdot halved
};

/// Residual of dq/dx = Pi_h(g), dg/dx = [g, R(q) g] along x_+ (direction > 0) or x_- (< 0),
/// with 4th-order differences and gauge continuation from the centre frame.
RSResidual rs_residual(const SolitonSpec& spec, double x_plus, double x_minus, int direction,
                       double fd_step);

struct Grid {
  double x_plus_min = -2.0;
  double x_plus_max = 2.0;
  double x_minus_min = -2.0;
  double x_minus_max = 2.0;
  int n_plus = 50;
  int n_minus = 50;

  double x_plus(int i) const;
  double x_minus(int j) const;
};

/// |residual of the Toda field equation| per node (max over j), mixed derivative by a
/// centred 2nd-order stencil. Row i is x_plus(i), column j is x_minus(j).
Eigen::MatrixXd pde_residual(const SolitonSpec& spec, const Grid& grid, double fd_step,
                             FieldConvention conv = FieldConvention::pinned);

/// Field values over the grid with the logarithm branch continued row-major from the origin.
std::vector<CVec> field_grid(const SolitonSpec& spec, const Grid& grid);

}  // namespace toda
}  // namespace spinlab
