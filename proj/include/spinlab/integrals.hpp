#pragma once

#include <string>
#include <vector>

#include "spinlab/cm_dynamics.hpp"

namespace spinlab {

/// Coefficients of det(L~(z) - w) expanded in w^(N-r) c(z)^k.
struct IntegralsTable {
  Form form = Form::compact;
  int n = 0;
  /// Row r, column k: coefficient of w^(N-r) c(z)^k (k = 0..r).
  Mat coeffs;
  double fit_residual = 0.0;
  double conditioning = 0.0;

  /// I_rk: power k of c(z) for the compact form, power 2k for the normal form.
  cd I(int r, int k) const;
  /// Largest odd-power coefficient (vanishes for the normal form).
  double odd_defect() const;
};

/// Elementary data of det(A - w): entry r is the coefficient of w^(N-r).
CVec char_poly_coefficients(const Mat& A);

/// N+3 points iy with y equally spaced in [0.5, 3], then two generic complex points.
std::vector<cd> default_z_samples(int n);

IntegralsTable extract(const CMState& x, const std::vector<cd>& z_samples);
IntegralsTable extract(const CMState& x);

/// |sum_k (-1)^k I_{r,2k+1}| for r = 1..N (compact form only).
std::vector<double> sum_rule_residual(const IntegralsTable& tbl);
/// |sum_k (-1/4)^k I_{r,2k+1}|, the relation implied by c(+-i inf) = -+i/2.
std::vector<double> scaled_sum_rule_residual(const IntegralsTable& tbl);

struct FamilyMember {
  int r = 0;
  int k = 0;
  bool imaginary = false;
  std::string name;
};

/// Real nontrivial integrals with Casimirs and sum-rule dependencies removed.
std::vector<FamilyMember> nontrivial_family(Form form, int n);
std::vector<FamilyMember> nontrivial_family(const IntegralsTable& tbl);

double member_value(const IntegralsTable& tbl, const FamilyMember& m);

/// Integral as a function on cm_stable coordinates. The diagonal of xi is zeroed
/// before evaluation, a torus-invariant extension off the zero momentum level.
Observable integral_observable(Form form, int n, const FamilyMember& m);

/// Numerical rank of the family's Jacobian in (q, p, off-diagonal xi) coordinates.
int independence_rank(const CMState& x, const std::vector<FamilyMember>& family,
                      double rel_threshold = 1e-8);

double involution_residual(const CMState& x, const Observable& F, const Observable& G);

}  // namespace spinlab
