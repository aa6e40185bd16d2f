#include "spinlab/integrals.hpp"

#include <cmath>

#include "spinlab/rmatrix.hpp"

namespace spinlab {

cd IntegralsTable::I(int r, int k) const {
  int power = form == Form::compact ? k : 2 * k;
  if (r < 0 || r > n || power < 0 || power > r) throw InvalidInput("IntegralsTable: index out of range");
  return coeffs(r, power);
}

double IntegralsTable::odd_defect() const {
  double worst = 0.0;
  for (int r = 0; r <= n; ++r)
    for (int k = 1; k <= r; k += 2) worst = std::max(worst, std::abs(coeffs(r, k)));
  return worst;
}

CVec char_poly_coefficients(const Mat& A) {
  const int n = int(A.rows());
  CVec e = CVec::Zero(n + 1);
  e(0) = 1.0;
  /// e_r as the sum of principal r x r minors
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int r = int(idx.size());
    Mat sub(r, r);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) sub(a, b) = A(idx[a], idx[b]);
    e(r) += sub.determinant();
  }
  CVec a(n + 1);
  for (int r = 0; r <= n; ++r) a(r) = ((n + r) % 2 == 0 ? 1.0 : -1.0) * e(r);
  return a;
}

std::vector<cd> default_z_samples(int n) {
  const int m = n + 3;
  std::vector<cd> z;
  for (int i = 0; i < m; ++i) z.emplace_back(0.0, 0.5 + 2.5 * i / double(m - 1));
  z.emplace_back(0.9, 0.4);
  z.emplace_back(2.1, -0.7);
  return z;
}

IntegralsTable extract(const CMState& x, const std::vector<cd>& z_samples) {
  const int n = x.n();
  if (x.xi.diagonal().norm() > 1e-10 * (1.0 + x.xi.norm()))
    throw InvalidInput("extract: requires zero momentum (diagonal of xi must vanish)");
  const int m = int(z_samples.size());
  if (m < n + 1) throw InvalidInput("extract: need at least N+1 spectral samples");

  Mat V(m, n + 1);
  Mat a(m, n + 1);
  for (int s = 0; s < m; ++s) {
    cd c = c_of_z(z_samples[s]);
    cd pw = 1.0;
    for (int k = 0; k <= n; ++k, pw *= c) V(s, k) = pw;
    a.row(s) = char_poly_coefficients(lax_cm_tilde(x.q, x.p, x.xi, z_samples[s])).transpose();
  }
  RVec scale = V.colwise().norm().transpose();
  Mat Vs = V * diag_matrix(scale.cwiseInverse().cast<cd>());

  IntegralsTable tbl;
  tbl.form = x.form;
  tbl.n = n;
  tbl.coeffs = Mat::Zero(n + 1, n + 1);
  Eigen::JacobiSVD<Mat> full(Vs);
  RVec sv = full.singularValues();
  tbl.conditioning = sv(0) / sv(sv.size() - 1);
  if (!(tbl.conditioning < 1e10)) throw InvalidInput("extract: ill-conditioned spectral samples");

  for (int r = 0; r <= n; ++r) {
    Mat Vr = Vs.leftCols(r + 1);
    CVec sol = Vr.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(a.col(r));
    for (int k = 0; k <= r; ++k) tbl.coeffs(r, k) = sol(k) / scale(k);
    double res = (Vr * sol - a.col(r)).norm() / std::max(1.0, a.col(r).norm());
    tbl.fit_residual = std::max(tbl.fit_residual, res);
  }
  return tbl;
}

IntegralsTable extract(const CMState& x) { return extract(x, default_z_samples(x.n())); }

std::vector<double> sum_rule_residual(const IntegralsTable& tbl) {
  if (tbl.form != Form::compact) throw InvalidInput("sum rules apply to the compact form only");
  std::vector<double> out;
  for (int r = 1; r <= tbl.n; ++r) {
    cd s = 0.0;
    for (int k = 0; 2 * k + 1 <= r; ++k) s += (k % 2 == 0 ? 1.0 : -1.0) * tbl.coeffs(r, 2 * k + 1);
    out.push_back(std::abs(s));
  }
  return out;
}

std::vector<double> scaled_sum_rule_residual(const IntegralsTable& tbl) {
  if (tbl.form != Form::compact) throw InvalidInput("sum rules apply to the compact form only");
  std::vector<double> out;
  for (int r = 1; r <= tbl.n; ++r) {
    cd s = 0.0;
    double w = 1.0;
    for (int k = 0; 2 * k + 1 <= r; ++k, w *= -0.25) s += w * tbl.coeffs(r, 2 * k + 1);
    out.push_back(std::abs(s));
  }
  return out;
}

std::vector<FamilyMember> nontrivial_family(Form form, int n) {
  std::vector<FamilyMember> fam;
  auto name = [](int r, int k, bool im) {
    return std::string(im ? "Im I" : "I") + std::to_string(r) + std::to_string(k);
  };
  for (int r = 1; r <= n; ++r) {
    if (form == Form::compact) {
      if (r == 1) {
        fam.push_back({1, 0, false, name(1, 0, false)});
        continue;
      }
      for (int k = 0; k < r; ++k) {
        if (k == 1) continue;
        bool im = k % 2 == 1;
        std::string nm = name(r, k, im);
        if (!im && k > 0) nm = "Re " + nm;
        fam.push_back({r, k, im, nm});
      }
    } else {
      for (int k = 0; 2 * k <= r; ++k) {
        if (r % 2 == 0 && 2 * k == r) continue;
        fam.push_back({r, k, false, name(r, k, false)});
      }
    }
  }
  return fam;
}

std::vector<FamilyMember> nontrivial_family(const IntegralsTable& tbl) {
  return nontrivial_family(tbl.form, tbl.n);
}

double member_value(const IntegralsTable& tbl, const FamilyMember& m) {
  cd v = tbl.I(m.r, m.k);
  return m.imaginary ? v.imag() : v.real();
}

Observable integral_observable(Form form, int n, const FamilyMember& m) {
  Observable F;
  F.eval = [form, n, m](const RVec& c) {
    CMState x = cm::from_coords(form, n, c);
    x.xi.diagonal().setZero();
    return member_value(extract(x), m);
  };
  return F;
}

int independence_rank(const CMState& x, const std::vector<FamilyMember>& family, double rel_threshold) {
  const int n = x.n();
  const RVec c = cm::to_coords(x);
  const int skip = x.form == Form::compact ? n : 0;
  const int cols = int(c.size()) - skip;
  Eigen::MatrixXd J(family.size(), cols);
  for (size_t i = 0; i < family.size(); ++i) {
    RVec g = integral_observable(x.form, n, family[i]).gradient(c);
    J.row(i).head(2 * n) = g.head(2 * n).transpose();
    J.row(i).tail(cols - 2 * n) = g.tail(cols - 2 * n).transpose();
    double nrm = J.row(i).norm();
    if (nrm > 0) J.row(i) /= nrm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  RVec sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_threshold * sv(0)) ++rank;
  return rank;
}

double involution_residual(const CMState& x, const Observable& F, const Observable& G) {
  if (x.xi.diagonal().norm() > 1e-10 * (1.0 + x.xi.norm()))
    throw InvalidInput("involution_residual: requires zero momentum");
  PhaseSpace space{Space::cm_stable, x.n(), x.form};
  return std::abs(bracket(space, F, G, cm::to_coords(x)));
}

}  // namespace spinlab
