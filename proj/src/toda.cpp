#include "spinlab/toda.hpp"

#include <cmath>
#include <random>

#include "spinlab/rmatrix.hpp"

namespace spinlab {
namespace toda {

namespace {

constexpr double kExponentLimit = 300.0;

Mat frame_gdot(const RVec& q, const Mat& g) {
  Mat Rg = r_hyp_apply(q, g);
  return g * Rg - Rg * g;
}

}  // namespace

void validate(const SolitonSpec& spec) {
  if (spec.n < 1) throw InvalidInput("soliton: Toda rank n must be at least 1");
  if (spec.N < 1) throw InvalidInput("soliton: N must be at least 1");
  if (!(spec.m > 0) || !(spec.beta > 0)) throw InvalidInput("soliton: m and beta must be positive");
  if (spec.theta.size() != spec.N || spec.eta.size() != spec.N || spec.V0.rows() != spec.N ||
      spec.V0.cols() != spec.N)
    throw InvalidInput("soliton: theta, eta and V0 must have size N");
  if (!spec.eta.allFinite() || !spec.V0.allFinite()) throw InvalidInput("soliton: non-finite data");
  for (Eigen::Index j = 0; j < spec.N; ++j) {
    bool ok = false;
    for (int k = 1; k <= spec.n; ++k)
      if (std::abs(spec.theta(j) - 2.0 * M_PI * k / (spec.n + 1)) < 1e-12) ok = true;
    if (!ok) throw InvalidInput("soliton: theta_" + std::to_string(j) + " is not of the form 2 pi k/(n+1)");
  }
  if (!membership(spec.V0, Subspace::skew_hermitian, 1e-12 * (1.0 + spec.V0.norm())))
    throw InvalidInput("soliton: V0 must be skew-Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(proj(Mat(cd(0, -1) * spec.V0), Subspace::hermitian),
                                        Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) > 0)) throw InvalidInput("soliton: -i V0 must be positive definite");
}

SolitonSpec one_soliton(double m, double beta, double eta, double v0) {
  SolitonSpec s;
  s.n = 1;
  s.N = 1;
  s.m = m;
  s.beta = beta;
  s.theta = RVec::Constant(1, M_PI);
  s.eta = RVec::Constant(1, eta);
  s.V0 = Mat::Constant(1, 1, cd(0, v0));
  return s;
}

SolitonSpec random_spec(int n, int N, std::uint64_t seed) {
  if (n < 1 || N < 1) throw InvalidInput("random_spec: n and N must be positive");
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> lattice(1, n);
  std::normal_distribution<double> normal(0.0, 1.0);
  SolitonSpec s;
  s.n = n;
  s.N = N;
  s.theta.resize(N);
  s.eta.resize(N);
  for (int j = 0; j < N; ++j) {
    s.theta(j) = 2.0 * M_PI * lattice(gen) / (n + 1);
    s.eta(j) = 0.5 * normal(gen);
  }
  Mat A = random_element(Subspace::full, N, gen());
  Mat P = A * A.adjoint() / double(N) + 0.5 * Mat::Identity(N, N);
  s.V0 = cd(0, 1) * proj(P, Subspace::hermitian);
  return s;
}

Mat lambda(const SolitonSpec& spec, int sign) {
  if (sign == 0) throw InvalidInput("lambda: sign must be +1 or -1");
  double sg = sign > 0 ? 1.0 : -1.0;
  Mat L = Mat::Zero(spec.N, spec.N);
  for (int j = 0; j < spec.N; ++j)
    L(j, j) = sg * std::sqrt(2.0) * spec.m * std::exp(-sg * spec.eta(j)) * std::sin(0.5 * spec.theta(j));
  return L;
}

Mat evolve_V(const SolitonSpec& spec, double x_plus, double x_minus) {
  Mat Lp = lambda(spec, +1), Lm = lambda(spec, -1);
  CVec e(spec.N);
  for (int j = 0; j < spec.N; ++j) {
    double s = 0.5 * (Lp(j, j).real() * x_plus + Lm(j, j).real() * x_minus);
    if (std::abs(s) > kExponentLimit) throw NumericalBreakdown("evolve_V: exponent overflow");
    e(j) = std::exp(s);
  }
  return e.asDiagonal() * spec.V0 * e.asDiagonal();
}

Diagonalization diagonalize_gauge(const Mat& V, const std::optional<Mat>& U_prev) {
  const Eigen::Index n = V.rows();
  if (V.cols() != n) throw InvalidInput("diagonalize_gauge: square matrix required");
  if (!membership(V, Subspace::skew_hermitian, 1e-10 * (1.0 + V.norm())))
    throw InvalidInput("diagonalize_gauge: V must be skew-Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(proj(Mat(cd(0, -1) * V), Subspace::hermitian));
  RVec mu = es.eigenvalues();
  if (!(mu(0) > 0)) throw InvalidInput("diagonalize_gauge: spectrum of -iV must be positive");
  for (Eigen::Index k = 0; k + 1 < n; ++k)
    if (mu(k + 1) - mu(k) < 1e-10 * mu(n - 1)) throw NumericalBreakdown("diagonalize_gauge: eigenvalue collision");

  Diagonalization out;
  out.q = mu.array().log().matrix();
  out.U = es.eigenvectors().adjoint();
  for (Eigen::Index k = 0; k < n; ++k) {
    cd ph;
    if (U_prev) {
      cd ov = (U_prev->row(k).conjugate().array() * out.U.row(k).array()).sum();
      ph = std::abs(ov) > 0 ? std::conj(ov) / std::abs(ov) : cd(1.0);
    } else {
      Eigen::Index imax = 0;
      out.U.row(k).cwiseAbs().maxCoeff(&imax);
      cd e = out.U(k, imax);
      ph = std::conj(e) / std::abs(e);
    }
    out.U.row(k) *= ph;
  }
  return out;
}

CVec tau_functions(const SolitonSpec& spec, const Mat& V) {
  CVec tau(spec.n + 1);
  for (int j = 0; j <= spec.n; ++j) {
    CVec d(spec.N);
    for (int k = 0; k < spec.N; ++k) d(k) = std::exp(cd(0, 0.5 * j * spec.theta(k)));
    Mat M = Mat::Identity(spec.N, spec.N) + d.asDiagonal() * V * d.asDiagonal();
    tau(j) = M.determinant();
  }
  return tau;
}

CVec field_exponentials(const CVec& tau, FieldConvention conv) {
  const Eigen::Index n1 = tau.size();
  for (Eigen::Index j = 0; j < n1; ++j)
    if (std::abs(tau(j)) < 1e-300) throw NumericalBreakdown("tau function vanishes");
  CVec r(n1);
  for (Eigen::Index j = 0; j < n1; ++j) {
    cd a = tau(j), b = tau((j + 1) % n1);
    r(j) = conv == FieldConvention::pinned ? a / b : b / a;
  }
  return r;
}

CVec field_values(const CVec& tau, double beta, FieldConvention conv, const CVec* reference) {
  CVec r = field_exponentials(tau, conv);
  const cd ib(0, beta);
  CVec phi(r.size());
  for (Eigen::Index j = 0; j < r.size(); ++j) {
    cd l = std::log(r(j));
    if (reference) {
      double target = (ib * (*reference)(j)).imag();
      l += cd(0, 2.0 * M_PI * std::round((target - l.imag()) / (2.0 * M_PI)));
    }
    phi(j) = l / ib;
  }
  return phi;
}

TodaFrame rs_frame(const SolitonSpec& spec, double x_plus, double x_minus, const std::optional<Mat>& U_prev) {
  TodaFrame f;
  f.x_plus = x_plus;
  f.x_minus = x_minus;
  f.V = evolve_V(spec, x_plus, x_minus);
  Diagonalization d = diagonalize_gauge(f.V, U_prev);
  f.q = d.q;
  f.U = d.U;
  f.g_plus = f.U * lambda(spec, +1) * f.U.adjoint();
  f.g_minus = f.U * lambda(spec, -1) * f.U.adjoint();
  f.tau = tau_functions(spec, f.V);
  f.phi = field_values(f.tau, spec.beta);
  return f;
}

RSResidual rs_residual(const SolitonSpec& spec, double x_plus, double x_minus, int direction, double fd_step) {
  if (!(fd_step > 0)) throw InvalidInput("rs_residual: fd_step must be positive");
  const double dp = direction > 0 ? fd_step : 0.0;
  const double dm = direction > 0 ? 0.0 : fd_step;
  TodaFrame c = rs_frame(spec, x_plus, x_minus);
  const Mat& g = direction > 0 ? c.g_plus : c.g_minus;

  static const int offsets[4] = {-2, -1, 1, 2};
  static const double weights[4] = {1.0, -8.0, 8.0, -1.0};
  RVec dq = RVec::Zero(spec.N);
  Mat dg = Mat::Zero(spec.N, spec.N);
  for (int s = 0; s < 4; ++s) {
    TodaFrame f = rs_frame(spec, x_plus + offsets[s] * dp, x_minus + offsets[s] * dm, c.U);
    dq += weights[s] * f.q;
    dg += weights[s] * (direction > 0 ? f.g_plus : f.g_minus);
  }
  dq /= 12.0 * fd_step;
  dg /= 12.0 * fd_step;

  Mat rhs = frame_gdot(c.q, g);
  Mat halved = rhs;
  halved.diagonal() *= 0.5;
  double qres = (dq - g.diagonal().real()).cwiseAbs().maxCoeff();

  RSResidual out;
  out.residual = std::max(qres, (dg - rhs).norm());
  out.halved_diagonal_residual = std::max(qres, (dg - halved).norm());
  return out;
}

double Grid::x_plus(int i) const {
  return n_plus > 1 ? x_plus_min + (x_plus_max - x_plus_min) * i / double(n_plus - 1) : x_plus_min;
}

double Grid::x_minus(int j) const {
  return n_minus > 1 ? x_minus_min + (x_minus_max - x_minus_min) * j / double(n_minus - 1) : x_minus_min;
}

Eigen::MatrixXd pde_residual(const SolitonSpec& spec, const Grid& grid, double fd_step, FieldConvention conv) {
  validate(spec);
  if (!(fd_step > 0)) throw InvalidInput("pde_residual: fd_step must be positive");
  if (grid.n_plus < 1 || grid.n_minus < 1) throw InvalidInput("pde_residual: empty grid");
  const int n1 = spec.n + 1;
  const double h = fd_step;
  const cd ib(0, spec.beta);
  Eigen::MatrixXd out(grid.n_plus, grid.n_minus);
  for (int i = 0; i < grid.n_plus; ++i)
    for (int j = 0; j < grid.n_minus; ++j) {
      double xp = grid.x_plus(i), xm = grid.x_minus(j);
      auto taus = [&](double a, double b) { return tau_functions(spec, evolve_V(spec, a, b)); };
      CVec tc = taus(xp, xm);
      CVec phic = field_values(tc, spec.beta, conv);
      CVec ppp = field_values(taus(xp + h, xm + h), spec.beta, conv, &phic);
      CVec ppm = field_values(taus(xp + h, xm - h), spec.beta, conv, &phic);
      CVec pmp = field_values(taus(xp - h, xm + h), spec.beta, conv, &phic);
      CVec pmm = field_values(taus(xp - h, xm - h), spec.beta, conv, &phic);
      CVec mixed = (ppp - ppm - pmp + pmm) / (4.0 * h * h);
      CVec r = field_exponentials(tc, conv);
      double worst = 0.0;
      for (int k = 0; k < n1; ++k) {
        cd forward = r(k) / r((k + 1) % n1);
        cd backward = r((k + n1 - 1) % n1) / r(k);
        cd res = mixed(k) + spec.m * spec.m / (2.0 * ib) * (forward - backward);
        worst = std::max(worst, std::abs(res));
      }
      out(i, j) = worst;
    }
  return out;
}

std::vector<CVec> field_grid(const SolitonSpec& spec, const Grid& grid) {
  validate(spec);
  std::vector<CVec> out;
  out.reserve(size_t(grid.n_plus) * grid.n_minus);
  for (int i = 0; i < grid.n_plus; ++i)
    for (int j = 0; j < grid.n_minus; ++j) {
      CVec tau = tau_functions(spec, evolve_V(spec, grid.x_plus(i), grid.x_minus(j)));
      const CVec* ref = nullptr;
      if (j > 0)
        ref = &out.back();
      else if (i > 0)
        ref = &out[size_t(i - 1) * grid.n_minus];
      out.push_back(field_values(tau, spec.beta, FieldConvention::pinned, ref));
    }
  return out;
}

}  // namespace toda
}  // namespace spinlab
