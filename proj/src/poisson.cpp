#include "spinlab/poisson.hpp"

#include <cmath>
#include <random>

#include "spinlab/rmatrix.hpp"

namespace spinlab {

Form parse_form(const std::string& name) {
  if (name == "compact") return Form::compact;
  if (name == "normal") return Form::normal;
  throw InvalidInput("unknown form: " + name + " (expected compact or normal)");
}

std::string to_string(Form form) { return form == Form::compact ? "compact" : "normal"; }

int PhaseSpace::dim() const {
  switch (kind) {
    case Space::cm_stable:
      return form == Form::compact ? 2 * n + n * n : 2 * n + n * (n - 1) / 2;
    case Space::cm_ambient:
    case Space::groupoid_full:
      return 4 * n + 2 * n * n;
    case Space::rs_stable:
      return 2 * n + n * n;
  }
  return 0;
}

RVec Observable::gradient(const RVec& x) const {
  if (grad) return grad(x);
  RVec g(x.size());
  RVec y = x;
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    y(a) = x(a) + step;
    double fp = eval(y);
    y(a) = x(a) - step;
    double fm = eval(y);
    y(a) = x(a);
    g(a) = (fp - fm) / (2.0 * step);
  }
  return g;
}

Observable coordinate_observable(int index) {
  Observable F;
  F.eval = [index](const RVec& x) { return x(index); };
  F.grad = [index](const RVec& x) {
    RVec g = RVec::Zero(x.size());
    g(index) = 1.0;
    return g;
  };
  return F;
}

Observable random_observable(int dim, std::uint64_t seed, double scale) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, scale / std::sqrt(double(dim)));
  RVec w(dim), w2(dim), w3(dim);
  for (int a = 0; a < dim; ++a) {
    w(a) = normal(gen);
    w2(a) = normal(gen);
    w3(a) = normal(gen);
  }
  Observable F;
  F.eval = [w, w2, w3](const RVec& x) { return std::sin(w.dot(x)) + 0.3 * w2.dot(x) * w3.dot(x); };
  F.grad = [w, w2, w3](const RVec& x) -> RVec {
    return std::cos(w.dot(x)) * w + 0.3 * (w3.dot(x) * w2 + w2.dot(x) * w3);
  };
  return F;
}

// ---------------------------------------------------------------------------
// packing

RVec pack_cm_stable(Form form, const RVec& q, const RVec& p, const Mat& xi) {
  const int n = int(q.size());
  PhaseSpace sp{Space::cm_stable, n, form};
  RVec x(sp.dim());
  x.head(n) = q;
  x.segment(n, n) = p;
  int o = 2 * n;
  if (form == Form::compact) {
    for (int k = 0; k < n; ++k) x(o++) = xi(k, k).imag();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        x(o++) = xi(i, j).real();
        x(o++) = xi(i, j).imag();
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) x(o++) = xi(i, j).real();
  }
  return x;
}

void unpack_cm_stable(Form form, int n, const RVec& x, RVec& q, RVec& p, Mat& xi) {
  if (x.size() != PhaseSpace{Space::cm_stable, n, form}.dim())
    throw InvalidInput("cm_stable coordinates have the wrong length");
  q = x.head(n);
  p = x.segment(n, n);
  xi = Mat::Zero(n, n);
  int o = 2 * n;
  if (form == Form::compact) {
    for (int k = 0; k < n; ++k) xi(k, k) = cd(0, x(o++));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        xi(i, j) = cd(x(o), x(o + 1));
        xi(j, i) = -std::conj(xi(i, j));
        o += 2;
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        xi(i, j) = x(o);
        xi(j, i) = -x(o);
        ++o;
      }
  }
}

namespace {

void put_complex_vec(RVec& x, int& o, const CVec& v) {
  x.segment(o, v.size()) = v.real();
  o += int(v.size());
  x.segment(o, v.size()) = v.imag();
  o += int(v.size());
}

CVec get_complex_vec(const RVec& x, int& o, int n) {
  CVec v(n);
  for (int k = 0; k < n; ++k) v(k) = cd(x(o + k), x(o + n + k));
  o += 2 * n;
  return v;
}

void put_complex_mat(RVec& x, int& o, const Mat& m) {
  const int n = int(m.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      x(o + i * n + j) = m(i, j).real();
      x(o + n * n + i * n + j) = m(i, j).imag();
    }
  o += 2 * n * n;
}

Mat get_complex_mat(const RVec& x, int& o, int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cd(x(o + i * n + j), x(o + n * n + i * n + j));
  o += 2 * n * n;
  return m;
}

/// Pairing dual of real partials (a, b) along (Re, Im) of a complex diagonal.
Mat diag_dual(const RVec& grad, int o, int n) {
  Mat d = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) d(k, k) = cd(0.5 * grad(o + k), -0.5 * grad(o + n + k));
  return d;
}

/// Pairing dual of real partials along (Re, Im) of a full complex matrix.
Mat matrix_dual(const RVec& grad, int o, int n) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(j, i) = cd(0.5 * grad(o + i * n + j), -0.5 * grad(o + n * n + i * n + j));
  return a;
}

/// Hermitian matrix G with pair(G, eta) equal to the derivative along Hermitian eta.
Mat hermitian_dual(const RVec& grad, int o, int n) {
  Mat G = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) G(k, k) = 0.5 * grad(o++);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      cd val(0.25 * grad(o), 0.25 * grad(o + 1));
      G(i, j) = val;
      G(j, i) = std::conj(val);
      o += 2;
    }
  return G;
}

void check_dim(const PhaseSpace& space, const RVec& x) {
  if (x.size() != space.dim()) throw InvalidInput("state does not belong to the declared phase space");
}

}  // namespace

RVec pack_cm_ambient(const CVec& q, const CVec& p, const Mat& xi) {
  const int n = int(q.size());
  RVec x(4 * n + 2 * n * n);
  int o = 0;
  put_complex_vec(x, o, q);
  put_complex_vec(x, o, p);
  put_complex_mat(x, o, xi);
  return x;
}

void unpack_cm_ambient(int n, const RVec& x, CVec& q, CVec& p, Mat& xi) {
  if (x.size() != 4 * n + 2 * n * n) throw InvalidInput("cm_ambient coordinates have the wrong length");
  int o = 0;
  q = get_complex_vec(x, o, n);
  p = get_complex_vec(x, o, n);
  xi = get_complex_mat(x, o, n);
}

RVec pack_groupoid(const CVec& u, const Mat& g, const CVec& v) {
  const int n = int(u.size());
  RVec x(4 * n + 2 * n * n);
  int o = 0;
  put_complex_vec(x, o, u);
  put_complex_mat(x, o, g);
  put_complex_vec(x, o, v);
  return x;
}

void unpack_groupoid(int n, const RVec& x, CVec& u, Mat& g, CVec& v) {
  if (x.size() != 4 * n + 2 * n * n) throw InvalidInput("groupoid coordinates have the wrong length");
  int o = 0;
  u = get_complex_vec(x, o, n);
  g = get_complex_mat(x, o, n);
  v = get_complex_vec(x, o, n);
}

RVec pack_rs_stable(const CVec& u, const Mat& g) {
  const int n = int(u.size());
  RVec x(2 * n + n * n);
  int o = 0;
  put_complex_vec(x, o, u);
  for (int k = 0; k < n; ++k) x(o++) = g(k, k).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      x(o++) = g(i, j).real();
      x(o++) = g(i, j).imag();
    }
  return x;
}

void unpack_rs_stable(int n, const RVec& x, CVec& u, Mat& g) {
  if (x.size() != 2 * n + n * n) throw InvalidInput("rs_stable coordinates have the wrong length");
  int o = 0;
  u = get_complex_vec(x, o, n);
  g = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) g(k, k) = x(o++);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      g(i, j) = cd(x(o), x(o + 1));
      g(j, i) = std::conj(g(i, j));
      o += 2;
    }
}

// ---------------------------------------------------------------------------
// gradients and brackets

CMGradients cm_duals(const PhaseSpace& space, const RVec& grad) {
  const int n = space.n;
  CMGradients out;
  if (space.kind == Space::cm_stable) {
    out.d1 = diag_matrix((0.5 * grad.head(n)).cast<cd>());
    out.d2 = diag_matrix((0.5 * grad.segment(n, n)).cast<cd>());
    out.d = Mat::Zero(n, n);
    int o = 2 * n;
    if (space.form == Form::compact) {
      /// basis i e_kk, e_ij - e_ji, i(e_ij + e_ji) has Gram entries -2, -4, -4
      for (int k = 0; k < n; ++k) out.d(k, k) = cd(0, grad(o++) / -2.0);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          cd val(grad(o) / -4.0, grad(o + 1) / -4.0);
          out.d(i, j) = val;
          out.d(j, i) = -std::conj(val);
          o += 2;
        }
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          out.d(i, j) = grad(o) / -4.0;
          out.d(j, i) = -grad(o) / -4.0;
          ++o;
        }
    }
  } else if (space.kind == Space::cm_ambient) {
    out.d1 = diag_dual(grad, 0, n);
    out.d2 = diag_dual(grad, 2 * n, n);
    out.d = matrix_dual(grad, 4 * n, n);
  } else {
    throw InvalidInput("cm gradients requested on a non-CM phase space");
  }
  return out;
}

CMGradients gradients_cm(const PhaseSpace& space, const Observable& F, const RVec& x) {
  check_dim(space, x);
  return cm_duals(space, F.gradient(x));
}

GroupoidGradients gradients_groupoid(int n, const Observable& F, const RVec& x) {
  CVec u, v;
  Mat g;
  unpack_groupoid(n, x, u, g, v);
  RVec grad = F.gradient(x);
  GroupoidGradients out;
  out.d1 = diag_dual(grad, 0, n);
  Mat A = matrix_dual(grad, 2 * n, n);
  out.D = g * A;
  out.Dp = A * g;
  out.d2 = diag_dual(grad, 2 * n + 2 * n * n, n);
  return out;
}

namespace {

double bracket_raw(const PhaseSpace& space, const RVec& x, const RVec& gf, const RVec& gg) {
  const int n = space.n;
  switch (space.kind) {
    case Space::cm_stable:
    case Space::cm_ambient: {
      Mat xi;
      if (space.kind == Space::cm_stable) {
        RVec q, p;
        unpack_cm_stable(space.form, n, x, q, p, xi);
      } else {
        CVec q, p;
        unpack_cm_ambient(n, x, q, p, xi);
      }
      CMGradients f = cm_duals(space, gf);
      CMGradients g = cm_duals(space, gg);
      return conventions::cm_pair_sign * (pair(f.d2, g.d1) - pair(f.d1, g.d2)) +
             conventions::cm_spin_sign * pair(xi, commutator(f.d, g.d));
    }
    case Space::groupoid_full: {
      CVec u, v;
      Mat g;
      unpack_groupoid(n, x, u, g, v);
      Mat Af = matrix_dual(gf, 2 * n, n);
      Mat Ag = matrix_dual(gg, 2 * n, n);
      Mat d1f = diag_dual(gf, 0, n), d1g = diag_dual(gg, 0, n);
      Mat d2f = diag_dual(gf, 2 * n + 2 * n * n, n), d2g = diag_dual(gg, 2 * n + 2 * n * n, n);
      Mat Df = g * Af, Dg = g * Ag, Dpf = Af * g, Dpg = Ag * g;
      double val = -pair(d1f, Dg) - pair(d2f, Dpg) + pair(d1g, Df) + pair(d2g, Dpf) +
                   pair(r_hyp_apply(v, Dpf), Dpg) - pair(r_hyp_apply(u, Df), Dg);
      return conventions::groupoid_sign * val;
    }
    case Space::rs_stable: {
      CVec u;
      Mat g;
      unpack_rs_stable(n, x, u, g);
      Mat d1f = diag_dual(gf, 0, n), d1g = diag_dual(gg, 0, n);
      Mat Df = g * hermitian_dual(gf, 2 * n, n);
      Mat Dg = g * hermitian_dual(gg, 2 * n, n);
      double val = -pair(d1f, Dg) + pair(d1g, Df) - 2.0 * pair(r_hyp_apply(u, Df), Dg);
      return conventions::rs_sign * val;
    }
  }
  return 0.0;
}

}  // namespace

/// Antisymmetrized so that {F,F} = 0 and {F,G} = -{G,F} hold exactly in floating point.
double bracket_from_gradients(const PhaseSpace& space, const RVec& x, const RVec& gf, const RVec& gg) {
  check_dim(space, x);
  return 0.5 * (bracket_raw(space, x, gf, gg) - bracket_raw(space, x, gg, gf));
}

double bracket(const PhaseSpace& space, const Observable& F, const Observable& G, const RVec& x) {
  check_dim(space, x);
  return bracket_from_gradients(space, x, F.gradient(x), G.gradient(x));
}

Observable bracket_observable(const PhaseSpace& space, Observable F, Observable G) {
  Observable B;
  B.eval = [space, F, G](const RVec& x) { return bracket(space, F, G, x); };
  B.step = std::max(F.step, G.step);
  return B;
}

double jacobi_residual(const PhaseSpace& space, const Observable& F, const Observable& G,
                       const Observable& H, const RVec& x) {
  double total = bracket(space, F, bracket_observable(space, G, H), x) +
                 bracket(space, G, bracket_observable(space, H, F), x) +
                 bracket(space, H, bracket_observable(space, F, G), x);
  return std::abs(total);
}

double poisson_map_residual(const PhaseSpace& src, const PhaseSpace& dst, const StateMap& phi,
                            const Observable& F, const Observable& G, const RVec& x) {
  Observable Fp, Gp;
  Fp.eval = [F, phi](const RVec& y) { return F(phi(y)); };
  Gp.eval = [G, phi](const RVec& y) { return G(phi(y)); };
  Fp.step = F.step;
  Gp.step = G.step;
  return std::abs(bracket(src, Fp, Gp, x) - bracket(dst, F, G, phi(x)));
}

double hamiltonian_flow_residual(const PhaseSpace& space, const Observable& H, const StateMap& vf,
                                 const RVec& x) {
  check_dim(space, x);
  RVec gh = H.gradient(x);
  RVec v = vf(x);
  if (v.size() != x.size()) throw InvalidInput("vector field has the wrong length");
  double worst = 0.0;
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    RVec e = RVec::Zero(x.size());
    e(a) = 1.0;
    worst = std::max(worst, std::abs(bracket_from_gradients(space, x, e, gh) - v(a)));
  }
  return worst;
}

RVec sigma_map(int n, const RVec& x) {
  CVec u, v;
  Mat g;
  unpack_groupoid(n, x, u, g, v);
  return pack_groupoid(v.conjugate(), g.adjoint(), u.conjugate());
}

RVec kappa_map(int n, const RVec& x) {
  CVec q, p;
  Mat xi;
  unpack_cm_ambient(n, x, q, p, xi);
  return pack_cm_ambient(q.conjugate(), p.conjugate(), involution(xi, Involution::tau));
}

RVec rs_embed(int n, const RVec& y) {
  CVec u;
  Mat g;
  unpack_rs_stable(n, y, u, g);
  return pack_groupoid(u, g, u.conjugate());
}

double restriction_bracket(int n, const Observable& phi, const Observable& psi, const RVec& y) {
  auto symmetrize = [n](const Observable& f) {
    Observable s;
    s.eval = [n, f](const RVec& x) { return 0.5 * (f(x) + f(sigma_map(n, x))); };
    s.step = f.step;
    return s;
  };
  PhaseSpace groupoid{Space::groupoid_full, n, Form::compact};
  return bracket(groupoid, symmetrize(phi), symmetrize(psi), rs_embed(n, y));
}

}  // namespace spinlab
