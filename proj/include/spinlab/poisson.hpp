#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "spinlab/lie_core.hpp"

namespace spinlab {

/// Real form of the spin variable: u(N) (compact) or so(N) (normal).
enum class Form { compact, normal };

Form parse_form(const std::string& name);
std::string to_string(Form form);

/// Phase spaces with a numeric Poisson bracket.
///
/// Real coordinate layouts:
///   cm_stable, compact : q(N), p(N), Im xi_kk (N), then Re xi_ij, Im xi_ij for i<j
///   cm_stable, normal  : q(N), p(N), xi_ij for i<j
///   cm_ambient         : Re q, Im q, Re p, Im p, Re xi, Im xi (row-major)
///   groupoid_full      : Re u, Im u, Re g, Im g, Re v, Im v (row-major)
///   rs_stable          : Re u, Im u, g_kk (N), then Re g_ij, Im g_ij for i<j
enum class Space { cm_stable, cm_ambient, groupoid_full, rs_stable };

struct PhaseSpace {
  Space kind = Space::cm_stable;
  int n = 2;
  Form form = Form::compact;

  int dim() const;
};

/// Sign conventions fixed by matching the printed equations of motion with dF/dt = {F, H}.
///
///   cm      {F,G} = -2 (<d2F,d1G> - <d1F,d2G>) - 2 <xi,[dF,dG]>
///   groupoid {phi,psi} = -( -(d1phi,Dpsi) - (d2phi,D'psi) + (d1psi,Dphi) + (d2psi,D'phi)
///                            + (R(v)D'phi,D'psi) - (R(u)Dphi,Dpsi) )
///   rs      {phi,psi} = -( -(d1phi,g Gpsi) + (d1psi,g Gphi) - 2 (R(u) g Gphi, g Gpsi) )
namespace conventions {
constexpr double cm_pair_sign = -2.0;
constexpr double cm_spin_sign = -2.0;
constexpr double groupoid_sign = -1.0;
constexpr double rs_sign = -1.0;
}  // namespace conventions

/// Smooth function on a coordinate space, with optional analytic gradient.
struct Observable {
  std::function<double(const RVec&)> eval;
  std::function<RVec(const RVec&)> grad;
  double step = 1e-5;

  double operator()(const RVec& x) const { return eval(x); }
  /// Analytic gradient when supplied, otherwise central differences.
  RVec gradient(const RVec& x) const;
};

Observable coordinate_observable(int index);
/// sin(w.x) + 0.3 (w2.x)(w3.x) with seeded Gaussian weights and analytic gradient.
Observable random_observable(int dim, std::uint64_t seed, double scale = 1.0);

// Coordinate packing.
RVec pack_cm_stable(Form form, const RVec& q, const RVec& p, const Mat& xi);
void unpack_cm_stable(Form form, int n, const RVec& x, RVec& q, RVec& p, Mat& xi);
RVec pack_cm_ambient(const CVec& q, const CVec& p, const Mat& xi);
void unpack_cm_ambient(int n, const RVec& x, CVec& q, CVec& p, Mat& xi);
RVec pack_groupoid(const CVec& u, const Mat& g, const CVec& v);
void unpack_groupoid(int n, const RVec& x, CVec& u, Mat& g, CVec& v);
RVec pack_rs_stable(const CVec& u, const Mat& g);
void unpack_rs_stable(int n, const RVec& x, CVec& u, Mat& g);

/// Pairing duals of the derivatives along (q, p, xi).
struct CMGradients {
  Mat d1;
  Mat d2;
  Mat d;
};

/// Groupoid gradients: d1, d2 on the base, D = g A and D' = A g from the group directions.
struct GroupoidGradients {
  Mat d1;
  Mat D;
  Mat Dp;
  Mat d2;
};

CMGradients cm_duals(const PhaseSpace& space, const RVec& grad);
CMGradients gradients_cm(const PhaseSpace& space, const Observable& F, const RVec& x);
GroupoidGradients gradients_groupoid(int n, const Observable& F, const RVec& x);

double bracket_from_gradients(const PhaseSpace& space, const RVec& x, const RVec& gf, const RVec& gg);
double bracket(const PhaseSpace& space, const Observable& F, const Observable& G, const RVec& x);
/// {F,G} as an observable (finite-difference gradient).
Observable bracket_observable(const PhaseSpace& space, Observable F, Observable G);

double jacobi_residual(const PhaseSpace& space, const Observable& F, const Observable& G,
                       const Observable& H, const RVec& x);

using StateMap = std::function<RVec(const RVec&)>;

/// |{F o Phi, G o Phi}_src(x) - {F,G}_dst(Phi(x))|.
double poisson_map_residual(const PhaseSpace& src, const PhaseSpace& dst, const StateMap& phi,
                            const Observable& F, const Observable& G, const RVec& x);

/// Max over coordinate functions F of |{F,H}(x) - dF(x)[vf(x)]|.
double hamiltonian_flow_residual(const PhaseSpace& space, const Observable& H, const StateMap& vf,
                                 const RVec& x);

/// Sigma(u, g, v) = (conj v, g*, conj u) on groupoid coordinates.
RVec sigma_map(int n, const RVec& x);
/// kappa(q, p, xi) = (conj q, conj p, -xi*) on ambient CM coordinates.
RVec kappa_map(int n, const RVec& x);
/// Stable-locus point (u, g) as the groupoid point (u, g, conj u).
RVec rs_embed(int n, const RVec& y);

/// Groupoid bracket of the symmetrized extensions (phi + phi o Sigma)/2 at the stable point y.
double restriction_bracket(int n, const Observable& phi, const Observable& psi, const RVec& y);

}  // namespace spinlab
