#pragma once

#include <cstdint>
#include <vector>

#include "spinlab/ode.hpp"
#include "spinlab/poisson.hpp"

namespace spinlab {

/// Spin Calogero-Moser phase point: positions q, momenta p and spin xi in u(N) or so(N).
struct CMState {
  Form form = Form::compact;
  RVec q;
  RVec p;
  Mat xi;

  int n() const { return int(q.size()); }
};

Subspace spin_subspace(Form form);

namespace cm {

/// Smallest |sin((q_i - q_j)/2)| over pairs.
double min_sin_gap(const RVec& q);

/// Throws unless dimensions agree, q is collision free and xi lies in the spin subspace.
void validate(const CMState& x, double tol = 1e-12);

/// Ordered chamber q_1 > ... > q_N with span below 2 pi, Gaussian p, spin with zero diagonal.
CMState random_state(int n, Form form, std::uint64_t seed);

RVec to_coords(const CMState& x);
CMState from_coords(Form form, int n, const RVec& coords);

double hamiltonian(const CMState& x);
/// The Hamiltonian on cm_stable coordinates, with analytic gradient.
Observable hamiltonian_observable(Form form, int n);

struct Tangent {
  RVec qdot;
  RVec pdot;
  Mat xidot;
};

/// Equations of motion on the zero momentum level.
Tangent vector_field(const CMState& x);
/// Same field written in cm_stable coordinates.
RVec vector_field_coords(const CMState& x);

/// J(q, p, xi) = -Pi_h(xi).
Mat momentum(const CMState& x);

struct GaugeFix {
  Mat h;
  Mat xi_red;
};

/// Unique diagonal unitary h with h_11 = 1 making h* xi h have a positive superdiagonal.
GaugeFix gauge_fix(const Mat& xi);

struct Trajectory {
  std::vector<double> times;
  std::vector<CMState> states;
  std::vector<double> energy;
  std::vector<double> momentum_norm;
  std::vector<double> subspace_defect;
};

/// Integrates the momentum-zero flow; aborts with CollisionError when |sin((q_i-q_j)/2)| < 1e-6.
Trajectory integrate(const CMState& x0, double t_final, double dt, Scheme scheme);

}  // namespace cm
}  // namespace spinlab
