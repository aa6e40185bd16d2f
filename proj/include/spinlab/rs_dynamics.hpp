#pragma once

#include <cstdint>
#include <vector>

#include "spinlab/ode.hpp"
#include "spinlab/poisson.hpp"

namespace spinlab {

/// Spin Ruijsenaars-Schneider point on the zero momentum level: real q, Hermitian g.
struct RSState {
  RVec q;
  Mat g;

  int n() const { return int(q.size()); }
};

namespace rs {

constexpr double kCollisionThreshold = 1e-6;

void validate(const RSState& x, double tol = 1e-12);

/// Distinct q and a Hermitian g with well separated eigenvalues.
RSState random_state(int n, std::uint64_t seed);

/// rs_stable coordinates with Im u = 0.
RVec to_coords(const RSState& x);
RSState from_coords(int n, const RVec& coords);

struct Tangent {
  RVec qdot;
  Mat gdot;
};

/// qdot = Pi_h(g), gdot = g (R(q) g) - (R(q) g) g.
Tangent vector_field(const RSState& x);
/// The same field in rs_stable coordinates.
RVec vector_field_coords(const RSState& x);

struct Invariants {
  std::vector<double> traces;  ///< 2 Re tr(g^k)/k, k = 1..k_max
  RVec eigenvalues;            ///< ascending
};

Invariants invariants(const RSState& x, int k_max);

/// f_k(g) = 2 Re tr(g^k)/k on rs_stable coordinates, analytic gradient.
Observable central_observable(int n, int k);

/// Hamiltonian flow of f_k: qdot = Pi_h(g^k), gdot = [g, R(q) g^k]. Every call is checked
/// against the numeric bracket flow and throws NumericalBreakdown above tol.
Tangent central_flow(const RSState& x, int k, double tol = 1e-6);

struct Trajectory {
  std::vector<double> times;
  std::vector<RSState> states;
  std::vector<double> hermiticity_defect;
  std::vector<double> eigen_drift;
  std::vector<double> trace_drift;
};

Trajectory integrate(const RSState& x0, double t_final, double dt, Scheme scheme);

}  // namespace rs
}  // namespace spinlab
