#pragma once

#include <functional>
#include <string>

#include "spinlab/lie_core.hpp"

namespace spinlab {

enum class Scheme { rk4, dopri };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme scheme);

namespace ode {

using Rhs = std::function<RVec(double, const RVec&)>;
/// Called after every accepted step; throw to abort.
using Observer = std::function<void(double, const RVec&)>;

struct Options {
  double rtol = 1e-11;
  double atol = 1e-13;
  double min_step = 1e-12;
};

RVec rk4_step(const Rhs& f, double t, const RVec& y, double h);

/// Fixed steps of size dt for rk4; adaptive Dormand-Prince 5(4) with dt as the
/// initial and maximal step for dopri. The final step lands exactly on t_final.
void integrate(const Rhs& f, const RVec& y0, double t_final, double dt, Scheme scheme,
               const Observer& observe, const Options& opts = {});

}  // namespace ode
}  // namespace spinlab
