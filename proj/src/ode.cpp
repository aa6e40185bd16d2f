#include "spinlab/ode.hpp"

#include <cmath>

namespace spinlab {

Scheme parse_scheme(const std::string& name) {
  if (name == "rk4") return Scheme::rk4;
  if (name == "dopri") return Scheme::dopri;
  throw InvalidInput("unknown scheme: " + name + " (expected rk4 or dopri)");
}

std::string to_string(Scheme scheme) { return scheme == Scheme::rk4 ? "rk4" : "dopri"; }

namespace ode {

RVec rk4_step(const Rhs& f, double t, const RVec& y, double h) {
  RVec k1 = f(t, y);
  RVec k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  RVec k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  RVec k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

void integrate_rk4(const Rhs& f, const RVec& y0, double t_final, double dt, const Observer& observe) {
  const long steps = std::lround(t_final / dt);
  if (steps < 1 || std::abs(double(steps) * dt - t_final) > 1e-9 * std::max(1.0, t_final))
    throw InvalidInput("rk4: t_final must be a positive integer multiple of dt");
  RVec y = y0;
  for (long k = 0; k < steps; ++k) {
    y = rk4_step(f, double(k) * dt, y, dt);
    observe(double(k + 1) * dt, y);
  }
}

void integrate_dopri(const Rhs& f, const RVec& y0, double t_final, double dt, const Observer& observe,
                     const Options& opts) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                      b6 = 11.0 / 84;
  static const double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                      e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

  if (!(t_final > 0)) throw InvalidInput("dopri: t_final must be positive");
  double t = 0.0;
  double h = dt;
  RVec y = y0;
  RVec k1 = f(t, y);
  while (t < t_final) {
    bool last = false;
    if (t + h >= t_final) {
      h = t_final - t;
      last = true;
    }
    RVec k2 = f(t + c2 * h, y + h * a21 * k1);
    RVec k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    RVec k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    RVec k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    RVec k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    RVec ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    RVec k7 = f(t + h, ynew);
    RVec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double e = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      double sc = opts.atol + opts.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
      e = std::max(e, std::abs(err(i)) / sc);
    }
    if (e <= 1.0) {
      t = last ? t_final : t + h;
      y = ynew;
      k1 = k7;
      observe(t, y);
      if (last) break;
    }
    double factor = e > 0 ? 0.9 * std::pow(e, -0.2) : 5.0;
    h = std::min(dt, h * std::min(5.0, std::max(0.2, factor)));
    if (h < opts.min_step) throw NumericalBreakdown("dopri: step size underflow");
  }
}

}  // namespace

void integrate(const Rhs& f, const RVec& y0, double t_final, double dt, Scheme scheme,
               const Observer& observe, const Options& opts) {
  if (!(dt > 0)) throw InvalidInput("integrate: dt must be positive");
  if (scheme == Scheme::rk4)
    integrate_rk4(f, y0, t_final, dt, observe);
  else
    integrate_dopri(f, y0, t_final, dt, observe, opts);
}

}  // namespace ode
}  // namespace spinlab
