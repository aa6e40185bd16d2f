#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace spinlab {

/// Malformed arguments, violated preconditions or bad configuration.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computation left the region where it is defined (poles, collisions, singular data).
class NumericalBreakdown : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Evaluation too close to a pole of c(z) or of the coth kernel.
class PoleError : public NumericalBreakdown {
public:
  using NumericalBreakdown::NumericalBreakdown;
};

/// Particles approached each other (or the trigonometric period) during a flow.
class CollisionError : public NumericalBreakdown {
public:
  CollisionError(const std::string& what, double time, double gap)
      : NumericalBreakdown(what), time(time), gap(gap) {}
  explicit CollisionError(const std::string& what)
      : CollisionError(what, std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN()) {}

  double time;
  double gap;
};

}  // namespace spinlab
