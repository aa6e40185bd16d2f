#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinlab/app.hpp"
#include "spinlab/ode.hpp"
#include "spinlab/poisson.hpp"

namespace spinlab::app {

/// One verified claim: worst residual over trials against a tolerance.
struct CheckResult {
  std::string name;
  std::string claim;
  int trials = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Json details = Json::object();

  Json to_json() const;
};

struct FlowSettings {
  double t_final = 10.0;
  double dt = 1e-3;
  Scheme scheme = Scheme::rk4;
};

/// Tolerance override applied to every check when set.
using TolOverride = std::optional<double>;

std::vector<CheckResult> check_mdybe(int n, int trials, std::uint64_t seed, double expected_c2,
                                     TolOverride tol = {});
std::vector<CheckResult> check_jacobi(int n, int trials, std::uint64_t seed, TolOverride tol = {});
std::vector<CheckResult> check_poisson_maps(int n, int trials, std::uint64_t seed, TolOverride tol = {});
std::vector<CheckResult> check_cm_flow(int n, Form form, const FlowSettings& flow, std::uint64_t seed,
                                       TolOverride tol = {});
std::vector<CheckResult> check_integrals(int n, int trials, int commute_states, const FlowSettings& flow,
                                         std::uint64_t seed, TolOverride tol = {});
std::vector<CheckResult> check_rs(int n, int trials, const FlowSettings& flow, std::uint64_t seed,
                                  TolOverride tol = {});
std::vector<CheckResult> check_counts(int n, Form form, int trials, std::uint64_t seed, TolOverride tol = {});

/// Random base point helpers shared with the tests.
RVec random_groupoid_point(int n, std::uint64_t seed);
RVec random_rs_stable_point(int n, std::uint64_t seed);
RVec random_cm_ambient_point(int n, std::uint64_t seed);
RVec random_distinct_reals(int n, std::uint64_t seed);

}  // namespace spinlab::app
