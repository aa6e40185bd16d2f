#include <algorithm>
#include <cmath>
#include <random>

#include "common.hpp"
#include "spinlab/checks.hpp"
#include "spinlab/cm_dynamics.hpp"
#include "spinlab/integrals.hpp"
#include "spinlab/rmatrix.hpp"
#include "spinlab/rs_dynamics.hpp"

namespace spinlab::app {

Json CheckResult::to_json() const {
  Json j;
  j["name"] = name;
  j["claim"] = claim;
  j["trials"] = trials;
  j["max_residual"] = max_residual;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  if (!details.empty()) j["details"] = details;
  return j;
}

namespace {

enum Stream : std::uint64_t {
  kMdybe = 1,
  kJacobiGroupoid,
  kJacobiRs,
  kSigma,
  kKappa,
  kRestriction,
  kCmFlow,
  kIntegrals,
  kCommute,
  kRs,
  kCounts
};

CheckResult make(std::string name, std::string claim, int trials, double worst, double tol, TolOverride over) {
  CheckResult r;
  r.name = std::move(name);
  r.claim = std::move(claim);
  r.trials = trials;
  r.max_residual = worst;
  r.tolerance = over ? *over : tol;
  r.pass = std::isfinite(worst) && worst < r.tolerance;
  return r;
}

/// Hausdorff distance between two eigenvalue multisets.
double spectrum_distance(const CVec& a, const CVec& b) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) d = std::max(d, (b.array() - a(i)).abs().minCoeff());
  for (Eigen::Index i = 0; i < b.size(); ++i) d = std::max(d, (a.array() - b(i)).abs().minCoeff());
  return d;
}

const cd kSpectralProbes[3] = {cd(0.3, 0.4), cd(1.1, -0.5), cd(-0.7, 0.9)};

}  // namespace

RVec random_distinct_reals(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RVec q(n);
  double v = 2.0 * unif(gen) - 1.0;
  for (int i = 0; i < n; ++i) {
    q(i) = v;
    v -= 0.4 + 1.2 * unif(gen);
  }
  /// shuffle so that the order carries no structure
  for (int i = n - 1; i > 0; --i) std::swap(q(i), q(std::uniform_int_distribution<int>(0, i)(gen)));
  return q;
}

RVec random_groupoid_point(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec u = random_distinct_reals(n, gen()).cast<cd>();
  CVec v = random_distinct_reals(n, gen()).cast<cd>();
  for (int i = 0; i < n; ++i) {
    u(i) += cd(0, 0.3 * normal(gen));
    v(i) += cd(0, 0.3 * normal(gen));
  }
  Mat g = Mat::Identity(n, n) + 0.4 * random_element(Subspace::full, n, gen());
  return pack_groupoid(u, g, v);
}

RVec random_rs_stable_point(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec u = random_distinct_reals(n, gen()).cast<cd>();
  for (int i = 0; i < n; ++i) u(i) += cd(0, 0.3 * normal(gen));
  Mat g = Mat::Identity(n, n) + 0.4 * random_element(Subspace::hermitian, n, gen());
  return pack_rs_stable(u, g);
}

RVec random_cm_ambient_point(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec q(n), p(n);
  for (int i = 0; i < n; ++i) {
    q(i) = cd(normal(gen), normal(gen));
    p(i) = cd(normal(gen), normal(gen));
  }
  return pack_cm_ambient(q, p, random_element(Subspace::full, n, gen()));
}

std::vector<CheckResult> check_mdybe(int n, int trials, std::uint64_t seed, double expected_c2, TolOverride tol) {
  double worst = 0.0, c2_dev = 0.0, c2_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t s = derive_seed(seed, kMdybe, t);
    RVec q = random_distinct_reals(n, s);
    Mat X = random_element(Subspace::full, n, s + 1);
    Mat Y = random_element(Subspace::full, n, s + 2);
    MdybeResult r = mdybe_residual(q, X, Y);
    worst = std::max(worst, r.residual.norm());
    c2_dev = std::max(c2_dev, std::abs(r.fitted_c2 - expected_c2));
    c2_sum += r.fitted_c2;
  }
  CheckResult res = make("mdybe_residual", "hyperbolic r-matrix satisfies the modified dynamical Yang-Baxter equation",
                         trials, worst, 1e-9, tol);
  CheckResult c2 = make("mdybe_fitted_c2", "fitted constant c^2 of the modified dynamical Yang-Baxter equation",
                        trials, c2_dev, 1e-6, tol);
  c2.details = Json{{"expected_c2", expected_c2}, {"fitted_c2_mean", trials ? c2_sum / trials : 0.0}};
  return {res, c2};
}

std::vector<CheckResult> check_jacobi(int n, int trials, std::uint64_t seed, TolOverride tol) {
  PhaseSpace groupoid{Space::groupoid_full, n, Form::compact};
  PhaseSpace rs_space{Space::rs_stable, n, Form::compact};
  double wg = 0.0, wr = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t s = derive_seed(seed, kJacobiGroupoid, t);
    RVec x = random_groupoid_point(n, s);
    wg = std::max(wg, jacobi_residual(groupoid, random_observable(groupoid.dim(), s + 1),
                                      random_observable(groupoid.dim(), s + 2),
                                      random_observable(groupoid.dim(), s + 3), x));
    s = derive_seed(seed, kJacobiRs, t);
    RVec y = random_rs_stable_point(n, s);
    wr = std::max(wr, jacobi_residual(rs_space, random_observable(rs_space.dim(), s + 1),
                                      random_observable(rs_space.dim(), s + 2),
                                      random_observable(rs_space.dim(), s + 3), y));
  }
  PhaseSpace cm_space{Space::cm_stable, n, Form::compact};
  RVec x = cm::to_coords(cm::random_state(n, Form::compact, seed));
  double wl = jacobi_residual(cm_space, coordinate_observable(0), coordinate_observable(n),
                              coordinate_observable(cm_space.dim() - 1), x);
  return {make("jacobi_groupoid", "groupoid bracket satisfies the Jacobi identity", trials, wg, 1e-5, tol),
          make("jacobi_rs_stable", "stable-locus RS bracket satisfies the Jacobi identity", trials, wr, 1e-5, tol),
          make("jacobi_cm_linear", "CM bracket of linear coordinates satisfies the Jacobi identity", 1, wl, 1e-12,
               tol)};
}

std::vector<CheckResult> check_poisson_maps(int n, int trials, std::uint64_t seed, TolOverride tol) {
  PhaseSpace groupoid{Space::groupoid_full, n, Form::compact};
  PhaseSpace ambient{Space::cm_ambient, n, Form::compact};
  PhaseSpace rs_space{Space::rs_stable, n, Form::compact};
  double ws = 0.0, wk = 0.0, wr = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t s = derive_seed(seed, kSigma, t);
    RVec x = random_groupoid_point(n, s);
    ws = std::max(ws, poisson_map_residual(groupoid, groupoid, [n](const RVec& y) { return sigma_map(n, y); },
                                           random_observable(groupoid.dim(), s + 1),
                                           random_observable(groupoid.dim(), s + 2), x));
    s = derive_seed(seed, kKappa, t);
    RVec a = random_cm_ambient_point(n, s);
    wk = std::max(wk, poisson_map_residual(ambient, ambient, [n](const RVec& y) { return kappa_map(n, y); },
                                           random_observable(ambient.dim(), s + 1),
                                           random_observable(ambient.dim(), s + 2), a));
    s = derive_seed(seed, kRestriction, t);
    RVec y = random_rs_stable_point(n, s);
    Observable phi = random_observable(groupoid.dim(), s + 1);
    Observable psi = random_observable(groupoid.dim(), s + 2);
    Observable phi_t, psi_t;
    phi_t.eval = [n, phi](const RVec& z) { return phi(rs_embed(n, z)); };
    psi_t.eval = [n, psi](const RVec& z) { return psi(rs_embed(n, z)); };
    wr = std::max(wr, std::abs(bracket(rs_space, phi_t, psi_t, y) - restriction_bracket(n, phi, psi, y)));
  }
  return {make("sigma_poisson_map", "Sigma(u,g,v) = (conj v, g*, conj u) preserves the groupoid bracket", trials,
               ws, 1e-6, tol),
          make("kappa_poisson_map", "kappa(q,p,xi) = (conj q, conj p, -xi*) preserves the CM bracket", trials, wk,
               1e-6, tol),
          make("stable_restriction", "stable-locus bracket equals the groupoid bracket of symmetrized extensions",
               trials, wr, 1e-6, tol)};
}

std::vector<CheckResult> check_cm_flow(int n, Form form, const FlowSettings& flow, std::uint64_t seed,
                                       TolOverride tol) {
  CMState x0 = cm::random_state(n, form, derive_seed(seed, kCmFlow, std::uint64_t(form)));
  cm::Trajectory traj = cm::integrate(x0, flow.t_final, flow.dt, flow.scheme);
  const size_t count = traj.times.size();
  const std::string tag = " (" + to_string(form) + ", N=" + std::to_string(n) + ")";

  double e0 = traj.energy.front(), drift = 0.0, mom = 0.0, defect = 0.0;
  for (size_t s = 0; s < count; ++s) {
    drift = std::max(drift, std::abs(traj.energy[s] - e0) / std::max(std::abs(e0), 1e-300));
    mom = std::max(mom, traj.momentum_norm[s]);
    defect = std::max(defect, traj.subspace_defect[s]);
  }

  CVec spec0[3];
  for (int k = 0; k < 3; ++k)
    spec0[k] = lax_cm(x0.q, x0.p, x0.xi, kSpectralProbes[k]).eigenvalues();
  double iso = 0.0;
  for (size_t s = 0; s < count; s += 10)
    for (int k = 0; k < 3; ++k) {
      const CMState& x = traj.states[s];
      iso = std::max(iso, spectrum_distance(spec0[k], lax_cm(x.q, x.p, x.xi, kSpectralProbes[k]).eigenvalues()));
    }

  /// dL/dt along the vector field, with a 4th-order difference of the samples as a cross-check
  double lax = 0.0, lax_fd = 0.0;
  int lax_samples = 0;
  const bool uniform = flow.scheme == Scheme::rk4;
  for (size_t s = 2; s + 2 < count; s += 10) {
    CMState x = traj.states[s];
    x.xi.diagonal().setZero();
    cm::Tangent v = cm::vector_field(x);
    for (int k = 0; k < 3; ++k) {
      cd z = kSpectralProbes[k];
      Mat L = lax_cm(x.q, x.p, x.xi, z);
      Mat B = lax_connection(x.q, x.p, x.xi, z);
      Mat C = commutator(L, B);
      lax = std::max(lax, (lax_cm_derivative(x.q, x.xi, v.qdot, v.pdot, v.xidot, z) - C).norm());
      if (uniform && s % 50 == 2) {
        auto Ls = [&](size_t i) {
          const CMState& y = traj.states[i];
          return lax_cm(y.q, y.p, y.xi, z);
        };
        Mat Ldot = (Ls(s - 2) - 8.0 * Ls(s - 1) + 8.0 * Ls(s + 1) - Ls(s + 2)) / (12.0 * flow.dt);
        lax_fd = std::max(lax_fd, (Ldot - C).norm());
      }
    }
    ++lax_samples;
  }

  std::vector<CheckResult> out{
      make("cm_energy_drift", "Hamiltonian is conserved" + tag, 1, drift, 1e-8, tol),
      make("cm_momentum_zero", "zero momentum level is invariant" + tag, 1, mom, 1e-10, tol),
      make("cm_subspace", "spin stays in its real form" + tag, 1, defect, 1e-10, tol),
      make("cm_isospectral", "spectrum of L(z0) is conserved at three z0" + tag, 1, iso, 1e-6, tol)};
  CheckResult lr = make("cm_lax_equation", "dL/dt = [L, B] along the flow" + tag, lax_samples, lax, 1e-6, tol);
  if (uniform) lr.details["finite_difference_residual"] = lax_fd;
  out.push_back(lr);
  for (auto& r : out) r.details["steps"] = count - 1;
  return out;
}

std::vector<CheckResult> check_integrals(int n, int trials, int commute_states, const FlowSettings& flow,
                                         std::uint64_t seed, TolOverride tol) {
  double reality = 0.0, sums = 0.0, scaled = 0.0, fit = 0.0, odd = 0.0;
  for (int t = 0; t < trials; ++t) {
    CMState x = cm::random_state(n, Form::compact, derive_seed(seed, kIntegrals, t));
    IntegralsTable tbl = extract(x);
    fit = std::max(fit, tbl.fit_residual);
    for (int r = 0; r <= n; ++r)
      for (int k = 0; k <= r; ++k) {
        cd v = tbl.coeffs(r, k);
        double scale = std::max(1.0, std::abs(v));
        reality = std::max(reality, (k % 2 == 0 ? std::abs(v.imag()) : std::abs(v.real())) / scale);
      }
    for (double s : sum_rule_residual(tbl)) sums = std::max(sums, s);
    for (double s : scaled_sum_rule_residual(tbl)) scaled = std::max(scaled, s);
    CMState y = cm::random_state(n, Form::normal, derive_seed(seed, kIntegrals, 100000 + t));
    IntegralsTable tn = extract(y);
    odd = std::max(odd, tn.odd_defect());
  }

  /// drift of the nontrivial family along a compact trajectory
  CMState x0 = cm::random_state(n, Form::compact, derive_seed(seed, kIntegrals, 999999));
  cm::Trajectory traj = cm::integrate(x0, flow.t_final, flow.dt, flow.scheme);
  auto family = nontrivial_family(Form::compact, n);
  IntegralsTable t0 = extract(x0);
  double drift = 0.0;
  for (size_t s = 0; s < traj.states.size(); s += 100) {
    CMState x = traj.states[s];
    x.xi.diagonal().setZero();
    IntegralsTable tbl = extract(x);
    for (const auto& m : family) {
      double a = member_value(t0, m), b = member_value(tbl, m);
      drift = std::max(drift, std::abs(b - a) / std::max(1.0, std::abs(a)));
    }
  }

  double inv = 0.0;
  for (int t = 0; t < commute_states; ++t) {
    CMState x = cm::random_state(n, Form::compact, derive_seed(seed, kCommute, t));
    std::vector<Observable> obs;
    for (const auto& m : family) obs.push_back(integral_observable(Form::compact, n, m));
    obs.push_back(cm::hamiltonian_observable(Form::compact, n));
    for (size_t a = 0; a < obs.size(); ++a)
      for (size_t b = a + 1; b < obs.size(); ++b) inv = std::max(inv, involution_residual(x, obs[a], obs[b]));
  }

  std::vector<CheckResult> out{
      make("integrals_reality", "even c-powers are real and odd c-powers imaginary (compact)", trials, reality,
           1e-10, tol),
      make("integrals_sum_rules", "alternating sums of odd coefficients vanish (compact)", trials, sums, 1e-10, tol),
      make("integrals_scaled_sum_rules", "sums of odd coefficients weighted by (-1/4)^k vanish (compact)", trials,
           scaled, 1e-10, tol),
      make("integrals_normal_even", "characteristic polynomial is even in c(z) (normal)", trials, odd, 1e-10, tol),
      make("integrals_fit", "characteristic polynomial is polynomial in c(z)", trials, fit, 1e-8, tol),
      make("integrals_flow_drift", "nontrivial integrals are conserved along the flow", 1, drift, 1e-6, tol),
      make("integrals_involution", "integrals and Hamiltonian Poisson commute pairwise", commute_states, inv, 1e-5,
           tol)};
  return out;
}

std::vector<CheckResult> check_rs(int n, int trials, const FlowSettings& flow, std::uint64_t seed, TolOverride tol) {
  RSState x0 = rs::random_state(n, derive_seed(seed, kRs, 0));
  rs::Trajectory traj = rs::integrate(x0, flow.t_final, flow.dt, flow.scheme);
  const size_t count = traj.times.size();
  double herm = 0.0, eig = 0.0, tr = 0.0;
  for (size_t s = 0; s < count; ++s) {
    herm = std::max(herm, traj.hermiticity_defect[s]);
    eig = std::max(eig, traj.eigen_drift[s]);
    tr = std::max(tr, traj.trace_drift[s]);
  }
  double accel = 0.0;
  int accel_samples = 0;
  const bool uniform = flow.scheme == Scheme::rk4;
  if (uniform) {
    const double h = flow.dt;
    for (size_t s = 2; s + 2 < count; s += 50) {
      RVec qdd = (-traj.states[s - 2].q + 16.0 * traj.states[s - 1].q - 30.0 * traj.states[s].q +
                  16.0 * traj.states[s + 1].q - traj.states[s + 2].q) /
                 (12.0 * h * h);
      RVec gdd = rs::vector_field(traj.states[s]).gdot.diagonal().real();
      accel = std::max(accel, (qdd - gdd).cwiseAbs().maxCoeff());
      ++accel_samples;
    }
  }

  PhaseSpace space{Space::rs_stable, n, Form::compact};
  double central = 0.0, flows = 0.0;
  for (int t = 0; t < trials; ++t) {
    RSState x = rs::random_state(n, derive_seed(seed, kRs, 1 + t));
    RVec c = rs::to_coords(x);
    for (int k = 1; k <= n; ++k) {
      for (int l = k + 1; l <= n; ++l)
        central = std::max(central, std::abs(bracket(space, rs::central_observable(n, k),
                                                     rs::central_observable(n, l), c)));
      rs::Tangent ft;
      try {
        ft = rs::central_flow(x, k, std::numeric_limits<double>::infinity());
      } catch (const NumericalBreakdown&) {
        flows = std::numeric_limits<double>::infinity();
        continue;
      }
      RVec v = pack_rs_stable(ft.qdot.cast<cd>(), ft.gdot);
      flows = std::max(flows, hamiltonian_flow_residual(space, rs::central_observable(n, k),
                                                        [&v](const RVec&) { return v; }, c));
    }
  }

  CheckResult ar = make("rs_acceleration", "second derivative of q equals d(g_ii)/dt", accel_samples, accel, 1e-6, tol);
  if (!uniform) {
    ar.pass = false;
    ar.details = Json{{"note", "requires the fixed-step rk4 scheme"}};
  }
  return {make("rs_hermiticity", "g stays Hermitian along the RS flow", 1, herm, 1e-10, tol),
          make("rs_eigenvalue_drift", "spectrum of g is conserved along the RS flow", 1, eig, 1e-8, tol),
          make("rs_trace_drift", "2 Re tr(g^k)/k are conserved along the RS flow", 1, tr, 1e-8, tol),
          ar,
          make("rs_central_commute", "central functions 2 Re tr(g^k)/k Poisson commute at Hermitian points", trials,
               central, 1e-6, tol),
          make("rs_central_flow", "closed-form central flows match the bracket flows", trials, flows, 1e-6, tol)};
}

std::vector<CheckResult> check_counts(int n, Form form, int trials, std::uint64_t seed, TolOverride tol) {
  const int expected = form == Form::compact ? 1 + n * (n - 1) / 2 : n + (n - 1) * (n - 1) / 4;
  auto family = nontrivial_family(form, n);
  Json ranks = Json::array();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    CMState x = cm::random_state(n, form, derive_seed(seed, kCounts, std::uint64_t(t) * 2 + std::uint64_t(form)));
    int rank = independence_rank(x, family);
    ranks.push_back(rank);
    worst = std::max(worst, double(std::abs(rank - expected)));
  }
  CheckResult r = make("rank_" + to_string(form) + "_N" + std::to_string(n),
                       "number of independent nontrivial integrals (" + to_string(form) + ")", trials, worst, 0.5,
                       tol);
  Json names = Json::array();
  for (const auto& m : family) names.push_back(m.name);
  r.details = Json{{"expected_rank", expected}, {"family_size", family.size()}, {"family", names}, {"ranks", ranks}};
  return {r};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"mdybe", "jacobi", "involution", "commute", "lax", "counts", "all"};
  return names;
}

Output verify(const std::string& suite, const Json& cfg) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw InvalidInput("unknown suite: " + suite);
  const int n = get_int(cfg, "n");
  if (n < 2 || n > 6) throw InvalidInput("verify: n must be between 2 and 6");
  const std::uint64_t seed = get_seed(cfg);
  const double expected_c2 = get_double(cfg, "expected_c2");
  TolOverride tol;
  if (!cfg.at("tol").is_null()) {
    tol = get_double(cfg, "tol");
    if (!(*tol > 0)) throw InvalidInput("tol must be positive");
  }
  std::optional<int> trials;
  if (!cfg.at("trials").is_null()) {
    trials = get_int(cfg, "trials");
    if (*trials < 1) throw InvalidInput("trials must be at least 1");
  }
  FlowSettings flow;
  flow.t_final = get_double(cfg, "t_final");
  flow.dt = get_double(cfg, "dt");
  flow.scheme = parse_scheme(get_string(cfg, "scheme"));
  if (!(flow.t_final > 0) || !(flow.dt > 0)) throw InvalidInput("t_final and dt must be positive");
  auto T = [&](int dflt) { return trials ? *trials : dflt; };

  std::vector<CheckResult> checks;
  auto add = [&](std::vector<CheckResult> more) { checks.insert(checks.end(), more.begin(), more.end()); };
  const bool all = suite == "all";
  if (all || suite == "mdybe") add(check_mdybe(n, T(100), seed, expected_c2, tol));
  if (all || suite == "jacobi") add(check_jacobi(n, T(100), seed, tol));
  if (all || suite == "involution") add(check_poisson_maps(n, T(100), seed, tol));
  if (all || suite == "commute") {
    auto integ = check_integrals(n, T(100), T(20), flow, seed, tol);
    for (auto& c : integ)
      if (c.name == "integrals_involution") checks.push_back(c);
    auto rsc = check_rs(n, T(20), FlowSettings{flow.dt * 4, flow.dt, Scheme::rk4}, seed, tol);
    for (auto& c : rsc)
      if (c.name == "rs_central_commute" || c.name == "rs_central_flow") checks.push_back(c);
  }
  if (all || suite == "lax") {
    for (int k = 0; k < T(1); ++k) {
      std::uint64_t s = derive_seed(seed, 77, k);
      add(check_cm_flow(n, Form::compact, flow, s, tol));
      add(check_cm_flow(n, Form::normal, flow, s, tol));
      auto integ = check_integrals(n, 100, 0, flow, s, tol);
      for (auto& c : integ)
        if (c.name != "integrals_involution") checks.push_back(c);
      auto rsc = check_rs(n, 1, flow, s, tol);
      for (auto& c : rsc)
        if (c.name != "rs_central_commute" && c.name != "rs_central_flow") checks.push_back(c);
    }
  }
  if (all || suite == "counts") {
    add(check_counts(n, Form::compact, T(3), seed, tol));
    add(check_counts(n, Form::normal, T(3), seed, tol));
  }

  bool pass = true;
  Json list = Json::array();
  for (const auto& c : checks) {
    pass = pass && c.pass;
    list.push_back(c.to_json());
  }
  Output out;
  out.report["command"] = "verify";
  out.report["suite"] = suite;
  out.report["version"] = kVersion;
  out.report["config"] = cfg;
  out.report["checks"] = list;
  out.report["pass"] = pass;
  out.exit_code = pass ? 0 : 1;
  return out;
}

}  // namespace spinlab::app
