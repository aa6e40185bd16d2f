#include <cmath>

#include "common.hpp"
#include "spinlab/cm_dynamics.hpp"
#include "spinlab/integrals.hpp"
#include "spinlab/rs_dynamics.hpp"

namespace spinlab::app {

namespace {

void check_positive(double v, const char* key) {
  if (!(v > 0)) throw InvalidInput(std::string("config key '") + key + "' must be positive");
}

CMState cm_initial_state(const Json& cfg, int n, Form form) {
  const Json& init = cfg.at("initial_state");
  if (init.is_null()) return cm::random_state(n, form, get_seed(cfg));
  if (!init.is_object() || !init.contains("q") || !init.contains("p") || !init.contains("xi"))
    throw InvalidInput("initial_state needs q, p and xi");
  CMState x;
  x.form = form;
  x.q = parse_real_vector(init.at("q"), "initial_state.q");
  x.p = parse_real_vector(init.at("p"), "initial_state.p");
  x.xi = parse_complex_matrix(init.at("xi"), "initial_state.xi");
  if (x.n() != n) throw InvalidInput("initial_state does not match n");
  return x;
}

RSState rs_initial_state(const Json& cfg, int n) {
  const Json& init = cfg.at("initial_state");
  if (init.is_null()) return rs::random_state(n, get_seed(cfg));
  if (!init.is_object() || !init.contains("q") || !init.contains("g"))
    throw InvalidInput("initial_state needs q and g");
  RSState x;
  x.q = parse_real_vector(init.at("q"), "initial_state.q");
  x.g = parse_complex_matrix(init.at("g"), "initial_state.g");
  if (x.n() != n) throw InvalidInput("initial_state does not match n");
  return x;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ' ') c = '_';
  return s;
}

}  // namespace

Output simulate_cm(const Json& cfg) {
  const int n = get_int(cfg, "n");
  if (n < 1 || n > 8) throw InvalidInput("n must be between 1 and 8");
  const Form form = parse_form(get_string(cfg, "form"));
  const double t_final = get_double(cfg, "t_final");
  const double dt = get_double(cfg, "dt");
  check_positive(t_final, "t_final");
  check_positive(dt, "dt");
  const Scheme scheme = parse_scheme(get_string(cfg, "scheme"));
  const int every = get_int(cfg, "output_every");
  if (every < 1) throw InvalidInput("output_every must be at least 1");

  CMState x0 = cm_initial_state(cfg, n, form);
  cm::validate(x0);
  cm::Trajectory traj = cm::integrate(x0, t_final, dt, scheme);
  auto family = nontrivial_family(form, n);

  std::vector<std::string> header{"t"};
  for (int i = 1; i <= n; ++i) header.push_back("q_" + std::to_string(i));
  for (int i = 1; i <= n; ++i) header.push_back("p_" + std::to_string(i));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      header.push_back("re_xi_" + std::to_string(i) + "_" + std::to_string(j));
      header.push_back("im_xi_" + std::to_string(i) + "_" + std::to_string(j));
    }
  header.push_back("H");
  header.push_back("J_norm");
  for (const auto& m : family) header.push_back(sanitize(m.name));
  CsvWriter csv(header);

  std::vector<double> first_values;
  double integral_drift = 0.0;
  const size_t count = traj.times.size();
  for (size_t s = 0; s < count; ++s) {
    const bool emit = s % size_t(every) == 0 || s + 1 == count;
    const CMState& x = traj.states[s];
    CMState xr = x;
    xr.xi.diagonal().setZero();
    IntegralsTable tbl = extract(xr);
    std::vector<double> vals;
    for (const auto& m : family) vals.push_back(member_value(tbl, m));
    if (s == 0) first_values = vals;
    for (size_t k = 0; k < vals.size(); ++k)
      integral_drift = std::max(integral_drift, std::abs(vals[k] - first_values[k]) /
                                                   std::max(1.0, std::abs(first_values[k])));
    if (!emit) continue;
    std::vector<double> row{traj.times[s]};
    for (int i = 0; i < n; ++i) row.push_back(x.q(i));
    for (int i = 0; i < n; ++i) row.push_back(x.p(i));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        row.push_back(x.xi(i, j).real());
        row.push_back(x.xi(i, j).imag());
      }
    row.push_back(traj.energy[s]);
    row.push_back(traj.momentum_norm[s]);
    row.insert(row.end(), vals.begin(), vals.end());
    csv.row(row);
  }

  double e0 = traj.energy.front();
  double drift = 0.0, jmax = 0.0, defect = 0.0;
  for (size_t s = 0; s < count; ++s) {
    drift = std::max(drift, std::abs(traj.energy[s] - e0) / std::max(1.0, std::abs(e0)));
    jmax = std::max(jmax, traj.momentum_norm[s]);
    defect = std::max(defect, traj.subspace_defect[s]);
  }

  Output out;
  out.csv = csv.str();
  out.report["command"] = "simulate cm";
  out.report["version"] = kVersion;
  out.report["config"] = cfg;
  out.report["initial_state"] = Json{{"q", std::vector<double>(x0.q.data(), x0.q.data() + n)},
                                     {"p", std::vector<double>(x0.p.data(), x0.p.data() + n)},
                                     {"xi", complex_matrix_json(x0.xi)}};
  out.report["results"] = Json{{"steps", count - 1},
                               {"final_time", traj.times.back()},
                               {"energy_relative_drift_max", drift},
                               {"momentum_norm_max", jmax},
                               {"subspace_defect_max", defect},
                               {"integral_relative_drift_max", integral_drift}};
  return out;
}

Output simulate_rs(const Json& cfg) {
  const int n = get_int(cfg, "n");
  if (n < 1 || n > 8) throw InvalidInput("n must be between 1 and 8");
  const double t_final = get_double(cfg, "t_final");
  const double dt = get_double(cfg, "dt");
  check_positive(t_final, "t_final");
  check_positive(dt, "dt");
  const Scheme scheme = parse_scheme(get_string(cfg, "scheme"));
  const int every = get_int(cfg, "output_every");
  if (every < 1) throw InvalidInput("output_every must be at least 1");

  RSState x0 = rs_initial_state(cfg, n);
  rs::validate(x0);
  rs::Trajectory traj = rs::integrate(x0, t_final, dt, scheme);

  std::vector<std::string> header{"t"};
  for (int i = 1; i <= n; ++i) header.push_back("q_" + std::to_string(i));
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      header.push_back("re_g_" + std::to_string(i) + "_" + std::to_string(j));
      if (j > i) header.push_back("im_g_" + std::to_string(i) + "_" + std::to_string(j));
    }
  for (int i = 1; i <= n; ++i) header.push_back("eig_" + std::to_string(i));
  header.push_back("trace_g");
  CsvWriter csv(header);

  const size_t count = traj.times.size();
  double herm = 0.0, eig = 0.0, tr = 0.0;
  for (size_t s = 0; s < count; ++s) {
    herm = std::max(herm, traj.hermiticity_defect[s]);
    eig = std::max(eig, traj.eigen_drift[s]);
    tr = std::max(tr, traj.trace_drift[s]);
    if (!(s % size_t(every) == 0 || s + 1 == count)) continue;
    const RSState& x = traj.states[s];
    std::vector<double> row{traj.times[s]};
    for (int i = 0; i < n; ++i) row.push_back(x.q(i));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        row.push_back(x.g(i, j).real());
        if (j > i) row.push_back(x.g(i, j).imag());
      }
    rs::Invariants inv = rs::invariants(x, 1);
    for (int i = 0; i < n; ++i) row.push_back(inv.eigenvalues(i));
    row.push_back(x.g.trace().real());
    csv.row(row);
  }

  Output out;
  out.csv = csv.str();
  out.report["command"] = "simulate rs";
  out.report["version"] = kVersion;
  out.report["config"] = cfg;
  out.report["initial_state"] = Json{{"q", std::vector<double>(x0.q.data(), x0.q.data() + n)},
                                     {"g", complex_matrix_json(x0.g)}};
  out.report["results"] = Json{{"steps", count - 1},
                               {"final_time", traj.times.back()},
                               {"hermiticity_defect_max", herm},
                               {"eigenvalue_drift_max", eig},
                               {"trace_invariant_drift_max", tr}};
  return out;
}

}  // namespace spinlab::app
