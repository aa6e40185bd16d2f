#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "spinlab/app.hpp"
#include "spinlab/errors.hpp"

using spinlab::app::Json;

namespace {

struct Flags {
  std::optional<int> n, trials;
  std::optional<std::string> form, scheme, seed;
  std::optional<double> t_final, dt, tol;
  std::string config, out, report;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "RNG seed (unsigned 64-bit)");
  cmd->add_option("--config", f.config, "JSON configuration file");
  cmd->add_option("--out", f.out, "CSV output path");
  cmd->add_option("--report", f.report, "JSON report path (stdout if omitted)");
}

void add_flow(CLI::App* cmd, Flags& f) {
  cmd->add_option("--n", f.n, "number of particles");
  cmd->add_option("--t-final", f.t_final, "final time");
  cmd->add_option("--dt", f.dt, "time step");
  cmd->add_option("--scheme", f.scheme, "integrator")->check(CLI::IsMember({"rk4", "dopri"}));
}

Json overrides(const Flags& f) {
  Json o = Json::object();
  if (f.n) o["n"] = *f.n;
  if (f.form) o["form"] = *f.form;
  if (f.t_final) o["t_final"] = *f.t_final;
  if (f.dt) o["dt"] = *f.dt;
  if (f.scheme) o["scheme"] = *f.scheme;
  if (f.seed) {
    try {
      size_t pos = 0;
      unsigned long long s = std::stoull(*f.seed, &pos);
      if (pos != f.seed->size() || f.seed->front() == '-') throw std::invalid_argument("seed");
      o["seed"] = s;
    } catch (const std::exception&) {
      throw spinlab::InvalidInput("--seed must be an unsigned integer");
    }
  }
  if (f.tol) o["tol"] = *f.tol;
  if (f.trials) o["trials"] = *f.trials;
  return o;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw spinlab::InvalidInput("cannot write " + path);
  os << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin Calogero-Moser and Ruijsenaars-Schneider toolkit"};
  app.set_version_flag("--version", std::string(spinlab::app::kVersion));
  app.require_subcommand(1);
  Flags f;

  std::string system;
  auto* sim = app.add_subcommand("simulate", "integrate a spin CM or RS trajectory");
  sim->add_option("system", system, "cm or rs")->required()->check(CLI::IsMember({"cm", "rs"}));
  add_flow(sim, f);
  sim->add_option("--form", f.form, "real form of the spin")->check(CLI::IsMember({"compact", "normal"}));
  add_common(sim, f);

  auto* sol = app.add_subcommand("soliton", "evaluate an affine Toda soliton and its RS frame");
  add_common(sol, f);

  std::string suite;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(spinlab::app::suite_names()));
  add_flow(ver, f);
  ver->add_option("--tol", f.tol, "override every tolerance");
  ver->add_option("--trials", f.trials, "number of random trials");
  add_common(ver, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Json file = f.config.empty() ? Json::object() : spinlab::app::load_json_file(f.config);
    spinlab::app::Output out;
    if (sim->parsed()) {
      const std::string command = system == "cm" ? "simulate_cm" : "simulate_rs";
      Json cfg = spinlab::app::resolve(command, file, overrides(f));
      out = system == "cm" ? spinlab::app::simulate_cm(cfg) : spinlab::app::simulate_rs(cfg);
    } else if (sol->parsed()) {
      out = spinlab::app::soliton(spinlab::app::resolve("soliton", file, overrides(f)));
    } else {
      out = spinlab::app::verify(suite, spinlab::app::resolve("verify", file, overrides(f)));
    }
    if (!f.out.empty()) write_file(f.out, out.csv);
    const std::string text = spinlab::app::dump(out.report);
    if (f.report.empty())
      std::cout << text;
    else
      write_file(f.report, text);
    return out.exit_code;
  } catch (const spinlab::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const spinlab::NumericalBreakdown& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
