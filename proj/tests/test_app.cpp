#include <doctest.h>

#include <sstream>

#include "spinlab/app.hpp"
#include "spinlab/checks.hpp"
#include "spinlab/errors.hpp"

using namespace spinlab;
using namespace spinlab::app;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("app") {

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(format_number(1e-20) == "9.9999999999999995e-21");
  CHECK(format_number(3.0) == "3");
  CHECK(std::stod(format_number(M_PI)) == M_PI);
}

TEST_CASE("csv writer") {
  CsvWriter w({"a", "b"});
  w.row({1.0, 0.5});
  CHECK(w.str() == "a,b\n1,0.5\n");
  CHECK_THROWS(w.row({1.0}));
}

TEST_CASE("seeds") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
}

TEST_CASE("configuration resolution") {
  for (const char* c : {"simulate_cm", "simulate_rs", "soliton", "verify"}) CHECK(defaults(c).contains("seed"));
  Json cfg = resolve("simulate_cm", Json{{"n", 4}}, Json{{"dt", 0.01}});
  CHECK(cfg["n"] == 4);
  CHECK(cfg["dt"] == 0.01);
  CHECK(cfg["form"] == "compact");
  Json over = resolve("simulate_cm", Json{{"n", 4}}, Json{{"n", 2}});
  CHECK(over["n"] == 2);
  CHECK_THROWS_AS(resolve("simulate_cm", Json{{"nn", 4}}, Json::object()), InvalidInput);
  CHECK_THROWS_AS(resolve("simulate_rs", Json::object(), Json{{"form", "compact"}}), InvalidInput);
  CHECK_THROWS_AS(resolve("plot", Json::object(), Json::object()), InvalidInput);
  CHECK_THROWS_AS(simulate_cm(resolve("simulate_cm", Json{{"form", "diagonal"}}, Json::object())), InvalidInput);
  CHECK_THROWS_AS(simulate_cm(resolve("simulate_cm", Json{{"n", "three"}}, Json::object())), InvalidInput);
}

TEST_CASE("free CM run keeps the energy column constant") {
  Json init{{"q", {1.0, -0.5}}, {"p", {0.3, -0.2}}, {"xi", Json{{"re", {{0.0, 0.0}, {0.0, 0.0}}}}}};
  Json cfg = resolve("simulate_cm", Json{{"n", 2}, {"t_final", 1.0}, {"dt", 0.01}, {"initial_state", init}},
                     Json::object());
  Output out = simulate_cm(cfg);
  auto rows = lines(out.csv);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0].rfind("t,q_1,q_2,p_1,p_2,re_xi_1_2,im_xi_1_2,H,J_norm", 0) == 0);
  auto field = [](const std::string& row, int k) {
    std::istringstream is(row);
    std::string cell;
    for (int i = 0; i <= k; ++i) std::getline(is, cell, ',');
    return cell;
  };
  for (size_t r = 2; r < rows.size(); ++r) CHECK(field(rows[r], 7) == field(rows[1], 7));
  CHECK(out.report["config"] == cfg);
  CHECK(out.exit_code == 0);
}

TEST_CASE("simulate outputs are deterministic") {
  Json cfg = resolve("simulate_cm", Json{{"t_final", 1.0}}, Json::object());
  Output a = simulate_cm(cfg), b = simulate_cm(cfg);
  CHECK(a.csv == b.csv);
  CHECK(dump(a.report) == dump(b.report));
  CHECK(a.report["results"]["energy_relative_drift_max"].get<double>() < 1e-8);

  Json rcfg = resolve("simulate_rs", Json{{"t_final", 1.0}}, Json::object());
  Output c = simulate_rs(rcfg), d = simulate_rs(rcfg);
  CHECK(c.csv == d.csv);
  CHECK(c.report["results"]["eigenvalue_drift_max"].get<double>() < 1e-8);
  Json other = resolve("simulate_rs", Json{{"t_final", 1.0}, {"seed", 2}}, Json::object());
  CHECK(simulate_rs(other).csv != c.csv);
}

TEST_CASE("RS run with diagonal g") {
  Json init{{"q", {1.0, 0.0, -1.0}}, {"g", Json{{"re", {{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}}}}}};
  Json cfg = resolve("simulate_rs", Json{{"t_final", 0.5}, {"dt", 0.01}, {"initial_state", init}}, Json::object());
  Output out = simulate_rs(cfg);
  auto rows = lines(out.csv);
  CHECK(rows[0] == "t,q_1,q_2,q_3,re_g_1_1,re_g_1_2,im_g_1_2,re_g_1_3,im_g_1_3,re_g_2_2,re_g_2_3,im_g_2_3,re_g_3_3,"
                   "eig_1,eig_2,eig_3,trace_g");
  auto tail = [](const std::string& row) {
    size_t pos = row.size();
    for (int k = 0; k < 4; ++k) pos = row.rfind(',', pos - 1);
    return row.substr(pos);
  };
  for (size_t r = 2; r < rows.size(); ++r) CHECK(tail(rows[r]) == tail(rows[1]));
  CHECK(tail(rows[1]) == ",1,2,3,6");
}

TEST_CASE("soliton command") {
  Json cfg = resolve("soliton", Json{{"grid", Json{{"x_plus", {-1.0, 1.0}}, {"x_minus", {-1.0, 1.0}}, {"points", {6, 6}}}}},
                     Json::object());
  Output out = soliton(cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.report["results"]["pde_pass"] == true);
  CHECK(lines(out.csv).size() == 37);

  Json bad = defaults("soliton");
  bad["soliton"]["theta"] = Json::array({1.0});
  CHECK_THROWS_AS(soliton(resolve("soliton", bad, Json::object())), InvalidInput);
}

TEST_CASE("verify reports") {
  Json cfg = resolve("verify", Json{{"trials", 3}}, Json::object());
  Output a = verify("jacobi", cfg);
  CHECK(a.exit_code == 0);
  CHECK(a.report["pass"] == true);
  CHECK(a.report["config"] == cfg);
  CHECK(dump(a.report) == dump(verify("jacobi", cfg).report));

  Json strict = resolve("verify", Json{{"trials", 3}}, Json{{"tol", 1e-20}});
  Output b = verify("jacobi", strict);
  CHECK(b.exit_code == 1);
  CHECK(b.report["pass"] == false);

  Output c = verify("counts", cfg);
  CHECK(c.exit_code == 0);
  CHECK(c.report["checks"][0]["details"]["expected_rank"] == 4);
  CHECK(c.report["checks"][1]["details"]["expected_rank"] == 4);

  CHECK_THROWS_AS(verify("everything", cfg), InvalidInput);
  CHECK(suite_names().back() == "all");
}

TEST_CASE("check results serialize") {
  CheckResult r;
  r.name = "x";
  r.claim = "y";
  r.trials = 2;
  r.max_residual = 0.5;
  r.tolerance = 1.0;
  r.pass = true;
  Json j = r.to_json();
  CHECK(j["name"] == "x");
  CHECK(j["pass"] == true);
  CHECK_FALSE(j.contains("details"));
}

}
