#include <cmath>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "spinlab/errors.hpp"

namespace spinlab::app {

Json defaults(const std::string& command) {
  Json j;
  if (command == "simulate_cm") {
    j["n"] = 3;
    j["form"] = "compact";
    j["t_final"] = 10.0;
    j["dt"] = 1e-3;
    j["scheme"] = "rk4";
    j["seed"] = 1;
    j["output_every"] = 10;
    j["initial_state"] = nullptr;
  } else if (command == "simulate_rs") {
    j["n"] = 3;
    j["t_final"] = 10.0;
    j["dt"] = 1e-3;
    j["scheme"] = "rk4";
    j["seed"] = 1;
    j["output_every"] = 10;
    j["initial_state"] = nullptr;
  } else if (command == "soliton") {
    j["seed"] = 1;
    j["soliton"] = Json{{"n", 1},
                        {"N", 1},
                        {"m", 1.0},
                        {"beta", 1.0},
                        {"theta", Json::array({M_PI})},
                        {"eta", Json::array({0.3})},
                        {"V0", Json{{"re", Json::array({Json::array({0.0})})},
                                    {"im", Json::array({Json::array({1.0})})}}}};
    j["grid"] = Json{{"x_plus", Json::array({-2.0, 2.0})},
                     {"x_minus", Json::array({-2.0, 2.0})},
                     {"points", Json::array({50, 50})}};
    j["fd_step"] = 1e-3;
    j["rs_fd_step"] = 1e-4;
    j["pde_tol"] = 1e-5;
    j["rs_tol"] = 1e-6;
  } else if (command == "verify") {
    j["n"] = 3;
    j["seed"] = 1;
    j["trials"] = nullptr;
    j["tol"] = nullptr;
    j["t_final"] = 10.0;
    j["dt"] = 1e-3;
    j["scheme"] = "rk4";
    j["expected_c2"] = 0.0625;
  } else {
    throw InvalidInput("unknown command: " + command);
  }
  return j;
}

Json resolve(const std::string& command, const Json& file_config, const Json& overrides) {
  Json cfg = defaults(command);
  for (const Json* layer : {&file_config, &overrides}) {
    if (layer->is_null()) continue;
    if (!layer->is_object()) throw InvalidInput("configuration must be a JSON object");
    for (auto it = layer->begin(); it != layer->end(); ++it) {
      if (!cfg.contains(it.key())) throw InvalidInput("unknown configuration key: " + it.key());
      cfg[it.key()] = it.value();
    }
  }
  return cfg;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw InvalidInput("config file is not valid JSON: " + std::string(e.what()));
  }
}

double get_double(const Json& cfg, const std::string& key) {
  if (!cfg.contains(key) || !cfg.at(key).is_number()) throw InvalidInput("config key '" + key + "' must be a number");
  double v = cfg.at(key).get<double>();
  if (!std::isfinite(v)) throw InvalidInput("config key '" + key + "' must be finite");
  return v;
}

int get_int(const Json& cfg, const std::string& key) {
  if (!cfg.contains(key) || !cfg.at(key).is_number_integer())
    throw InvalidInput("config key '" + key + "' must be an integer");
  return cfg.at(key).get<int>();
}

std::uint64_t get_seed(const Json& cfg) {
  if (!cfg.contains("seed") || !cfg.at("seed").is_number_integer() || cfg.at("seed").get<long long>() < 0)
    throw InvalidInput("config key 'seed' must be a non-negative integer");
  return cfg.at("seed").get<std::uint64_t>();
}

std::string get_string(const Json& cfg, const std::string& key) {
  if (!cfg.contains(key) || !cfg.at(key).is_string()) throw InvalidInput("config key '" + key + "' must be a string");
  return cfg.at(key).get<std::string>();
}

RVec parse_real_vector(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidInput(what + " must be an array of numbers");
  RVec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidInput(what + " must be an array of numbers");
    v(i) = j[i].get<double>();
  }
  return v;
}

Mat parse_complex_matrix(const Json& j, const std::string& what) {
  if (!j.is_object() || (!j.contains("re") && !j.contains("im")))
    throw InvalidInput(what + " must be an object with 're' and/or 'im' rows");
  auto part = [&](const char* key, Eigen::Index& rows, Eigen::Index& cols) -> Eigen::MatrixXd {
    if (!j.contains(key)) return Eigen::MatrixXd();
    const Json& m = j.at(key);
    if (!m.is_array() || m.empty()) throw InvalidInput(what + "." + key + " must be a non-empty array of rows");
    rows = Eigen::Index(m.size());
    cols = Eigen::Index(m[0].is_array() ? m[0].size() : 0);
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      RVec row = parse_real_vector(m[size_t(r)], what + "." + key);
      if (row.size() != cols) throw InvalidInput(what + "." + key + " rows must have equal length");
      out.row(r) = row.transpose();
    }
    return out;
  };
  Eigen::Index rr = -1, rc = -1, ir = -1, ic = -1;
  Eigen::MatrixXd re = part("re", rr, rc);
  Eigen::MatrixXd im = part("im", ir, ic);
  if (re.size() == 0) re = Eigen::MatrixXd::Zero(ir, ic);
  if (im.size() == 0) im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (re.rows() != im.rows() || re.cols() != im.cols()) throw InvalidInput(what + ": re and im shapes differ");
  Mat m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

Json complex_matrix_json(const Mat& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json a = Json::array(), b = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      a.push_back(m(r, c).real());
      b.push_back(m(r, c).imag());
    }
    re.push_back(a);
    im.push_back(b);
  }
  return Json{{"re", re}, {"im", im}};
}

}  // namespace spinlab::app
