#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smcg/model_core.hpp"

namespace smcg {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const SolverParams& p) {
  Json j;
  j["eps"] = p.eps;
  j["delta"] = p.delta;
  j["sigma"] = p.sigma;
  j["lambda_min"] = p.lambda_min;
  j["lambda_max"] = p.lambda_max;
  j["gamma"] = p.gamma;
  j["xi1"] = p.xi1;
  j["xi2"] = p.xi2;
  j["xi3"] = p.xi3;
  j["xi4"] = p.xi4;
  j["xi5"] = p.xi5;
  j["c1_quad"] = p.c1_quad;
  j["c2_quad"] = p.c2_quad;
  j["p"] = p.p;
  j["max_iter"] = p.max_iter;
  j["max_restart"] = p.max_restart;
  j["min_quad"] = p.min_quad;
  j["variant"] = std::string(to_string(p.variant));
  j["euclid_sigma_full_power"] = p.euclid_sigma_full_power;
  return j;
}

double read_real(const Json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

long read_int(const Json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<long>();
}

}  // namespace

void validate(const SolverParams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid solver parameters: ") + what);
  };
  require(p.eps > 0.0, "eps > 0");
  require(p.delta > 0.0 && p.delta < p.sigma && p.sigma < 1.0, "0 < delta < sigma < 1");
  require(p.lambda_min > 0.0 && p.lambda_min < p.lambda_max, "0 < lambda_min < lambda_max");
  require(p.gamma > 0.0, "gamma > 0");
  require(p.xi1 > 0.0 && p.xi2 > p.xi1, "0 < xi1 < xi2");
  require(p.xi3 >= 0.0 && p.xi3 <= 1.0, "0 <= xi3 <= 1");
  require(p.xi4 > 0.0 && p.xi5 > 0.0, "xi4, xi5 > 0");
  require(p.c1_quad > 0.0 && p.c2_quad > 0.0, "c1_quad, c2_quad > 0");
  require(p.p == 3 || p.p == 4, "p in {3, 4}");
  require(p.max_iter >= 0, "max_iter >= 0");
  require(p.max_restart > 0 && p.min_quad > 0, "max_restart, min_quad > 0");
}

std::string to_config_text(const SolverParams& params) { return to_json(params).dump(2); }

SolverParams apply_config(const SolverParams& base, std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  SolverParams p = base;
  for (const auto& [key, v] : j.items()) {
    if (key == "eps") p.eps = read_real(v, key);
    else if (key == "delta") p.delta = read_real(v, key);
    else if (key == "sigma") p.sigma = read_real(v, key);
    else if (key == "lambda_min") p.lambda_min = read_real(v, key);
    else if (key == "lambda_max") p.lambda_max = read_real(v, key);
    else if (key == "gamma") p.gamma = read_real(v, key);
    else if (key == "xi1") p.xi1 = read_real(v, key);
    else if (key == "xi2") p.xi2 = read_real(v, key);
    else if (key == "xi3") p.xi3 = read_real(v, key);
    else if (key == "xi4") p.xi4 = read_real(v, key);
    else if (key == "xi5") p.xi5 = read_real(v, key);
    else if (key == "c1_quad") p.c1_quad = read_real(v, key);
    else if (key == "c2_quad") p.c2_quad = read_real(v, key);
    else if (key == "p") p.p = static_cast<int>(read_int(v, key));
    else if (key == "max_iter") p.max_iter = read_int(v, key);
    else if (key == "max_restart") p.max_restart = static_cast<int>(read_int(v, key));
    else if (key == "min_quad") p.min_quad = static_cast<int>(read_int(v, key));
    else if (key == "variant") {
      if (!v.is_string()) throw ConfigError("config key 'variant' must be a string");
      p.variant = variant_from_string(v.get<std::string>());
    } else if (key == "euclid_sigma_full_power") {
      if (!v.is_boolean()) throw ConfigError("config key 'euclid_sigma_full_power' must be a boolean");
      p.euclid_sigma_full_power = v.get<bool>();
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  validate(p);
  return p;
}

SolverParams load_config_file(const SolverParams& base, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return apply_config(base, buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace smcg
