#include "nsns/config.hpp"

#include <iostream>
#include <json.hpp>
#include <stdexcept>

namespace nsns {

using nlohmann::json;

RunConfig parse_config(const std::string& json_text) {
  json j = json::parse(json_text);
  RunConfig c;
  c.problem = j.value("problem", c.problem);
  if (c.problem != "convergence" && c.problem != "cavity_steady" && c.problem != "cavity_unsteady" &&
      c.problem != "custom")
    throw std::invalid_argument("unknown problem '" + c.problem + "'");
  if (j.contains("mesh")) {
    const json& m = j.at("mesh");
    if (m.contains("n")) c.mesh_n = m.at("n").get<int>();
    if (m.contains("file")) c.mesh_file = m.at("file").get<std::string>();
  }
  c.nu = j.value("nu", c.nu);
  c.beta = j.value("beta", c.beta);
  c.gamma = j.value("gamma", c.gamma);
  c.re = j.value("re", c.re);
  c.dt = j.value("dt", c.dt);
  c.t_end = j.value("t_end", c.t_end);
  c.sigma = j.value("sigma", c.sigma);
  c.c_tilde = j.value("c_tilde", c.c_tilde);
  if (j.contains("levels")) c.levels = j.at("levels").get<std::vector<int>>();
  c.out_dir = j.value("out_dir", c.out_dir);
  c.snapshot_every = j.value("snapshot_every", c.snapshot_every);

  if (!(c.nu > 0.0)) throw std::invalid_argument("nu must be positive");
  if (!(c.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (c.re < 0.0) throw std::invalid_argument("re must be nonnegative");
  if (c.beta < 0.0) std::cerr << "nsns: warning: negative friction coefficient beta = " << c.beta << "\n";
  return c;
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["problem"] = c.problem;
  j["mesh"] = json::object();
  if (c.mesh_n > 0) j["mesh"]["n"] = c.mesh_n;
  if (!c.mesh_file.empty()) j["mesh"]["file"] = c.mesh_file;
  j["nu"] = c.nu;
  j["beta"] = c.beta;
  j["gamma"] = c.gamma;
  j["re"] = c.re;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["sigma"] = c.sigma;
  j["c_tilde"] = c.c_tilde;
  j["levels"] = c.levels;
  j["out_dir"] = c.out_dir;
  j["snapshot_every"] = c.snapshot_every;
  return j.dump(2) + "\n";
}

}  // namespace nsns
