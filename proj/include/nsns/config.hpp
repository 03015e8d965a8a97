#pragma once

#include <string>
#include <vector>

namespace nsns {

/// Run description parsed from a JSON config. `re` > 0 overrides `nu` via
/// nu = 1/re for the cavity problems.
struct RunConfig {
  std::string problem = "convergence";  // convergence | cavity_steady | cavity_unsteady | custom
  int mesh_n = 0;
  std::string mesh_file;
  double nu = 1.0;
  double beta = 0.0;
  double gamma = 10.0;
  double re = 0.0;
  double dt = 0.0;
  double t_end = 0.0;
  int sigma = 2;
  int c_tilde = 0;
  std::vector<int> levels;
  std::string out_dir = ".";
  int snapshot_every = 0;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& config);

}  // namespace nsns
