#pragma once

#include <string>
#include <vector>

#include "nsns/forms.hpp"
#include "nsns/vms_les.hpp"

namespace nsns {

struct RateRow {
  std::string mesh_label;
  int dof = 0;
  int newton_its = 0;
  double p_l2 = 0, u_h1 = 0, u_l2 = 0, slip = 0;
  double rate_p = 0, rate_h1 = 0, rate_l2 = 0;
  bool has_rates = false;
};

struct RateTable {
  std::vector<RateRow> rows;
};

/// Legacy ASCII VTK with vertex-sampled fields; P2 edge values are not
/// exported here (the raw state file keeps them).
void write_vtk(const std::string& path, const MixedSpace& space, const SolutionState& state,
               const std::string& title = "nsns fields");

/// Full-precision coefficient dump for restart/inspection.
void write_raw_state(const std::string& path, const SolutionState& state);
SolutionState read_raw_state(const std::string& path);

std::string format_rate_csv(const RateTable& table);
void write_rate_csv(const std::string& path, const RateTable& table);

std::string diagnostics_csv_header();
std::string format_diagnostics_row(const StepDiagnostics& d);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace nsns
