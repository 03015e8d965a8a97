#pragma once

#include "nsns/benchmarks.hpp"
#include "nsns/config.hpp"
#include "nsns/io.hpp"

namespace nsns {

RateTable make_rate_table(const std::vector<ConvergenceRow>& rows);

/// Convergence benchmark over config.levels; writes <out_dir>/convergence.csv.
RateTable run_convergence(const RunConfig& config);

struct CavityResult {
  bool steady = true;
  NewtonReport newton;                       // steady mode
  std::vector<StepDiagnostics> diagnostics;  // unsteady mode
  SolutionState state;
};

/// Steady Newton cavity (problem = cavity_steady) or VMS-LES time stepping
/// (cavity_unsteady). Writes fields and, when unsteady, diagnostics.csv.
CavityResult run_cavity(const RunConfig& config);

/// Steady solve on a mesh loaded from config.mesh_file with zero data;
/// nontrivial custom problems are served by the library API.
SolutionState run_custom(const RunConfig& config);

/// CLI entry point (subcommands convergence | cavity | run).
int run_cli(const std::vector<std::string>& args);

}  // namespace nsns
