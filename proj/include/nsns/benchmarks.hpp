#pragma once

#include "nsns/steady_solver.hpp"

namespace nsns {

/// Closed-form fields of a manufactured problem, with the forcing derived
/// from the momentum equation at viscosity `params.nu`.
struct ManufacturedCase {
  PhysicalParams params;
  VectorField velocity;
  MatrixField velocity_gradient;  // (i,j) = du_i/dx_j
  ScalarField pressure;
  VectorField forcing;
  BoundaryTagger tagger;
};

/// Square (-1,1)^2, slip on the bottom side, essential elsewhere; velocity
/// (2y(1-x^2), -2x(1-y^2)), pressure (2x-1)(2y-1).
ManufacturedCase square_slip_case(double nu, double beta, double gamma);

/// Slip data nu n^t D(u) tau + beta u.tau and u.n evaluated from the
/// manufactured fields.
SlipData manufactured_slip_data(const ManufacturedCase& mc);

SteadyProblem manufactured_problem(const ManufacturedCase& mc);

/// Lid-driven cavity on the unit square: ramped lid profile on y = 1
/// (Dirichlet), homogeneous slip with beta = 1, gamma = 10 elsewhere.
VectorField cavity_lid();
BoundaryTagger cavity_tagger();

struct ConvergenceRow {
  int level = 0;  // cells per side
  int dof = 0;
  int newton_iterations = 0;
  ErrorNorms errors;
};

/// Solves the square slip benchmark on uniformly refined structured meshes.
std::vector<ConvergenceRow> run_manufactured_convergence(const std::vector<int>& levels, const PhysicalParams& params,
                                                         double newton_tol = 1e-7);

}  // namespace nsns
