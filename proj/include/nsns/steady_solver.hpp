#pragma once

#include <Eigen/SparseLU>

#include "nsns/forms.hpp"

namespace nsns {

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residual_norms;  // post-update algebraic residuals
  bool converged = false;
};

/// Data of one steady solve. Null fields mean zero.
struct SteadyProblem {
  PhysicalParams params;
  VectorField forcing;
  VectorField dirichlet;
  SlipData slip;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse LU wrapper that reuses the symbolic factorization across solves
/// with an identical sparsity pattern (Newton iterations, parameter sweeps).
class DirectSolver {
 public:
  Eigen::VectorXd solve(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs);

 private:
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
};

SolutionState solve_stokes(const MixedSpace& space, const SteadyProblem& problem, DirectSolver* solver = nullptr);

/// Linearized problem at a fixed advecting field.
SolutionState solve_oseen(const MixedSpace& space, const SteadyProblem& problem, const Eigen::VectorXd& advecting,
                          DirectSolver* solver = nullptr);

std::pair<SolutionState, NewtonReport> solve_navier_stokes(const MixedSpace& space, const SteadyProblem& problem,
                                                           double tol = 1e-7, int max_iter = 25,
                                                           DirectSolver* solver = nullptr);

/// Algebraic residual of the nonlinear discrete problem at `state`, with
/// Dirichlet rows replaced by the boundary-condition mismatch.
Eigen::VectorXd nonlinear_residual(const MixedSpace& space, const SteadyProblem& problem, const SolutionState& state);

}  // namespace nsns
