#include "nsns/steady_solver.hpp"

#include <cmath>

#include "nsns/element_context.hpp"

namespace nsns {

namespace {

SolutionState split_state(const MixedSpace& space, const Eigen::VectorXd& x) {
  SolutionState s;
  s.velocity = x.head(space.n_velocity);
  s.pressure = x.segment(space.n_velocity, space.n_pressure);
  s.multiplier = x[space.n_total];
  return s;
}

Eigen::VectorXd join_state(const MixedSpace& space, const SolutionState& s) {
  Eigen::VectorXd x(space.n_total + 1);
  x.head(space.n_velocity) = s.velocity;
  x.segment(space.n_velocity, space.n_pressure) = s.pressure;
  x[space.n_total] = s.multiplier;
  return x;
}

Eigen::VectorXd assemble_rhs(const MixedSpace& space, const SteadyProblem& problem) {
  SystemBuilder b(space.n_total + 1);
  if (problem.forcing) assemble_load(space, problem.forcing, b);
  assemble_slip_data(space, problem.params, problem.slip, b);
  return b.rhs();
}

std::vector<std::pair<int, double>> boundary_values(const MixedSpace& space, const SteadyProblem& problem) {
  if (problem.dirichlet) return dirichlet_values(space, problem.dirichlet);
  std::vector<std::pair<int, double>> zeros;
  zeros.reserve(space.dirichlet_dofs.size());
  for (int d : space.dirichlet_dofs) zeros.emplace_back(d, 0.0);
  return zeros;
}

// c(u; u, phi) tested against every velocity basis function.
Eigen::VectorXd convection_vector(const MixedSpace& space, const Eigen::VectorXd& u) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_total + 1);
  ElementContext ctx(*space.mesh, space, triangle_quadrature(6));
  for (int t = 0; t < space.mesh->num_triangles(); ++t) {
    ctx.bind(t);
    const int* dofs = ctx.velocity_dofs();
    for (int q = 0; q < ctx.nq(); ++q) {
      double w = ctx.weight(q);
      Eigen::Vector2d uv = ctx.velocity_value(u, q);
      Eigen::Vector2d conv = ctx.velocity_gradient(u, q) * uv;
      for (int i = 0; i < 6; ++i) {
        double phi = ctx.p2_value(q, i);
        out[dofs[2 * i]] += conv[0] * phi * w;
        out[dofs[2 * i + 1]] += conv[1] * phi * w;
      }
    }
  }
  return out;
}

SolutionState solve_linear(const MixedSpace& space, const SteadyProblem& problem, const Eigen::VectorXd* advecting,
                           DirectSolver* solver) {
  problem.params.validate();
  SystemBuilder builder(space.n_total + 1);
  assemble_steady_operator(space, problem.params, advecting, false, builder);
  builder.rhs() += assemble_rhs(space, problem);
  SparseSystem sys = builder.build();
  apply_dirichlet(sys, boundary_values(space, problem));
  DirectSolver local;
  DirectSolver& lu = solver ? *solver : local;
  return split_state(space, lu.solve(sys.matrix, sys.rhs));
}

}  // namespace

Eigen::VectorXd DirectSolver::solve(const Eigen::SparseMatrix<double>& matrix, const Eigen::VectorXd& rhs) {
  if (!analyzed_) {
    lu_.analyzePattern(matrix);
    analyzed_ = true;
  }
  lu_.factorize(matrix);
  if (lu_.info() != Eigen::Success) throw SolverError("sparse LU factorization failed (singular matrix?)");
  Eigen::VectorXd x = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success) throw SolverError("sparse LU back-substitution failed");
  return x;
}

SolutionState solve_stokes(const MixedSpace& space, const SteadyProblem& problem, DirectSolver* solver) {
  return solve_linear(space, problem, nullptr, solver);
}

SolutionState solve_oseen(const MixedSpace& space, const SteadyProblem& problem, const Eigen::VectorXd& advecting,
                          DirectSolver* solver) {
  return solve_linear(space, problem, &advecting, solver);
}

Eigen::VectorXd nonlinear_residual(const MixedSpace& space, const SteadyProblem& problem, const SolutionState& state) {
  SystemBuilder builder(space.n_total + 1);
  assemble_steady_operator(space, problem.params, &state.velocity, false, builder);
  SparseSystem sys = builder.build();
  Eigen::VectorXd x = join_state(space, state);
  Eigen::VectorXd r = sys.matrix * x - assemble_rhs(space, problem);
  for (const auto& [dof, value] : boundary_values(space, problem)) r[dof] = x[dof] - value;
  return r;
}

std::pair<SolutionState, NewtonReport> solve_navier_stokes(const MixedSpace& space, const SteadyProblem& problem,
                                                           double tol, int max_iter, DirectSolver* solver) {
  problem.params.validate();
  NewtonReport report;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(space.n_total + 1);
  const Eigen::VectorXd rhs0 = assemble_rhs(space, problem);
  const auto bvals = boundary_values(space, problem);

  DirectSolver local;
  DirectSolver& lu = solver ? *solver : local;

  while (true) {
    SolutionState cur = split_state(space, x);
    SystemBuilder builder(space.n_total + 1);
    assemble_steady_operator(space, problem.params, &cur.velocity, true, builder);
    SparseSystem sys = builder.build();

    // J = L + c(u; du, v) + c(du; u, v), so J x - c(u; u, v) equals the
    // nonlinear residual L x + c(u; u, v).
    Eigen::VectorXd residual = sys.matrix * x - convection_vector(space, cur.velocity) - rhs0;
    for (const auto& [dof, value] : bvals) residual[dof] = x[dof] - value;

    if (report.iterations > 0) {
      double norm = residual.norm();
      report.residual_norms.push_back(norm);
      if (norm <= tol) {
        report.converged = true;
        return {cur, report};
      }
      if (!std::isfinite(norm) || report.iterations >= max_iter) return {cur, report};
    }

    std::vector<std::pair<int, double>> increments;
    increments.reserve(bvals.size());
    for (const auto& [dof, value] : bvals) increments.emplace_back(dof, value - x[dof]);
    sys.rhs = -residual;
    apply_dirichlet(sys, increments);
    x += lu.solve(sys.matrix, sys.rhs);
    ++report.iterations;
  }
}

}  // namespace nsns
