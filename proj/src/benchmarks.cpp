#include "nsns/benchmarks.hpp"

namespace nsns {

ManufacturedCase square_slip_case(double nu, double beta, double gamma) {
  ManufacturedCase mc;
  mc.params = {nu, beta, gamma};
  mc.velocity = [](Point2 p) {
    return Eigen::Vector2d(2.0 * p.y * (1.0 - p.x * p.x), -2.0 * p.x * (1.0 - p.y * p.y));
  };
  mc.velocity_gradient = [](Point2 p) {
    Eigen::Matrix2d g;
    g(0, 0) = -4.0 * p.x * p.y;
    g(0, 1) = 2.0 * (1.0 - p.x * p.x);
    g(1, 0) = -2.0 * (1.0 - p.y * p.y);
    g(1, 1) = 4.0 * p.x * p.y;
    return g;
  };
  mc.pressure = [](Point2 p) { return (2.0 * p.x - 1.0) * (2.0 * p.y - 1.0); };
  mc.forcing = [nu](Point2 p) {
    double x = p.x, y = p.y;
    double fx = 4.0 * nu * y - 8.0 * x * y * y * (1.0 - x * x) - 4.0 * x * (1.0 - x * x) * (1.0 - y * y) +
                2.0 * (2.0 * y - 1.0);
    double fy = -4.0 * nu * x - 4.0 * y * (1.0 - x * x) * (1.0 - y * y) - 8.0 * x * x * y * (1.0 - y * y) +
                2.0 * (2.0 * x - 1.0);
    return Eigen::Vector2d(fx, fy);
  };
  mc.tagger = [](Point2 mid) { return mid.y < -1.0 + 1e-9 ? BoundaryTag::Navier : BoundaryTag::Dirichlet; };
  return mc;
}

SlipData manufactured_slip_data(const ManufacturedCase& mc) {
  SlipData data;
  const double nu = mc.params.nu;
  const double beta = mc.params.beta;
  auto u = mc.velocity;
  auto gu = mc.velocity_gradient;
  data.g_tau = [nu, beta, u, gu](Point2 x, Eigen::Vector2d n, Eigen::Vector2d tau) {
    Eigen::Matrix2d g = gu(x);
    Eigen::Matrix2d D = g + g.transpose();
    return nu * n.dot(D * tau) + beta * u(x).dot(tau);
  };
  data.g_n = [u](Point2 x, Eigen::Vector2d n) { return u(x).dot(n); };
  return data;
}

SteadyProblem manufactured_problem(const ManufacturedCase& mc) {
  SteadyProblem p;
  p.params = mc.params;
  p.forcing = mc.forcing;
  p.dirichlet = mc.velocity;
  p.slip = manufactured_slip_data(mc);
  return p;
}

VectorField cavity_lid() {
  return [](Point2 p) {
    double ux;
    if (p.x <= 0.1)
      ux = 10.0 * p.x;
    else if (p.x <= 0.9)
      ux = 1.0;
    else
      ux = 10.0 - 10.0 * p.x;
    return Eigen::Vector2d(ux, 0.0);
  };
}

BoundaryTagger cavity_tagger() {
  return [](Point2 mid) { return mid.y > 1.0 - 1e-9 ? BoundaryTag::Dirichlet : BoundaryTag::Navier; };
}

std::vector<ConvergenceRow> run_manufactured_convergence(const std::vector<int>& levels, const PhysicalParams& params,
                                                         double newton_tol) {
  for (size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1]) throw std::invalid_argument("levels must be increasing");

  ManufacturedCase mc = square_slip_case(params.nu, params.beta, params.gamma);
  SteadyProblem problem = manufactured_problem(mc);

  std::vector<ConvergenceRow> rows;
  for (int n : levels) {
    Mesh mesh = generate_structured_square(n, {-1.0, -1.0}, {1.0, 1.0}, mc.tagger);
    MixedSpace space = build_taylor_hood(mesh);
    auto [state, report] = solve_navier_stokes(space, problem, newton_tol);
    if (!report.converged)
      throw SolverError("Newton failed to converge on the " + std::to_string(n) + "x" + std::to_string(n) + " mesh");
    ConvergenceRow row;
    row.level = n;
    row.dof = space.n_total;
    row.newton_iterations = report.iterations;
    row.errors = error_norms(space, mc.velocity, mc.velocity_gradient, mc.pressure, state);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nsns
