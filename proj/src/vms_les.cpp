#include "nsns/vms_les.hpp"

#include <cmath>

#include "nsns/element_context.hpp"

namespace nsns {

namespace {

constexpr int kStabVolumeDegree = 8;
constexpr int kEdgeDegree = 5;

struct StepFields {
  int sigma = 1;
  double alpha = 1.0;
  Eigen::VectorXd u_ext, p_ext, u_bdf;
};

StepFields step_fields(const TimeConfig& tc, const HistoryState& hist) {
  StepFields f;
  f.sigma = effective_sigma(tc, hist);
  f.alpha = bdf_alpha(f.sigma);
  f.u_ext = ext_combination(hist.u0, hist.u1, f.sigma);
  f.p_ext = ext_combination(hist.p0, hist.p1, f.sigma);
  f.u_bdf = bdf_combination(hist.u0, hist.u1, f.sigma);
  return f;
}

double sm_value(const StabilizationOverride& stab, const Eigen::Vector2d& u_ext, const Eigen::Matrix2d& G,
                const Eigen::Vector2d& g, double nu, double dt, int sigma) {
  if (stab.mode == StabilizationOverride::Mode::Constant) return stab.s_m;
  return stabilization_params(u_ext, G, g, nu, dt, sigma).first;
}

double sc_value(const StabilizationOverride& stab, const Eigen::Vector2d& u_ext, const Eigen::Matrix2d& G,
                const Eigen::Vector2d& g, double nu, double dt, int sigma) {
  if (stab.mode == StabilizationOverride::Mode::Constant) return stab.s_c;
  return stabilization_params(u_ext, G, g, nu, dt, sigma).second;
}

}  // namespace

void TimeConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("time step dt must be positive");
  if (t_end < dt) throw std::invalid_argument("t_end must be at least one step");
  if (sigma != 1 && sigma != 2) throw std::invalid_argument("BDF order sigma must be 1 or 2");
  if (c_tilde != 0 && c_tilde != 1) throw std::invalid_argument("c_tilde must be 0 or 1");
}

int effective_sigma(const TimeConfig& tc, const HistoryState& hist) {
  return (tc.sigma == 2 && hist.valid >= 2) ? 2 : 1;
}

double bdf_alpha(int sigma) { return sigma == 1 ? 1.0 : 1.5; }

double residual_constant(int degree) { return 60.0 * std::pow(2.0, degree - 2); }

Eigen::VectorXd ext_combination(const Eigen::VectorXd& v0, const Eigen::VectorXd& v1, int sigma) {
  if (sigma == 1) return v0;
  return 2.0 * v0 - v1;
}

Eigen::VectorXd bdf_combination(const Eigen::VectorXd& v0, const Eigen::VectorXd& v1, int sigma) {
  if (sigma == 1) return v0;
  return 2.0 * v0 - 0.5 * v1;
}

std::pair<Eigen::Matrix2d, Eigen::Vector2d> metric_tensor(const AffineMap& map) {
  Eigen::Matrix2d ji;
  ji << map.inverse_jacobian[0], map.inverse_jacobian[1], map.inverse_jacobian[2], map.inverse_jacobian[3];
  Eigen::Matrix2d G = ji.transpose() * ji;
  Eigen::Vector2d g = ji.colwise().sum().transpose();
  return {G, g};
}

std::pair<double, double> stabilization_params(const Eigen::Vector2d& u, const Eigen::Matrix2d& G,
                                               const Eigen::Vector2d& g, double nu, double dt, int sigma) {
  const double cr = residual_constant(2);
  double s2 = static_cast<double>(sigma) * sigma / (dt * dt);
  double ugu = u.dot(G * u);
  double gg = (G.array() * G.array()).sum();
  double sm = 1.0 / std::sqrt(s2 + ugu + cr * nu * nu * gg);
  double sc = 1.0 / (sm * g.dot(g));
  return {sm, sc};
}

void assemble_vms_step(const MixedSpace& space, const UnsteadyProblem& problem, const TimeConfig& tc,
                       const HistoryState& hist, double t_new, unsigned terms, const StabilizationOverride& stab,
                       SystemBuilder& builder) {
  const StepFields sf = step_fields(tc, hist);
  const double inv_dt = 1.0 / tc.dt;
  const int p_off = space.n_velocity;
  const double nu = problem.params.nu;
  const double c_tilde = static_cast<double>(tc.c_tilde);

  auto f_at = [&](Point2 x) { return problem.forcing ? problem.forcing(x, t_new) : Eigen::Vector2d::Zero().eval(); };

  if (terms & kTermGalerkin) {
    assemble_velocity_mass(space, sf.alpha * inv_dt, builder);
    assemble_viscous(space, nu, builder);
    assemble_convection(space, sf.u_ext, false, builder);
    assemble_nitsche(space, problem.params, NitscheTerm::TangentialFriction, 1.0, builder);
    assemble_nitsche(space, problem.params, NitscheTerm::Penalty, 1.0, builder);
    assemble_nitsche(space, problem.params, NitscheTerm::Consistency, -1.0, builder);
    assemble_nitsche(space, problem.params, NitscheTerm::Adjoint, -1.0, builder);
    assemble_divergence(space, builder);
    assemble_nitsche(space, problem.params, NitscheTerm::PressureNormal, 1.0, builder);
    assemble_mean_zero_row(space, builder);
    assemble_load(space, [&](Point2 x) { return f_at(x); }, builder);
    assemble_slip_data(space, problem.params, problem.slip, builder);
    // BDF history term (v, u^{n,BDFs}) / dt
    ElementContext ctx(*space.mesh, space, triangle_quadrature(6));
    for (int t = 0; t < space.mesh->num_triangles(); ++t) {
      ctx.bind(t);
      const int* dofs = ctx.velocity_dofs();
      for (int q = 0; q < ctx.nq(); ++q) {
        double w = ctx.weight(q);
        Eigen::Vector2d ub = ctx.velocity_value(sf.u_bdf, q);
        for (int i = 0; i < 6; ++i) {
          double phi = ctx.p2_value(q, i);
          builder.rhs()[dofs[2 * i]] += phi * ub[0] * inv_dt * w;
          builder.rhs()[dofs[2 * i + 1]] += phi * ub[1] * inv_dt * w;
        }
      }
    }
  }

  const bool stab_zero = stab.mode == StabilizationOverride::Mode::Zero;
  const bool want_supg = (terms & kTermSupg) && !stab_zero;
  const bool want_vms = (terms & kTermVms) && !stab_zero;
  const bool want_les = (terms & kTermLes) && !stab_zero;

  if (want_supg || want_vms || want_les) {
    ElementContext ctx(*space.mesh, space, triangle_quadrature(kStabVolumeDegree));
    for (int t = 0; t < space.mesh->num_triangles(); ++t) {
      ctx.bind(t);
      auto [G, g] = metric_tensor(ctx.map());
      const int* vdofs = ctx.velocity_dofs();
      const int* pdofs = ctx.pressure_dofs();
      for (int q = 0; q < ctx.nq(); ++q) {
        const double w = ctx.weight(q);
        const Eigen::Vector2d uext = ctx.velocity_value(sf.u_ext, q);
        const double sm = sm_value(stab, uext, G, g, nu, tc.dt, sf.sigma);
        const double sc = sc_value(stab, uext, G, g, nu, tc.dt, sf.sigma);
        const Eigen::Vector2d d = ctx.velocity_value(sf.u_bdf, q) * inv_dt + f_at(ctx.point(q));

        // Trial-side scalar operator L_j = alpha/dt phi_j + u_ext.grad phi_j - nu lap phi_j,
        // entering (r_M)_c for the trial function phi_j e_c.
        double Lj[6];
        for (int j = 0; j < 6; ++j) {
          const auto& gj = ctx.p2_grad(q, j);
          Lj[j] = sf.alpha * inv_dt * ctx.p2_value(q, j) + uext[0] * gj[0] + uext[1] * gj[1] - nu * ctx.p2_laplacian(j);
        }

        // Frozen left factor of the LES dyad.
        Eigen::Vector2d r_ext = Eigen::Vector2d::Zero();
        if (want_les) {
          Eigen::Vector2d a = sf.alpha * inv_dt * uext;
          Eigen::Matrix2d gext = ctx.velocity_gradient(sf.u_ext, q);
          r_ext = a + gext * uext + ctx.pressure_gradient(sf.p_ext, q) - nu * ctx.velocity_laplacian(sf.u_ext) - d;
        }

        // Row-side weight vectors paired against S_M r_M: accumulate
        // matrix and data parts for each velocity row (i,c).
        auto pair_with_rm = [&](int row, const Eigen::Vector2d& weight_vec, double sign) {
          for (int j = 0; j < 6; ++j) {
            for (int dcomp = 0; dcomp < 2; ++dcomp)
              builder.add(row, vdofs[2 * j + dcomp], sign * weight_vec[dcomp] * sm * Lj[j] * w);
          }
          for (int j = 0; j < 3; ++j) {
            const auto& gpj = ctx.p1_grad(q, j);
            builder.add(row, p_off + pdofs[j], sign * sm * (weight_vec[0] * gpj[0] + weight_vec[1] * gpj[1]) * w);
          }
          builder.rhs()[row] += sign * sm * weight_vec.dot(d) * w;
        };

        for (int i = 0; i < 6; ++i) {
          const auto& gi = ctx.p2_grad(q, i);
          const double adv_i = uext[0] * gi[0] + uext[1] * gi[1];
          for (int c = 0; c < 2; ++c) {
            const int row = vdofs[2 * i + c];
            if (want_supg) {
              // (u_ext.grad v, S_M r_M): weight (adv_i) e_c
              Eigen::Vector2d wv = Eigen::Vector2d::Zero();
              wv[c] = adv_i;
              pair_with_rm(row, wv, 1.0);
              // grad-div: (div v, S_C div u)
              for (int j = 0; j < 6; ++j) {
                const auto& gj = ctx.p2_grad(q, j);
                for (int dcomp = 0; dcomp < 2; ++dcomp)
                  builder.add(row, vdofs[2 * j + dcomp], sc * gi[c] * gj[dcomp] * w);
              }
            }
            if (want_vms) {
              // (u_ext.(grad v)^T, S_M r_M): weight u_ext[c] * grad(phi_i)
              pair_with_rm(row, (uext[c] * Eigen::Vector2d(gi[0], gi[1])).eval(), 1.0);
            }
            if (want_les) {
              // -(grad v, S_M r_ext (x) S_M r_M): weight -S_M r_ext[c] grad(phi_i)
              pair_with_rm(row, (sm * r_ext[c] * Eigen::Vector2d(gi[0], gi[1])).eval(), -1.0);
            }
          }
        }
        if (want_supg && c_tilde != 0.0) {
          // (-C~ grad q, S_M r_M)
          for (int i = 0; i < 3; ++i) {
            const auto& gpi = ctx.p1_grad(q, i);
            pair_with_rm(p_off + pdofs[i], (-c_tilde * Eigen::Vector2d(gpi[0], gpi[1])).eval(), 1.0);
          }
        }
      }
    }
  }

  if (want_vms) {
    // Boundary contributions on the Navier edges:
    //   -int_E S_C r_C (n.v)  and  -int_E q (n . S_M r_M)
    EdgeContext ctx(*space.mesh, space, edge_quadrature(kEdgeDegree));
    for (int e : space.navier_edges) {
      ctx.bind(e);
      auto [G, g] = metric_tensor(affine_map(*space.mesh, ctx.owner()));
      const int* vdofs = ctx.velocity_dofs();
      const int* pdofs = ctx.pressure_dofs();
      const Eigen::Vector2d n = ctx.normal();
      for (int q = 0; q < ctx.nq(); ++q) {
        const double w = ctx.weight(q);
        const Eigen::Vector2d uext = ctx.velocity_value(sf.u_ext, q);
        const double sm = sm_value(stab, uext, G, g, nu, tc.dt, sf.sigma);
        const double sc = sc_value(stab, uext, G, g, nu, tc.dt, sf.sigma);
        const Eigen::Vector2d d = ctx.velocity_value(sf.u_bdf, q) * inv_dt + f_at(ctx.point(q));

        for (int i = 0; i < 6; ++i) {
          const double phi_i = ctx.p2_value(q, i);
          for (int c = 0; c < 2; ++c) {
            for (int j = 0; j < 6; ++j) {
              const auto& gj = ctx.p2_grad(q, j);
              for (int dcomp = 0; dcomp < 2; ++dcomp)
                builder.add(vdofs[2 * i + c], vdofs[2 * j + dcomp], -sc * phi_i * n[c] * gj[dcomp] * w);
            }
          }
        }
        for (int i = 0; i < 3; ++i) {
          const double psi_i = ctx.p1_value(q, i);
          for (int j = 0; j < 6; ++j) {
            const auto& gj = ctx.p2_grad(q, j);
            double Lj = sf.alpha * inv_dt * ctx.p2_value(q, j) + uext[0] * gj[0] + uext[1] * gj[1] -
                        nu * ctx.p2_laplacian(j);
            for (int dcomp = 0; dcomp < 2; ++dcomp)
              builder.add(p_off + pdofs[i], vdofs[2 * j + dcomp], -psi_i * sm * n[dcomp] * Lj * w);
          }
          for (int j = 0; j < 3; ++j) {
            const auto& gpj = ctx.p1_grad(j);
            builder.add(p_off + pdofs[i], p_off + pdofs[j], -psi_i * sm * (n[0] * gpj[0] + n[1] * gpj[1]) * w);
          }
          builder.rhs()[p_off + pdofs[i]] += -psi_i * sm * n.dot(d) * w;
        }
      }
    }
  }
}

std::vector<StrongResidual> strong_residuals(const MixedSpace& space, const UnsteadyProblem& problem,
                                             const TimeConfig& tc, const HistoryState& hist,
                                             const Eigen::VectorXd& u_new, const Eigen::VectorXd& p_new, double t_new,
                                             int element) {
  const StepFields sf = step_fields(tc, hist);
  const double inv_dt = 1.0 / tc.dt;
  ElementContext ctx(*space.mesh, space, triangle_quadrature(kStabVolumeDegree));
  ctx.bind(element);
  std::vector<StrongResidual> out(ctx.nq());
  for (int q = 0; q < ctx.nq(); ++q) {
    Eigen::Vector2d uext = ctx.velocity_value(sf.u_ext, q);
    Eigen::Vector2d f =
        problem.forcing ? problem.forcing(ctx.point(q), t_new) : Eigen::Vector2d::Zero().eval();
    Eigen::Matrix2d gu = ctx.velocity_gradient(u_new, q);
    out[q].momentum = sf.alpha * inv_dt * ctx.velocity_value(u_new, q) + gu * uext +
                      ctx.pressure_gradient(p_new, q) - problem.params.nu * ctx.velocity_laplacian(u_new) -
                      ctx.velocity_value(sf.u_bdf, q) * inv_dt - f;
    out[q].continuity = gu(0, 0) + gu(1, 1);
  }
  return out;
}

VmsStepper::VmsStepper(const MixedSpace& space, const UnsteadyProblem& problem, const TimeConfig& tc,
                       StabilizationOverride stab)
    : space_(&space), problem_(problem), tc_(tc), stab_(stab) {
  tc_.validate();
  problem_.params.validate();
  history_.u0 = Eigen::VectorXd::Zero(space.n_velocity);
  history_.p0 = Eigen::VectorXd::Zero(space.n_pressure);
  history_.u1 = Eigen::VectorXd::Zero(space.n_velocity);
  history_.p1 = Eigen::VectorXd::Zero(space.n_pressure);
  history_.valid = 1;
  state_.velocity = history_.u0;
  state_.pressure = history_.p0;
}

void VmsStepper::set_initial(const SolutionState& state) {
  history_.u0 = state.velocity;
  history_.p0 = state.pressure;
  history_.valid = 1;
  state_ = state;
  step_ = 0;
}

const SolutionState& VmsStepper::advance() {
  const double t_new = (step_ + 1) * tc_.dt;
  SystemBuilder builder(space_->n_total + 1);
  assemble_vms_step(*space_, problem_, tc_, history_, t_new, kTermAll, stab_, builder);
  SparseSystem sys = builder.build();

  std::vector<std::pair<int, double>> bvals;
  bvals.reserve(space_->dirichlet_dofs.size());
  if (problem_.dirichlet) {
    for (int dof : space_->dirichlet_dofs) {
      Eigen::Vector2d v = problem_.dirichlet(space_->velocity_nodes[dof / 2], t_new);
      bvals.emplace_back(dof, v[dof % 2]);
    }
  } else {
    for (int dof : space_->dirichlet_dofs) bvals.emplace_back(dof, 0.0);
  }
  apply_dirichlet(sys, bvals);

  Eigen::VectorXd x = solver_.solve(sys.matrix, sys.rhs);
  if (!x.allFinite())
    throw SolverError("non-finite solution at step " + std::to_string(step_ + 1) + " (t = " + std::to_string(t_new) + ")");

  history_.u1 = history_.u0;
  history_.p1 = history_.p0;
  history_.u0 = x.head(space_->n_velocity);
  history_.p0 = x.segment(space_->n_velocity, space_->n_pressure);
  history_.valid = std::min(history_.valid + 1, 2);
  state_.velocity = history_.u0;
  state_.pressure = history_.p0;
  state_.multiplier = x[space_->n_total];
  ++step_;
  return state_;
}

UnsteadyResult run_unsteady(const MixedSpace& space, const UnsteadyProblem& problem, const TimeConfig& tc,
                            const std::function<void(const StepDiagnostics&, const SolutionState&)>& on_step,
                            StabilizationOverride stab) {
  VmsStepper stepper(space, problem, tc, stab);
  const int steps = static_cast<int>(std::llround(tc.t_end / tc.dt));
  UnsteadyResult result;
  result.diagnostics.reserve(steps);
  for (int s = 0; s < steps; ++s) {
    const SolutionState& st = stepper.advance();
    StepDiagnostics diag;
    diag.step = s + 1;
    diag.time = stepper.time();
    diag.kinetic_energy = kinetic_energy(space, st.velocity);
    diag.slip_norm = slip_norm(space, st.velocity);
    result.diagnostics.push_back(diag);
    if (on_step) on_step(diag, st);
  }
  result.final_state = stepper.state();
  return result;
}

}  // namespace nsns
