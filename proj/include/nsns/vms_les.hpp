#pragma once

#include "nsns/reference_elements.hpp"
#include "nsns/steady_solver.hpp"

namespace nsns {

using TimeVectorField = std::function<Eigen::Vector2d(Point2, double)>;

struct TimeConfig {
  double dt = 0.0;
  double t_end = 0.0;
  int sigma = 2;    // BDF order; sigma = 2 bootstraps its first step with sigma = 1
  int c_tilde = 0;  // 0 for inf-sup stable Taylor-Hood, 1 for equal-order elements

  void validate() const;
};

/// Hook replacing the stabilization parameter formulas, used by the reduction
/// and oracle tests. Zero skips every stabilization term.
struct StabilizationOverride {
  enum class Mode { Formula, Constant, Zero };
  Mode mode = Mode::Formula;
  double s_m = 0.0;
  double s_c = 0.0;
};

enum : unsigned {
  kTermGalerkin = 1u << 0,  // time derivative + Oseen + Nitsche + multiplier
  kTermSupg = 1u << 1,      // advective/pressure test against S_M r_M, grad-div
  kTermVms = 1u << 2,       // second cross term + the two Navier boundary integrals
  kTermLes = 1u << 3,       // residual-dyad turbulence closure
  kTermAll = kTermGalerkin | kTermSupg | kTermVms | kTermLes,
};

/// Velocity/pressure history. u0/p0 hold t^n, u1/p1 hold t^{n-1}; `valid`
/// counts usable levels (1 after the initial state, 2 once a step completed).
struct HistoryState {
  Eigen::VectorXd u0, p0;
  Eigen::VectorXd u1, p1;
  int valid = 1;
};

int effective_sigma(const TimeConfig& tc, const HistoryState& hist);
double bdf_alpha(int sigma);            // 1 or 3/2
double residual_constant(int degree);   // C_r = 60 * 2^(r-2)

/// EXT extrapolation: v^n (sigma 1) or 2 v^n - v^(n-1) (sigma 2).
Eigen::VectorXd ext_combination(const Eigen::VectorXd& v0, const Eigen::VectorXd& v1, int sigma);
/// BDF history combination: v^n (sigma 1) or 2 v^n - v^(n-1)/2 (sigma 2).
Eigen::VectorXd bdf_combination(const Eigen::VectorXd& v0, const Eigen::VectorXd& v1, int sigma);

/// G = Jinv^T Jinv and g = column sums of Jinv for the element map.
std::pair<Eigen::Matrix2d, Eigen::Vector2d> metric_tensor(const AffineMap& map);

/// S_M = (sigma^2/dt^2 + u.Gu + C_r nu^2 G:G)^(-1/2), S_C = (S_M g.g)^(-1).
std::pair<double, double> stabilization_params(const Eigen::Vector2d& u, const Eigen::Matrix2d& G,
                                               const Eigen::Vector2d& g, double nu, double dt, int sigma);

struct UnsteadyProblem {
  PhysicalParams params;
  TimeVectorField forcing;    // null means zero
  TimeVectorField dirichlet;  // null means zero; evaluated at t^(n+1)
  SlipData slip;
};

/// One linearly implicit step system: advection, stabilization parameters and
/// the left LES factor are frozen at the EXT extrapolation, so the system is
/// linear in (u^(n+1), p^(n+1)).
void assemble_vms_step(const MixedSpace& space, const UnsteadyProblem& problem, const TimeConfig& tc,
                       const HistoryState& hist, double t_new, unsigned terms, const StabilizationOverride& stab,
                       SystemBuilder& builder);

struct StrongResidual {
  Eigen::Vector2d momentum;
  double continuity;
};

/// Momentum/continuity strong residuals of a candidate new state at the
/// volume quadrature points of one element (test instrumentation).
std::vector<StrongResidual> strong_residuals(const MixedSpace& space, const UnsteadyProblem& problem,
                                             const TimeConfig& tc, const HistoryState& hist,
                                             const Eigen::VectorXd& u_new, const Eigen::VectorXd& p_new, double t_new,
                                             int element);

struct StepDiagnostics {
  int step = 0;
  double time = 0.0;
  double kinetic_energy = 0.0;
  double slip_norm = 0.0;
};

class VmsStepper {
 public:
  VmsStepper(const MixedSpace& space, const UnsteadyProblem& problem, const TimeConfig& tc,
             StabilizationOverride stab = {});

  /// Solves one step system and shifts the history. Throws on NaN or solver
  /// failure, reporting the step index.
  const SolutionState& advance();

  void set_initial(const SolutionState& state);
  const SolutionState& state() const { return state_; }
  const HistoryState& history() const { return history_; }
  double time() const { return static_cast<double>(step_) * tc_.dt; }
  int step() const { return step_; }

 private:
  const MixedSpace* space_;
  UnsteadyProblem problem_;
  TimeConfig tc_;
  StabilizationOverride stab_;
  HistoryState history_;
  SolutionState state_;
  DirectSolver solver_;
  int step_ = 0;
};

struct UnsteadyResult {
  std::vector<StepDiagnostics> diagnostics;
  SolutionState final_state;
};

/// Runs from a zero initial state to t_end; `on_step` (if given) is invoked
/// after every accepted step.
UnsteadyResult run_unsteady(const MixedSpace& space, const UnsteadyProblem& problem, const TimeConfig& tc,
                            const std::function<void(const StepDiagnostics&, const SolutionState&)>& on_step = {},
                            StabilizationOverride stab = {});

}  // namespace nsns
