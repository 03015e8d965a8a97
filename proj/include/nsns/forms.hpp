#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <utility>
#include <vector>

#include "nsns/spaces.hpp"

namespace nsns {

struct PhysicalParams {
  double nu = 1.0;     // viscosity
  double beta = 0.0;   // Navier friction coefficient (may be negative)
  double gamma = 10.0; // Nitsche penalty

  void validate() const;  // throws on nu <= 0 or gamma <= 0, warns on beta < 0
};

struct SparseSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
};

/// Triplet accumulator for the coupled system. The unknown layout is
/// [velocity | pressure | multiplier]; the multiplier slot exists only when
/// the builder is sized n_total + 1.
class SystemBuilder {
 public:
  explicit SystemBuilder(int n) : n_(n), rhs_(Eigen::VectorXd::Zero(n)) {}

  int size() const { return n_; }
  void add(int i, int j, double v) { triplets_.emplace_back(i, j, v); }
  Eigen::VectorXd& rhs() { return rhs_; }
  const Eigen::VectorXd& rhs() const { return rhs_; }
  std::vector<Eigen::Triplet<double>>& triplets() { return triplets_; }

  /// Sums duplicates into CSC storage; every diagonal entry is materialized so
  /// Dirichlet rows can later be rewritten in place.
  SparseSystem build() const;

 private:
  int n_;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::VectorXd rhs_;
};

struct SolutionState {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  double multiplier = 0.0;
};

/// Non-homogeneous Navier data. g_tau is the prescribed tangential stress
/// residual nu n^t D(u) tau + beta u.tau; g_n the prescribed normal trace u.n.
struct SlipData {
  std::function<double(Point2, Eigen::Vector2d /*n*/, Eigen::Vector2d /*tau*/)> g_tau;
  std::function<double(Point2, Eigen::Vector2d /*n*/)> g_n;
};

// Volume forms. Row/column indices refer to the global layout; divergence and
// the boundary pressure coupling insert both the block and its transpose.
void assemble_viscous(const MixedSpace& space, double nu, SystemBuilder& builder);
void assemble_divergence(const MixedSpace& space, SystemBuilder& builder);
void assemble_velocity_mass(const MixedSpace& space, double scale, SystemBuilder& builder);
void assemble_convection(const MixedSpace& space, const Eigen::VectorXd& advecting, bool newton_linearize,
                         SystemBuilder& builder);
void assemble_load(const MixedSpace& space, const VectorField& f, SystemBuilder& builder);
void assemble_mean_zero_row(const MixedSpace& space, SystemBuilder& builder);

enum class NitscheTerm { Consistency, Adjoint, TangentialFriction, Penalty, PressureNormal };

/// One boundary form on the Navier edges, scaled by `scale` (the composition
/// in Eq-style A_h subtracts consistency and adjoint).
void assemble_nitsche(const MixedSpace& space, const PhysicalParams& params, NitscheTerm term, double scale,
                      SystemBuilder& builder);

/// Right-hand side contributions of non-homogeneous slip data.
void assemble_slip_data(const MixedSpace& space, const PhysicalParams& params, const SlipData& data,
                        SystemBuilder& builder);

/// The full steady operator: viscous + friction + penalty - consistency -
/// adjoint + divergence + boundary pressure coupling + mean-zero row, plus
/// convection at `advecting` (and its Newton linearization) when given.
void assemble_steady_operator(const MixedSpace& space, const PhysicalParams& params, const Eigen::VectorXd* advecting,
                              bool newton_linearize, SystemBuilder& builder);

/// Symmetric row replacement / column elimination. Throws on conflicting
/// duplicate prescriptions.
void apply_dirichlet(SparseSystem& system, const std::vector<std::pair<int, double>>& values);

/// Mesh-dependent energy norm: (|grad v|^2 + sum_Nav h_e^-1 |v.n|^2)^(1/2).
double energy_norm(const MixedSpace& space, const Eigen::VectorXd& velocity);

double slip_norm(const MixedSpace& space, const Eigen::VectorXd& velocity);
double kinetic_energy(const MixedSpace& space, const Eigen::VectorXd& velocity);
double pressure_integral(const MixedSpace& space, const Eigen::VectorXd& pressure);
double domain_area(const Mesh& mesh);

struct ErrorNorms {
  double pressure_l2 = 0.0;
  double velocity_h1 = 0.0;  // |grad(u - u_h)|_0
  double velocity_l2 = 0.0;
  double slip = 0.0;  // |u_h . n| on the Navier boundary
};

/// All norms by quadrature exact to degree >= 8. Pressures are compared as
/// mean-zero representatives since the discrete gauge fixes int p_h = 0.
ErrorNorms error_norms(const MixedSpace& space, const VectorField& exact_velocity,
                       const MatrixField& exact_velocity_gradient, const ScalarField& exact_pressure,
                       const SolutionState& state);

/// NSNS_THREADS (0 or unset keeps the serial reference path).
int assembly_threads();

}  // namespace nsns
