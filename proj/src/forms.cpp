#include "nsns/forms.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "nsns/element_context.hpp"

namespace nsns {

namespace {

constexpr int kVolumeMatrixDegree = 6;
constexpr int kVolumeRhsDegree = 8;
constexpr int kEdgeMatrixDegree = 5;
constexpr int kEdgeRhsDegree = 9;
constexpr int kErrorVolumeDegree = 8;
constexpr int kErrorEdgeDegree = 9;

// Runs kernel(ctx, t, triplets, rhs) over all elements, one context per
// worker. Buffers merge in chunk order so accumulation matches the serial
// reference path up to roundoff.
template <class Kernel>
void parallel_elements(const MixedSpace& space, int quad_degree, Kernel&& kernel, SystemBuilder& builder) {
  const int n = space.mesh->num_triangles();
  const int nt = std::min(assembly_threads(), n);
  if (nt <= 1) {
    ElementContext ctx(*space.mesh, space, triangle_quadrature(quad_degree));
    for (int t = 0; t < n; ++t) {
      ctx.bind(t);
      kernel(ctx, t, builder.triplets(), builder.rhs());
    }
    return;
  }
  std::vector<std::vector<Eigen::Triplet<double>>> trips(nt);
  std::vector<Eigen::VectorXd> rhs(nt, Eigen::VectorXd::Zero(builder.size()));
  std::vector<std::thread> workers;
  for (int w = 0; w < nt; ++w) {
    workers.emplace_back([&, w]() {
      ElementContext ctx(*space.mesh, space, triangle_quadrature(quad_degree));
      int begin = static_cast<int>(static_cast<long long>(n) * w / nt);
      int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / nt);
      for (int t = begin; t < end; ++t) {
        ctx.bind(t);
        kernel(ctx, t, trips[w], rhs[w]);
      }
    });
  }
  for (auto& th : workers) th.join();
  for (int w = 0; w < nt; ++w) {
    builder.triplets().insert(builder.triplets().end(), trips[w].begin(), trips[w].end());
    builder.rhs() += rhs[w];
  }
}

void scatter_velocity_block(const double K[12][12], const int* dofs, std::vector<Eigen::Triplet<double>>& trips) {
  for (int a = 0; a < 12; ++a)
    for (int b = 0; b < 12; ++b) trips.emplace_back(dofs[a], dofs[b], K[a][b]);
}

}  // namespace

int assembly_threads() {
  const char* env = std::getenv("NSNS_THREADS");
  if (!env) return 1;
  int v = std::atoi(env);
  return v <= 1 ? 1 : v;
}

void PhysicalParams::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity nu must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("Nitsche penalty gamma must be positive");
  if (beta < 0.0) std::cerr << "nsns: warning: negative friction coefficient beta = " << beta << "\n";
}

SparseSystem SystemBuilder::build() const {
  SparseSystem s;
  s.matrix.resize(n_, n_);
  std::vector<Eigen::Triplet<double>> trips = triplets_;
  trips.reserve(trips.size() + n_);
  for (int i = 0; i < n_; ++i) trips.emplace_back(i, i, 0.0);
  s.matrix.setFromTriplets(trips.begin(), trips.end());
  s.rhs = rhs_;
  return s;
}

void assemble_viscous(const MixedSpace& space, double nu, SystemBuilder& builder) {
  parallel_elements(
      space, kVolumeMatrixDegree,
      [nu](ElementContext& ctx, int, std::vector<Eigen::Triplet<double>>& trips, Eigen::VectorXd&) {
        double K[12][12] = {};
        for (int q = 0; q < ctx.nq(); ++q) {
          double w = ctx.weight(q);
          for (int i = 0; i < 6; ++i) {
            const auto& gi = ctx.p2_grad(q, i);
            for (int j = 0; j < 6; ++j) {
              const auto& gj = ctx.p2_grad(q, j);
              double dot = gi[0] * gj[0] + gi[1] * gj[1];
              for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d)
                  K[2 * i + c][2 * j + d] += nu * ((c == d ? dot : 0.0) + gj[c] * gi[d]) * w;
            }
          }
        }
        scatter_velocity_block(K, ctx.velocity_dofs(), trips);
      },
      builder);
}

void assemble_divergence(const MixedSpace& space, SystemBuilder& builder) {
  const int p_off = space.n_velocity;
  parallel_elements(
      space, kVolumeMatrixDegree,
      [p_off](ElementContext& ctx, int, std::vector<Eigen::Triplet<double>>& trips, Eigen::VectorXd&) {
        double B[3][12] = {};
        for (int q = 0; q < ctx.nq(); ++q) {
          double w = ctx.weight(q);
          for (int i = 0; i < 3; ++i) {
            double psi = ctx.p1_value(q, i);
            for (int j = 0; j < 6; ++j) {
              const auto& gj = ctx.p2_grad(q, j);
              for (int d = 0; d < 2; ++d) B[i][2 * j + d] -= psi * gj[d] * w;
            }
          }
        }
        const int* vdofs = ctx.velocity_dofs();
        const int* pdofs = ctx.pressure_dofs();
        for (int i = 0; i < 3; ++i)
          for (int b = 0; b < 12; ++b) {
            trips.emplace_back(p_off + pdofs[i], vdofs[b], B[i][b]);
            trips.emplace_back(vdofs[b], p_off + pdofs[i], B[i][b]);
          }
      },
      builder);
}

void assemble_velocity_mass(const MixedSpace& space, double scale, SystemBuilder& builder) {
  parallel_elements(
      space, kVolumeMatrixDegree,
      [scale](ElementContext& ctx, int, std::vector<Eigen::Triplet<double>>& trips, Eigen::VectorXd&) {
        double M[6][6] = {};
        for (int q = 0; q < ctx.nq(); ++q) {
          double w = ctx.weight(q);
          for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) M[i][j] += scale * ctx.p2_value(q, i) * ctx.p2_value(q, j) * w;
        }
        const int* dofs = ctx.velocity_dofs();
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j)
            for (int c = 0; c < 2; ++c) trips.emplace_back(dofs[2 * i + c], dofs[2 * j + c], M[i][j]);
      },
      builder);
}

void assemble_convection(const MixedSpace& space, const Eigen::VectorXd& advecting, bool newton_linearize,
                         SystemBuilder& builder) {
  parallel_elements(
      space, kVolumeMatrixDegree,
      [&advecting, newton_linearize](ElementContext& ctx, int, std::vector<Eigen::Triplet<double>>& trips,
                                     Eigen::VectorXd&) {
        double K[12][12] = {};
        for (int q = 0; q < ctx.nq(); ++q) {
          double w = ctx.weight(q);
          Eigen::Vector2d wv = ctx.velocity_value(advecting, q);
          Eigen::Matrix2d gw = Eigen::Matrix2d::Zero();
          if (newton_linearize) gw = ctx.velocity_gradient(advecting, q);
          for (int i = 0; i < 6; ++i) {
            double phi_i = ctx.p2_value(q, i);
            for (int j = 0; j < 6; ++j) {
              const auto& gj = ctx.p2_grad(q, j);
              double adv = (wv[0] * gj[0] + wv[1] * gj[1]) * phi_i * w;
              for (int c = 0; c < 2; ++c) K[2 * i + c][2 * j + c] += adv;
              if (newton_linearize) {
                double m = phi_i * ctx.p2_value(q, j) * w;
                for (int c = 0; c < 2; ++c)
                  for (int d = 0; d < 2; ++d) K[2 * i + c][2 * j + d] += m * gw(c, d);
              }
            }
          }
        }
        scatter_velocity_block(K, ctx.velocity_dofs(), trips);
      },
      builder);
}

void assemble_load(const MixedSpace& space, const VectorField& f, SystemBuilder& builder) {
  parallel_elements(
      space, kVolumeRhsDegree,
      [&f](ElementContext& ctx, int, std::vector<Eigen::Triplet<double>>&, Eigen::VectorXd& rhs) {
        const int* dofs = ctx.velocity_dofs();
        for (int q = 0; q < ctx.nq(); ++q) {
          double w = ctx.weight(q);
          Eigen::Vector2d fv = f(ctx.point(q));
          for (int i = 0; i < 6; ++i) {
            double phi = ctx.p2_value(q, i);
            rhs[dofs[2 * i]] += fv[0] * phi * w;
            rhs[dofs[2 * i + 1]] += fv[1] * phi * w;
          }
        }
      },
      builder);
}

void assemble_mean_zero_row(const MixedSpace& space, SystemBuilder& builder) {
  const int p_off = space.n_velocity;
  const int m = space.n_total;
  if (builder.size() <= m) throw std::invalid_argument("builder has no multiplier slot");
  ElementContext ctx(*space.mesh, space, triangle_quadrature(2));
  for (int t = 0; t < space.mesh->num_triangles(); ++t) {
    ctx.bind(t);
    const int* pdofs = ctx.pressure_dofs();
    double v[3] = {};
    for (int q = 0; q < ctx.nq(); ++q)
      for (int i = 0; i < 3; ++i) v[i] += ctx.p1_value(q, i) * ctx.weight(q);
    for (int i = 0; i < 3; ++i) {
      builder.add(m, p_off + pdofs[i], v[i]);
      builder.add(p_off + pdofs[i], m, v[i]);
    }
  }
}

void assemble_nitsche(const MixedSpace& space, const PhysicalParams& params, NitscheTerm term, double scale,
                      SystemBuilder& builder) {
  EdgeContext ctx(*space.mesh, space, edge_quadrature(kEdgeMatrixDegree));
  const int p_off = space.n_velocity;
  for (int e : space.navier_edges) {
    ctx.bind(e);
    const int* vdofs = ctx.velocity_dofs();
    const int* pdofs = ctx.pressure_dofs();
    const Eigen::Vector2d n = ctx.normal();
    const Eigen::Vector2d tau = ctx.tangent();
    for (int q = 0; q < ctx.nq(); ++q) {
      double w = ctx.weight(q) * scale;
      switch (term) {
        case NitscheTerm::Penalty: {
          double f = params.gamma / ctx.length() * w;
          for (int i = 0; i < 6; ++i)
            for (int c = 0; c < 2; ++c)
              for (int j = 0; j < 6; ++j)
                for (int d = 0; d < 2; ++d)
                  builder.add(vdofs[2 * i + c], vdofs[2 * j + d],
                              f * ctx.p2_value(q, i) * n[c] * ctx.p2_value(q, j) * n[d]);
          break;
        }
        case NitscheTerm::TangentialFriction: {
          double f = params.beta * w;
          for (int i = 0; i < 6; ++i)
            for (int c = 0; c < 2; ++c)
              for (int j = 0; j < 6; ++j)
                for (int d = 0; d < 2; ++d)
                  builder.add(vdofs[2 * i + c], vdofs[2 * j + d],
                              f * ctx.p2_value(q, i) * tau[c] * ctx.p2_value(q, j) * tau[d]);
          break;
        }
        case NitscheTerm::Consistency:
        case NitscheTerm::Adjoint: {
          // n^t nu D(phi_j e_d) n = 2 nu n_d (grad phi_j . n)
          for (int i = 0; i < 6; ++i)
            for (int c = 0; c < 2; ++c)
              for (int j = 0; j < 6; ++j) {
                const auto& gj = ctx.p2_grad(q, j);
                double gn = gj[0] * n[0] + gj[1] * n[1];
                for (int d = 0; d < 2; ++d) {
                  double val = 2.0 * params.nu * n[d] * gn * ctx.p2_value(q, i) * n[c] * w;
                  if (term == NitscheTerm::Consistency)
                    builder.add(vdofs[2 * i + c], vdofs[2 * j + d], val);
                  else
                    builder.add(vdofs[2 * j + d], vdofs[2 * i + c], val);
                }
              }
          break;
        }
        case NitscheTerm::PressureNormal: {
          for (int i = 0; i < 3; ++i) {
            double psi = ctx.p1_value(q, i);
            for (int j = 0; j < 6; ++j)
              for (int d = 0; d < 2; ++d) {
                double val = psi * ctx.p2_value(q, j) * n[d] * w;
                builder.add(p_off + pdofs[i], vdofs[2 * j + d], val);
                builder.add(vdofs[2 * j + d], p_off + pdofs[i], val);
              }
          }
          break;
        }
      }
    }
  }
}

void assemble_slip_data(const MixedSpace& space, const PhysicalParams& params, const SlipData& data,
                        SystemBuilder& builder) {
  if (!data.g_tau && !data.g_n) return;
  EdgeContext ctx(*space.mesh, space, edge_quadrature(kEdgeRhsDegree));
  const int p_off = space.n_velocity;
  for (int e : space.navier_edges) {
    ctx.bind(e);
    const int* vdofs = ctx.velocity_dofs();
    const int* pdofs = ctx.pressure_dofs();
    const Eigen::Vector2d n = ctx.normal();
    const Eigen::Vector2d tau = ctx.tangent();
    for (int q = 0; q < ctx.nq(); ++q) {
      double w = ctx.weight(q);
      Point2 x = ctx.point(q);
      double gt = data.g_tau ? data.g_tau(x, n, tau) : 0.0;
      double gn = data.g_n ? data.g_n(x, n) : 0.0;
      for (int i = 0; i < 6; ++i) {
        double phi = ctx.p2_value(q, i);
        const auto& gi = ctx.p2_grad(q, i);
        double gradn = gi[0] * n[0] + gi[1] * n[1];
        for (int c = 0; c < 2; ++c) {
          double val = gt * phi * tau[c] * w;
          val += params.gamma / ctx.length() * gn * phi * n[c] * w;
          val -= 2.0 * params.nu * n[c] * gradn * gn * w;  // adjoint-consistency data
          builder.rhs()[vdofs[2 * i + c]] += val;
        }
      }
      for (int i = 0; i < 3; ++i) builder.rhs()[p_off + pdofs[i]] += ctx.p1_value(q, i) * gn * w;
    }
  }
}

void assemble_steady_operator(const MixedSpace& space, const PhysicalParams& params, const Eigen::VectorXd* advecting,
                              bool newton_linearize, SystemBuilder& builder) {
  assemble_viscous(space, params.nu, builder);
  assemble_nitsche(space, params, NitscheTerm::TangentialFriction, 1.0, builder);
  assemble_nitsche(space, params, NitscheTerm::Penalty, 1.0, builder);
  assemble_nitsche(space, params, NitscheTerm::Consistency, -1.0, builder);
  assemble_nitsche(space, params, NitscheTerm::Adjoint, -1.0, builder);
  assemble_divergence(space, builder);
  assemble_nitsche(space, params, NitscheTerm::PressureNormal, 1.0, builder);
  assemble_mean_zero_row(space, builder);
  if (advecting) assemble_convection(space, *advecting, newton_linearize, builder);
}

void apply_dirichlet(SparseSystem& system, const std::vector<std::pair<int, double>>& values) {
  const int n = static_cast<int>(system.matrix.rows());
  std::vector<char> constrained(n, 0);
  std::vector<double> g(n, 0.0);
  for (const auto& [dof, value] : values) {
    if (dof < 0 || dof >= n) throw std::out_of_range("Dirichlet dof out of range");
    if (constrained[dof] && g[dof] != value)
      throw std::invalid_argument("conflicting Dirichlet prescriptions for dof " + std::to_string(dof));
    constrained[dof] = 1;
    g[dof] = value;
  }
  for (int col = 0; col < system.matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix, col); it; ++it) {
      int row = static_cast<int>(it.row());
      if (constrained[row]) {
        it.valueRef() = (row == col) ? 1.0 : 0.0;
      } else if (constrained[col]) {
        system.rhs[row] -= it.value() * g[col];
        it.valueRef() = 0.0;
      }
    }
  }
  for (const auto& [dof, value] : values) system.rhs[dof] = value;
}

double energy_norm(const MixedSpace& space, const Eigen::VectorXd& velocity) {
  double acc = 0.0;
  ElementContext ctx(*space.mesh, space, triangle_quadrature(kVolumeMatrixDegree));
  for (int t = 0; t < space.mesh->num_triangles(); ++t) {
    ctx.bind(t);
    for (int q = 0; q < ctx.nq(); ++q) acc += ctx.velocity_gradient(velocity, q).squaredNorm() * ctx.weight(q);
  }
  EdgeContext ectx(*space.mesh, space, edge_quadrature(kEdgeMatrixDegree));
  for (int e : space.navier_edges) {
    ectx.bind(e);
    for (int q = 0; q < ectx.nq(); ++q) {
      double un = ectx.velocity_value(velocity, q).dot(ectx.normal());
      acc += un * un / ectx.length() * ectx.weight(q);
    }
  }
  return std::sqrt(acc);
}

double slip_norm(const MixedSpace& space, const Eigen::VectorXd& velocity) {
  double acc = 0.0;
  EdgeContext ectx(*space.mesh, space, edge_quadrature(kErrorEdgeDegree));
  for (int e : space.navier_edges) {
    ectx.bind(e);
    for (int q = 0; q < ectx.nq(); ++q) {
      double un = ectx.velocity_value(velocity, q).dot(ectx.normal());
      acc += un * un * ectx.weight(q);
    }
  }
  return std::sqrt(acc);
}

double kinetic_energy(const MixedSpace& space, const Eigen::VectorXd& velocity) {
  double acc = 0.0;
  ElementContext ctx(*space.mesh, space, triangle_quadrature(kVolumeMatrixDegree));
  for (int t = 0; t < space.mesh->num_triangles(); ++t) {
    ctx.bind(t);
    for (int q = 0; q < ctx.nq(); ++q) acc += ctx.velocity_value(velocity, q).squaredNorm() * ctx.weight(q);
  }
  return 0.5 * acc;
}

double pressure_integral(const MixedSpace& space, const Eigen::VectorXd& pressure) {
  double acc = 0.0;
  ElementContext ctx(*space.mesh, space, triangle_quadrature(2));
  for (int t = 0; t < space.mesh->num_triangles(); ++t) {
    ctx.bind(t);
    for (int q = 0; q < ctx.nq(); ++q) acc += ctx.pressure_value(pressure, q) * ctx.weight(q);
  }
  return acc;
}

double domain_area(const Mesh& mesh) {
  double a = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) a += mesh.triangle_area(t);
  return a;
}

ErrorNorms error_norms(const MixedSpace& space, const VectorField& exact_velocity,
                       const MatrixField& exact_velocity_gradient, const ScalarField& exact_pressure,
                       const SolutionState& state) {
  ErrorNorms out;
  double p_l2 = 0, u_h1 = 0, u_l2 = 0;
  double exact_p_int = 0.0;
  ElementContext ctx(*space.mesh, space, triangle_quadrature(kErrorVolumeDegree));
  for (int t = 0; t < space.mesh->num_triangles(); ++t) {
    ctx.bind(t);
    for (int q = 0; q < ctx.nq(); ++q) exact_p_int += exact_pressure(ctx.point(q)) * ctx.weight(q);
  }
  const double p_shift = exact_p_int / domain_area(*space.mesh);

  for (int t = 0; t < space.mesh->num_triangles(); ++t) {
    ctx.bind(t);
    for (int q = 0; q < ctx.nq(); ++q) {
      double w = ctx.weight(q);
      Point2 x = ctx.point(q);
      double dp = (exact_pressure(x) - p_shift) - ctx.pressure_value(state.pressure, q);
      p_l2 += dp * dp * w;
      Eigen::Vector2d du = exact_velocity(x) - ctx.velocity_value(state.velocity, q);
      u_l2 += du.squaredNorm() * w;
      Eigen::Matrix2d dg = exact_velocity_gradient(x) - ctx.velocity_gradient(state.velocity, q);
      u_h1 += dg.squaredNorm() * w;
    }
  }
  out.pressure_l2 = std::sqrt(p_l2);
  out.velocity_h1 = std::sqrt(u_h1);
  out.velocity_l2 = std::sqrt(u_l2);
  out.slip = slip_norm(space, state.velocity);
  return out;
}

}  // namespace nsns
