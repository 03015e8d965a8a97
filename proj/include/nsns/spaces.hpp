#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "nsns/mesh.hpp"

namespace nsns {

using ScalarField = std::function<double(Point2)>;
using VectorField = std::function<Eigen::Vector2d(Point2)>;
/// (i,j) entry is du_i/dx_j.
using MatrixField = std::function<Eigen::Matrix2d(Point2)>;

struct DofMap {
  int count = 0;
  int dofs_per_cell = 0;
  std::vector<int> cell_dofs;  // flattened [cell * dofs_per_cell + local]

  const int* cell(int t) const { return &cell_dofs[static_cast<size_t>(t) * dofs_per_cell]; }
};

/// Taylor-Hood pair on a triangulation: continuous vector P2 velocity with
/// (node, component) interleaving (component fastest) and continuous P1
/// pressure. Velocity scalar nodes are the mesh vertices followed by the edge
/// midpoints, in mesh order, so the numbering is deterministic.
struct MixedSpace {
  const Mesh* mesh = nullptr;
  DofMap velocity;  // 12 dofs per cell
  DofMap pressure;  // 3 dofs per cell
  std::vector<Point2> velocity_nodes;  // coordinates of the scalar velocity nodes
  std::vector<int> dirichlet_dofs;     // sorted velocity dof indices on closure of Gamma_D
  std::vector<int> navier_edges;       // boundary edge indices tagged Navier

  int n_velocity = 0;  // 2 * (vertices + edges)
  int n_pressure = 0;  // vertices
  int n_total = 0;     // n_velocity + n_pressure, multiplier excluded
};

MixedSpace build_taylor_hood(const Mesh& mesh);

enum class FieldKind { Velocity, Pressure };

/// Nodal interpolant coefficients; velocity vectors are interleaved per the DofMap.
Eigen::VectorXd interpolate(const MixedSpace& space, const VectorField& field);
Eigen::VectorXd interpolate(const MixedSpace& space, const ScalarField& field);

/// One (dof, value) entry per Dirichlet velocity DOF, values taken from the
/// field at the Lagrange node.
std::vector<std::pair<int, double>> dirichlet_values(const MixedSpace& space, const VectorField& boundary_field);

}  // namespace nsns
