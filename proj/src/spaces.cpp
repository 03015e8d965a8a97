#include "nsns/spaces.hpp"

#include <algorithm>

namespace nsns {

MixedSpace build_taylor_hood(const Mesh& mesh) {
  MixedSpace s;
  s.mesh = &mesh;
  const int nv = mesh.num_nodes();
  const int ne = mesh.num_edges();

  s.n_velocity = 2 * (nv + ne);
  s.n_pressure = nv;
  s.n_total = s.n_velocity + s.n_pressure;

  s.velocity_nodes.resize(nv + ne);
  for (int i = 0; i < nv; ++i) s.velocity_nodes[i] = mesh.nodes[i];
  for (int e = 0; e < ne; ++e) {
    const auto& ed = mesh.edges[e];
    s.velocity_nodes[nv + e] = {0.5 * (mesh.nodes[ed[0]].x + mesh.nodes[ed[1]].x),
                                0.5 * (mesh.nodes[ed[0]].y + mesh.nodes[ed[1]].y)};
  }

  s.velocity.count = s.n_velocity;
  s.velocity.dofs_per_cell = 12;
  s.velocity.cell_dofs.resize(static_cast<size_t>(mesh.num_triangles()) * 12);
  s.pressure.count = s.n_pressure;
  s.pressure.dofs_per_cell = 3;
  s.pressure.cell_dofs.resize(static_cast<size_t>(mesh.num_triangles()) * 3);

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    int scalar_nodes[6] = {tri[0], tri[1], tri[2], nv + mesh.triangle_edges[t][0], nv + mesh.triangle_edges[t][1],
                           nv + mesh.triangle_edges[t][2]};
    for (int l = 0; l < 6; ++l) {
      s.velocity.cell_dofs[t * 12 + 2 * l] = 2 * scalar_nodes[l];
      s.velocity.cell_dofs[t * 12 + 2 * l + 1] = 2 * scalar_nodes[l] + 1;
    }
    for (int l = 0; l < 3; ++l) s.pressure.cell_dofs[t * 3 + l] = tri[l];
  }

  // A node on the closure of Gamma_D is strongly constrained, so corner nodes
  // shared with a Navier edge become Dirichlet.
  std::vector<bool> constrained(nv + ne, false);
  for (size_t b = 0; b < mesh.boundary_edges.size(); ++b) {
    const auto& be = mesh.boundary_edges[b];
    if (be.tag == BoundaryTag::Navier) {
      s.navier_edges.push_back(static_cast<int>(b));
      continue;
    }
    auto key = std::array<int, 2>{std::min(be.a, be.b), std::max(be.a, be.b)};
    auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key);
    constrained[be.a] = constrained[be.b] = true;
    constrained[nv + static_cast<int>(it - mesh.edges.begin())] = true;
  }
  for (int node = 0; node < nv + ne; ++node) {
    if (!constrained[node]) continue;
    s.dirichlet_dofs.push_back(2 * node);
    s.dirichlet_dofs.push_back(2 * node + 1);
  }
  return s;
}

Eigen::VectorXd interpolate(const MixedSpace& space, const VectorField& field) {
  Eigen::VectorXd c(space.n_velocity);
  for (size_t n = 0; n < space.velocity_nodes.size(); ++n) {
    Eigen::Vector2d v = field(space.velocity_nodes[n]);
    c[2 * n] = v[0];
    c[2 * n + 1] = v[1];
  }
  return c;
}

Eigen::VectorXd interpolate(const MixedSpace& space, const ScalarField& field) {
  Eigen::VectorXd c(space.n_pressure);
  for (int n = 0; n < space.n_pressure; ++n) c[n] = field(space.mesh->nodes[n]);
  return c;
}

std::vector<std::pair<int, double>> dirichlet_values(const MixedSpace& space, const VectorField& boundary_field) {
  std::vector<std::pair<int, double>> out;
  out.reserve(space.dirichlet_dofs.size());
  for (int dof : space.dirichlet_dofs) {
    Eigen::Vector2d v = boundary_field(space.velocity_nodes[dof / 2]);
    out.emplace_back(dof, v[dof % 2]);
  }
  return out;
}

}  // namespace nsns
