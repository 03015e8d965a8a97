#pragma once

#include <Eigen/Dense>

#include "nsns/reference_elements.hpp"
#include "nsns/spaces.hpp"

namespace nsns {

/// Per-element evaluation data for one quadrature rule: physical basis
/// gradients, P2 Laplacians, and scaled weights. bind() loads a triangle.
class ElementContext {
 public:
  ElementContext(const Mesh& mesh, const MixedSpace& space, const QuadratureRule& rule)
      : mesh_(&mesh), space_(&space), rule_(rule), p2_(tabulate_basis(BasisFamily::P2, rule)),
        p1_(tabulate_basis(BasisFamily::P1, rule)) {
    grad_p2_.resize(static_cast<size_t>(nq()) * 6);
    grad_p1_.resize(static_cast<size_t>(nq()) * 3);
    lap_p2_.resize(6);
  }

  void bind(int t) {
    t_ = t;
    map_ = affine_map(*mesh_, t);
    const auto& ji = map_.inverse_jacobian;
    for (int q = 0; q < nq(); ++q) {
      for (int i = 0; i < 6; ++i) {
        auto g = p2_.gradient(q, i);
        grad_p2_[q * 6 + i] = {ji[0] * g[0] + ji[2] * g[1], ji[1] * g[0] + ji[3] * g[1]};
      }
      for (int i = 0; i < 3; ++i) {
        auto g = p1_.gradient(q, i);
        grad_p1_[q * 3 + i] = {ji[0] * g[0] + ji[2] * g[1], ji[1] * g[0] + ji[3] * g[1]};
      }
    }
    // Physical Laplacian: trace of Jinv^T H Jinv, constant per function.
    for (int i = 0; i < 6; ++i) {
      auto H = p2_.hessian(i);
      double l = 0.0;
      for (int k = 0; k < 2; ++k) {
        // column k of Jinv
        double a = ji[k], b = ji[2 + k];
        l += a * (H[0] * a + H[1] * b) + b * (H[2] * a + H[3] * b);
      }
      lap_p2_[i] = l;
    }
  }

  int nq() const { return static_cast<int>(rule_.points.size()); }
  int triangle() const { return t_; }
  const AffineMap& map() const { return map_; }
  double weight(int q) const { return rule_.weights[q] * map_.determinant; }
  Point2 point(int q) const { return map_.to_physical(rule_.points[q][0], rule_.points[q][1]); }

  double p2_value(int q, int i) const { return p2_.value(q, i); }
  double p1_value(int q, int i) const { return p1_.value(q, i); }
  const std::array<double, 2>& p2_grad(int q, int i) const { return grad_p2_[q * 6 + i]; }
  const std::array<double, 2>& p1_grad(int q, int i) const { return grad_p1_[q * 3 + i]; }
  double p2_laplacian(int i) const { return lap_p2_[i]; }

  const int* velocity_dofs() const { return space_->velocity.cell(t_); }
  const int* pressure_dofs() const { return space_->pressure.cell(t_); }

  Eigen::Vector2d velocity_value(const Eigen::VectorXd& coef, int q) const {
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    const int* dofs = velocity_dofs();
    for (int l = 0; l < 6; ++l) {
      double phi = p2_value(q, l);
      v[0] += phi * coef[dofs[2 * l]];
      v[1] += phi * coef[dofs[2 * l + 1]];
    }
    return v;
  }

  Eigen::Matrix2d velocity_gradient(const Eigen::VectorXd& coef, int q) const {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    const int* dofs = velocity_dofs();
    for (int l = 0; l < 6; ++l) {
      const auto& gl = p2_grad(q, l);
      for (int d = 0; d < 2; ++d) {
        g(0, d) += gl[d] * coef[dofs[2 * l]];
        g(1, d) += gl[d] * coef[dofs[2 * l + 1]];
      }
    }
    return g;
  }

  Eigen::Vector2d velocity_laplacian(const Eigen::VectorXd& coef) const {
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    const int* dofs = velocity_dofs();
    for (int l = 0; l < 6; ++l) {
      v[0] += lap_p2_[l] * coef[dofs[2 * l]];
      v[1] += lap_p2_[l] * coef[dofs[2 * l + 1]];
    }
    return v;
  }

  double pressure_value(const Eigen::VectorXd& coef, int q) const {
    double p = 0.0;
    const int* dofs = pressure_dofs();
    for (int l = 0; l < 3; ++l) p += p1_value(q, l) * coef[dofs[l]];
    return p;
  }

  Eigen::Vector2d pressure_gradient(const Eigen::VectorXd& coef, int q) const {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    const int* dofs = pressure_dofs();
    for (int l = 0; l < 3; ++l) {
      const auto& gl = p1_grad(q, l);
      g[0] += gl[0] * coef[dofs[l]];
      g[1] += gl[1] * coef[dofs[l]];
    }
    return g;
  }

 private:
  const Mesh* mesh_;
  const MixedSpace* space_;
  QuadratureRule rule_;
  BasisTable p2_, p1_;
  int t_ = -1;
  AffineMap map_;
  std::vector<std::array<double, 2>> grad_p2_, grad_p1_;
  std::vector<double> lap_p2_;
};

/// Trace evaluation on one boundary edge: basis values/gradients of the owner
/// triangle at the edge quadrature points, plus normal, tangent and length.
class EdgeContext {
 public:
  EdgeContext(const Mesh& mesh, const MixedSpace& space, const QuadratureRule& edge_rule)
      : mesh_(&mesh), space_(&space), rule_(edge_rule) {}

  void bind(int boundary_edge_index) {
    const BoundaryEdge& be = mesh_->boundary_edges[boundary_edge_index];
    owner_ = be.owner;
    EdgeGeometry g = edge_geometry(*mesh_, boundary_edge_index);
    n_ = {g.normal[0], g.normal[1]};
    tau_ = {g.tangent[0], g.tangent[1]};
    h_e_ = g.length;
    map_ = affine_map(*mesh_, owner_);

    const auto& tri = mesh_->triangles[owner_];
    static const std::array<std::array<double, 2>, 3> ref_vertex = {{{0, 0}, {1, 0}, {0, 1}}};
    std::array<double, 2> ra{}, rb{};
    for (int k = 0; k < 3; ++k) {
      if (tri[k] == be.a) ra = ref_vertex[k];
      if (tri[k] == be.b) rb = ref_vertex[k];
    }
    std::vector<std::array<double, 2>> pts(rule_.points.size());
    for (size_t q = 0; q < rule_.points.size(); ++q) {
      double t = rule_.points[q][0];
      pts[q] = {(1 - t) * ra[0] + t * rb[0], (1 - t) * ra[1] + t * rb[1]};
    }
    p2_ = tabulate_basis_at(BasisFamily::P2, pts);
    p1_ = tabulate_basis_at(BasisFamily::P1, pts);
    const auto& ji = map_.inverse_jacobian;
    grad_p2_.resize(pts.size() * 6);
    for (size_t q = 0; q < pts.size(); ++q) {
      for (int i = 0; i < 6; ++i) {
        auto gr = p2_.gradient(static_cast<int>(q), i);
        grad_p2_[q * 6 + i] = {ji[0] * gr[0] + ji[2] * gr[1], ji[1] * gr[0] + ji[3] * gr[1]};
      }
    }
    lap_p2_.resize(6);
    for (int i = 0; i < 6; ++i) {
      auto H = p2_.hessian(i);
      double l = 0.0;
      for (int k = 0; k < 2; ++k) {
        double a = ji[k], b = ji[2 + k];
        l += a * (H[0] * a + H[1] * b) + b * (H[2] * a + H[3] * b);
      }
      lap_p2_[i] = l;
    }
    static const double ref_g1[3][2] = {{-1, -1}, {1, 0}, {0, 1}};
    for (int i = 0; i < 3; ++i)
      grad_p1_[i] = {ji[0] * ref_g1[i][0] + ji[2] * ref_g1[i][1], ji[1] * ref_g1[i][0] + ji[3] * ref_g1[i][1]};
    phys_pts_.resize(pts.size());
    for (size_t q = 0; q < pts.size(); ++q) phys_pts_[q] = map_.to_physical(pts[q][0], pts[q][1]);
  }

  int nq() const { return static_cast<int>(rule_.points.size()); }
  int owner() const { return owner_; }
  const Eigen::Vector2d& normal() const { return n_; }
  const Eigen::Vector2d& tangent() const { return tau_; }
  double length() const { return h_e_; }
  double weight(int q) const { return rule_.weights[q] * h_e_; }
  Point2 point(int q) const { return phys_pts_[q]; }

  double p2_value(int q, int i) const { return p2_.value(q, i); }
  double p1_value(int q, int i) const { return p1_.value(q, i); }
  const std::array<double, 2>& p2_grad(int q, int i) const { return grad_p2_[q * 6 + i]; }
  double p2_laplacian(int i) const { return lap_p2_[i]; }
  const std::array<double, 2>& p1_grad(int i) const { return grad_p1_[i]; }

  const int* velocity_dofs() const { return space_->velocity.cell(owner_); }
  const int* pressure_dofs() const { return space_->pressure.cell(owner_); }

  Eigen::Vector2d velocity_value(const Eigen::VectorXd& coef, int q) const {
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    const int* dofs = velocity_dofs();
    for (int l = 0; l < 6; ++l) {
      double phi = p2_value(q, l);
      v[0] += phi * coef[dofs[2 * l]];
      v[1] += phi * coef[dofs[2 * l + 1]];
    }
    return v;
  }

  Eigen::Matrix2d velocity_gradient(const Eigen::VectorXd& coef, int q) const {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    const int* dofs = velocity_dofs();
    for (int l = 0; l < 6; ++l) {
      const auto& gl = p2_grad(q, l);
      for (int d = 0; d < 2; ++d) {
        g(0, d) += gl[d] * coef[dofs[2 * l]];
        g(1, d) += gl[d] * coef[dofs[2 * l + 1]];
      }
    }
    return g;
  }

 private:
  const Mesh* mesh_;
  const MixedSpace* space_;
  QuadratureRule rule_;
  int owner_ = -1;
  Eigen::Vector2d n_, tau_;
  double h_e_ = 0.0;
  AffineMap map_;
  BasisTable p2_, p1_;
  std::vector<std::array<double, 2>> grad_p2_;
  std::array<std::array<double, 2>, 3> grad_p1_{};
  std::vector<double> lap_p2_;
  std::vector<Point2> phys_pts_;
};

}  // namespace nsns
