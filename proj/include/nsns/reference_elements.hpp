#pragma once

#include <array>
#include <vector>

#include "nsns/mesh.hpp"

namespace nsns {

/// Quadrature rule on the unit triangle {x>=0, y>=0, x+y<=1} (2D points) or
/// on the unit interval [0,1] (x component used, y = 0).
struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int exact_degree = 0;
};

enum class BasisFamily { P1, P2 };

/// Lagrange basis values, reference gradients, and (for P2) the constant
/// reference Hessians, tabulated at a fixed set of reference points.
struct BasisTable {
  BasisFamily family;
  int num_functions = 0;
  int num_points = 0;
  // values[q*num_functions + i]
  std::vector<double> values;
  // gradients[(q*num_functions + i)*2 + d]
  std::vector<double> gradients;
  // hessians[i*4 + (2*r + c)]; constant per function, zero for P1
  std::vector<double> hessians;

  double value(int q, int i) const { return values[q * num_functions + i]; }
  std::array<double, 2> gradient(int q, int i) const {
    const double* g = &gradients[(q * num_functions + i) * 2];
    return {g[0], g[1]};
  }
  std::array<double, 4> hessian(int i) const {
    return {hessians[i * 4], hessians[i * 4 + 1], hessians[i * 4 + 2], hessians[i * 4 + 3]};
  }
};

/// Affine reference-to-physical map of a triangle; jacobian columns are the
/// edge vectors emanating from vertex 0.
struct AffineMap {
  std::array<double, 4> jacobian;          // row-major 2x2
  std::array<double, 4> inverse_jacobian;  // d(xi)/d(x)
  double determinant = 0.0;                // 2 x area, positive for CCW triangles
  Point2 origin;                           // physical image of (0,0)

  Point2 to_physical(double xi, double eta) const {
    return {origin.x + jacobian[0] * xi + jacobian[1] * eta, origin.y + jacobian[2] * xi + jacobian[3] * eta};
  }
};

/// Smallest shipped symmetric rule with exact_degree >= min_degree (1..10).
QuadratureRule triangle_quadrature(int min_degree);

/// Gauss-Legendre rule on [0,1] with exact_degree >= min_degree (1..11).
QuadratureRule edge_quadrature(int min_degree);

BasisTable tabulate_basis(BasisFamily family, const QuadratureRule& rule);
BasisTable tabulate_basis_at(BasisFamily family, const std::vector<std::array<double, 2>>& points);

AffineMap affine_map(const Mesh& mesh, int triangle_index);

/// Reference coordinates of the Lagrange nodes: 3 vertices for P1; vertices
/// followed by edge midpoints (edge k opposite vertex k) for P2.
std::vector<std::array<double, 2>> lagrange_nodes(BasisFamily family);

}  // namespace nsns
