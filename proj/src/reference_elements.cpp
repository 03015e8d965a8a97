#include "nsns/reference_elements.hpp"

#include <cmath>
#include <stdexcept>

namespace nsns {

namespace {

// Appends the 3 (a,a,b) permutations or, for the 6-point orbit, all 6
// permutations of the barycentric triple to the rule.
void push_orbit3(QuadratureRule& r, double a, double w) {
  double b = 1.0 - 2.0 * a;
  r.points.push_back({a, a});
  r.points.push_back({b, a});
  r.points.push_back({a, b});
  for (int k = 0; k < 3; ++k) r.weights.push_back(w);
}

void push_orbit6(QuadratureRule& r, double a, double b, double w) {
  double c = 1.0 - a - b;
  r.points.push_back({a, b});
  r.points.push_back({b, a});
  r.points.push_back({a, c});
  r.points.push_back({c, a});
  r.points.push_back({b, c});
  r.points.push_back({c, b});
  for (int k = 0; k < 6; ++k) r.weights.push_back(w);
}

void push_centroid(QuadratureRule& r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(w);
}

// Dunavant rules; weights below are normalized to sum to 1 and are rescaled
// to the reference measure 1/2 at the end.
QuadratureRule dunavant(int degree) {
  QuadratureRule r;
  r.exact_degree = degree;
  switch (degree) {
    case 1:
      push_centroid(r, 1.0);
      break;
    case 2:
      push_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 4:
      push_orbit3(r, 0.445948490915964886, 0.223381589678011466);
      push_orbit3(r, 0.0915762135097707435, 0.109951743655321868);
      break;
    case 5:
      push_centroid(r, 0.225);
      push_orbit3(r, 0.47014206410511509, 0.132394152788506181);
      push_orbit3(r, 0.101286507323456339, 0.125939180544827153);
      break;
    case 6:
      push_orbit3(r, 0.249286745170910421, 0.116786275726379366);
      push_orbit3(r, 0.0630890144915022283, 0.0508449063702068169);
      push_orbit6(r, 0.0531450498448169474, 0.310352451033784405, 0.0828510756183735752);
      break;
    case 8:
      push_centroid(r, 0.144315607677787168);
      push_orbit3(r, 0.459292588292723156, 0.0950916342672846248);
      push_orbit3(r, 0.170569307751760207, 0.10321737053471825);
      push_orbit3(r, 0.0505472283170309755, 0.0324584976231980803);
      push_orbit6(r, 0.00839477740995760534, 0.263112829634638113, 0.0272303141744349943);
      break;
    case 10:
      push_centroid(r, 0.0908179903827535801);
      push_orbit3(r, 0.485577633383657377, 0.0367259577564667047);
      push_orbit3(r, 0.109481575485037055, 0.0453210594355279348);
      push_orbit6(r, 0.141707219414879955, 0.30793983876412095, 0.0727579168454201086);
      push_orbit6(r, 0.0250035347626863861, 0.246672560639902694, 0.0283272425310574848);
      push_orbit6(r, 0.00954081540029945758, 0.0668032510122002658, 0.00942166696373282346);
      break;
    default:
      throw std::invalid_argument("no shipped triangle rule for degree " + std::to_string(degree));
  }
  for (double& w : r.weights) w *= 0.5;
  return r;
}

}  // namespace

QuadratureRule triangle_quadrature(int min_degree) {
  if (min_degree < 1 || min_degree > 10) throw std::invalid_argument("triangle quadrature degree must be in [1,10]");
  for (int d : {1, 2, 4, 5, 6, 8, 10})
    if (d >= min_degree) return dunavant(d);
  throw std::logic_error("unreachable");
}

QuadratureRule edge_quadrature(int min_degree) {
  if (min_degree < 1 || min_degree > 11) throw std::invalid_argument("edge quadrature degree must be in [1,11]");
  int npts = (min_degree + 2) / 2;  // n-point Gauss is exact to degree 2n-1
  QuadratureRule r;
  r.exact_degree = 2 * npts - 1;
  // Nodes/weights on [-1,1].
  std::vector<double> x, w;
  switch (npts) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2:
      x = {-0.5773502691896257645091488, 0.5773502691896257645091488};
      w = {1.0, 1.0};
      break;
    case 3:
      x = {-0.7745966692414833770358531, 0.0, 0.7745966692414833770358531};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    case 4:
      x = {-0.8611363115940525752239465, -0.3399810435848562648026658, 0.3399810435848562648026658,
           0.8611363115940525752239465};
      w = {0.3478548451374538573730639, 0.6521451548625461426269361, 0.6521451548625461426269361,
           0.3478548451374538573730639};
      break;
    case 5:
      x = {-0.9061798459386639927976269, -0.5384693101056830910363144, 0.0, 0.5384693101056830910363144,
           0.9061798459386639927976269};
      w = {0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
           0.4786286704993664680412915, 0.2369268850561890875142640};
      break;
    case 6:
      x = {-0.9324695142031520278123016, -0.6612093864662645136613996, -0.2386191860831969086305017,
           0.2386191860831969086305017, 0.6612093864662645136613996, 0.9324695142031520278123016};
      w = {0.1713244923791703450402961, 0.3607615730481386075698335, 0.4679139345726910473898703,
           0.4679139345726910473898703, 0.3607615730481386075698335, 0.1713244923791703450402961};
      break;
    default:
      throw std::logic_error("unreachable");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    r.points.push_back({0.5 * (x[i] + 1.0), 0.0});
    r.weights.push_back(0.5 * w[i]);
  }
  return r;
}

std::vector<std::array<double, 2>> lagrange_nodes(BasisFamily family) {
  if (family == BasisFamily::P1) return {{0, 0}, {1, 0}, {0, 1}};
  return {{0, 0}, {1, 0}, {0, 1}, {0.5, 0.5}, {0, 0.5}, {0.5, 0}};
}

BasisTable tabulate_basis_at(BasisFamily family, const std::vector<std::array<double, 2>>& points) {
  BasisTable t;
  t.family = family;
  t.num_functions = family == BasisFamily::P1 ? 3 : 6;
  t.num_points = static_cast<int>(points.size());
  t.values.resize(static_cast<size_t>(t.num_points) * t.num_functions);
  t.gradients.resize(static_cast<size_t>(t.num_points) * t.num_functions * 2);
  t.hessians.assign(static_cast<size_t>(t.num_functions) * 4, 0.0);

  for (int q = 0; q < t.num_points; ++q) {
    double xi = points[q][0], eta = points[q][1];
    double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
    if (family == BasisFamily::P1) {
      double v[3] = {l0, l1, l2};
      double g[3][2] = {{-1, -1}, {1, 0}, {0, 1}};
      for (int i = 0; i < 3; ++i) {
        t.values[q * 3 + i] = v[i];
        t.gradients[(q * 3 + i) * 2] = g[i][0];
        t.gradients[(q * 3 + i) * 2 + 1] = g[i][1];
      }
    } else {
      double v[6] = {l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1), 4 * l1 * l2, 4 * l2 * l0, 4 * l0 * l1};
      double g[6][2] = {{1 - 4 * l0, 1 - 4 * l0}, {4 * l1 - 1, 0},           {0, 4 * l2 - 1},
                        {4 * l2, 4 * l1},         {-4 * l2, 4 * (l0 - l2)},  {4 * (l0 - l1), -4 * l1}};
      for (int i = 0; i < 6; ++i) {
        t.values[q * 6 + i] = v[i];
        t.gradients[(q * 6 + i) * 2] = g[i][0];
        t.gradients[(q * 6 + i) * 2 + 1] = g[i][1];
      }
    }
  }

  if (family == BasisFamily::P2) {
    // Constant reference Hessians of the six quadratics.
    const double H[6][4] = {
        {4, 4, 4, 4},      // l0(2l0-1)
        {4, 0, 0, 0},      // l1(2l1-1)
        {0, 0, 0, 4},      // l2(2l2-1)
        {0, 4, 4, 0},      // 4 l1 l2
        {0, -4, -4, -8},   // 4 l2 l0
        {-8, -4, -4, 0},   // 4 l0 l1
    };
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 4; ++k) t.hessians[i * 4 + k] = H[i][k];
  }
  return t;
}

BasisTable tabulate_basis(BasisFamily family, const QuadratureRule& rule) {
  return tabulate_basis_at(family, rule.points);
}

AffineMap affine_map(const Mesh& mesh, int triangle_index) {
  if (triangle_index < 0 || triangle_index >= mesh.num_triangles())
    throw std::out_of_range("triangle index out of range");
  const auto& tri = mesh.triangles[triangle_index];
  const Point2& p0 = mesh.nodes[tri[0]];
  const Point2& p1 = mesh.nodes[tri[1]];
  const Point2& p2 = mesh.nodes[tri[2]];
  AffineMap m;
  m.origin = p0;
  m.jacobian = {p1.x - p0.x, p2.x - p0.x, p1.y - p0.y, p2.y - p0.y};
  m.determinant = m.jacobian[0] * m.jacobian[3] - m.jacobian[1] * m.jacobian[2];
  if (m.determinant <= 0.0) throw std::runtime_error("degenerate triangle in affine_map");
  double inv = 1.0 / m.determinant;
  m.inverse_jacobian = {m.jacobian[3] * inv, -m.jacobian[1] * inv, -m.jacobian[2] * inv, m.jacobian[0] * inv};
  return m;
}

}  // namespace nsns
