#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "nsns/mesh.hpp"

using namespace nsns;

namespace {

BoundaryTagger all_dirichlet() {
  return [](Point2) { return BoundaryTag::Dirichlet; };
}

BoundaryTagger bottom_navier(double y_bottom) {
  return [y_bottom](Point2 mid) { return mid.y < y_bottom + 1e-9 ? BoundaryTag::Navier : BoundaryTag::Dirichlet; };
}

double total_area(const Mesh& m) {
  double a = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) a += m.triangle_area(t);
  return a;
}

}  // namespace

TEST_CASE("structured square: smallest grid") {
  Mesh m = generate_structured_square(1, {0, 0}, {1, 1}, all_dirichlet());
  CHECK(m.num_nodes() == 4);
  CHECK(m.num_triangles() == 2);
  CHECK(m.boundary_edges.size() == 4);
  CHECK(total_area(m) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("structured square: h is the cell diagonal") {
  Mesh m = generate_structured_square(8, {-1, -1}, {1, 1}, all_dirichlet());
  CHECK(m.h == doctest::Approx(2.0 * std::sqrt(2.0) / 8.0).epsilon(1e-13));
  CHECK(total_area(m) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(m.num_triangles() == 128);
}

TEST_CASE("structured square rejects bad input") {
  CHECK_THROWS_AS(generate_structured_square(0, {0, 0}, {1, 1}, all_dirichlet()), MeshError);
  CHECK_THROWS_AS(generate_structured_square(2, {0, 0}, {0, 1}, all_dirichlet()), MeshError);
}

TEST_CASE("Euler relation on structured meshes") {
  for (int n : {1, 2, 5}) {
    Mesh m = generate_structured_square(n, {0, 0}, {1, 1}, all_dirichlet());
    CHECK(m.num_nodes() - m.num_edges() + m.num_triangles() == 1);
  }
}

TEST_CASE("outward normals and tangents on every boundary edge") {
  Mesh m = generate_structured_square(4, {-1, -1}, {1, 1}, bottom_navier(-1));
  for (size_t b = 0; b < m.boundary_edges.size(); ++b) {
    EdgeGeometry g = edge_geometry(m, static_cast<int>(b));
    CHECK(std::abs(std::hypot(g.normal[0], g.normal[1]) - 1.0) < 1e-14);
    CHECK(std::abs(std::hypot(g.tangent[0], g.tangent[1]) - 1.0) < 1e-14);
    CHECK(std::abs(g.normal[0] * g.tangent[0] + g.normal[1] * g.tangent[1]) < 1e-14);
    const BoundaryEdge& be = m.boundary_edges[b];
    const auto& tri = m.triangles[be.owner];
    Point2 centroid{(m.nodes[tri[0]].x + m.nodes[tri[1]].x + m.nodes[tri[2]].x) / 3.0,
                    (m.nodes[tri[0]].y + m.nodes[tri[1]].y + m.nodes[tri[2]].y) / 3.0};
    Point2 mid = m.edge_midpoint(be);
    CHECK(g.normal[0] * (mid.x - centroid.x) + g.normal[1] * (mid.y - centroid.y) > 0.0);
  }
}

TEST_CASE("edge geometry on the unit square") {
  Mesh m = generate_structured_square(1, {0, 0}, {1, 1}, all_dirichlet());
  double perimeter = 0.0;
  bool found_bottom = false;
  for (size_t b = 0; b < m.boundary_edges.size(); ++b) {
    EdgeGeometry g = edge_geometry(m, static_cast<int>(b));
    perimeter += g.length;
    Point2 mid = m.edge_midpoint(m.boundary_edges[b]);
    if (mid.y < 1e-12) {
      found_bottom = true;
      CHECK(g.normal[0] == doctest::Approx(0.0));
      CHECK(g.normal[1] == doctest::Approx(-1.0));
      CHECK(g.length == doctest::Approx(1.0));
    }
  }
  CHECK(found_bottom);
  CHECK(perimeter == doctest::Approx(4.0).epsilon(1e-13));
  CHECK_THROWS_AS(edge_geometry(m, 99), MeshError);
}

TEST_CASE("uniform refinement splits 1-to-4 and halves h") {
  Mesh m = generate_structured_square(1, {0, 0}, {1, 1}, all_dirichlet());
  Mesh f = refine_uniform(m);
  CHECK(f.num_triangles() == 8);
  CHECK(f.num_nodes() == 9);
  CHECK(f.h == doctest::Approx(m.h / 2.0).epsilon(1e-13));
  CHECK(total_area(f) == doctest::Approx(total_area(m)).epsilon(1e-13));

  Mesh m8 = generate_structured_square(8, {-1, -1}, {1, 1}, all_dirichlet());
  CHECK(m8.h == doctest::Approx(0.35355339059327).epsilon(1e-10));
  CHECK(refine_uniform(m8).h == doctest::Approx(0.17677669529664).epsilon(1e-10));
}

TEST_CASE("refining n=8 matches generating n=16 up to node ordering") {
  Mesh fine = refine_uniform(generate_structured_square(8, {-1, -1}, {1, 1}, bottom_navier(-1)));
  Mesh direct = generate_structured_square(16, {-1, -1}, {1, 1}, bottom_navier(-1));
  REQUIRE(fine.num_nodes() == direct.num_nodes());
  REQUIRE(fine.num_triangles() == direct.num_triangles());
  REQUIRE(fine.num_edges() == direct.num_edges());

  auto sorted_nodes = [](const Mesh& m) {
    std::vector<std::pair<double, double>> v;
    for (const auto& p : m.nodes) v.emplace_back(p.x, p.y);
    std::sort(v.begin(), v.end());
    return v;
  };
  auto a = sorted_nodes(fine);
  auto b = sorted_nodes(direct);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].first == doctest::Approx(b[i].first).epsilon(1e-13));
    CHECK(a[i].second == doctest::Approx(b[i].second).epsilon(1e-13));
  }
  int navier_fine = 0, navier_direct = 0;
  for (const auto& be : fine.boundary_edges) navier_fine += be.tag == BoundaryTag::Navier;
  for (const auto& be : direct.boundary_edges) navier_direct += be.tag == BoundaryTag::Navier;
  CHECK(navier_fine == navier_direct);
  CHECK(navier_fine == 16);
}

TEST_CASE("refinement preserves boundary tags") {
  Mesh m = generate_structured_square(2, {-1, -1}, {1, 1}, bottom_navier(-1));
  Mesh f = refine_uniform(m);
  for (const auto& be : f.boundary_edges) {
    Point2 mid = f.edge_midpoint(be);
    BoundaryTag expect = mid.y < -1 + 1e-9 ? BoundaryTag::Navier : BoundaryTag::Dirichlet;
    CHECK(be.tag == expect);
  }
}

TEST_CASE("mesh file round trip") {
  Mesh m = generate_structured_square(4, {0, 0}, {1, 1}, bottom_navier(0));
  Mesh r = load_mesh(serialize_mesh(m));
  REQUIRE(r.num_nodes() == m.num_nodes());
  REQUIRE(r.num_triangles() == m.num_triangles());
  REQUIRE(r.boundary_edges.size() == m.boundary_edges.size());
  for (int i = 0; i < m.num_nodes(); ++i) {
    CHECK(r.nodes[i].x == m.nodes[i].x);
    CHECK(r.nodes[i].y == m.nodes[i].y);
  }
  for (int t = 0; t < m.num_triangles(); ++t) CHECK(r.triangles[t] == m.triangles[t]);
  std::map<std::array<int, 2>, BoundaryTag> tags;
  for (const auto& be : m.boundary_edges) tags[{std::min(be.a, be.b), std::max(be.a, be.b)}] = be.tag;
  for (const auto& be : r.boundary_edges) CHECK(tags.at({std::min(be.a, be.b), std::max(be.a, be.b)}) == be.tag);
}

TEST_CASE("loader fixes clockwise triangles") {
  std::string text =
      "nodes 3\n0 0\n1 0\n0 1\n"
      "triangles 1\n0 2 1\n"  // clockwise on purpose
      "boundary 3\n0 1 D\n1 2 D\n2 0 N\n";
  Mesh m = load_mesh(text);
  CHECK(m.triangle_area(0) > 0.0);
}

TEST_CASE("loader rejects non-manifold and untagged input") {
  std::string shared_by_three =
      "nodes 5\n0 0\n1 0\n0.5 1\n0.5 -1\n1.5 1\n"
      "triangles 3\n0 1 2\n0 3 1\n0 1 4\n"
      "boundary 0\n";
  CHECK_THROWS_WITH_AS(load_mesh(shared_by_three), doctest::Contains("non-manifold"), MeshError);

  std::string untagged =
      "nodes 3\n0 0\n1 0\n0 1\n"
      "triangles 1\n0 1 2\n"
      "boundary 2\n0 1 D\n1 2 D\n";
  CHECK_THROWS_WITH_AS(load_mesh(untagged), doctest::Contains("untagged"), MeshError);

  std::string not_boundary =
      "nodes 4\n0 0\n1 0\n0 1\n1 1\n"
      "triangles 2\n0 1 2\n1 3 2\n"
      "boundary 5\n0 1 D\n1 3 D\n3 2 D\n2 0 D\n1 2 D\n";
  CHECK_THROWS_WITH_AS(load_mesh(not_boundary), doctest::Contains("not a boundary edge"), MeshError);
}

TEST_CASE("parse errors carry line numbers") {
  std::string bad =
      "nodes 3\n0 0\n1 0\n0 oops\n"
      "triangles 1\n0 1 2\nboundary 0\n";
  CHECK_THROWS_WITH_AS(load_mesh(bad), doctest::Contains("line 4"), MeshError);
}

TEST_CASE("comments and whitespace are tolerated") {
  std::string text =
      "# a comment\nnodes 3 # trailing\n0 0\n1 0\n0 1\n"
      "triangles 1\n0 1 2\n"
      "boundary 3\n0 1 N\n1 2 D\n2 0 D\n";
  Mesh m = load_mesh(text);
  CHECK(m.num_triangles() == 1);
  int navier = 0;
  for (const auto& be : m.boundary_edges) navier += be.tag == BoundaryTag::Navier;
  CHECK(navier == 1);
}

TEST_CASE("non-manifold detection in finalize") {
  std::vector<Point2> nodes = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {-1, 0.5}};
  std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {1, 3, 2}, {0, 2, 4}, {0, 2, 3}};
  CHECK_THROWS_AS(finalize_mesh(nodes, tris, all_dirichlet()), MeshError);
}
