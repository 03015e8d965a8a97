#include "nsns/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace nsns {

namespace {

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double dist(const Point2& a, const Point2& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

}  // namespace

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  return signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

Point2 Mesh::edge_midpoint(const BoundaryEdge& e) const {
  return {0.5 * (nodes[e.a].x + nodes[e.b].x), 0.5 * (nodes[e.a].y + nodes[e.b].y)};
}

Mesh finalize_mesh(std::vector<Point2> nodes, std::vector<std::array<int, 3>> triangles,
                   const BoundaryTagger& tagger) {
  Mesh m;
  m.nodes = std::move(nodes);
  m.triangles = std::move(triangles);

  for (const Point2& p : m.nodes) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite node coordinate");
  }
  const int nn = m.num_nodes();
  for (auto& tri : m.triangles) {
    for (int v : tri) {
      if (v < 0 || v >= nn) throw MeshError("triangle references node " + std::to_string(v) + " out of range");
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) throw MeshError("degenerate triangle (repeated vertex)");
    double area = signed_area(m.nodes[tri[0]], m.nodes[tri[1]], m.nodes[tri[2]]);
    if (area < 0.0) {
      std::swap(tri[1], tri[2]);
      area = -area;
    }
    if (area <= 0.0) throw MeshError("triangle with zero area");
  }

  // Unique edge list, deterministic (min,max) ordering.
  std::map<std::array<int, 2>, std::vector<int>> incident;  // edge key -> triangles
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int i = tri[(k + 1) % 3], j = tri[(k + 2) % 3];
      incident[{std::min(i, j), std::max(i, j)}].push_back(t);
    }
  }
  std::map<std::array<int, 2>, int> edge_index;
  for (const auto& [key, tris] : incident) {
    if (tris.size() > 2) throw MeshError("non-manifold edge shared by " + std::to_string(tris.size()) + " triangles");
    edge_index[key] = m.num_edges();
    m.edges.push_back(key);
  }

  m.triangle_edges.resize(m.triangles.size());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& tri = m.triangles[t];
    for (int k = 0; k < 3; ++k) {
      int i = tri[(k + 1) % 3], j = tri[(k + 2) % 3];
      m.triangle_edges[t][k] = edge_index.at({std::min(i, j), std::max(i, j)});
    }
  }

  // Boundary edges: incident to exactly one triangle. Directed so the owner
  // lies on the left, i.e. matching the owner's counterclockwise orientation.
  for (const auto& [key, tris] : incident) {
    if (tris.size() != 1) continue;
    int t = tris[0];
    const auto& tri = m.triangles[t];
    BoundaryEdge be;
    be.owner = t;
    for (int k = 0; k < 3; ++k) {
      int i = tri[k], j = tri[(k + 1) % 3];
      if (std::min(i, j) == key[0] && std::max(i, j) == key[1]) {
        be.a = i;
        be.b = j;
      }
    }
    be.tag = tagger(m.edge_midpoint(be));
    m.boundary_edges.push_back(be);
  }

  m.h = 0.0;
  for (const auto& tri : m.triangles) {
    m.h = std::max({m.h, dist(m.nodes[tri[0]], m.nodes[tri[1]]), dist(m.nodes[tri[1]], m.nodes[tri[2]]),
                    dist(m.nodes[tri[0]], m.nodes[tri[2]])});
  }
  return m;
}

Mesh generate_structured_square(int n, Point2 corner_min, Point2 corner_max, const BoundaryTagger& tagger) {
  if (n < 1) throw MeshError("grid resolution must be >= 1");
  if (!(corner_min.x < corner_max.x) || !(corner_min.y < corner_max.y)) throw MeshError("degenerate rectangle");

  const double dx = (corner_max.x - corner_min.x) / n;
  const double dy = (corner_max.y - corner_min.y) / n;

  std::vector<Point2> nodes;
  nodes.reserve(static_cast<size_t>(n + 1) * (n + 1));
  for (int iy = 0; iy <= n; ++iy)
    for (int ix = 0; ix <= n; ++ix) nodes.push_back({corner_min.x + ix * dx, corner_min.y + iy * dy});

  auto id = [n](int ix, int iy) { return iy * (n + 1) + ix; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<size_t>(2) * n * n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      int a = id(ix, iy), b = id(ix + 1, iy), c = id(ix + 1, iy + 1), d = id(ix, iy + 1);
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  }
  return finalize_mesh(std::move(nodes), std::move(tris), tagger);
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Point2> nodes = mesh.nodes;
  nodes.reserve(nodes.size() + mesh.edges.size());
  const int nv = mesh.num_nodes();
  for (const auto& e : mesh.edges) {
    nodes.push_back({0.5 * (mesh.nodes[e[0]].x + mesh.nodes[e[1]].x), 0.5 * (mesh.nodes[e[0]].y + mesh.nodes[e[1]].y)});
  }

  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * mesh.triangles.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    int v0 = tri[0], v1 = tri[1], v2 = tri[2];
    int m12 = nv + mesh.triangle_edges[t][0];
    int m02 = nv + mesh.triangle_edges[t][1];
    int m01 = nv + mesh.triangle_edges[t][2];
    tris.push_back({v0, m01, m02});
    tris.push_back({v1, m12, m01});
    tris.push_back({v2, m02, m12});
    tris.push_back({m01, m12, m02});
  }

  // A child boundary edge joins a parent boundary node with the parent edge's
  // midpoint node, so it inherits the parent tag through the midpoint id.
  std::vector<BoundaryTag> edge_tag(mesh.edges.size(), BoundaryTag::Dirichlet);
  std::vector<bool> edge_on_boundary(mesh.edges.size(), false);
  for (const auto& be : mesh.boundary_edges) {
    auto key = std::array<int, 2>{std::min(be.a, be.b), std::max(be.a, be.b)};
    auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), key);
    int e = static_cast<int>(it - mesh.edges.begin());
    edge_tag[e] = be.tag;
    edge_on_boundary[e] = true;
  }
  auto tagger = [&](Point2) { return BoundaryTag::Dirichlet; };
  Mesh fine = finalize_mesh(std::move(nodes), std::move(tris), tagger);
  for (auto& be : fine.boundary_edges) {
    int mid = std::max(be.a, be.b);  // midpoint nodes have indices >= nv
    if (mid < nv) throw MeshError("refinement produced a boundary edge without a midpoint node");
    int parent_edge = mid - nv;
    if (!edge_on_boundary[parent_edge]) throw MeshError("refinement produced a boundary edge from an interior parent edge");
    be.tag = edge_tag[parent_edge];
  }
  return fine;
}

EdgeGeometry edge_geometry(const Mesh& mesh, int boundary_edge_index) {
  if (boundary_edge_index < 0 || boundary_edge_index >= static_cast<int>(mesh.boundary_edges.size()))
    throw MeshError("boundary edge index out of range");
  const BoundaryEdge& be = mesh.boundary_edges[boundary_edge_index];
  const Point2& pa = mesh.nodes[be.a];
  const Point2& pb = mesh.nodes[be.b];
  double dx = pb.x - pa.x, dy = pb.y - pa.y;
  double len = std::hypot(dx, dy);
  EdgeGeometry g;
  g.length = len;
  g.normal = {dy / len, -dx / len};
  g.tangent = {-g.normal[1], g.normal[0]};
  return g;
}

Mesh load_mesh(const std::string& text) {
  // Token stream with line tracking for error messages.
  struct Scanner {
    std::istringstream in;
    int line = 1;
    int token_line = 1;  // line where the most recent token started
    explicit Scanner(const std::string& s) : in(s) {}
    bool next(std::string& tok) {
      tok.clear();
      char c;
      while (in.get(c)) {
        if (c == '#') {
          while (in.get(c) && c != '\n') {
          }
          if (c == '\n') ++line;
          continue;
        }
        if (c == '\n') {
          ++line;
          continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        token_line = line;
        tok.push_back(c);
        while (in.get(c) && !std::isspace(static_cast<unsigned char>(c)) && c != '#') tok.push_back(c);
        if (c == '\n') ++line;
        if (c == '#') {
          while (in.get(c) && c != '\n') {
          }
          if (c == '\n') ++line;
        }
        return true;
      }
      token_line = line;
      return false;
    }
  };

  Scanner sc(text);
  auto fail = [&](const std::string& msg) -> void {
    throw MeshError("mesh parse error at line " + std::to_string(sc.token_line) + ": " + msg);
  };
  auto expect_keyword = [&](const char* kw) {
    std::string tok;
    if (!sc.next(tok) || tok != kw) fail(std::string("expected '") + kw + "'");
  };
  auto read_int = [&]() {
    std::string tok;
    if (!sc.next(tok)) fail("unexpected end of file");
    try {
      size_t pos = 0;
      int v = std::stoi(tok, &pos);
      if (pos != tok.size()) fail("invalid integer '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("invalid integer '" + tok + "'");
    }
    return 0;
  };
  auto read_double = [&]() {
    std::string tok;
    if (!sc.next(tok)) fail("unexpected end of file");
    try {
      size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) fail("invalid number '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("invalid number '" + tok + "'");
    }
    return 0.0;
  };

  expect_keyword("nodes");
  int nn = read_int();
  if (nn < 3) fail("need at least 3 nodes");
  std::vector<Point2> nodes(nn);
  for (auto& p : nodes) {
    p.x = read_double();
    p.y = read_double();
  }

  expect_keyword("triangles");
  int nt = read_int();
  if (nt < 1) fail("need at least 1 triangle");
  std::vector<std::array<int, 3>> tris(nt);
  for (auto& t : tris) t = {read_int(), read_int(), read_int()};

  expect_keyword("boundary");
  int nb = read_int();
  std::map<std::array<int, 2>, BoundaryTag> tags;
  for (int i = 0; i < nb; ++i) {
    int a = read_int();
    int b = read_int();
    std::string tok;
    if (!sc.next(tok)) fail("unexpected end of file");
    BoundaryTag tag;
    if (tok == "D")
      tag = BoundaryTag::Dirichlet;
    else if (tok == "N")
      tag = BoundaryTag::Navier;
    else {
      fail("invalid boundary tag '" + tok + "' (expected D or N)");
      return Mesh{};
    }
    if (!tags.emplace(std::array<int, 2>{std::min(a, b), std::max(a, b)}, tag).second) fail("duplicate boundary edge");
  }
  std::string extra;
  if (sc.next(extra)) fail("trailing content '" + extra + "'");

  bool missing_tag = false;
  Mesh m = finalize_mesh(std::move(nodes), std::move(tris), [&](Point2) { return BoundaryTag::Dirichlet; });
  for (auto& be : m.boundary_edges) {
    auto it = tags.find({std::min(be.a, be.b), std::max(be.a, be.b)});
    if (it == tags.end()) {
      missing_tag = true;
      continue;
    }
    be.tag = it->second;
    tags.erase(it);
  }
  if (missing_tag) throw MeshError("mesh topology error: untagged boundary edge");
  if (!tags.empty())
    throw MeshError("mesh topology error: tagged edge (" + std::to_string(tags.begin()->first[0]) + "," +
                    std::to_string(tags.begin()->first[1]) + ") is not a boundary edge");
  return m;
}

std::string serialize_mesh(const Mesh& mesh) {
  std::ostringstream out;
  out.precision(17);
  out << "nodes " << mesh.num_nodes() << "\n";
  for (const auto& p : mesh.nodes) out << p.x << " " << p.y << "\n";
  out << "triangles " << mesh.num_triangles() << "\n";
  for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "boundary " << mesh.boundary_edges.size() << "\n";
  for (const auto& be : mesh.boundary_edges)
    out << be.a << " " << be.b << " " << (be.tag == BoundaryTag::Dirichlet ? "D" : "N") << "\n";
  return out.str();
}

}  // namespace nsns
