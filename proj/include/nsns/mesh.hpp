#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsns {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag { Dirichlet, Navier };

/// Predicate assigning a tag to a boundary edge, queried at the edge midpoint.
using BoundaryTagger = std::function<BoundaryTag(Point2)>;

struct BoundaryEdge {
  int a = -1;        // endpoints, directed so the owner triangle lies on the left
  int b = -1;
  int owner = -1;    // the unique triangle containing this edge
  BoundaryTag tag = BoundaryTag::Dirichlet;
};

struct EdgeGeometry {
  std::array<double, 2> normal;   // unit, outward from the owner triangle
  std::array<double, 2> tangent;  // normal rotated +90 degrees
  double length = 0.0;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conforming triangulation of a polygonal 2D domain. All triangles are stored
/// counterclockwise; every boundary edge carries a tag and knows its owner.
/// Immutable after construction.
struct Mesh {
  std::vector<Point2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  // Unique edges keyed by (min,max) node pair, sorted lexicographically so
  // edge numbering (and thus DOF numbering) is reproducible.
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> triangle_edges;  // local edge k is opposite vertex k

  double h = 0.0;  // max triangle diameter

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  double triangle_area(int t) const;
  Point2 edge_midpoint(const BoundaryEdge& e) const;
};

/// Validates invariants, fixes triangle orientation, builds edge connectivity
/// and boundary edges, tags them with `tagger`, and computes h.
Mesh finalize_mesh(std::vector<Point2> nodes, std::vector<std::array<int, 3>> triangles,
                   const BoundaryTagger& tagger);

/// Uniform n-by-n grid on the rectangle [corner_min, corner_max], each cell
/// split along its bottom-left to top-right diagonal.
Mesh generate_structured_square(int n, Point2 corner_min, Point2 corner_max,
                                const BoundaryTagger& tagger);

/// Splits every triangle into 4 congruent children via edge midpoints.
/// Boundary tags are inherited from the parent edges.
Mesh refine_uniform(const Mesh& mesh);

EdgeGeometry edge_geometry(const Mesh& mesh, int boundary_edge_index);

/// Parses the plain-text mesh format:
///   nodes <N>
///   x y            (N lines)
///   triangles <T>
///   i j k          (T lines, 0-based)
///   boundary <B>
///   i j tag        (B lines, tag in {D, N})
/// `#` starts a comment; tokens are whitespace-separated.
Mesh load_mesh(const std::string& text);

std::string serialize_mesh(const Mesh& mesh);

}  // namespace nsns
