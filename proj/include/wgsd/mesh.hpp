#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace wgsd {

using Index = std::int64_t;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 a);

enum class Subdomain : std::uint8_t { Stokes, Darcy };

enum class EdgeClass : std::uint8_t {
  StokesInterior,
  StokesOuter,
  DarcyInterior,
  DarcyOuter,
  Interface,
};

const char* to_string(Subdomain s);
const char* to_string(EdgeClass c);

/// Thrown for inconsistent adjacency (edges with zero or more than two
/// triangles, mixed-subdomain interiors, missing interface).
class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triangle {
  std::array<Index, 3> vertex_ids{};  // counterclockwise
  Subdomain subdomain = Subdomain::Stokes;
  /// edge_ids[i] joins vertex_ids[i] and vertex_ids[(i + 1) % 3].
  std::array<Index, 3> edge_ids{};
};

struct Edge {
  /// Canonical order: vertex_ids[0] < vertex_ids[1]. Edge polynomials are
  /// parameterized from vertex_ids[0] to vertex_ids[1].
  std::array<Index, 2> vertex_ids{};
  EdgeClass cls = EdgeClass::StokesInterior;
  Index left_tri = -1;               // lower-index neighbour
  std::optional<Index> right_tri;    // absent on the outer boundary
  Point2 unit_normal;                // points from left_tri towards right_tri
};

struct Rect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

/// Two axis-aligned rectangles sharing one full side (the interface).
struct TwoDomainGeometry {
  Rect stokes;
  Rect darcy;
};

struct Segment {
  Point2 a, b;
};

/// Returns the shared side of the two rectangles, or throws
/// std::invalid_argument when they do not share a complete side.
Segment interface_segment(const TwoDomainGeometry& g);

class Mesh {
 public:
  /// Builds edges and adjacency from raw triangles and classifies them.
  /// Triangles with clockwise orientation are rejected.
  static Mesh from_triangles(std::vector<Point2> points, std::vector<Triangle> triangles,
                             int grid_parameter = 0);

  const std::vector<Point2>& points() const { return points_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }

  Index num_points() const { return static_cast<Index>(points_.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles_.size()); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }

  /// Maximum element diameter.
  double h() const { return h_; }
  int n() const { return n_; }

  Index count(EdgeClass c) const;
  Index count(Subdomain s) const;

 private:
  std::vector<Point2> points_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  double h_ = 0.0;
  int n_ = 0;
};

/// n x n cells per rectangle, each split by its positive-slope diagonal.
/// Vertices on the interface are shared between the two grids.
Mesh build_uniform_mesh(const TwoDomainGeometry& geometry, int n);

/// Recomputes the edge classes of a mesh from its adjacency. Throws
/// TopologyError if the mesh does not contain both subdomains or an edge
/// has an invalid number of neighbours.
std::vector<EdgeClass> classify_edges(const Mesh& mesh);

struct ElementGeometry {
  std::array<Point2, 3> vertices;
  Point2 centroid;
  double area = 0.0;
  double diameter = 0.0;
  std::array<double, 3> edge_lengths{};
  /// Outward normals of local edges as seen from this element.
  std::array<Point2, 3> outward_normals;
  /// outward_normals[i] == normal_sign[i] * stored edge normal.
  std::array<int, 3> normal_sign{};
  /// x = vertices[0] + jacobian * (xi, eta) maps the reference triangle.
  Eigen::Matrix2d jacobian;
};

ElementGeometry element_geometry(const Mesh& mesh, Index tri_id);

/// Plain-text dump: one record per line, "v", "t" and "e" prefixes.
void write_mesh(const Mesh& mesh, std::ostream& os);

}  // namespace wgsd
