#include "wgsd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <utility>

namespace wgsd {

double norm(Point2 a) { return std::hypot(a.x, a.y); }

const char* to_string(Subdomain s) {
  return s == Subdomain::Stokes ? "stokes" : "darcy";
}

const char* to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::StokesInterior: return "stokes_interior";
    case EdgeClass::StokesOuter: return "stokes_outer";
    case EdgeClass::DarcyInterior: return "darcy_interior";
    case EdgeClass::DarcyOuter: return "darcy_outer";
    case EdgeClass::Interface: return "interface";
  }
  return "unknown";
}

namespace {

bool same(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_rect(const Rect& r, const char* what) {
  if (!(r.x1 > r.x0) || !(r.y1 > r.y0) || !std::isfinite(r.area())) {
    throw std::invalid_argument(std::string(what) + " rectangle is empty or not finite");
  }
}

enum class Side { DarcyBelow, DarcyAbove, DarcyLeft, DarcyRight };

Side shared_side(const TwoDomainGeometry& g) {
  check_rect(g.stokes, "stokes");
  check_rect(g.darcy, "darcy");
  const Rect& s = g.stokes;
  const Rect& d = g.darcy;
  const bool same_x = same(s.x0, d.x0) && same(s.x1, d.x1);
  const bool same_y = same(s.y0, d.y0) && same(s.y1, d.y1);
  if (same_x && same(d.y1, s.y0)) return Side::DarcyBelow;
  if (same_x && same(d.y0, s.y1)) return Side::DarcyAbove;
  if (same_y && same(d.x1, s.x0)) return Side::DarcyLeft;
  if (same_y && same(d.x0, s.x1)) return Side::DarcyRight;
  throw std::invalid_argument("stokes and darcy rectangles do not share a full common edge");
}

EdgeClass class_from_neighbours(Subdomain a, std::optional<Subdomain> b) {
  if (!b) return a == Subdomain::Stokes ? EdgeClass::StokesOuter : EdgeClass::DarcyOuter;
  if (a != *b) return EdgeClass::Interface;
  return a == Subdomain::Stokes ? EdgeClass::StokesInterior : EdgeClass::DarcyInterior;
}

}  // namespace

Segment interface_segment(const TwoDomainGeometry& g) {
  const Rect& s = g.stokes;
  switch (shared_side(g)) {
    case Side::DarcyBelow: return {{s.x0, s.y0}, {s.x1, s.y0}};
    case Side::DarcyAbove: return {{s.x0, s.y1}, {s.x1, s.y1}};
    case Side::DarcyLeft: return {{s.x0, s.y0}, {s.x0, s.y1}};
    case Side::DarcyRight: return {{s.x1, s.y0}, {s.x1, s.y1}};
  }
  throw std::logic_error("unreachable");
}

Index Mesh::count(EdgeClass c) const {
  return std::count_if(edges_.begin(), edges_.end(), [c](const Edge& e) { return e.cls == c; });
}

Index Mesh::count(Subdomain s) const {
  return std::count_if(triangles_.begin(), triangles_.end(),
                       [s](const Triangle& t) { return t.subdomain == s; });
}

Mesh Mesh::from_triangles(std::vector<Point2> points, std::vector<Triangle> triangles,
                          int grid_parameter) {
  Mesh m;
  m.points_ = std::move(points);
  m.triangles_ = std::move(triangles);
  m.n_ = grid_parameter;

  for (const Point2& p : m.points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("mesh point with non-finite coordinate");
    }
  }

  std::map<std::pair<Index, Index>, Index> lookup;
  std::vector<std::vector<Index>> neighbours;
  const Index np = m.num_points();
  for (Index t = 0; t < m.num_triangles(); ++t) {
    Triangle& tri = m.triangles_[t];
    for (Index v : tri.vertex_ids) {
      if (v < 0 || v >= np) throw std::invalid_argument("triangle vertex index out of range");
    }
    const Point2 a = m.points_[tri.vertex_ids[0]];
    const Point2 b = m.points_[tri.vertex_ids[1]];
    const Point2 c = m.points_[tri.vertex_ids[2]];
    if (!(cross(b - a, c - a) > 0.0)) {
      throw std::invalid_argument("triangle " + std::to_string(t) +
                                  " is degenerate or clockwise");
    }
    for (int i = 0; i < 3; ++i) {
      Index va = tri.vertex_ids[i];
      Index vb = tri.vertex_ids[(i + 1) % 3];
      auto key = std::minmax(va, vb);
      auto [it, inserted] = lookup.try_emplace({key.first, key.second}, m.num_edges());
      if (inserted) {
        Edge e;
        e.vertex_ids = {key.first, key.second};
        e.left_tri = t;
        const Point2 d = m.points_[vb] - m.points_[va];
        const double len = norm(d);
        e.unit_normal = {d.y / len, -d.x / len};
        m.edges_.push_back(e);
        neighbours.emplace_back();
      }
      neighbours[it->second].push_back(t);
      tri.edge_ids[i] = it->second;
    }
    m.h_ = std::max({m.h_, norm(b - a), norm(c - b), norm(a - c)});
  }

  for (Index e = 0; e < m.num_edges(); ++e) {
    const auto& nb = neighbours[e];
    if (nb.empty() || nb.size() > 2) {
      throw TopologyError("edge " + std::to_string(e) + " has " + std::to_string(nb.size()) +
                          " adjacent triangles");
    }
    if (nb.size() == 2) m.edges_[e].right_tri = nb[1];
  }

  const auto classes = classify_edges(m);
  for (Index e = 0; e < m.num_edges(); ++e) m.edges_[e].cls = classes[e];
  return m;
}

std::vector<EdgeClass> classify_edges(const Mesh& mesh) {
  if (mesh.count(Subdomain::Stokes) == 0 || mesh.count(Subdomain::Darcy) == 0) {
    throw TopologyError("mesh must contain both a Stokes and a Darcy subdomain");
  }
  std::vector<Index> adjacency(mesh.edges().size(), 0);
  for (const Triangle& t : mesh.triangles()) {
    for (Index e : t.edge_ids) ++adjacency[e];
  }
  std::vector<EdgeClass> out;
  out.reserve(mesh.edges().size());
  Index interface_count = 0;
  for (std::size_t e = 0; e < mesh.edges().size(); ++e) {
    const Edge& edge = mesh.edges()[e];
    const Index expected = edge.right_tri ? 2 : 1;
    if (adjacency[e] != expected || edge.left_tri < 0) {
      throw TopologyError("edge " + std::to_string(e) + " has inconsistent adjacency");
    }
    const Subdomain left = mesh.triangles()[edge.left_tri].subdomain;
    std::optional<Subdomain> right;
    if (edge.right_tri) right = mesh.triangles()[*edge.right_tri].subdomain;
    out.push_back(class_from_neighbours(left, right));
    if (out.back() == EdgeClass::Interface) ++interface_count;
  }
  if (interface_count == 0) throw TopologyError("mesh has no interface edges");
  return out;
}

Mesh build_uniform_mesh(const TwoDomainGeometry& geometry, int n) {
  if (n < 1) throw std::invalid_argument("grid parameter n must be >= 1");
  const Side side = shared_side(geometry);
  const Index m = n + 1;

  std::vector<Point2> points;
  points.reserve(2 * m * m);
  auto grid_point = [n](const Rect& r, Index i, Index j) {
    return Point2{r.x0 + (r.x1 - r.x0) * static_cast<double>(i) / n,
                  r.y0 + (r.y1 - r.y0) * static_cast<double>(j) / n};
  };

  std::vector<Index> stokes_ids(m * m), darcy_ids(m * m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      stokes_ids[j * m + i] = static_cast<Index>(points.size());
      points.push_back(grid_point(geometry.stokes, i, j));
    }
  }
  auto shared_with_stokes = [&](Index i, Index j) -> std::optional<Index> {
    switch (side) {
      case Side::DarcyBelow: if (j == n) return stokes_ids[i]; break;
      case Side::DarcyAbove: if (j == 0) return stokes_ids[n * m + i]; break;
      case Side::DarcyLeft: if (i == n) return stokes_ids[j * m]; break;
      case Side::DarcyRight: if (i == 0) return stokes_ids[j * m + n]; break;
    }
    return std::nullopt;
  };
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      if (auto s = shared_with_stokes(i, j)) {
        darcy_ids[j * m + i] = *s;
      } else {
        darcy_ids[j * m + i] = static_cast<Index>(points.size());
        points.push_back(grid_point(geometry.darcy, i, j));
      }
    }
  }

  std::vector<Triangle> triangles;
  triangles.reserve(4 * n * n);
  auto split_cells = [&](const std::vector<Index>& ids, Subdomain tag) {
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        const Index p00 = ids[j * m + i], p10 = ids[j * m + i + 1];
        const Index p01 = ids[(j + 1) * m + i], p11 = ids[(j + 1) * m + i + 1];
        triangles.push_back({{p00, p10, p11}, tag, {}});
        triangles.push_back({{p00, p11, p01}, tag, {}});
      }
    }
  };
  split_cells(stokes_ids, Subdomain::Stokes);
  split_cells(darcy_ids, Subdomain::Darcy);

  return Mesh::from_triangles(std::move(points), std::move(triangles), n);
}

ElementGeometry element_geometry(const Mesh& mesh, Index tri_id) {
  if (tri_id < 0 || tri_id >= mesh.num_triangles()) {
    throw std::out_of_range("triangle index out of range");
  }
  const Triangle& t = mesh.triangles()[tri_id];
  ElementGeometry g;
  for (int i = 0; i < 3; ++i) g.vertices[i] = mesh.points()[t.vertex_ids[i]];
  const Point2 e1 = g.vertices[1] - g.vertices[0];
  const Point2 e2 = g.vertices[2] - g.vertices[0];
  g.area = 0.5 * cross(e1, e2);
  g.centroid = (1.0 / 3.0) * (g.vertices[0] + g.vertices[1] + g.vertices[2]);
  g.jacobian << e1.x, e2.x, e1.y, e2.y;
  for (int i = 0; i < 3; ++i) {
    const Point2 d = g.vertices[(i + 1) % 3] - g.vertices[i];
    const double len = norm(d);
    g.edge_lengths[i] = len;
    g.outward_normals[i] = {d.y / len, -d.x / len};
    const Point2 stored = mesh.edges()[t.edge_ids[i]].unit_normal;
    g.normal_sign[i] = dot(stored, g.outward_normals[i]) > 0.0 ? 1 : -1;
  }
  g.diameter = *std::max_element(g.edge_lengths.begin(), g.edge_lengths.end());
  return g;
}

void write_mesh(const Mesh& mesh, std::ostream& os) {
  const auto old_precision = os.precision(17);
  os << "# points " << mesh.num_points() << " triangles " << mesh.num_triangles() << " edges "
     << mesh.num_edges() << '\n';
  for (const Point2& p : mesh.points()) os << "v " << p.x << ' ' << p.y << '\n';
  for (const Triangle& t : mesh.triangles()) {
    os << "t " << t.vertex_ids[0] << ' ' << t.vertex_ids[1] << ' ' << t.vertex_ids[2] << ' '
       << to_string(t.subdomain) << '\n';
  }
  for (const Edge& e : mesh.edges()) {
    os << "e " << e.vertex_ids[0] << ' ' << e.vertex_ids[1] << ' ' << to_string(e.cls) << '\n';
  }
  os.precision(old_precision);
}

}  // namespace wgsd
