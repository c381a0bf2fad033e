#pragma once

#include <array>
#include <vector>

#include "wgsd/mesh.hpp"

namespace wgsd {

/// Rule on the reference triangle (0,0),(1,0),(0,1); weights sum to 1/2.
struct QuadRuleTri {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;
  int degree = 0;
  std::size_t size() const { return weights.size(); }
};

/// Rule on the unit interval s in [0,1]; weights sum to 1.
struct QuadRuleEdge {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureDegree = 40;

/// Collapsed Gauss-Legendre rule exact for total degree <= d.
/// Throws std::invalid_argument for d outside [0, kMaxQuadratureDegree].
QuadRuleTri quad_tri(int d);
QuadRuleEdge quad_edge(int d);

/// Shared immutable copies of the rules above, built once per process.
const QuadRuleTri& cached_quad_tri(int d);
const QuadRuleEdge& cached_quad_edge(int d);

/// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre_unit(int npoints, std::vector<double>& nodes, std::vector<double>& weights);

/// Physical points and weights of a triangle rule mapped to a triangle.
struct MappedPoints {
  std::vector<Point2> points;
  std::vector<double> weights;
};

MappedPoints map_rule(const QuadRuleTri& rule, const std::array<Point2, 3>& vertices);
MappedPoints map_rule(const QuadRuleEdge& rule, Point2 a, Point2 b);

}  // namespace wgsd
