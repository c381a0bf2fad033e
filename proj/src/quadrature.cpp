#include "wgsd/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wgsd {

namespace {

void check_degree(int d) {
  if (d < 0 || d > kMaxQuadratureDegree) {
    throw std::invalid_argument("unsupported quadrature degree " + std::to_string(d));
  }
}

}  // namespace

void gauss_legendre_unit(int npoints, std::vector<double>& nodes, std::vector<double>& weights) {
  if (npoints < 1) throw std::invalid_argument("Gauss-Legendre needs at least one point");
  nodes.assign(npoints, 0.0);
  weights.assign(npoints, 0.0);
  const int n = npoints;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1,1] -> [0,1]
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
}

QuadRuleEdge quad_edge(int d) {
  check_degree(d);
  QuadRuleEdge rule;
  rule.degree = d;
  gauss_legendre_unit(d / 2 + 1, rule.points, rule.weights);
  return rule;
}

QuadRuleTri quad_tri(int d) {
  check_degree(d);
  // Duffy collapse: (u, v) -> (x, y) = (u, v (1 - u)), dx dy = (1 - u) du dv.
  // The u-integrand has degree d + 1, the v-integrand degree d.
  std::vector<double> un, uw, vn, vw;
  gauss_legendre_unit((d + 1) / 2 + 1, un, uw);
  gauss_legendre_unit(d / 2 + 1, vn, vw);
  QuadRuleTri rule;
  rule.degree = d;
  for (std::size_t i = 0; i < un.size(); ++i) {
    for (std::size_t j = 0; j < vn.size(); ++j) {
      const double x = un[i];
      const double y = vn[j] * (1.0 - un[i]);
      rule.barycentric.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(uw[i] * vw[j] * (1.0 - un[i]));
    }
  }
  return rule;
}

const QuadRuleTri& cached_quad_tri(int d) {
  check_degree(d);
  static const std::vector<QuadRuleTri> rules = [] {
    std::vector<QuadRuleTri> r;
    for (int i = 0; i <= kMaxQuadratureDegree; ++i) r.push_back(quad_tri(i));
    return r;
  }();
  return rules[d];
}

const QuadRuleEdge& cached_quad_edge(int d) {
  check_degree(d);
  static const std::vector<QuadRuleEdge> rules = [] {
    std::vector<QuadRuleEdge> r;
    for (int i = 0; i <= kMaxQuadratureDegree; ++i) r.push_back(quad_edge(i));
    return r;
  }();
  return rules[d];
}

MappedPoints map_rule(const QuadRuleTri& rule, const std::array<Point2, 3>& v) {
  const double area = 0.5 * std::abs(cross(v[1] - v[0], v[2] - v[0]));
  MappedPoints out;
  out.points.reserve(rule.size());
  out.weights.reserve(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& l = rule.barycentric[q];
    out.points.push_back(l[0] * v[0] + l[1] * v[1] + l[2] * v[2]);
    out.weights.push_back(2.0 * area * rule.weights[q]);
  }
  return out;
}

MappedPoints map_rule(const QuadRuleEdge& rule, Point2 a, Point2 b) {
  const double len = norm(b - a);
  MappedPoints out;
  out.points.reserve(rule.size());
  out.weights.reserve(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    out.points.push_back(a + rule.points[q] * (b - a));
    out.weights.push_back(len * rule.weights[q]);
  }
  return out;
}

}  // namespace wgsd
