#pragma once

#include <random>

#include "oracles.hpp"
#include "wgsd/weak_ops.hpp"

namespace wgsd::test {

inline oracle::Vec2 to_vec(Point2 p) { return {p.x, p.y}; }
inline Point2 to_point(const oracle::Vec2& v) { return {v.x(), v.y()}; }

/// Element with local edge i from vertex i to i+1, outward stored normals,
/// unless `flip[i]` reverses that edge's parameterization and normal.
inline LocalElement make_element(const std::array<Point2, 3>& v, std::array<TraceKind, 3> kinds = {},
                                 std::array<bool, 3> flip = {}) {
  LocalElement el;
  el.vertices = v;
  for (int i = 0; i < 3; ++i) {
    Point2 a = v[i], b = v[(i + 1) % 3];
    const Point2 t = b - a;
    Point2 n = (1.0 / norm(t)) * Point2{t.y, -t.x};
    if (flip[i]) {
      std::swap(a, b);
      n = -1.0 * n;
    }
    el.edges[i] = {a, b, n, kinds[i]};
  }
  return el;
}

inline LocalElement reference_element(std::array<TraceKind, 3> kinds = {}, std::array<bool, 3> flip = {}) {
  return make_element({Point2{0, 0}, Point2{1, 0}, Point2{0, 1}}, kinds, flip);
}

inline oracle::Element oracle_element(const ElementKernels& K) {
  oracle::Element T;
  for (int i = 0; i < 3; ++i) T.v[i] = to_vec(K.element.vertices[i]);
  return T;
}

/// Interprets a local DOF vector as evaluators on the oracle's edge
/// parameterization (vertex i to vertex i+1).
inline oracle::WeakFunction oracle_function(const ElementKernels& K, const Eigen::VectorXd& v) {
  oracle::WeakFunction w;
  w.interior = [&K, v](oracle::Vec2 x) {
    Eigen::Matrix2Xd vals(2, K.ndof());
    K.interior_values(to_point(x), vals);
    return oracle::Vec2(vals * v);
  };
  for (int e = 0; e < 3; ++e) {
    const bool same = K.element.edges[e].a == K.element.vertices[e];
    w.boundary[e] = [&K, v, e, same](double s) {
      Eigen::Matrix2Xd in(2, K.ndof()), bd(2, K.ndof());
      K.edge_traces(e, same ? s : 1.0 - s, in, bd);
      return oracle::Vec2(bd * v);
    };
  }
  return w;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

/// Uniformly distributed point inside a triangle.
inline Point2 random_point(const std::array<Point2, 3>& v, std::mt19937& gen) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double a = dist(gen), b = dist(gen);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  return v[0] + a * (v[1] - v[0]) + b * (v[2] - v[0]);
}

}  // namespace wgsd::test
