#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "wgsd/mesh.hpp"
#include "wgsd/quadrature.hpp"

namespace wgsd {

/// Element-local scaled coordinates X = (x - center) / scale.
struct LocalFrame {
  Point2 center;
  double scale = 1.0;
  Point2 local(Point2 p) const { return {(p.x - center.x) / scale, (p.y - center.y) / scale}; }
};

/// Scaled monomials X^a Y^b, a + b <= degree, ordered by total degree.
class TriBasis {
 public:
  /// Any degree >= 0; used for both P_k and the P_{k-1} test spaces.
  explicit TriBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const std::vector<std::array<int, 2>>& exponents() const { return exponents_; }

  void eval(const LocalFrame& f, Point2 p, Eigen::Ref<Eigen::VectorXd> out) const;
  /// Physical-coordinate gradient.
  void eval_grad(const LocalFrame& f, Point2 p, Eigen::Ref<Eigen::VectorXd> dx,
                 Eigen::Ref<Eigen::VectorXd> dy) const;

 private:
  int degree_;
  std::vector<std::array<int, 2>> exponents_;
};

/// Legendre polynomials in 2s - 1 on the edge parameter s in [0, 1].
class EdgeBasis {
 public:
  explicit EdgeBasis(int degree);
  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  void eval(double s, Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  int degree_;
};

/// Raviart-Thomas space [P_k]^2 + (x - c) P~_k with P~_k homogeneous.
/// Ordering: (phi_i, 0), then (0, phi_i), then (X, Y) X^a Y^(k-a).
class RTBasis {
 public:
  explicit RTBasis(int degree);
  int degree() const { return degree_; }
  int size() const { return (degree_ + 1) * (degree_ + 3); }

  /// Column j holds the value of basis function j.
  void eval(const LocalFrame& f, Point2 p, Eigen::Ref<Eigen::Matrix2Xd> out) const;
  void divergence(const LocalFrame& f, Point2 p, Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  int degree_;
  TriBasis scalar_;
};

/// Discretization-degree factories; k < 1 is rejected.
TriBasis tri_basis(int k);
EdgeBasis edge_basis(int k);
RTBasis rt_basis(int k);

/// Gram matrix of `basis` on the triangle. Throws std::invalid_argument for
/// degenerate (non-positive area) triangles.
Eigen::MatrixXd mass_matrix(const TriBasis& basis, const LocalFrame& frame,
                            const std::array<Point2, 3>& vertices, const QuadRuleTri& rule);

/// Gram matrix of the edge basis on an edge of the given length.
Eigen::MatrixXd edge_mass_matrix(const EdgeBasis& basis, double length);

}  // namespace wgsd
