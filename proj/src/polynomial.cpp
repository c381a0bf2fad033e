#include "wgsd/polynomial.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wgsd {

namespace {

// x^e for e >= 0.
double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

void require_wg_degree(int k) {
  if (k < 1) {
    throw std::invalid_argument("polynomial degree k must be >= 1, got " + std::to_string(k));
  }
}

}  // namespace

TriBasis::TriBasis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("negative polynomial degree");
  for (int d = 0; d <= degree; ++d) {
    for (int b = 0; b <= d; ++b) exponents_.push_back({d - b, b});
  }
}

void TriBasis::eval(const LocalFrame& f, Point2 p, Eigen::Ref<Eigen::VectorXd> out) const {
  const Point2 X = f.local(p);
  for (int i = 0; i < size(); ++i) {
    out[i] = ipow(X.x, exponents_[i][0]) * ipow(X.y, exponents_[i][1]);
  }
}

void TriBasis::eval_grad(const LocalFrame& f, Point2 p, Eigen::Ref<Eigen::VectorXd> dx,
                         Eigen::Ref<Eigen::VectorXd> dy) const {
  const Point2 X = f.local(p);
  const double inv = 1.0 / f.scale;
  for (int i = 0; i < size(); ++i) {
    const int a = exponents_[i][0];
    const int b = exponents_[i][1];
    dx[i] = a > 0 ? inv * a * ipow(X.x, a - 1) * ipow(X.y, b) : 0.0;
    dy[i] = b > 0 ? inv * b * ipow(X.x, a) * ipow(X.y, b - 1) : 0.0;
  }
}

EdgeBasis::EdgeBasis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("negative polynomial degree");
}

void EdgeBasis::eval(double s, Eigen::Ref<Eigen::VectorXd> out) const {
  const double t = 2.0 * s - 1.0;
  out[0] = 1.0;
  if (degree_ >= 1) out[1] = t;
  for (int j = 2; j <= degree_; ++j) {
    out[j] = ((2.0 * j - 1.0) * t * out[j - 1] - (j - 1.0) * out[j - 2]) / j;
  }
}

RTBasis::RTBasis(int degree) : degree_(degree), scalar_(degree) {
  require_wg_degree(degree);
}

void RTBasis::eval(const LocalFrame& f, Point2 p, Eigen::Ref<Eigen::Matrix2Xd> out) const {
  const int m = scalar_.size();
  Eigen::VectorXd phi(m);
  scalar_.eval(f, p, phi);
  out.setZero();
  for (int i = 0; i < m; ++i) {
    out(0, i) = phi[i];
    out(1, m + i) = phi[i];
  }
  const Point2 X = f.local(p);
  for (int a = 0; a <= degree_; ++a) {
    const double h = ipow(X.x, a) * ipow(X.y, degree_ - a);
    out(0, 2 * m + a) = X.x * h;
    out(1, 2 * m + a) = X.y * h;
  }
}

void RTBasis::divergence(const LocalFrame& f, Point2 p, Eigen::Ref<Eigen::VectorXd> out) const {
  const int m = scalar_.size();
  Eigen::VectorXd dx(m), dy(m);
  scalar_.eval_grad(f, p, dx, dy);
  for (int i = 0; i < m; ++i) {
    out[i] = dx[i];
    out[m + i] = dy[i];
  }
  // div((X, Y) h) = (2 + k) h / scale for h homogeneous of degree k.
  const Point2 X = f.local(p);
  for (int a = 0; a <= degree_; ++a) {
    out[2 * m + a] = (2.0 + degree_) * ipow(X.x, a) * ipow(X.y, degree_ - a) / f.scale;
  }
}

TriBasis tri_basis(int k) {
  require_wg_degree(k);
  return TriBasis(k);
}

EdgeBasis edge_basis(int k) {
  require_wg_degree(k);
  return EdgeBasis(k);
}

RTBasis rt_basis(int k) { return RTBasis(k); }

Eigen::MatrixXd mass_matrix(const TriBasis& basis, const LocalFrame& frame,
                            const std::array<Point2, 3>& vertices, const QuadRuleTri& rule) {
  const double signed_area = 0.5 * cross(vertices[1] - vertices[0], vertices[2] - vertices[0]);
  if (!(signed_area > 0.0)) {
    throw std::invalid_argument("mass matrix requested on a degenerate triangle");
  }
  const MappedPoints q = map_rule(rule, vertices);
  const int n = basis.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd phi(n);
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    basis.eval(frame, q.points[i], phi);
    M.noalias() += q.weights[i] * phi * phi.transpose();
  }
  return M;
}

Eigen::MatrixXd edge_mass_matrix(const EdgeBasis& basis, double length) {
  // Legendre polynomials on [0,1]: int P_i P_j ds = delta_ij / (2 i + 1).
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (int i = 0; i < basis.size(); ++i) M(i, i) = length / (2.0 * i + 1.0);
  return M;
}

}  // namespace wgsd
