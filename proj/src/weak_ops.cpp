#include "wgsd/weak_ops.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace wgsd {

namespace {

int kernel_quad_degree(int k) { return 2 * k + 2; }

LocalLayout make_layout(const LocalElement& el, int k) {
  LocalLayout L;
  L.degree = k;
  L.scalar_dim = (k + 1) * (k + 2) / 2;
  L.interior = 2 * L.scalar_dim;
  int offset = L.interior;
  for (int e = 0; e < 3; ++e) {
    L.edge_offset[e] = offset;
    L.edge_width[e] = trace_width(el.edges[e].kind, k);
    offset += L.edge_width[e];
  }
  L.size = offset;
  return L;
}

double diameter_of(const std::array<Point2, 3>& v) {
  return std::max({norm(v[1] - v[0]), norm(v[2] - v[1]), norm(v[0] - v[2])});
}

}  // namespace

LocalElement LocalElement::from_mesh(const Mesh& mesh, Index tri_id) {
  const Triangle& t = mesh.triangles().at(tri_id);
  LocalElement el;
  for (int i = 0; i < 3; ++i) el.vertices[i] = mesh.points()[t.vertex_ids[i]];
  for (int i = 0; i < 3; ++i) {
    const Edge& e = mesh.edges()[t.edge_ids[i]];
    LocalEdge& le = el.edges[i];
    le.a = mesh.points()[e.vertex_ids[0]];
    le.b = mesh.points()[e.vertex_ids[1]];
    le.normal = e.unit_normal;
    const bool darcy_side = t.subdomain == Subdomain::Darcy && e.cls != EdgeClass::Interface;
    le.kind = darcy_side ? TraceKind::ScalarNormal : TraceKind::Vector;
  }
  return el;
}

ElementKernels::ElementKernels(const LocalElement& el, int k)
    : element(el),
      layout(make_layout(el, k)),
      basis(tri_basis(k)),
      lower_basis(k - 1),
      edge_basis(k),
      rt(k) {
  const auto& v = element.vertices;
  area = 0.5 * cross(v[1] - v[0], v[2] - v[0]);
  if (!(area > 0.0)) throw std::invalid_argument("element is degenerate or clockwise");
  diameter = diameter_of(v);
  frame = {(1.0 / 3.0) * (v[0] + v[1] + v[2]), diameter};
  for (int e = 0; e < 3; ++e) {
    const Point2 d = v[(e + 1) % 3] - v[e];
    const double len = norm(d);
    outward_normals[e] = {d.y / len, -d.x / len};
  }

  const int m = layout.scalar_dim;
  const int m1 = lower_basis.size();
  const int nrt = rt.size();
  const int nd = layout.size;
  const int qd = kernel_quad_degree(k);

  const QuadRuleTri& tri_rule = cached_quad_tri(qd);
  const QuadRuleEdge& edge_rule = cached_quad_edge(qd);
  mass = mass_matrix(basis, frame, v, tri_rule);
  mass_lower = mass_matrix(lower_basis, frame, v, tri_rule);

  // Right-hand sides of the three moment systems.
  Eigen::MatrixXd grad_rhs = Eigen::MatrixXd::Zero(4 * m1, nd);
  Eigen::MatrixXd div_rhs = Eigen::MatrixXd::Zero(m, nd);
  Eigen::MatrixXd rt_matrix = Eigen::MatrixXd::Zero(nrt, nrt);
  Eigen::MatrixXd rt_rhs = Eigen::MatrixXd::Zero(nrt, nd);

  Eigen::VectorXd phi(m), dphi_x(m), dphi_y(m), psi(m1), dpsi_x(m1), dpsi_y(m1);
  Eigen::Matrix2Xd rt_val(2, nrt);

  const MappedPoints tq = map_rule(tri_rule, v);
  for (std::size_t q = 0; q < tq.points.size(); ++q) {
    const Point2 x = tq.points[q];
    const double w = tq.weights[q];
    basis.eval(frame, x, phi);
    basis.eval_grad(frame, x, dphi_x, dphi_y);
    lower_basis.eval(frame, x, psi);
    lower_basis.eval_grad(frame, x, dpsi_x, dpsi_y);
    rt.eval(frame, x, rt_val);
    for (int i = 0; i < 2; ++i) {
      // -(v0_i, d_j psi)
      grad_rhs.block((2 * i + 0) * m1, i * m, m1, m).noalias() -= w * dpsi_x * phi.transpose();
      grad_rhs.block((2 * i + 1) * m1, i * m, m1, m).noalias() -= w * dpsi_y * phi.transpose();
    }
    // -(v0, grad phi)
    div_rhs.block(0, 0, m, m).noalias() -= w * dphi_x * phi.transpose();
    div_rhs.block(0, m, m, m).noalias() -= w * dphi_y * phi.transpose();
    // interior moments of R_T against [P_{k-1}]^2
    rt_matrix.block(0, 0, m1, nrt).noalias() += w * psi * rt_val.row(0);
    rt_matrix.block(m1, 0, m1, nrt).noalias() += w * psi * rt_val.row(1);
    rt_rhs.block(0, 0, m1, m).noalias() += w * psi * phi.transpose();
    rt_rhs.block(m1, m, m1, m).noalias() += w * psi * phi.transpose();
  }

  stab_vector = Eigen::MatrixXd::Zero(nd, nd);
  stab_normal = Eigen::MatrixXd::Zero(nd, nd);
  Eigen::Matrix2Xd t0(2, nd), tb(2, nd);
  Eigen::VectorXd chi(k + 1);
  for (int e = 0; e < 3; ++e) {
    const LocalEdge& edge = element.edges[e];
    const Point2 n = outward_normals[e];
    const double len = norm(edge.b - edge.a);
    const int row0 = 2 * m1 + e * (k + 1);
    for (std::size_t q = 0; q < edge_rule.size(); ++q) {
      const double s = edge_rule.points[q];
      const double w = edge_rule.weights[q] * len;
      const Point2 x = edge.a + s * (edge.b - edge.a);
      edge_traces(e, s, t0, tb);
      lower_basis.eval(frame, x, psi);
      basis.eval(frame, x, phi);
      edge_basis.eval(s, chi);
      rt.eval(frame, x, rt_val);
      for (int i = 0; i < 2; ++i) {
        // <vb_i, psi n_j>
        grad_rhs.middleRows((2 * i + 0) * m1, m1).noalias() += (w * n.x) * psi * tb.row(i);
        grad_rhs.middleRows((2 * i + 1) * m1, m1).noalias() += (w * n.y) * psi * tb.row(i);
      }
      const Eigen::RowVectorXd vb_n = n.x * tb.row(0) + n.y * tb.row(1);
      div_rhs.noalias() += w * phi * vb_n;
      const Eigen::RowVectorXd rt_n = n.x * rt_val.row(0) + n.y * rt_val.row(1);
      rt_matrix.middleRows(row0, k + 1).noalias() += w * chi * rt_n;
      rt_rhs.middleRows(row0, k + 1).noalias() += w * chi * vb_n;

      const Eigen::Matrix2Xd jump = t0 - tb;
      stab_vector.noalias() += (w / diameter) * jump.transpose() * jump;
      const Eigen::RowVectorXd jump_n = n.x * jump.row(0) + n.y * jump.row(1);
      stab_normal.noalias() += (w / diameter) * jump_n.transpose() * jump_n;
    }
  }

  const Eigen::LLT<Eigen::MatrixXd> lower_llt(mass_lower);
  const Eigen::LLT<Eigen::MatrixXd> mass_llt(mass);
  gradient.resize(4 * m1, nd);
  for (int b = 0; b < 4; ++b) {
    gradient.middleRows(b * m1, m1) = lower_llt.solve(grad_rhs.middleRows(b * m1, m1));
  }
  divergence = mass_llt.solve(div_rhs);
  div_moments = div_rhs;

  symmetrizer = Eigen::MatrixXd::Zero(4 * m1, 4 * m1);
  const Eigen::MatrixXd half = 0.5 * Eigen::MatrixXd::Identity(m1, m1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      symmetrizer.block((2 * i + j) * m1, (2 * i + j) * m1, m1, m1) += half;
      symmetrizer.block((2 * i + j) * m1, (2 * j + i) * m1, m1, m1) += half;
    }
  }
  strain = symmetrizer * gradient;
  strain_gram = Eigen::MatrixXd::Zero(nd, nd);
  for (int b = 0; b < 4; ++b) {
    const auto block = strain.middleRows(b * m1, m1);
    strain_gram.noalias() += block.transpose() * mass_lower * block;
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> rt_lu(rt_matrix);
  if (!rt_lu.isInvertible()) {
    throw SingularMomentSystem("reconstruction moment matrix is singular (rank " +
                               std::to_string(rt_lu.rank()) + " of " + std::to_string(nrt) + ")");
  }
  reconstruction = rt_lu.solve(rt_rhs);
}

void ElementKernels::edge_traces(int e, double s, Eigen::Ref<Eigen::Matrix2Xd> interior,
                                 Eigen::Ref<Eigen::Matrix2Xd> boundary) const {
  const LocalEdge& edge = element.edges[e];
  const Point2 x = edge.a + s * (edge.b - edge.a);
  interior_values(x, interior);
  boundary.setZero();
  const int k = layout.degree;
  Eigen::VectorXd chi(k + 1);
  edge_basis.eval(s, chi);
  const int off = layout.edge_offset[e];
  if (edge.kind == TraceKind::Vector) {
    boundary.block(0, off, 1, k + 1) = chi.transpose();
    boundary.block(1, off + k + 1, 1, k + 1) = chi.transpose();
  } else {
    boundary.block(0, off, 1, k + 1) = edge.normal.x * chi.transpose();
    boundary.block(1, off, 1, k + 1) = edge.normal.y * chi.transpose();
  }
}

void ElementKernels::interior_values(Point2 p, Eigen::Ref<Eigen::Matrix2Xd> out) const {
  const int m = layout.scalar_dim;
  Eigen::VectorXd phi(m);
  basis.eval(frame, p, phi);
  out.setZero();
  out.block(0, 0, 1, m) = phi.transpose();
  out.block(1, m, 1, m) = phi.transpose();
}

Eigen::MatrixXd ElementKernels::interior_mass(const Mat2& weight) const {
  const int m = layout.scalar_dim;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(layout.size, layout.size);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) M.block(i * m, j * m, m, m) = weight(i, j) * mass;
  }
  return M;
}

Eigen::VectorXd weak_gradient(const ElementKernels& K, const Eigen::VectorXd& v) {
  return K.gradient * v;
}

Eigen::VectorXd weak_divergence(const ElementKernels& K, const Eigen::VectorXd& v) {
  return K.divergence * v;
}

Eigen::VectorXd weak_strain(const ElementKernels& K, const Eigen::VectorXd& v) {
  return K.strain * v;
}

Eigen::VectorXd rt_reconstruct(const ElementKernels& K, const Eigen::VectorXd& v) {
  return K.reconstruction * v;
}

Mat2 eval_tensor(const ElementKernels& K, const Eigen::VectorXd& c, Point2 p) {
  const int m1 = K.lower_basis.size();
  Eigen::VectorXd psi(m1);
  K.lower_basis.eval(K.frame, p, psi);
  Mat2 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out(i, j) = psi.dot(c.segment((2 * i + j) * m1, m1));
  }
  return out;
}

Vec2 eval_rt(const ElementKernels& K, const Eigen::VectorXd& c, Point2 p) {
  Eigen::Matrix2Xd val(2, K.rt.size());
  K.rt.eval(K.frame, p, val);
  return val * c;
}

double eval_rt_divergence(const ElementKernels& K, const Eigen::VectorXd& c, Point2 p) {
  Eigen::VectorXd div(K.rt.size());
  K.rt.divergence(K.frame, p, div);
  return div.dot(c);
}

double eval_scalar(const ElementKernels& K, const Eigen::VectorXd& c, Point2 p) {
  Eigen::VectorXd phi(K.basis.size());
  K.basis.eval(K.frame, p, phi);
  return phi.dot(c);
}

Eigen::VectorXd project_q0(const ElementKernels& K, const VectorField& f, int quad_degree) {
  const int m = K.layout.scalar_dim;
  const MappedPoints q = map_rule(cached_quad_tri(quad_degree), K.element.vertices);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * m);
  Eigen::VectorXd phi(m);
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    K.basis.eval(K.frame, q.points[i], phi);
    const Vec2 val = f(q.points[i]);
    rhs.head(m) += q.weights[i] * val.x() * phi;
    rhs.tail(m) += q.weights[i] * val.y() * phi;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(K.mass);
  Eigen::VectorXd out(2 * m);
  out.head(m) = llt.solve(rhs.head(m));
  out.tail(m) = llt.solve(rhs.tail(m));
  return out;
}

Eigen::VectorXd project_pressure(const ElementKernels& K, const ScalarField& f, int quad_degree) {
  const int m = K.layout.scalar_dim;
  const MappedPoints q = map_rule(cached_quad_tri(quad_degree), K.element.vertices);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd phi(m);
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    K.basis.eval(K.frame, q.points[i], phi);
    rhs += q.weights[i] * f(q.points[i]) * phi;
  }
  return K.mass.llt().solve(rhs);
}

Eigen::VectorXd project_tensor(const ElementKernels& K, const TensorField& f, int quad_degree) {
  const int m1 = K.lower_basis.size();
  const MappedPoints q = map_rule(cached_quad_tri(quad_degree), K.element.vertices);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(4 * m1);
  Eigen::VectorXd psi(m1);
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    K.lower_basis.eval(K.frame, q.points[i], psi);
    const Mat2 val = f(q.points[i]);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) rhs.segment((2 * a + b) * m1, m1) += q.weights[i] * val(a, b) * psi;
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(K.mass_lower);
  Eigen::VectorXd out(4 * m1);
  for (int b = 0; b < 4; ++b) out.segment(b * m1, m1) = llt.solve(rhs.segment(b * m1, m1));
  return out;
}

Eigen::VectorXd project_qb(const LocalEdge& edge, int k, const VectorField& f, int quad_degree) {
  const EdgeBasis eb(k);
  const QuadRuleEdge& rule = cached_quad_edge(quad_degree);
  Eigen::VectorXd chi(k + 1);
  Eigen::VectorXd rx = Eigen::VectorXd::Zero(k + 1), ry = Eigen::VectorXd::Zero(k + 1);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double s = rule.points[q];
    const Vec2 val = f(edge.a + s * (edge.b - edge.a));
    eb.eval(s, chi);
    rx += rule.weights[q] * val.x() * chi;
    ry += rule.weights[q] * val.y() * chi;
  }
  // Legendre Gram on the unit parameter is diag(1 / (2 i + 1)); the length cancels.
  for (int i = 0; i <= k; ++i) {
    rx[i] *= 2.0 * i + 1.0;
    ry[i] *= 2.0 * i + 1.0;
  }
  if (edge.kind == TraceKind::Vector) {
    Eigen::VectorXd out(2 * (k + 1));
    out << rx, ry;
    return out;
  }
  return edge.normal.x * rx + edge.normal.y * ry;
}

Eigen::VectorXd project_weak(const ElementKernels& K, const VectorField& f, int quad_degree) {
  Eigen::VectorXd out(K.ndof());
  out.head(K.layout.interior) = project_q0(K, f, quad_degree);
  for (int e = 0; e < 3; ++e) {
    out.segment(K.layout.edge_offset[e], K.layout.edge_width[e]) =
        project_qb(K.element.edges[e], K.degree(), f, quad_degree);
  }
  return out;
}

}  // namespace wgsd
