#include "wgsd/system.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include "wgsd/quadrature.hpp"

namespace wgsd {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

bool is_vector_edge(EdgeClass c) {
  return c == EdgeClass::StokesInterior || c == EdgeClass::StokesOuter || c == EdgeClass::Interface;
}

bool is_outer(EdgeClass c) { return c == EdgeClass::StokesOuter || c == EdgeClass::DarcyOuter; }

Point2 tangent_of(const Edge& e) { return {-e.unit_normal.y, e.unit_normal.x}; }

void scatter(Triplets& out, const std::vector<Index>& rows, const std::vector<Index>& cols,
             const Eigen::MatrixXd& local) {
  for (Eigen::Index j = 0; j < local.cols(); ++j) {
    for (Eigen::Index i = 0; i < local.rows(); ++i) {
      if (local(i, j) != 0.0) out.emplace_back(rows[i], cols[j], local(i, j));
    }
  }
}

std::vector<Index> contiguous(Index first, Index count) {
  std::vector<Index> out(count);
  for (Index i = 0; i < count; ++i) out[i] = first + i;
  return out;
}

LocalEdge local_edge_of(const Mesh& mesh, Index edge_id) {
  const Edge& e = mesh.edges()[edge_id];
  LocalEdge le;
  le.a = mesh.points()[e.vertex_ids[0]];
  le.b = mesh.points()[e.vertex_ids[1]];
  le.normal = e.unit_normal;
  le.kind = is_vector_edge(e.cls) ? TraceKind::Vector : TraceKind::ScalarNormal;
  return le;
}

void add_a_s_triplets(const Discretization& disc, const PhysicalParams& params, Triplets& t) {
  const Mesh& mesh = disc.mesh();
  for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
    const auto& dofs = disc.velocity_dofs(tri);
    scatter(t, dofs, dofs, local_a_s(disc.kernels(tri), mesh.triangles()[tri].subdomain, params));
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    if (edge.cls != EdgeClass::Interface) continue;
    const double coef = params.alpha * params.mu * params.tangential_resistance(tangent_of(edge));
    const auto dofs = contiguous(disc.dofs().edge_offset(e), disc.dofs().edge_width(e));
    scatter(t, dofs, dofs, interface_slip_matrix(mesh, e, disc.degree(), coef));
  }
}

void add_b_triplets(const Discretization& disc, Triplets& t, bool with_transpose) {
  const Mesh& mesh = disc.mesh();
  const int m = disc.dofs().scalar_dim();
  for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
    const Eigen::MatrixXd local = -disc.kernels(tri).div_moments;
    const auto rows = contiguous(disc.dofs().pressure_offset(tri), m);
    const auto& cols = disc.velocity_dofs(tri);
    scatter(t, rows, cols, local);
    if (with_transpose) scatter(t, cols, rows, local.transpose());
  }
}

}  // namespace

const char* to_string(Algorithm a) { return a == Algorithm::Robust ? "robust" : "standard"; }

Algorithm parse_algorithm(const std::string& name) {
  if (name == "robust") return Algorithm::Robust;
  if (name == "standard") return Algorithm::Standard;
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected robust or standard)");
}

PhysicalParams PhysicalParams::isotropic(double mu, double kappa, double alpha) {
  PhysicalParams p;
  p.mu = mu;
  p.kappa = kappa * Mat2::Identity();
  p.alpha = alpha;
  return p;
}

void PhysicalParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("viscosity mu must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("slip coefficient alpha must be nonnegative");
  }
  if (!kappa.allFinite() || std::abs(kappa(0, 1) - kappa(1, 0)) > 1e-14 * kappa.norm()) {
    throw std::invalid_argument("permeability kappa must be symmetric");
  }
  if (!(kappa(0, 0) > 0.0) || !(kappa.determinant() > 0.0)) {
    throw std::invalid_argument("permeability kappa must be positive definite");
  }
}

double PhysicalParams::tangential_resistance(Point2 t) const {
  const Vec2 tv(t.x, t.y);
  return 1.0 / std::sqrt(tv.dot(kappa * tv));
}

DofMap::DofMap(const Mesh& mesh, int k) : k_(k), m_((k + 1) * (k + 2) / 2) {
  if (k < 1) throw std::invalid_argument("polynomial degree k must be >= 1");
  Index offset = mesh.num_triangles() * 2 * m_;
  edge_offset_.resize(mesh.num_edges());
  edge_width_.resize(mesh.num_edges());
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    edge_offset_[e] = offset;
    edge_width_[e] = is_vector_edge(mesh.edges()[e].cls) ? 2 * (k + 1) : k + 1;
    offset += edge_width_[e];
  }
  num_velocity_ = offset;
  num_pressure_ = mesh.num_triangles() * m_;
  constrained_.assign(num_velocity_, false);
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (!is_outer(mesh.edges()[e].cls)) continue;
    for (int i = 0; i < edge_width_[e]; ++i) constrained_[edge_offset_[e] + i] = true;
    num_constrained_ += edge_width_[e];
  }
}

Discretization::Discretization(Mesh mesh, int k) : mesh_(std::move(mesh)), k_(k), dofs_(mesh_, k) {
  const Index nt = mesh_.num_triangles();
  kernels_.reserve(nt);
  velocity_dofs_.resize(nt);
  for (Index tri = 0; tri < nt; ++tri) {
    kernels_.emplace_back(LocalElement::from_mesh(mesh_, tri), k);
    const LocalLayout& L = kernels_.back().layout;
    auto& dofs = velocity_dofs_[tri];
    dofs.reserve(L.size);
    for (int i = 0; i < L.interior; ++i) dofs.push_back(dofs_.interior_offset(tri) + i);
    for (int e = 0; e < 3; ++e) {
      const Index edge = mesh_.triangles()[tri].edge_ids[e];
      if (dofs_.edge_width(edge) != L.edge_width[e]) {
        throw TopologyError("edge DOF width disagrees with element trace kind");
      }
      for (int i = 0; i < L.edge_width[e]; ++i) dofs.push_back(dofs_.edge_offset(edge) + i);
    }
  }
}

Eigen::VectorXd Discretization::gather(const Eigen::VectorXd& global, Index tri) const {
  const auto& dofs = velocity_dofs_[tri];
  Eigen::VectorXd out(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) out[i] = global[dofs[i]];
  return out;
}

Eigen::VectorXd Discretization::gather_pressure(const Eigen::VectorXd& global, Index tri) const {
  return global.segment(dofs_.pressure_offset(tri), dofs_.scalar_dim());
}

Eigen::MatrixXd local_a_s(const ElementKernels& K, Subdomain sd, const PhysicalParams& params) {
  if (sd == Subdomain::Stokes) return params.mu * (2.0 * K.strain_gram + K.stab_vector);
  return params.mu * (K.interior_mass(params.kappa.inverse()) + K.stab_normal);
}

Eigen::MatrixXd interface_slip_matrix(const Mesh& mesh, Index edge, int k, double coefficient) {
  const Edge& e = mesh.edges().at(edge);
  const Point2 t = tangent_of(e);
  const double len = norm(mesh.points()[e.vertex_ids[1]] - mesh.points()[e.vertex_ids[0]]);
  const Eigen::MatrixXd M = coefficient * edge_mass_matrix(EdgeBasis(k), len);
  const int w = k + 1;
  Eigen::MatrixXd out(2 * w, 2 * w);
  out << t.x * t.x * M, t.x * t.y * M, t.y * t.x * M, t.y * t.y * M;
  return out;
}

SparseMatrix assemble_a_s(const Discretization& disc, const PhysicalParams& params) {
  params.validate();
  Triplets t;
  add_a_s_triplets(disc, params, t);
  const Index nv = disc.dofs().num_velocity();
  SparseMatrix A(nv, nv);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

SparseMatrix assemble_b(const Discretization& disc) {
  Triplets t;
  add_b_triplets(disc, t, false);
  const Index np = disc.dofs().num_pressure();
  const Index nv = disc.dofs().num_velocity();
  for (auto& e : t) e = {e.row() - static_cast<int>(nv), e.col(), e.value()};  // pressure rows start at 0
  SparseMatrix B(np, nv);
  B.setFromTriplets(t.begin(), t.end());
  return B;
}

Eigen::VectorXd pressure_mean_weights(const Discretization& disc) {
  const int m = disc.dofs().scalar_dim();
  Eigen::VectorXd c(disc.dofs().num_pressure());
  for (Index tri = 0; tri < disc.mesh().num_triangles(); ++tri) {
    // The first basis function is the constant 1.
    c.segment(tri * m, m) = disc.kernels(tri).mass.col(0);
  }
  return c;
}

SparseMatrix pressure_mass(const Discretization& disc) {
  const int m = disc.dofs().scalar_dim();
  Triplets t;
  for (Index tri = 0; tri < disc.mesh().num_triangles(); ++tri) {
    const auto idx = contiguous(tri * m, m);
    scatter(t, idx, idx, disc.kernels(tri).mass);
  }
  const Index np = disc.dofs().num_pressure();
  SparseMatrix M(np, np);
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

SparseMatrix assemble_matrix(const Discretization& disc, const PhysicalParams& params) {
  params.validate();
  const DofMap& dofs = disc.dofs();
  Triplets t;
  add_a_s_triplets(disc, params, t);
  add_b_triplets(disc, t, true);
  const Eigen::VectorXd c = pressure_mean_weights(disc);
  const Index lam = dofs.multiplier();
  for (Index i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    t.emplace_back(dofs.num_velocity() + i, lam, c[i]);
    t.emplace_back(lam, dofs.num_velocity() + i, c[i]);
  }
  SparseMatrix K(dofs.size(), dofs.size());
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

Eigen::VectorXd assemble_rhs(const Discretization& disc, const SourceData& data, Algorithm algorithm) {
  const Mesh& mesh = disc.mesh();
  const DofMap& dofs = disc.dofs();
  const int k = disc.degree();
  const int m = dofs.scalar_dim();
  Eigen::VectorXd F = Eigen::VectorXd::Zero(dofs.size());
  const QuadRuleTri& rule = cached_quad_tri(data_quad_degree(k));
  Eigen::VectorXd phi(m);
  for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
    const ElementKernels& K = disc.kernels(tri);
    const bool stokes = mesh.triangles()[tri].subdomain == Subdomain::Stokes;
    const VectorField& f = stokes ? data.f_stokes : data.f_darcy;
    const ScalarField& g = stokes ? data.g_stokes : data.g_darcy;
    const MappedPoints q = map_rule(rule, K.element.vertices);

    Eigen::VectorXd local = Eigen::VectorXd::Zero(K.ndof());
    if (f) {
      if (algorithm == Algorithm::Robust) {
        Eigen::VectorXd moments = Eigen::VectorXd::Zero(K.rt.size());
        Eigen::Matrix2Xd psi(2, K.rt.size());
        for (std::size_t i = 0; i < q.points.size(); ++i) {
          K.rt.eval(K.frame, q.points[i], psi);
          const Vec2 fv = f(q.points[i]);
          moments.noalias() += q.weights[i] * (psi.transpose() * fv);
        }
        local = K.reconstruction.transpose() * moments;
      } else {
        for (std::size_t i = 0; i < q.points.size(); ++i) {
          K.basis.eval(K.frame, q.points[i], phi);
          const Vec2 fv = f(q.points[i]);
          local.head(m) += q.weights[i] * fv.x() * phi;
          local.segment(m, m) += q.weights[i] * fv.y() * phi;
        }
      }
    }
    const auto& vd = disc.velocity_dofs(tri);
    for (std::size_t i = 0; i < vd.size(); ++i) F[vd[i]] += local[i];

    if (g) {
      Eigen::VectorXd gq = Eigen::VectorXd::Zero(m);
      for (std::size_t i = 0; i < q.points.size(); ++i) {
        K.basis.eval(K.frame, q.points[i], phi);
        gq += q.weights[i] * g(q.points[i]) * phi;
      }
      F.segment(dofs.pressure_offset(tri), m) -= gq;
    }
  }
  return F;
}

Eigen::VectorXd boundary_values(const Discretization& disc, const BoundaryData& data) {
  const Mesh& mesh = disc.mesh();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(disc.dofs().size());
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const EdgeClass c = mesh.edges()[e].cls;
    if (!is_outer(c)) continue;
    const VectorField& u = c == EdgeClass::StokesOuter ? data.stokes : data.darcy;
    if (!u) continue;
    x.segment(disc.dofs().edge_offset(e), disc.dofs().edge_width(e)) =
        project_qb(local_edge_of(mesh, e), disc.degree(), u, boundary_quad_degree(disc.degree()));
  }
  return x;
}

Eigen::MatrixXd local_energy(const ElementKernels& K, Subdomain sd, const Mat2& kappa) {
  if (sd == Subdomain::Stokes) return K.strain_gram + 0.5 * K.stab_vector;
  return 0.5 * (K.interior_mass(kappa.inverse()) + K.stab_normal);
}

SparseMatrix assemble_energy_gram(const Discretization& disc, const PhysicalParams& params) {
  const Mesh& mesh = disc.mesh();
  Triplets t;
  for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
    const auto& dofs = disc.velocity_dofs(tri);
    scatter(t, dofs, dofs, local_energy(disc.kernels(tri), mesh.triangles()[tri].subdomain, params.kappa));
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    if (edge.cls != EdgeClass::Interface) continue;
    const double coef = 0.5 * params.alpha * params.tangential_resistance(tangent_of(edge));
    const auto dofs = contiguous(disc.dofs().edge_offset(e), disc.dofs().edge_width(e));
    scatter(t, dofs, dofs, interface_slip_matrix(mesh, e, disc.degree(), coef));
  }
  const Index nv = disc.dofs().num_velocity();
  SparseMatrix G(nv, nv);
  G.setFromTriplets(t.begin(), t.end());
  return G;
}

Eigen::VectorXd SparseSystem::expand(const Eigen::VectorXd& reduced) const {
  Eigen::VectorXd x = fixed;
  for (std::size_t i = 0; i < free_dofs.size(); ++i) x[free_dofs[i]] = reduced[i];
  return x;
}

SparseSystem apply_constraints(const SparseMatrix& K, const Eigen::VectorXd& F, const DofMap& dofs,
                               const Eigen::VectorXd& fixed_values) {
  const Index n = K.rows();
  if (K.cols() != n || F.size() != n || fixed_values.size() != n || n != dofs.size()) {
    throw std::invalid_argument("apply_constraints: inconsistent sizes");
  }
  SparseSystem sys;
  std::vector<Index> reduced(n, -1);
  for (Index i = 0; i < n; ++i) {
    if (dofs.is_constrained(i)) continue;
    reduced[i] = static_cast<Index>(sys.free_dofs.size());
    sys.free_dofs.push_back(i);
  }
  const Index nf = static_cast<Index>(sys.free_dofs.size());
  sys.fixed = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (dofs.is_constrained(i)) sys.fixed[i] = fixed_values[i];
  }
  sys.rhs.resize(nf);
  for (Index i = 0; i < nf; ++i) sys.rhs[i] = F[sys.free_dofs[i]];

  Triplets t;
  t.reserve(K.nonZeros());
  for (Index col = 0; col < K.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(K, col); it; ++it) {
      const Index r = reduced[it.row()];
      if (r < 0) continue;
      const Index c = reduced[col];
      if (c >= 0) {
        t.emplace_back(r, c, it.value());
      } else {
        sys.rhs[r] -= it.value() * sys.fixed[col];
      }
    }
  }
  sys.matrix.resize(nf, nf);
  sys.matrix.setFromTriplets(t.begin(), t.end());
  return sys;
}

InfSupEstimate infsup_probe(const Discretization& disc, const PhysicalParams& params) {
  InfSupEstimate est;
  est.n = disc.mesh().n();
  est.k = disc.degree();
  const DofMap& dofs = disc.dofs();
  const Index np = dofs.num_pressure();
  if (np < 2) return est;

  std::vector<Index> free;
  for (Index i = 0; i < dofs.num_velocity(); ++i) {
    if (!dofs.is_constrained(i)) free.push_back(i);
  }
  const Index nf = static_cast<Index>(free.size());
  SparseMatrix P(dofs.num_velocity(), nf);
  {
    Triplets t;
    for (Index i = 0; i < nf; ++i) t.emplace_back(free[i], i, 1.0);
    P.setFromTriplets(t.begin(), t.end());
  }
  const SparseMatrix E = P.transpose() * assemble_energy_gram(disc, params) * P;
  const SparseMatrix B = assemble_b(disc) * P;

  const Eigen::SimplicialLDLT<SparseMatrix> ldlt(E);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("energy Gram matrix is not positive definite");
  const Eigen::MatrixXd Bt = Eigen::MatrixXd(B.transpose());
  const Eigen::MatrixXd X = ldlt.solve(Bt);
  const Eigen::MatrixXd S = B * X;
  const Eigen::MatrixXd M = Eigen::MatrixXd(pressure_mass(disc));

  // Orthonormal basis of the complement of the constant-mean direction.
  const Eigen::VectorXd c = pressure_mean_weights(disc);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd Z = Q.rightCols(np - 1);

  const Eigen::MatrixXd Sz = Z.transpose() * S * Z;
  const Eigen::MatrixXd Mz = Z.transpose() * M * Z;
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Sz, Mz, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) throw std::runtime_error("inf-sup eigenproblem did not converge");
  est.beta = std::sqrt(std::max(ges.eigenvalues().minCoeff(), 0.0));
  est.applicable = true;
  return est;
}

void write_matrix_market(const SparseMatrix& m, std::ostream& os) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  os.precision(17);
  for (Index col = 0; col < m.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
      os << it.row() + 1 << ' ' << col + 1 << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace wgsd
