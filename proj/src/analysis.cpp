#include "wgsd/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "wgsd/quadrature.hpp"

namespace wgsd {

namespace {

double rel(double r, double scale) { return std::abs(r) / (1.0 + scale); }

bool is_vector_edge(EdgeClass c) {
  return c == EdgeClass::StokesInterior || c == EdgeClass::StokesOuter || c == EdgeClass::Interface;
}

}  // namespace

ManufacturedData manufactured_data(const ExactSolution& exact, const PhysicalParams& params) {
  params.validate();
  ManufacturedData d;
  const double mu = params.mu;
  const Mat2 kinv = params.kappa.inverse();
  d.source.f_stokes = [mu, ds = exact.div_strain_s, gp = exact.grad_p_s](Point2 p) -> Vec2 {
    return -mu * ds(p) + gp(p);
  };
  d.source.f_darcy = [mu, kinv, u = exact.u_d, gp = exact.grad_p_d](Point2 p) -> Vec2 {
    return mu * (kinv * u(p)) + gp(p);
  };
  d.source.g_stokes = exact.div_u_s;
  d.source.g_darcy = exact.div_u_d;
  d.boundary.stokes = exact.u_s;
  d.boundary.darcy = exact.u_d;
  return d;
}

InterfaceResiduals interface_residuals(const ExactSolution& exact, const PhysicalParams& params, int samples) {
  params.validate();
  const Segment seg = interface_segment(exact.geometry);
  const Rect& s = exact.geometry.stokes;
  const Rect& d = exact.geometry.darcy;
  // Outward normal of the Stokes region on the shared side.
  const Point2 cs{0.5 * (s.x0 + s.x1), 0.5 * (s.y0 + s.y1)};
  const Point2 cd{0.5 * (d.x0 + d.x1), 0.5 * (d.y0 + d.y1)};
  const Point2 dir = seg.b - seg.a;
  const double len = norm(dir);
  Point2 n{dir.y / len, -dir.x / len};
  if (dot(n, cd - cs) < 0.0) n = -1.0 * n;
  const Vec2 nv(n.x, n.y);
  const Vec2 tv(-n.y, n.x);
  const double resist = params.tangential_resistance({tv.x(), tv.y()});

  InterfaceResiduals r;
  for (int i = 0; i < samples; ++i) {
    const double t = (i + 0.5) / samples;
    const Point2 p = seg.a + t * dir;
    const Vec2 us = exact.u_s(p);
    const Vec2 ud = exact.u_d(p);
    const Mat2 G = exact.grad_u_s(p);
    const Mat2 D = 0.5 * (G + G.transpose());
    const double ps = exact.p_s(p);
    const double pd = exact.p_d(p);
    const double nDn = nv.dot(D * nv);
    const double tDn = tv.dot(D * nv);

    r.mass = std::max(r.mass, rel(us.dot(nv) - ud.dot(nv), std::max(us.norm(), ud.norm())));
    r.normal_stress = std::max(
        r.normal_stress,
        rel(ps - 2 * params.mu * nDn - pd, std::max({std::abs(ps), std::abs(pd), 2 * params.mu * D.norm()})));
    r.slip = std::max(r.slip, rel(-2 * tDn - params.alpha * resist * us.dot(tv),
                                  std::max(2 * D.norm(), params.alpha * resist * us.norm())));
  }
  return r;
}

void check_interface_consistency(const ExactSolution& exact, const PhysicalParams& params, double tol) {
  const InterfaceResiduals r = interface_residuals(exact, params);
  if (r.max() > tol) {
    std::ostringstream msg;
    msg << exact.name << " violates the interface conditions for mu=" << params.mu << ", alpha=" << params.alpha
        << ": mass " << r.mass << ", normal stress " << r.normal_stress << ", slip " << r.slip;
    throw InterfaceGuardError(msg.str());
  }
}

Eigen::VectorXd interpolate_velocity(const Discretization& disc, const ExactSolution& exact) {
  const Mesh& mesh = disc.mesh();
  const DofMap& dofs = disc.dofs();
  const int k = disc.degree();
  const int qd = data_quad_degree(k);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dofs.num_velocity());
  for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
    const bool stokes = mesh.triangles()[tri].subdomain == Subdomain::Stokes;
    const ElementKernels& K = disc.kernels(tri);
    u.segment(dofs.interior_offset(tri), K.layout.interior) = project_q0(K, stokes ? exact.u_s : exact.u_d, qd);
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    LocalEdge le;
    le.a = mesh.points()[edge.vertex_ids[0]];
    le.b = mesh.points()[edge.vertex_ids[1]];
    le.normal = edge.unit_normal;
    le.kind = is_vector_edge(edge.cls) ? TraceKind::Vector : TraceKind::ScalarNormal;
    const bool stokes = edge.cls != EdgeClass::DarcyInterior && edge.cls != EdgeClass::DarcyOuter;
    u.segment(dofs.edge_offset(e), dofs.edge_width(e)) =
        project_qb(le, k, stokes ? exact.u_s : exact.u_d, boundary_quad_degree(k));
  }
  return u;
}

Eigen::VectorXd project_exact_pressure(const Discretization& disc, const ExactSolution& exact) {
  const Mesh& mesh = disc.mesh();
  const int m = disc.dofs().scalar_dim();
  const double area = exact.geometry.stokes.area() + exact.geometry.darcy.area();
  const double mean = exact.pressure_integral / area;
  Eigen::VectorXd p(disc.dofs().num_pressure());
  for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
    const bool stokes = mesh.triangles()[tri].subdomain == Subdomain::Stokes;
    const ScalarField& f = stokes ? exact.p_s : exact.p_d;
    p.segment(tri * m, m) = project_pressure(disc.kernels(tri), f, data_quad_degree(disc.degree()));
    p[tri * m] -= mean;  // first basis function is the constant
  }
  return p;
}

std::array<double, 2> energy_norm_split(const Discretization& disc, const Eigen::VectorXd& v,
                                        const PhysicalParams& params) {
  const Mesh& mesh = disc.mesh();
  std::array<double, 2> sq{0.0, 0.0};
  for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
    const Subdomain sd = mesh.triangles()[tri].subdomain;
    const Eigen::VectorXd local = disc.gather(v, tri);
    const double val = local.dot(local_energy(disc.kernels(tri), sd, params.kappa) * local);
    sq[sd == Subdomain::Stokes ? 0 : 1] += val;
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    if (edge.cls != EdgeClass::Interface) continue;
    const Point2 t{-edge.unit_normal.y, edge.unit_normal.x};
    const double coef = 0.5 * params.alpha * params.tangential_resistance(t);
    const Eigen::VectorXd local = v.segment(disc.dofs().edge_offset(e), disc.dofs().edge_width(e));
    sq[0] += local.dot(interface_slip_matrix(mesh, e, disc.degree(), coef) * local);
  }
  return {std::sqrt(std::max(sq[0], 0.0)), std::sqrt(std::max(sq[1], 0.0))};
}

double energy_norm(const Discretization& disc, const Eigen::VectorXd& v, const PhysicalParams& params) {
  const auto s = energy_norm_split(disc, v, params);
  return std::hypot(s[0], s[1]);
}

std::array<double, 6> ErrorReport::columns() const {
  return {stokes.energy, stokes.l2, stokes.pressure, darcy.energy, darcy.l2, darcy.pressure};
}

double divergence_defect(const Discretization& disc, const Eigen::VectorXd& x, const SourceData& source) {
  const Mesh& mesh = disc.mesh();
  const int qd = data_quad_degree(disc.degree());
  double sq = 0.0;
  for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
    const ElementKernels& K = disc.kernels(tri);
    const bool stokes = mesh.triangles()[tri].subdomain == Subdomain::Stokes;
    const ScalarField& g = stokes ? source.g_stokes : source.g_darcy;
    Eigen::VectorXd d = K.divergence * disc.gather(x, tri);
    if (g) d -= project_pressure(K, g, qd);
    sq += d.dot(K.mass * d);
  }
  return std::sqrt(std::max(sq, 0.0));
}

double projected_source_norm(const Discretization& disc, const SourceData& source) {
  const Mesh& mesh = disc.mesh();
  const int qd = data_quad_degree(disc.degree());
  double sq = 0.0;
  for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
    const ElementKernels& K = disc.kernels(tri);
    const ScalarField& g =
        mesh.triangles()[tri].subdomain == Subdomain::Stokes ? source.g_stokes : source.g_darcy;
    if (!g) continue;
    const Eigen::VectorXd d = project_pressure(K, g, qd);
    sq += d.dot(K.mass * d);
  }
  return std::sqrt(std::max(sq, 0.0));
}

double interior_velocity_norm(const Discretization& disc, const Eigen::VectorXd& x) {
  const DofMap& dofs = disc.dofs();
  const int m = dofs.scalar_dim();
  double sq = 0.0;
  for (Index tri = 0; tri < disc.mesh().num_triangles(); ++tri) {
    const ElementKernels& K = disc.kernels(tri);
    const Eigen::VectorXd u0 = x.segment(dofs.interior_offset(tri), 2 * m);
    sq += u0.head(m).dot(K.mass * u0.head(m)) + u0.tail(m).dot(K.mass * u0.tail(m));
  }
  return std::sqrt(std::max(sq, 0.0));
}

double divergence_tolerance(const ErrorReport& r) {
  return kDivergenceTolerance * std::max(1.0 + r.source_norm, r.velocity_norm);
}

ErrorReport error_report(const Discretization& disc, const Solution& solution, const ExactSolution& exact,
                         const PhysicalParams& params) {
  const Mesh& mesh = disc.mesh();
  const DofMap& dofs = disc.dofs();
  const Eigen::VectorXd eu = interpolate_velocity(disc, exact) - solution.x.head(dofs.num_velocity());
  const Eigen::VectorXd ep = project_exact_pressure(disc, exact) - solution.x.segment(dofs.num_velocity(),
                                                                                       dofs.num_pressure());
  ErrorReport r;
  r.n = mesh.n();
  r.k = disc.degree();
  r.mu = params.mu;
  r.relative_residual = solution.relative_residual;
  const auto en = energy_norm_split(disc, eu, params);
  r.stokes.energy = en[0];
  r.darcy.energy = en[1];
  const int m = dofs.scalar_dim();
  double l2[2] = {0.0, 0.0}, pr[2] = {0.0, 0.0};
  for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
    const ElementKernels& K = disc.kernels(tri);
    const int side = mesh.triangles()[tri].subdomain == Subdomain::Stokes ? 0 : 1;
    const Eigen::VectorXd e0 = eu.segment(dofs.interior_offset(tri), 2 * m);
    l2[side] += e0.head(m).dot(K.mass * e0.head(m)) + e0.tail(m).dot(K.mass * e0.tail(m));
    const Eigen::VectorXd et = ep.segment(tri * m, m);
    pr[side] += et.dot(K.mass * et);
  }
  r.stokes.l2 = std::sqrt(l2[0]);
  r.darcy.l2 = std::sqrt(l2[1]);
  r.stokes.pressure = std::sqrt(pr[0]);
  r.darcy.pressure = std::sqrt(pr[1]);
  return r;
}

CaseResult run_case(const Discretization& disc, const ExactSolution& exact, const PhysicalParams& params,
                    Algorithm algorithm) {
  const auto t0 = std::chrono::steady_clock::now();
  const ManufacturedData data = manufactured_data(exact, params);
  const SparseMatrix K = assemble_matrix(disc, params);
  const Eigen::VectorXd F = assemble_rhs(disc, data.source, algorithm);
  const Eigen::VectorXd fixed = boundary_values(disc, data.boundary);
  const SparseSystem sys = apply_constraints(K, F, disc.dofs(), fixed);

  CaseResult out;
  out.solution = solve(sys);
  out.report = error_report(disc, out.solution, exact, params);
  out.report.algorithm = algorithm;
  out.report.unknowns = static_cast<Index>(sys.free_dofs.size());
  out.report.divergence_defect = divergence_defect(disc, out.solution.x, data.source);
  out.report.source_norm = projected_source_norm(disc, data.source);
  out.report.velocity_norm = interior_velocity_norm(disc, out.solution.x);
  const DofMap& dofs = disc.dofs();
  out.velocity_error = interpolate_velocity(disc, exact) - out.solution.x.head(dofs.num_velocity());
  out.pressure_error =
      project_exact_pressure(disc, exact) - out.solution.x.segment(dofs.num_velocity(), dofs.num_pressure());
  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

CaseResult run_case(const ExactSolution& exact, int k, int n, const PhysicalParams& params, Algorithm algorithm) {
  const Discretization disc(build_uniform_mesh(exact.geometry, n), k);
  return run_case(disc, exact, params, algorithm);
}

ConvergenceTable make_table(std::vector<ErrorReport> rows) {
  ConvergenceTable t;
  t.rows = std::move(rows);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::array<double, 6> o;
    o.fill(nan);
    if (i > 0) {
      const auto prev = t.rows[i - 1].columns();
      const auto cur = t.rows[i].columns();
      const double ratio = static_cast<double>(t.rows[i].n) / t.rows[i - 1].n;
      for (int c = 0; c < 6; ++c) {
        if (prev[c] > 0.0 && cur[c] > 0.0 && ratio > 1.0) o[c] = std::log(prev[c] / cur[c]) / std::log(ratio);
      }
    }
    t.orders.push_back(o);
  }
  return t;
}

ConvergenceTable convergence_table(const ExactSolution& exact, int k, const PhysicalParams& params,
                                   Algorithm algorithm, const std::vector<int>& ns) {
  if (ns.empty()) throw std::invalid_argument("convergence table needs at least one mesh");
  std::vector<ErrorReport> rows;
  for (int n : ns) {
    try {
      rows.push_back(run_case(exact, k, n, params, algorithm).report);
    } catch (const SolverError& e) {
      throw SolverError("n=" + std::to_string(n) + ": " + e.what());
    }
  }
  return make_table(std::move(rows));
}

std::vector<ErrorReport> robustness_sweep(const ExactSolution& exact, int k, int n, const std::vector<double>& mus,
                                          const std::vector<Algorithm>& algorithms, const PhysicalParams& base) {
  const Discretization disc(build_uniform_mesh(exact.geometry, n), k);
  std::vector<ErrorReport> out;
  for (Algorithm a : algorithms) {
    for (double mu : mus) {
      PhysicalParams p = base;
      p.mu = mu;
      out.push_back(run_case(disc, exact, p, a).report);
    }
  }
  return out;
}

}  // namespace wgsd
