#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wgsd/analysis.hpp"
#include "wgsd/app.hpp"
#include "wgsd/quadrature.hpp"
#include "wgsd/report_io.hpp"

namespace py = pybind11;
using namespace wgsd;

namespace {

PhysicalParams params(double mu, double kappa, double alpha) {
  PhysicalParams p = PhysicalParams::isotropic(mu, kappa, alpha);
  p.validate();
  return p;
}

py::dict report_dict(const ErrorReport& r) {
  py::dict d;
  d["n"] = r.n;
  d["k"] = r.k;
  d["mu"] = r.mu;
  d["algorithm"] = to_string(r.algorithm);
  d["errors"] = r.columns();
  d["relative_residual"] = r.relative_residual;
  d["divergence_defect"] = r.divergence_defect;
  d["unknowns"] = r.unknowns;
  d["seconds"] = r.seconds;
  return d;
}

py::dict mesh_dict(const Mesh& mesh) {
  Eigen::MatrixX2d pts(mesh.num_points(), 2);
  for (Index i = 0; i < mesh.num_points(); ++i) pts.row(i) << mesh.points()[i].x, mesh.points()[i].y;
  Eigen::Matrix<Index, Eigen::Dynamic, 3> tris(mesh.num_triangles(), 3);
  Eigen::Matrix<int, Eigen::Dynamic, 1> sub(mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangles()[t];
    tris.row(t) << tri.vertex_ids[0], tri.vertex_ids[1], tri.vertex_ids[2];
    sub[t] = tri.subdomain == Subdomain::Stokes ? 0 : 1;
  }
  py::dict edges;
  for (EdgeClass c : {EdgeClass::StokesInterior, EdgeClass::StokesOuter, EdgeClass::DarcyInterior,
                      EdgeClass::DarcyOuter, EdgeClass::Interface})
    edges[to_string(c)] = mesh.count(c);
  py::dict d;
  d["points"] = pts;
  d["triangles"] = tris;
  d["subdomain"] = sub;
  d["edge_counts"] = edges;
  d["h"] = mesh.h();
  return d;
}

}  // namespace

PYBIND11_MODULE(_wgsd, m) {
  m.doc() = "Pressure-robust weak Galerkin solver for coupled Stokes-Darcy flow.";

  py::register_exception<SolverError>(m, "SolverError");
  py::register_exception<InterfaceGuardError>(m, "InterfaceGuardError");

  m.def(
      "mesh",
      [](const std::string& example, int n) { return mesh_dict(build_uniform_mesh(make_example(example).geometry, n)); },
      py::arg("example"), py::arg("n"), "Uniform two-subdomain mesh as numpy arrays.");

  m.def(
      "quadrature",
      [](int degree) {
        const QuadRuleTri& r = cached_quad_tri(degree);
        Eigen::MatrixX3d bary(r.size(), 3);
        for (std::size_t q = 0; q < r.size(); ++q) bary.row(q) << r.barycentric[q][0], r.barycentric[q][1], r.barycentric[q][2];
        return py::make_tuple(bary, Eigen::VectorXd::Map(r.weights.data(), r.size()).eval());
      },
      py::arg("degree"), "Barycentric points and weights on the reference triangle.");

  m.def(
      "solve",
      [](const std::string& example, int k, int n, double mu, double kappa, double alpha, const std::string& algorithm) {
        const PhysicalParams p = params(mu, kappa, alpha);
        const ExactSolution exact = make_example(example);
        check_interface_consistency(exact, p);
        const CaseResult r = run_case(exact, k, n, p, parse_algorithm(algorithm));
        py::dict d = report_dict(r.report);
        d["solution"] = r.solution.x;
        return d;
      },
      py::arg("example"), py::arg("k"), py::arg("n"), py::arg("mu") = 1.0, py::arg("kappa") = 1.0,
      py::arg("alpha") = 1.0, py::arg("algorithm") = "robust",
      "Solve one manufactured problem and return its error report and solution vector.");

  m.def(
      "convergence_table",
      [](const std::string& example, int k, const std::vector<int>& ns, double mu, double kappa, double alpha,
         const std::string& algorithm) {
        const PhysicalParams p = params(mu, kappa, alpha);
        const ExactSolution exact = make_example(example);
        check_interface_consistency(exact, p);
        const ConvergenceTable t = convergence_table(exact, k, p, parse_algorithm(algorithm), ns);
        py::list rows;
        for (const auto& r : t.rows) rows.append(report_dict(r));
        py::dict d;
        d["rows"] = rows;
        d["orders"] = t.orders;
        return d;
      },
      py::arg("example"), py::arg("k"), py::arg("ns"), py::arg("mu") = 1.0, py::arg("kappa") = 1.0,
      py::arg("alpha") = 1.0, py::arg("algorithm") = "robust");

  m.def(
      "robustness_sweep",
      [](const std::string& example, int k, int n, const std::vector<double>& mus,
         const std::vector<std::string>& algorithms) {
        std::vector<Algorithm> algs;
        for (const auto& a : algorithms) algs.push_back(parse_algorithm(a));
        py::list out;
        for (const auto& r : robustness_sweep(make_example(example), k, n, mus, algs, PhysicalParams{}))
          out.append(report_dict(r));
        return out;
      },
      py::arg("example"), py::arg("k"), py::arg("n"), py::arg("mus"),
      py::arg("algorithms") = std::vector<std::string>{"robust", "standard"});

  m.def(
      "interface_residuals",
      [](const std::string& example, double mu, double kappa, double alpha) {
        const InterfaceResiduals r = interface_residuals(make_example(example), params(mu, kappa, alpha));
        return py::make_tuple(r.mass, r.normal_stress, r.slip);
      },
      py::arg("example"), py::arg("mu") = 1.0, py::arg("kappa") = 1.0, py::arg("alpha") = 1.0,
      "Largest (mass, normal stress, slip) residuals on the interface.");

  m.def(
      "infsup",
      [](const std::string& example, int k, int n) {
        const Discretization disc(build_uniform_mesh(make_example(example).geometry, n), k);
        return infsup_probe(disc, PhysicalParams{}).beta;
      },
      py::arg("example"), py::arg("k"), py::arg("n"), "Discrete inf-sup estimate on a small mesh.");

  m.def(
      "compare_csv",
      [](const std::string& actual, const std::string& expected, double error_tol, double order_tol) {
        const Comparison c = compare_tables(read_csv_file(actual), read_csv_file(expected), error_tol, order_tol);
        return py::make_tuple(c.passed(), c.max_error_deviation, c.max_order_deviation);
      },
      py::arg("actual"), py::arg("expected"), py::arg("error_tol") = 0.01, py::arg("order_tol") = 0.05);

  m.def(
      "run",
      [](const py::dict& options) {
        RunConfig c;
        for (auto [key, value] : options) {
          const auto name = key.cast<std::string>();
          if (name == "example") c.example = value.cast<std::string>();
          else if (name == "k") c.k = value.cast<int>();
          else if (name == "n") c.ns = value.cast<std::vector<int>>();
          else if (name == "mu") c.mus = value.cast<std::vector<double>>();
          else if (name == "kappa") c.kappa = value.cast<double>();
          else if (name == "alpha") c.alpha = value.cast<double>();
          else if (name == "algorithm") c.algorithm = value.cast<std::string>();
          else if (name == "out_dir") c.out_dir = value.cast<std::string>();
          else if (name == "sweep_mu") c.sweep_mus = value.cast<std::vector<double>>();
          else if (name == "fixed_n") c.fixed_n = value.cast<int>();
          else if (name == "jobs") c.jobs = value.cast<int>();
          else throw py::key_error("unknown option " + name);
        }
        std::ostringstream log;
        const int code = run(c, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("options"), "Run the table/sweep driver; returns (exit code, log).");
}
