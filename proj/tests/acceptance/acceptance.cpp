// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Reference tables live in tests/data.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <tuple>

#include "oracles.hpp"
#include "wgsd/analysis.hpp"
#include "wgsd/exact_solutions.hpp"
#include "wgsd/report_io.hpp"

using namespace wgsd;

namespace {

const std::string kData = WGSD_TEST_DATA;
const std::vector<int> kMeshes{2, 4, 8, 16, 32};
constexpr std::array<int, 4> kVelocityColumns{0, 1, 3, 4};
constexpr std::array<int, 2> kPressureColumns{2, 5};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

using TableKey = std::tuple<std::string, int, Algorithm, double>;  // example, k, algorithm, mu

std::map<TableKey, ConvergenceTable> compute_tables() {
  std::vector<TableKey> keys;
  for (int k : {1, 2})
    for (double mu : {1.0, 1e3, 1e-6}) keys.emplace_back("example1", k, Algorithm::Robust, mu);
  for (double mu : {1.0, 1e-6}) keys.emplace_back("example1", 1, Algorithm::Standard, mu);
  for (int k : {1, 2})
    for (Algorithm a : {Algorithm::Robust, Algorithm::Standard}) keys.emplace_back("example2", k, a, 1.0);

  std::vector<std::future<ConvergenceTable>> jobs;
  for (const auto& [ex, k, alg, mu] : keys)
    jobs.push_back(std::async(std::launch::async, [ex, k, alg, mu] {
      return convergence_table(make_example(ex), k, PhysicalParams::isotropic(mu, 1.0, 1.0), alg, kMeshes);
    }));
  std::map<TableKey, ConvergenceTable> out;
  for (std::size_t i = 0; i < keys.size(); ++i) out.emplace(keys[i], jobs[i].get());
  return out;
}

CsvTable as_csv(const ConvergenceTable& t) {
  std::stringstream ss;
  write_table_csv(t, nlohmann::json::object(), ss);
  return read_csv(ss);
}

Outcome compare_with(const ConvergenceTable& t, const std::string& file, double error_tol) {
  const Comparison c = compare_tables(as_csv(t), read_csv_file(kData + "/" + file), error_tol, 0.05);
  Outcome o{c.passed(), file + ": max error dev " + fmt("%.2e", c.max_error_deviation) + ", max order dev " +
                            fmt("%.3f", c.max_order_deviation)};
  for (const CellDeviation& f : c.failures)
    o.detail += "; row " + std::to_string(f.row) + " " + f.column + " off by " + fmt("%.3g", f.deviation);
  return o;
}

void merge(Outcome& into, const Outcome& part) {
  into.pass = into.pass && part.pass;
  into.detail += (into.detail.empty() ? "" : " | ") + part.detail;
}

double rel(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); }

// 1: Example 1, robust, mu = 1, k = 1, 2 against the reference tables.
Outcome table_reproduction(const std::map<TableKey, ConvergenceTable>& t) {
  Outcome o;
  merge(o, compare_with(t.at({"example1", 1, Algorithm::Robust, 1.0}), "example1_k1_robust_mu1.csv", 0.01));
  merge(o, compare_with(t.at({"example1", 2, Algorithm::Robust, 1.0}), "example1_k2_robust_mu1.csv", 0.01));
  return o;
}

// 2 and 3: robust velocity errors do not depend on mu, pressure errors scale with it.
Outcome viscosity_scaling(const std::map<TableKey, ConvergenceTable>& t, bool velocity) {
  Outcome o;
  const double tol = velocity ? 1e-8 : 1e-6;
  for (int k : {1, 2}) {
    const auto& base = t.at({"example1", k, Algorithm::Robust, 1.0}).rows;
    for (double mu : {1e3, 1e-6}) {
      const auto& rows = t.at({"example1", k, Algorithm::Robust, mu}).rows;
      double worst = 0.0;
      int worst_n = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto a = rows[i].columns(), b = base[i].columns();
        if (velocity) {
          for (int c : kVelocityColumns)
            if (rel(a[c], b[c]) > worst) worst = rel(a[c], b[c]), worst_n = rows[i].n;
        } else {
          for (int c : kPressureColumns)
            if (rel(a[c], mu * b[c]) > worst) worst = rel(a[c], mu * b[c]), worst_n = rows[i].n;
        }
      }
      const bool ok = worst <= tol;
      o.pass = o.pass && ok;
      o.detail += (o.detail.empty() ? "" : ", ") + std::string("k=") + std::to_string(k) + " mu=" +
                  fmt("%g", mu) + ": " + fmt("%.1e", worst) + (ok ? "" : " at n=" + std::to_string(worst_n));
    }
  }
  o.detail += " (tol " + fmt("%g", tol) + ")";
  return o;
}

// 4: the standard scheme loses accuracy as mu decreases.
Outcome standard_non_robustness(const std::map<TableKey, ConvergenceTable>& t) {
  Outcome o;
  const auto& small = t.at({"example1", 1, Algorithm::Standard, 1e-6}).rows;
  const double e4 = small[1].stokes.energy;
  o.pass = small[1].n == 4 && rel(e4, 1.6224e5) <= 0.05;
  o.detail = "mu=1e-6 n=4 Stokes energy " + fmt("%.4e", e4) + " vs 1.6224E+05";
  merge(o, compare_with(t.at({"example1", 1, Algorithm::Standard, 1e-6}), "example1_k1_standard_mu1e-06.csv", 0.05));
  merge(o, compare_with(t.at({"example1", 1, Algorithm::Standard, 1.0}), "example1_k1_standard_mu1.csv", 0.01));
  return o;
}

// 5: Example 2 has zero velocity; the robust scheme reproduces it.
Outcome zero_velocity(const std::map<TableKey, ConvergenceTable>& t) {
  double worst = 0.0;
  for (int k : {1, 2})
    for (const auto& r : t.at({"example2", k, Algorithm::Robust, 1.0}).rows)
      for (double e : r.columns()) worst = std::max(worst, e);
  return {worst <= 1e-10, "largest error entry " + fmt("%.2e", worst)};
}

// 6: observed orders of the standard scheme on Example 2 at the finest ratio.
// Stokes pressure converges faster than the target on these meshes, so it
// only has to reach the target from above.
Outcome standard_orders(const std::map<TableKey, ConvergenceTable>& t) {
  Outcome o;
  for (int k : {1, 2}) {
    const auto& ord = t.at({"example2", k, Algorithm::Standard, 1.0}).orders.back();
    const std::array<double, 6> target{double(k + 1), double(k + 2), double(k + 1),
                                       double(k + 1), double(k + 2), double(k + 1)};
    std::string d = "k=" + std::to_string(k) + ":";
    for (int c = 0; c < 6; ++c) {
      const bool ok = c == 2 ? ord[c] >= target[c] - 0.1 : std::abs(ord[c] - target[c]) <= 0.1;
      o.pass = o.pass && ok;
      d += " " + fmt("%.3f", ord[c]) + (ok ? "" : "!");
    }
    merge(o, {true, d});
  }
  merge(o, compare_with(t.at({"example2", 1, Algorithm::Standard, 1.0}), "example2_k1_standard_mu1.csv", 0.01));
  merge(o, compare_with(t.at({"example2", 2, Algorithm::Standard, 1.0}), "example2_k2_standard_mu1.csv", 0.01));
  return o;
}

// 7: identities that need no reference values.
Outcome property_suite(const std::map<TableKey, ConvergenceTable>& t) {
  Outcome o;
  auto check = [&o](bool ok, const std::string& what) {
    if (!ok) {
      o.pass = false;
      o.detail += (o.detail.empty() ? "" : "; ") + what;
    }
  };

  // quadrature against closed-form monomial integrals
  double quad_err = 0.0;
  for (int d = 0; d <= kMaxQuadratureDegree; ++d) {
    const QuadRuleTri& r = cached_quad_tri(d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < r.size(); ++q)
          s += r.weights[q] * std::pow(r.barycentric[q][1], a) * std::pow(r.barycentric[q][2], b);
        quad_err = std::max(quad_err, rel(s, oracle::monomial_integral(a, b)));
      }
  }
  check(quad_err <= 1e-13, "quadrature " + fmt("%.1e", quad_err));

  // mesh invariants
  for (const ExactSolution& ex : {example1(), example2()})
    for (int n : {1, 4, 32}) {
      const Mesh m = build_uniform_mesh(ex.geometry, n);
      double area = 0.0;
      for (Index i = 0; i < m.num_triangles(); ++i) area += element_geometry(m, i).area;
      const double total = ex.geometry.stokes.area() + ex.geometry.darcy.area();
      check(m.num_points() - m.num_edges() + m.num_triangles() == 1, "Euler characteristic");
      check(rel(area, total) <= 1e-12, "area sum");
    }

  // per-element identities on Example 1
  const ExactSolution ex = example1();
  double commute = 0.0, rt_div = 0.0, rt_const = 0.0;
  for (int k : {1, 2}) {
    const Mesh mesh = build_uniform_mesh(ex.geometry, 4);
    // the identities hold for exact projections; degree 30 resolves the data to round-off
    const int qd = 30;
    for (Index tri = 0; tri < mesh.num_triangles(); ++tri) {
      const ElementKernels K(LocalElement::from_mesh(mesh, tri), k);
      const bool stokes = mesh.triangles()[tri].subdomain == Subdomain::Stokes;
      const Eigen::VectorXd v = project_weak(K, stokes ? ex.u_s : ex.u_d, qd);
      commute = std::max(commute, (weak_divergence(K, v) - project_pressure(K, stokes ? ex.div_u_s : ex.div_u_d, qd))
                                      .cwiseAbs()
                                      .maxCoeff());
      if (stokes) {
        commute = std::max(commute, (weak_gradient(K, v) - project_tensor(K, ex.grad_u_s, qd)).cwiseAbs().maxCoeff());
        const auto strain = [&](Point2 x) {
          const Mat2 G = ex.grad_u_s(x);
          return Mat2(0.5 * (G + G.transpose()));
        };
        commute = std::max(commute, (weak_strain(K, v) - project_tensor(K, strain, qd)).cwiseAbs().maxCoeff());
      }
      // divergence of the reconstruction for an arbitrary local function
      Eigen::VectorXd w(K.ndof());
      for (int i = 0; i < K.ndof(); ++i) w[i] = std::sin(1.0 + i + 7.0 * tri);
      const Eigen::VectorXd r = rt_reconstruct(K, w);
      const auto div_r = [&](Point2 x) { return eval_rt_divergence(K, r, x); };
      const Eigen::VectorXd dw = weak_divergence(K, w);
      // relative to the coefficient size, which reaches 1e3 on these elements
      rt_div = std::max(rt_div, (project_pressure(K, div_r, 2 * k + 2) - dw).cwiseAbs().maxCoeff() /
                                    std::max(1.0, dw.cwiseAbs().maxCoeff()));
      const Vec2 c(0.3, -1.1);
      const Eigen::VectorXd cr = rt_reconstruct(K, project_weak(K, [c](Point2) { return c; }, 2));
      rt_const = std::max(rt_const, (eval_rt(K, cr, K.frame.center) - c).norm());
    }
  }
  check(commute <= 1e-11, "commutation " + fmt("%.1e", commute));
  check(rt_div <= 1e-12, "reconstruction divergence " + fmt("%.1e", rt_div));
  check(rt_const <= 1e-12, "reconstruction of constants " + fmt("%.1e", rt_const));

  // discrete divergence after every solve of the run
  double div_ratio = 0.0;
  for (const auto& [key, table] : t)
    for (const auto& r : table.rows) div_ratio = std::max(div_ratio, r.divergence_defect / (1.0 + r.source_norm));
  check(div_ratio <= 1e-9, "post-solve divergence " + fmt("%.1e", div_ratio));

  o.detail = "quadrature " + fmt("%.1e", quad_err) + ", commutation " + fmt("%.1e", commute) + ", div R_T " +
             fmt("%.1e", rt_div) + ", constants " + fmt("%.1e", rt_const) + ", divergence " + fmt("%.1e", div_ratio) +
             (o.detail.empty() ? "" : "; failed: " + o.detail);
  return o;
}

// 8: discrete inf-sup estimates stay bounded away from zero.
Outcome infsup() {
  Outcome o;
  for (int k : {1, 2}) {
    std::vector<double> beta;
    for (int n : {2, 4, 8}) {
      const Discretization disc(build_uniform_mesh(example1().geometry, n), k);
      const InfSupEstimate e = infsup_probe(disc, {});
      beta.push_back(e.applicable ? e.beta : 0.0);
    }
    const auto [lo, hi] = std::minmax_element(beta.begin(), beta.end());
    const bool ok = *lo > 0.0 && *hi / *lo < 3.0;
    o.pass = o.pass && ok;
    o.detail += (o.detail.empty() ? "" : ", ") + std::string("k=") + std::to_string(k) + ": " +
                fmt("%.4f", beta[0]) + " " + fmt("%.4f", beta[1]) + " " + fmt("%.4f", beta[2]);
  }
  return o;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const auto tables = compute_tables();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"table reproduction, mu = 1", [&] { return table_reproduction(tables); }},
      {"robust velocity independent of mu", [&] { return viscosity_scaling(tables, true); }},
      {"robust pressure error linear in mu", [&] { return viscosity_scaling(tables, false); }},
      {"standard scheme not robust", [&] { return standard_non_robustness(tables); }},
      {"zero-velocity example exact", [&] { return zero_velocity(tables); }},
      {"standard scheme orders on example 2", [&] { return standard_orders(tables); }},
      {"property suite", [&] { return property_suite(tables); }},
      {"inf-sup diagnostic", infsup},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of %zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failures, criteria.size(),
              secs);
  return failures == 0 ? 0 : 1;
}
