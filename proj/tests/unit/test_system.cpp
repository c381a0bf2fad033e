#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "wgsd/analysis.hpp"
#include "wgsd/exact_solutions.hpp"
#include "wgsd/system.hpp"

using namespace wgsd;

namespace {

double max_abs(const SparseMatrix& m) {
  double r = 0.0;
  for (int j = 0; j < m.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

// Dense element matrix of 2 mu (D_w v, D_w w) + mu h^-1 <jump, jump> (Stokes)
// or mu (v0, w0) + mu h^-1 <jump.n, jump.n> (Darcy), built column by column
// from the oracle's weak gradient.
Eigen::MatrixXd oracle_local_a_s(const ElementKernels& K, bool stokes, double mu) {
  const int nd = K.ndof(), k = K.degree();
  const oracle::Element T = test::oracle_element(K);
  const oracle::Rule rule = oracle::map(oracle::collapsed_gauss(oracle::kCollapsedPoints), T.v);
  const oracle::Rule gl = oracle::gauss_unit(oracle::kEdgePoints);
  double diam = 0.0;
  for (int e = 0; e < 3; ++e) diam = std::max(diam, T.length(e));

  std::vector<oracle::WeakFunction> fns;
  std::vector<std::function<oracle::Mat2(oracle::Vec2)>> strains;
  for (int j = 0; j < nd; ++j) {
    fns.push_back(test::oracle_function(K, Eigen::VectorXd::Unit(nd, j)));
    const auto g = oracle::weak_gradient(T, k, fns.back());
    strains.push_back([g](oracle::Vec2 x) {
      const oracle::Mat2 G = g(x);
      return oracle::Mat2(0.5 * (G + G.transpose()));
    });
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nd, nd);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const oracle::Vec2 x = rule.points[q];
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j)
        A(i, j) += rule.weights[q] * (stokes ? 2.0 * strains[i](x).cwiseProduct(strains[j](x)).sum()
                                             : fns[i].interior(x).dot(fns[j].interior(x)));
  }
  for (int e = 0; e < 3; ++e)
    for (std::size_t q = 0; q < gl.points.size(); ++q) {
      const double s = gl.points[q].x();
      const double w = gl.weights[q] * T.length(e) / diam;
      const oracle::Vec2 x = T.at(e, s), n = T.outward_normal(e);
      std::vector<oracle::Vec2> jump(nd);
      for (int i = 0; i < nd; ++i) jump[i] = fns[i].interior(x) - fns[i].boundary[e](s);
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j) A(i, j) += w * (stokes ? jump[i].dot(jump[j]) : jump[i].dot(n) * jump[j].dot(n));
    }
  return mu * A;
}

// Global weak function equal to the constant vector c everywhere.
Eigen::VectorXd global_constant(const Discretization& disc, Vec2 c) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(disc.dofs().num_velocity());
  const int m = disc.dofs().scalar_dim(), k = disc.degree();
  for (Index t = 0; t < disc.mesh().num_triangles(); ++t) {
    v[disc.dofs().interior_offset(t)] = c.x();
    v[disc.dofs().interior_offset(t) + m] = c.y();
  }
  for (Index e = 0; e < disc.mesh().num_edges(); ++e) {
    const Index off = disc.dofs().edge_offset(e);
    const Point2 n = disc.mesh().edges()[e].unit_normal;
    if (disc.dofs().edge_width(e) == 2 * (k + 1)) {
      v[off] = c.x();
      v[off + k + 1] = c.y();
    } else {
      v[off] = c.x() * n.x + c.y() * n.y;
    }
  }
  return v;
}

Discretization coarse(int k, int n = 2) { return Discretization(build_uniform_mesh(example1().geometry, n), k); }

}  // namespace

TEST(System, DofCountsForCoarseMesh) {
  // 16 triangles, 14 Stokes-only, 14 Darcy-only and 2 interface edges
  const Discretization disc = coarse(1);
  const DofMap& d = disc.dofs();
  EXPECT_EQ(d.num_velocity(), 16 * 2 * 3 + (14 + 2) * 4 + 14 * 2);
  EXPECT_EQ(d.num_pressure(), 16 * 3);
  EXPECT_EQ(d.size(), 188 + 48 + 1);
  EXPECT_EQ(d.num_constrained(), 6 * 4 + 6 * 2);
  const SparseSystem sys = apply_constraints(assemble_matrix(disc, {}), Eigen::VectorXd::Zero(d.size()), d,
                                             Eigen::VectorXd::Zero(d.size()));
  EXPECT_EQ(sys.matrix.rows(), 237 - 36);
}

TEST(System, LocalFormsMatchDenseOracle) {
  using test::make_element;
  const auto V = TraceKind::Vector, S = TraceKind::ScalarNormal;
  const std::array<Point2, 3> tri{Point2{0.1, 0.0}, Point2{0.9, 0.2}, Point2{0.3, 0.7}};
  for (int k : {1, 2}) {
    const ElementKernels stokes(make_element(tri, {V, V, V}, {false, true, false}), k);
    const ElementKernels darcy(make_element(tri, {S, V, S}, {true, false, false}), k);
    const PhysicalParams p = PhysicalParams::isotropic(2.5, 1.0, 1.0);
    const Eigen::MatrixXd As = local_a_s(stokes, Subdomain::Stokes, p);
    const Eigen::MatrixXd Ad = local_a_s(darcy, Subdomain::Darcy, p);
    EXPECT_LT((As - oracle_local_a_s(stokes, true, 2.5)).norm(), 1e-11 * As.norm()) << k;
    EXPECT_LT((Ad - oracle_local_a_s(darcy, false, 2.5)).norm(), 1e-11 * Ad.norm()) << k;
  }
}

TEST(System, MatrixIsSymmetric) {
  for (int k : {1, 2}) {
    const Discretization disc = coarse(k, 4);
    const SparseMatrix K = assemble_matrix(disc, PhysicalParams::isotropic(0.3, 2.0, 0.7));
    const SparseMatrix diff = SparseMatrix(K - SparseMatrix(K.transpose()));
    EXPECT_LE(max_abs(diff), 1e-12 * max_abs(K));
  }
}

TEST(System, VelocityBlockIsLinearInViscosity) {
  const Discretization disc = coarse(2, 4);
  const SparseMatrix a1 = assemble_a_s(disc, PhysicalParams::isotropic(1.0, 1.0, 1.0));
  const SparseMatrix a3 = assemble_a_s(disc, PhysicalParams::isotropic(1e3, 1.0, 1.0));
  EXPECT_LE(max_abs(SparseMatrix(a3 - 1e3 * a1)), 1e-14 * max_abs(a3));
}

TEST(System, ConstantFieldOnlySeesDarcyMass) {
  // vertical constant: tangential to no interface edge of example 1
  const Discretization disc = coarse(2, 4);
  const Vec2 c(0.0, 1.5);
  const Eigen::VectorXd v = global_constant(disc, c);
  const PhysicalParams p = PhysicalParams::isotropic(3.0, 1.0, 1.0);
  const double darcy_area = example1().geometry.darcy.area();
  EXPECT_NEAR(v.dot(assemble_a_s(disc, p) * v), 3.0 * c.squaredNorm() * darcy_area, 1e-11);
}

TEST(System, DivergenceFreeInterpolantIsInKernelOfB) {
  const ExactSolution ex = example1();
  for (int k : {1, 2}) {
    const Discretization disc = coarse(k, 4);
    const Eigen::VectorXd u = interpolate_velocity(disc, ex);
    EXPECT_LT((assemble_b(disc) * u).cwiseAbs().maxCoeff(), 1e-11) << k;
  }
}

TEST(System, ConstantPressureIsOrthogonalToDivergence) {
  const Discretization disc = coarse(2, 4);
  Eigen::VectorXd v = test::random_vector(disc.dofs().num_velocity(), 8);
  for (Index i = 0; i < v.size(); ++i)
    if (disc.dofs().is_constrained(i)) v[i] = 0.0;
  Eigen::VectorXd one = Eigen::VectorXd::Zero(disc.dofs().num_pressure());
  for (Index t = 0; t < disc.mesh().num_triangles(); ++t)
    one[disc.dofs().pressure_offset(t) - disc.dofs().num_velocity()] = 1.0;
  EXPECT_LT(std::abs(one.dot(assemble_b(disc) * v)), 1e-12 * v.norm());
}

TEST(System, ZeroDataGivesZeroRightHandSide) {
  const Discretization disc = coarse(1);
  SourceData zero{[](Point2) { return Vec2::Zero(); }, [](Point2) { return Vec2::Zero(); }, [](Point2) { return 0.0; },
                  [](Point2) { return 0.0; }};
  for (Algorithm a : {Algorithm::Robust, Algorithm::Standard})
    EXPECT_EQ(assemble_rhs(disc, zero, a).cwiseAbs().maxCoeff(), 0.0);
}

TEST(System, ConstantForceGivesSameRightHandSide) {
  for (int k : {1, 2}) {
    const Discretization disc = coarse(k, 4);
    SourceData data{[](Point2) { return Vec2(1.0, -2.0); }, [](Point2) { return Vec2(0.5, 3.0); },
                    [](Point2 x) { return x.x; }, [](Point2) { return 0.0; }};
    const Eigen::VectorXd r = assemble_rhs(disc, data, Algorithm::Robust);
    const Eigen::VectorXd s = assemble_rhs(disc, data, Algorithm::Standard);
    EXPECT_LT((r - s).cwiseAbs().maxCoeff(), 1e-13) << k;
  }
}

TEST(System, HomogeneousSystemHasOnlyZeroSolution) {
  for (int k : {1, 2}) {
    const Discretization disc = coarse(k);
    const Index n = disc.dofs().size();
    const SparseSystem sys =
        apply_constraints(assemble_matrix(disc, {}), Eigen::VectorXd::Zero(n), disc.dofs(), Eigen::VectorXd::Zero(n));
    const Eigen::MatrixXd dense(sys.matrix);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(dense).singularValues();
    EXPECT_GT(sv.minCoeff(), 1e-8 * sv.maxCoeff()) << k;
  }
}

TEST(System, ConstraintsEliminateBoundaryDofs) {
  const Discretization disc = coarse(1);
  const DofMap& d = disc.dofs();
  Eigen::VectorXd fixed = Eigen::VectorXd::Zero(d.size());
  for (Index i = 0; i < d.size(); ++i)
    if (d.is_constrained(i)) fixed[i] = 1.0 + i;
  const SparseSystem sys = apply_constraints(assemble_matrix(disc, {}), Eigen::VectorXd::Zero(d.size()), d, fixed);
  for (Index f : sys.free_dofs) EXPECT_FALSE(d.is_constrained(f));
  const Eigen::VectorXd full = sys.expand(Eigen::VectorXd::Zero(sys.matrix.rows()));
  EXPECT_EQ((full - fixed).cwiseAbs().maxCoeff(), 0.0);
}

TEST(System, InfSupIsPositive) {
  for (int k : {1, 2}) {
    const InfSupEstimate est = infsup_probe(coarse(k), {});
    EXPECT_TRUE(est.applicable);
    EXPECT_GT(est.beta, 0.0);
  }
}

TEST(System, MatrixMarketHeader) {
  const Discretization disc = coarse(1, 1);
  std::ostringstream os;
  write_matrix_market(assemble_matrix(disc, {}), os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("%%MatrixMarket matrix coordinate real general", 0), 0u);
}

TEST(System, RejectsInvalidParameters) {
  EXPECT_THROW(PhysicalParams::isotropic(0.0, 1.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(PhysicalParams::isotropic(1.0, -1.0, 1.0).validate(), std::invalid_argument);
  EXPECT_THROW(PhysicalParams::isotropic(1.0, 1.0, -0.1).validate(), std::invalid_argument);
  EXPECT_THROW(parse_algorithm("fast"), std::invalid_argument);
}
