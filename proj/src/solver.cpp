#include "wgsd/solver.hpp"

#include <sstream>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#ifdef WGSD_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace wgsd {

namespace {

constexpr double kRegularization = 1e-8;
constexpr int kMaxRefinements = 30;

double residual_of(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double bn = b.norm();
  const double rn = (A * x - b).norm();
  return bn > 0.0 ? rn / bn : rn;
}

bool is_symmetric(const SparseMatrix& A) {
  const SparseMatrix At = A.transpose();
  return (A - At).norm() <= 1e-12 * A.norm();
}

// Diagonal shift for rows whose diagonal vanishes, sized like a Jacobi
// estimate of the local Schur complement. Rows next to positive pivots
// (pressure) get a negative shift. Rows that only touch those (the
// mean-value multiplier) see a negative Schur estimate and get a positive
// one, which keeps the shifted matrix quasi-definite.
Eigen::VectorXd saddle_shift(const SparseMatrix& A) {
  const Index n = A.rows();
  const Eigen::VectorXd diag = A.diagonal();
  Eigen::VectorXd schur = diag;  // signed pivot estimate per row
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(n);
  for (int level = 0; level < 2; ++level) {
    Eigen::VectorXd next = schur;
    for (Index c = 0; c < n; ++c) {
      if (schur[c] != 0.0) continue;
      double s = 0.0;
      for (SparseMatrix::InnerIterator it(A, c); it; ++it) {
        const Index j = it.row();
        if (j != c && schur[j] != 0.0) s -= it.value() * it.value() / schur[j];
      }
      next[c] = s;
      shift[c] = kRegularization * s;
    }
    schur = next;
  }
  return shift;
}

// Symmetric quasi-definite approximation factored without pivoting, then
// iterative refinement against the exact matrix. Returns false when the
// refinement does not reach the tolerance.
bool regularized_solve(const SparseMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x) {
  const Eigen::VectorXd shift = saddle_shift(A);
  std::vector<Eigen::Triplet<double>> entries;
  for (Index i = 0; i < shift.size(); ++i)
    if (shift[i] != 0.0) entries.emplace_back(i, i, shift[i]);
  SparseMatrix D(A.rows(), A.cols());
  D.setFromTriplets(entries.begin(), entries.end());

  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  ldlt.compute(A + D);
  if (ldlt.info() != Eigen::Success) return false;

  x = Eigen::VectorXd::Zero(b.size());
  double previous = 1.0;
  for (int it = 0; it < kMaxRefinements; ++it) {
    const Eigen::VectorXd r = b - A * x;
    const double res = b.norm() > 0.0 ? r.norm() / b.norm() : r.norm();
    if (res <= 1e-14 || (it > 0 && res > 0.5 * previous)) break;
    previous = res;
    x += ldlt.solve(r);
  }
  return residual_of(A, x, b) <= kResidualTolerance;
}

#ifdef WGSD_HAVE_UMFPACK
Eigen::VectorXd pivoting_solve(const SparseMatrix& A, const Eigen::VectorXd& b) {
  Eigen::UmfPackLU<SparseMatrix> lu;
  lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
  lu.compute(A);
  if (lu.info() != Eigen::Success) {
    // UMFPACK does not report the pivot; SparseLU does.
    Eigen::SparseLU<SparseMatrix> fallback;
    fallback.compute(A);
    throw SolverError("singular system: " + (fallback.info() != Eigen::Success
                                                 ? fallback.lastErrorMessage()
                                                 : std::string("UMFPACK factorization failed")));
  }
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success) throw SolverError("UMFPACK solve failed");
  return x;
}
#else
Eigen::VectorXd pivoting_solve(const SparseMatrix& A, const Eigen::VectorXd& b) {
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("singular system: " + lu.lastErrorMessage());
  return lu.solve(b);
}
#endif

}  // namespace

Eigen::VectorXd solve_reduced(const SparseMatrix& A, const Eigen::VectorXd& b, double* relative_residual) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw SolverError("system is not square");
  if (A.rows() == 0) {
    if (relative_residual) *relative_residual = 0.0;
    return Eigen::VectorXd();
  }
  SparseMatrix Ac = A;
  Ac.makeCompressed();
  Eigen::VectorXd x;
  if (!is_symmetric(Ac) || !regularized_solve(Ac, b, x)) x = pivoting_solve(Ac, b);
  const double res = residual_of(Ac, x, b);
  if (relative_residual) *relative_residual = res;
  if (!(res <= kResidualTolerance)) {
    std::ostringstream msg;
    msg << "relative residual " << res << " exceeds " << kResidualTolerance;
    throw SolverError(msg.str());
  }
  return x;
}

Solution solve(const SparseSystem& system) {
  Solution s;
  const Eigen::VectorXd xr = solve_reduced(system.matrix, system.rhs, &s.relative_residual);
  s.x = system.expand(xr);
  return s;
}

}  // namespace wgsd
