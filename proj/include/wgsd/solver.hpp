#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "wgsd/system.hpp"

namespace wgsd {

/// Thrown when the factorization breaks down or the residual gate fails.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kResidualTolerance = 1e-9;

struct Solution {
  Eigen::VectorXd x;  // full-length: velocity, pressure, multiplier
  double relative_residual = 0.0;
};

/// Direct solve of the reduced system; expands to full length. Symmetric
/// saddle systems use a shifted LDLT with iterative refinement, anything
/// else (or a refinement that stalls) a pivoting sparse LU.
/// Throws SolverError if the matrix is singular or the relative residual
/// exceeds kResidualTolerance.
Solution solve(const SparseSystem& system);

/// Reduced-space solve with the same residual certificate.
Eigen::VectorXd solve_reduced(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                              double* relative_residual = nullptr);

}  // namespace wgsd
