#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "wgsd/exact_solutions.hpp"
#include "wgsd/solver.hpp"
#include "wgsd/system.hpp"

namespace wgsd {

struct ManufacturedData {
  SourceData source;
  BoundaryData boundary;
};

/// f_s = -div(2 mu D u_s) + grad p_s, f_d = mu kappa^{-1} u_d + grad p_d,
/// g = div u, and the exact velocity as boundary data.
ManufacturedData manufactured_data(const ExactSolution& exact, const PhysicalParams& params);

/// Largest pointwise residuals of the three interface conditions at
/// sampled points of the interface.
struct InterfaceResiduals {
  double mass = 0.0;
  double normal_stress = 0.0;
  double slip = 0.0;
  double max() const { return std::max({mass, normal_stress, slip}); }
};

InterfaceResiduals interface_residuals(const ExactSolution& exact, const PhysicalParams& params,
                                       int samples = 97);

class InterfaceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws InterfaceGuardError when any residual exceeds `tol` relative to
/// the size of the traces involved.
void check_interface_consistency(const ExactSolution& exact, const PhysicalParams& params,
                                 double tol = 1e-10);

/// Q_h u as a velocity vector (num_velocity entries): Q_0 u per element and
/// Q_b u per edge, taken from the Stokes velocity on interface edges.
Eigen::VectorXd interpolate_velocity(const Discretization& disc, const ExactSolution& exact);
/// Elementwise L2 projection of the pressure with its mean over the whole
/// domain removed (num_pressure entries).
Eigen::VectorXd project_exact_pressure(const Discretization& disc, const ExactSolution& exact);

struct SubdomainErrors {
  double energy = 0.0;  // |||Q_h u - u_h|||
  double l2 = 0.0;      // ||Q_0 u - u_0||
  double pressure = 0.0;
};

/// Per-subdomain energy norm of a velocity vector. The interface
/// tangential term is counted in the Stokes part.
std::array<double, 2> energy_norm_split(const Discretization& disc, const Eigen::VectorXd& velocity,
                                        const PhysicalParams& params);
double energy_norm(const Discretization& disc, const Eigen::VectorXd& velocity, const PhysicalParams& params);

struct ErrorReport {
  int n = 0;
  int k = 0;
  double mu = 1.0;
  Algorithm algorithm = Algorithm::Robust;
  SubdomainErrors stokes;
  SubdomainErrors darcy;
  double relative_residual = 0.0;
  double divergence_defect = 0.0;  // ||div_w u_h - Q_h g||
  double source_norm = 0.0;        // ||Q_h g||
  double velocity_norm = 0.0;      // ||u_0||
  Index unknowns = 0;
  double seconds = 0.0;

  /// Column order: energy, L2, pressure for Stokes, then for Darcy.
  std::array<double, 6> columns() const;
};

/// Errors of a solved system against the exact solution.
ErrorReport error_report(const Discretization& disc, const Solution& solution, const ExactSolution& exact,
                         const PhysicalParams& params);

/// ||div_w u_h - Q_h g|| over the whole domain.
double divergence_defect(const Discretization& disc, const Eigen::VectorXd& x, const SourceData& source);

/// ||Q_h g|| over the whole domain.
double projected_source_norm(const Discretization& disc, const SourceData& source);
/// L2 norm of the interior velocity u_0 of a solution vector.
double interior_velocity_norm(const Discretization& disc, const Eigen::VectorXd& x);

inline constexpr double kDivergenceTolerance = 1e-9;
/// Allowed divergence defect of a solve, 1e-9 (1 + ||Q_h g||). Velocities
/// far above unit size carry a round-off floor proportional to their
/// magnitude, so the bound grows with ||u_0|| once that exceeds it.
double divergence_tolerance(const ErrorReport& r);

/// One complete solve: assemble, constrain, solve, measure.
struct CaseResult {
  ErrorReport report;
  Solution solution;
  Eigen::VectorXd velocity_error;  // Q_h u - u_h
  Eigen::VectorXd pressure_error;  // Q_h p - p_h, both mean free
};

CaseResult run_case(const ExactSolution& exact, int k, int n, const PhysicalParams& params, Algorithm algorithm);
CaseResult run_case(const Discretization& disc, const ExactSolution& exact, const PhysicalParams& params,
                    Algorithm algorithm);

/// log2-type orders between consecutive rows, log(e_prev / e) / log(n / n_prev);
/// NaN for the first row or when an error vanishes.
struct ConvergenceTable {
  std::vector<ErrorReport> rows;
  std::vector<std::array<double, 6>> orders;
};

ConvergenceTable convergence_table(const ExactSolution& exact, int k, const PhysicalParams& params,
                                   Algorithm algorithm, const std::vector<int>& ns);
ConvergenceTable make_table(std::vector<ErrorReport> rows);

/// Fixed mesh, varying viscosity; one report per (mu, algorithm).
std::vector<ErrorReport> robustness_sweep(const ExactSolution& exact, int k, int n, const std::vector<double>& mus,
                                          const std::vector<Algorithm>& algorithms, const PhysicalParams& base);

}  // namespace wgsd
