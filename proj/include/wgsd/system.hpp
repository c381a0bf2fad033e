#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wgsd/mesh.hpp"
#include "wgsd/weak_ops.hpp"

namespace wgsd {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Quadrature degree for integrals of manufactured data over elements.
inline int data_quad_degree(int k) { return 2 * k + 12; }
/// Edge rule for projecting boundary data. Edges are cheap, and a sharper
/// rule keeps the imposed boundary flux consistent with the divergence
/// source to round-off on coarse meshes.
inline int boundary_quad_degree(int k) { return 2 * k + 16; }

enum class Algorithm : std::uint8_t { Robust, Standard };

const char* to_string(Algorithm a);
/// Accepts "robust" and "standard"; throws std::invalid_argument otherwise.
Algorithm parse_algorithm(const std::string& name);

struct PhysicalParams {
  double mu = 1.0;
  Mat2 kappa = Mat2::Identity();
  double alpha = 1.0;

  static PhysicalParams isotropic(double mu, double kappa, double alpha);
  /// Throws std::invalid_argument unless mu > 0, kappa is SPD and alpha >= 0.
  void validate() const;
  /// kappa^{-1/2} along the unit tangent t, i.e. (t . kappa t)^{-1/2}.
  double tangential_resistance(Point2 t) const;
};

/// Global numbering: [interior velocity | edge velocity | pressure | multiplier].
/// Interior blocks are 2 dim P_k per element, edge blocks 2(k+1) on Stokes
/// and interface edges and k+1 on Darcy edges off the interface, pressure
/// blocks dim P_k per element, then one mean-value multiplier.
class DofMap {
 public:
  DofMap(const Mesh& mesh, int k);

  int degree() const { return k_; }
  int scalar_dim() const { return m_; }

  Index interior_offset(Index tri) const { return tri * 2 * m_; }
  Index edge_offset(Index edge) const { return edge_offset_[edge]; }
  int edge_width(Index edge) const { return edge_width_[edge]; }
  Index pressure_offset(Index tri) const { return num_velocity_ + tri * m_; }
  Index multiplier() const { return num_velocity_ + num_pressure_; }

  Index num_velocity() const { return num_velocity_; }
  Index num_pressure() const { return num_pressure_; }
  Index size() const { return num_velocity_ + num_pressure_ + 1; }

  /// True for velocity DOFs on outer-boundary edges (eliminated by the
  /// essential boundary condition).
  bool is_constrained(Index dof) const { return dof < num_velocity_ && constrained_[dof]; }
  Index num_constrained() const { return num_constrained_; }

 private:
  int k_;
  int m_;
  std::vector<Index> edge_offset_;
  std::vector<int> edge_width_;
  std::vector<bool> constrained_;
  Index num_velocity_ = 0;
  Index num_pressure_ = 0;
  Index num_constrained_ = 0;
};

/// Mesh, DOF map and per-element kernels for one polynomial degree.
class Discretization {
 public:
  Discretization(Mesh mesh, int k);

  const Mesh& mesh() const { return mesh_; }
  int degree() const { return k_; }
  const DofMap& dofs() const { return dofs_; }
  const ElementKernels& kernels(Index tri) const { return kernels_[tri]; }
  /// Global indices of the local velocity DOFs of an element.
  const std::vector<Index>& velocity_dofs(Index tri) const { return velocity_dofs_[tri]; }

  /// Local velocity DOF vector of one element.
  Eigen::VectorXd gather(const Eigen::VectorXd& global, Index tri) const;
  /// Pressure coefficients of one element.
  Eigen::VectorXd gather_pressure(const Eigen::VectorXd& global, Index tri) const;

 private:
  Mesh mesh_;
  int k_;
  DofMap dofs_;
  std::vector<ElementKernels> kernels_;
  std::vector<std::vector<Index>> velocity_dofs_;
};

/// Body forces and divergence source per subdomain.
struct SourceData {
  VectorField f_stokes;
  VectorField f_darcy;
  ScalarField g_stokes;
  ScalarField g_darcy;
};

/// Velocity whose Q_b projection is imposed on outer edges. Empty fields
/// mean homogeneous conditions.
struct BoundaryData {
  VectorField stokes;
  VectorField darcy;
};

/// Element matrix of a_s without the interface term.
Eigen::MatrixXd local_a_s(const ElementKernels& K, Subdomain sd, const PhysicalParams& params);
/// Interface slip term on one edge, acting on its 2(k+1) edge DOFs.
Eigen::MatrixXd interface_slip_matrix(const Mesh& mesh, Index edge, int k, double coefficient);

/// Velocity block (num_velocity square).
SparseMatrix assemble_a_s(const Discretization& disc, const PhysicalParams& params);
/// Coupling block b(v, q) = -sum (div_w v, q)_T, num_pressure x num_velocity.
SparseMatrix assemble_b(const Discretization& disc);
/// Integrals of the pressure basis functions, used by the mean-value row.
Eigen::VectorXd pressure_mean_weights(const Discretization& disc);
/// Block-diagonal pressure mass matrix (num_pressure square).
SparseMatrix pressure_mass(const Discretization& disc);

/// Full saddle-point matrix [[A, B^T, 0], [B, 0, c], [0, c^T, 0]].
SparseMatrix assemble_matrix(const Discretization& disc, const PhysicalParams& params);
/// Full right-hand side: body-force moments and -(g, q) in the pressure rows.
Eigen::VectorXd assemble_rhs(const Discretization& disc, const SourceData& data, Algorithm algorithm);
/// Full-length vector holding Q_b of the boundary data on constrained DOFs.
Eigen::VectorXd boundary_values(const Discretization& disc, const BoundaryData& data);

/// Gram matrix of the energy norm on the velocity DOFs, including the
/// interface tangential term with weight alpha / 2.
SparseMatrix assemble_energy_gram(const Discretization& disc, const PhysicalParams& params);
/// Element part of the energy norm (no interface term).
Eigen::MatrixXd local_energy(const ElementKernels& K, Subdomain sd, const Mat2& kappa);

/// System after eliminating constrained DOFs.
struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<Index> free_dofs;  // reduced index -> full index
  Eigen::VectorXd fixed;         // full-length, nonzero only on constrained DOFs

  /// Full-length vector from a reduced solution.
  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
};

SparseSystem apply_constraints(const SparseMatrix& full_matrix, const Eigen::VectorXd& full_rhs,
                               const DofMap& dofs, const Eigen::VectorXd& fixed_values);

/// Smallest generalized singular value of B on the constrained velocity
/// space, measured in the energy norm and with zero-mean pressures.
struct InfSupEstimate {
  bool applicable = false;
  double beta = 0.0;
  int n = 0;
  int k = 0;
};

InfSupEstimate infsup_probe(const Discretization& disc, const PhysicalParams& params);

/// MatrixMarket coordinate format, general real.
void write_matrix_market(const SparseMatrix& m, std::ostream& os);

}  // namespace wgsd
