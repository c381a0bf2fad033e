#pragma once

#include <array>
#include <functional>
#include <stdexcept>

#include <Eigen/Core>

#include "wgsd/mesh.hpp"
#include "wgsd/polynomial.hpp"

namespace wgsd {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using ScalarField = std::function<double(Point2)>;
using VectorField = std::function<Vec2(Point2)>;
using TensorField = std::function<Mat2(Point2)>;

/// How the boundary unknown of an edge is stored: the full vector trace in
/// [P_k(e)]^2 (Stokes and interface edges) or the scalar normal component
/// v_b with vector value v_b * n_e (Darcy edges off the interface).
enum class TraceKind : std::uint8_t { Vector, ScalarNormal };

inline int trace_width(TraceKind kind, int k) {
  return kind == TraceKind::Vector ? 2 * (k + 1) : k + 1;
}

struct LocalEdge {
  Point2 a, b;  // edge polynomials run from a (s = 0) to b (s = 1)
  Point2 normal;  // stored global edge normal n_e
  TraceKind kind = TraceKind::Vector;
};

/// Geometry of one element as needed by the local kernels. Local edge i
/// joins vertices[i] and vertices[(i + 1) % 3].
struct LocalElement {
  std::array<Point2, 3> vertices;
  std::array<LocalEdge, 3> edges;

  static LocalElement from_mesh(const Mesh& mesh, Index tri_id);
};

/// Local DOF layout: v0 x-coefficients, v0 y-coefficients, then the three
/// edge blocks. Vector edge blocks store x- then y-coefficients.
struct LocalLayout {
  int degree = 1;
  int scalar_dim = 0;  // dim P_k(T)
  int interior = 0;    // 2 * scalar_dim
  std::array<int, 3> edge_offset{};
  std::array<int, 3> edge_width{};
  int size = 0;
};

class SingularMomentSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-element matrices realizing the weak operators on local DOF vectors.
/// Tensor coefficients in [P_{k-1}]^{2x2} are stored component-major:
/// block (i, j) occupies rows (2 i + j) * dim P_{k-1}.
struct ElementKernels {
  ElementKernels(const LocalElement& element, int k);

  LocalElement element;
  LocalLayout layout;
  TriBasis basis;        // P_k
  TriBasis lower_basis;  // P_{k-1}
  EdgeBasis edge_basis;
  RTBasis rt;
  LocalFrame frame;
  double area = 0.0;
  double diameter = 0.0;
  std::array<Point2, 3> outward_normals;

  Eigen::MatrixXd mass;        // P_k Gram
  Eigen::MatrixXd mass_lower;  // P_{k-1} Gram

  Eigen::MatrixXd gradient;      // 4 dim P_{k-1} x ndof
  Eigen::MatrixXd symmetrizer;   // 4 dim P_{k-1} square; strain = symmetrizer * gradient
  Eigen::MatrixXd strain;        // 4 dim P_{k-1} x ndof
  Eigen::MatrixXd divergence;    // dim P_k x ndof
  Eigen::MatrixXd div_moments;   // (div_w v, phi_m)_T = mass * divergence
  Eigen::MatrixXd reconstruction;  // dim RT_k x ndof

  Eigen::MatrixXd strain_gram;  // (D_w v, D_w w)_T
  /// h_T^{-1} <v0 - vb, w0 - wb>_{dT} (vector jump) and its normal-only variant.
  Eigen::MatrixXd stab_vector;
  Eigen::MatrixXd stab_normal;
  /// (v0, w0)_T componentwise, for the 2x2 tensor weight `weight`.
  Eigen::MatrixXd interior_mass(const Mat2& weight) const;

  int ndof() const { return layout.size; }
  int degree() const { return layout.degree; }

  /// Traces on local edge e at parameter s: 2 x ndof rows giving the value of
  /// v0 and v_b (as vectors) in terms of the local DOFs.
  void edge_traces(int e, double s, Eigen::Ref<Eigen::Matrix2Xd> interior,
                   Eigen::Ref<Eigen::Matrix2Xd> boundary) const;
  /// v0 at a point: 2 x ndof.
  void interior_values(Point2 p, Eigen::Ref<Eigen::Matrix2Xd> out) const;
};

// Operations on local DOF vectors.
Eigen::VectorXd weak_gradient(const ElementKernels& K, const Eigen::VectorXd& v);
Eigen::VectorXd weak_divergence(const ElementKernels& K, const Eigen::VectorXd& v);
Eigen::VectorXd weak_strain(const ElementKernels& K, const Eigen::VectorXd& v);
Eigen::VectorXd rt_reconstruct(const ElementKernels& K, const Eigen::VectorXd& v);

/// Evaluates a [P_{k-1}]^{2x2} coefficient vector at a point.
Mat2 eval_tensor(const ElementKernels& K, const Eigen::VectorXd& coeffs, Point2 p);
/// Evaluates an RT_k coefficient vector and its divergence at a point.
Vec2 eval_rt(const ElementKernels& K, const Eigen::VectorXd& coeffs, Point2 p);
double eval_rt_divergence(const ElementKernels& K, const Eigen::VectorXd& coeffs, Point2 p);
double eval_scalar(const ElementKernels& K, const Eigen::VectorXd& coeffs, Point2 p);

// L2 projections. `quad_degree` selects the rule used for the data.
Eigen::VectorXd project_q0(const ElementKernels& K, const VectorField& f, int quad_degree);
Eigen::VectorXd project_pressure(const ElementKernels& K, const ScalarField& f, int quad_degree);
Eigen::VectorXd project_tensor(const ElementKernels& K, const TensorField& f, int quad_degree);
/// Q_b on an edge: vector coefficients for Vector edges, Q_b(f . n_e) for
/// ScalarNormal edges.
Eigen::VectorXd project_qb(const LocalEdge& edge, int k, const VectorField& f, int quad_degree);
/// Q_h u = {Q_0 u, Q_b u} as a local DOF vector.
Eigen::VectorXd project_weak(const ElementKernels& K, const VectorField& f, int quad_degree);

}  // namespace wgsd
