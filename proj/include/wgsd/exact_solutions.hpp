#pragma once

#include <string>
#include <vector>

#include "wgsd/mesh.hpp"
#include "wgsd/weak_ops.hpp"

namespace wgsd {

/// Closed-form velocity/pressure pair on a two-rectangle geometry with the
/// derivatives needed to manufacture data. Tensor fields follow
/// (grad u)_{ij} = d u_i / d x_j.
struct ExactSolution {
  std::string name;
  TwoDomainGeometry geometry;
  VectorField u_s, u_d;
  ScalarField p_s, p_d;
  TensorField grad_u_s, grad_u_d;
  VectorField div_strain_s;  // div(2 D(u_s))
  VectorField grad_p_s, grad_p_d;
  ScalarField div_u_s, div_u_d;
  /// Integral of the pressure over both subdomains.
  double pressure_integral = 0.0;
};

/// Trigonometric/hyperbolic pair on (0,pi)^2 over (0,pi)x(-pi,0).
ExactSolution example1();
/// Zero velocity with pressure (xy)^3 - 1/16 on (0,1/2)x(0,1) | (1/2,1)x(0,1).
ExactSolution example2();
/// Polynomial pair reproduced exactly by the robust scheme at degree k
/// (k = 1: linear pressure; k = 2: quadratic Stokes velocity and bilinear
/// pressure), on the geometry of example2.
ExactSolution polynomial_patch(int k);

/// "example1" or "example2"; throws std::invalid_argument otherwise.
ExactSolution make_example(const std::string& name);

}  // namespace wgsd
