#include "wgsd/exact_solutions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wgsd {

namespace {

constexpr double kPi = std::numbers::pi;

Mat2 mat(double a, double b, double c, double d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

}  // namespace

ExactSolution example1() {
  ExactSolution s;
  s.name = "example1";
  s.geometry.stokes = {0.0, kPi, 0.0, kPi};
  s.geometry.darcy = {0.0, kPi, -kPi, 0.0};

  s.u_s = [](Point2 p) {
    return Vec2(std::sin(2 * p.y) * std::cos(p.x), (std::sin(p.y) * std::sin(p.y) - 2) * std::sin(p.x));
  };
  s.p_s = [](Point2 p) { return std::sin(p.x) * std::sin(p.y); };
  s.grad_u_s = [](Point2 p) {
    const double sx = std::sin(p.x), cx = std::cos(p.x), sy = std::sin(p.y);
    return mat(-std::sin(2 * p.y) * sx, 2 * std::cos(2 * p.y) * cx, (sy * sy - 2) * cx, std::sin(2 * p.y) * sx);
  };
  // Divergence-free, so div(2 D(u)) is the vector Laplacian.
  s.div_strain_s = [](Point2 p) {
    const double sy = std::sin(p.y);
    return Vec2(-5 * std::sin(2 * p.y) * std::cos(p.x), (2 * std::cos(2 * p.y) - sy * sy + 2) * std::sin(p.x));
  };
  s.grad_p_s = [](Point2 p) { return Vec2(std::cos(p.x) * std::sin(p.y), std::sin(p.x) * std::cos(p.y)); };
  s.div_u_s = [](Point2) { return 0.0; };

  s.u_d = [](Point2 p) {
    return Vec2(-2 * std::sinh(p.y) * std::cos(p.x), -2 * std::cosh(p.y) * std::sin(p.x));
  };
  s.p_d = [](Point2 p) { return 2 * std::sinh(p.y) * std::sin(p.x); };
  s.grad_u_d = [](Point2 p) {
    const double sx = std::sin(p.x), cx = std::cos(p.x);
    const double sh = std::sinh(p.y), ch = std::cosh(p.y);
    return mat(2 * sh * sx, -2 * ch * cx, -2 * ch * cx, -2 * sh * sx);
  };
  s.grad_p_d = [](Point2 p) {
    return Vec2(2 * std::sinh(p.y) * std::cos(p.x), 2 * std::cosh(p.y) * std::sin(p.x));
  };
  s.div_u_d = [](Point2) { return 0.0; };

  s.pressure_integral = 8.0 - 4.0 * std::cosh(kPi);
  return s;
}

ExactSolution example2() {
  ExactSolution s;
  s.name = "example2";
  s.geometry.stokes = {0.0, 0.5, 0.0, 1.0};
  s.geometry.darcy = {0.5, 1.0, 0.0, 1.0};
  const VectorField zero = [](Point2) { return Vec2(0.0, 0.0); };
  const TensorField zero_t = [](Point2) { return Mat2::Zero().eval(); };
  const ScalarField p = [](Point2 q) { return std::pow(q.x * q.y, 3) - 1.0 / 16.0; };
  const VectorField gp = [](Point2 q) {
    return Vec2(3 * q.x * q.x * std::pow(q.y, 3), 3 * std::pow(q.x, 3) * q.y * q.y);
  };
  s.u_s = s.u_d = zero;
  s.grad_u_s = s.grad_u_d = zero_t;
  s.div_strain_s = zero;
  s.p_s = s.p_d = p;
  s.grad_p_s = s.grad_p_d = gp;
  s.div_u_s = s.div_u_d = [](Point2) { return 0.0; };
  // int_0^1 int_0^1 (xy)^3 = 1/16 over the unit square.
  s.pressure_integral = 0.0;
  return s;
}

ExactSolution polynomial_patch(int k) {
  if (k != 1 && k != 2) throw std::invalid_argument("polynomial patch is defined for k = 1, 2");
  ExactSolution s = example2();
  s.name = "patch" + std::to_string(k);
  s.u_d = [](Point2) { return Vec2(1.0, 0.0); };
  s.grad_u_d = [](Point2) { return Mat2::Zero().eval(); };
  if (k == 1) {
    s.u_s = s.u_d;
    s.grad_u_s = s.grad_u_d;
    s.div_strain_s = [](Point2) { return Vec2(0.0, 0.0); };
    s.p_s = s.p_d = [](Point2 q) { return q.x + q.y - 1.0; };
    s.grad_p_s = s.grad_p_d = [](Point2) { return Vec2(1.0, 1.0); };
  } else {
    // Shear profile whose strain vanishes on x = 1/2.
    s.u_s = [](Point2 q) { return Vec2(1.0, -3.0 * (q.x - 0.5) * (q.x - 0.5)); };
    s.grad_u_s = [](Point2 q) { return mat(0.0, 0.0, -6.0 * (q.x - 0.5), 0.0); };
    s.div_strain_s = [](Point2) { return Vec2(0.0, -6.0); };
    s.p_s = s.p_d = [](Point2 q) { return q.x * q.y - 0.25; };
    s.grad_p_s = s.grad_p_d = [](Point2 q) { return Vec2(q.y, q.x); };
  }
  s.pressure_integral = 0.0;
  return s;
}

ExactSolution make_example(const std::string& name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  throw std::invalid_argument("unknown example '" + name + "' (expected example1 or example2)");
}

}  // namespace wgsd
