#pragma once

#include "surfspline/geometry.hpp"

#include <vector>

namespace surfspline {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

GaussLegendre gauss_legendre(int n);

/// Weighted node list; columns of `points` pair with `weights`.
struct QuadratureRule {
  PointMatrix points;
  Vector weights;
  int size() const { return static_cast<int>(weights.size()); }
};

/// Tensor product of composite Gauss-Legendre rules: `panels` equal panels
/// per axis with `nodes` points each.
QuadratureRule tensor_rule(const Box& box, int nodes, int panels = 1);

/// Rule for a ball: Gauss-Legendre in the radius, trapezoid in the periodic
/// angle, Gauss-Legendre in the polar cosine (d = 3).
QuadratureRule ball_rule(const Vector& center, double radius, int nodes);

/// Tensor Gauss-Legendre rule on [-1,1]^d mapped onto the closed unit ball
/// by scaling axis i to the chord length sqrt(1 - sum_{j>i} x_j^2). Rows of
/// the grid end exactly on the sphere, so integrands that vanish smoothly
/// there converge as fast as in one dimension.
QuadratureRule unit_ball_tensor_rule(int dim, int nodes);

/// Halton point with the given 1-based index, bases 2, 3, 5.
Vector halton_point(std::uint64_t index, int dim);
/// First n Halton points (indices 1..n) as columns.
PointMatrix halton_points(int n, int dim);

}  // namespace surfspline
