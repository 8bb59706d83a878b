#include "surfspline/quadrature.hpp"

#include "surfspline/errors.hpp"

#include <algorithm>

#include <cmath>
#include <numbers>

namespace surfspline {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw Error("Gauss-Legendre rule needs at least one node");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule tensor_rule(const Box& box, int nodes, int panels) {
  const int d = box.dim();
  const GaussLegendre gl = gauss_legendre(nodes);
  // One-dimensional composite rules per axis.
  std::vector<std::vector<double>> x(d), w(d);
  for (int axis = 0; axis < d; ++axis) {
    const double width = (box.upper(axis) - box.lower(axis)) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = box.lower(axis) + (p + 0.5) * width;
      for (int j = 0; j < nodes; ++j) {
        x[axis].push_back(mid + 0.5 * width * gl.nodes[j]);
        w[axis].push_back(0.5 * width * gl.weights[j]);
      }
    }
  }
  const int per_axis = nodes * panels;
  Eigen::Index total = 1;
  for (int axis = 0; axis < d; ++axis) total *= per_axis;
  QuadratureRule rule{PointMatrix(d, total), Vector(total)};
  std::vector<int> index(d, 0);
  for (Eigen::Index n = 0; n < total; ++n) {
    double weight = 1.0;
    for (int axis = 0; axis < d; ++axis) {
      rule.points(axis, n) = x[axis][index[axis]];
      weight *= w[axis][index[axis]];
    }
    rule.weights(n) = weight;
    int axis = 0;
    while (axis < d && ++index[axis] == per_axis) index[axis++] = 0;
  }
  return rule;
}

QuadratureRule ball_rule(const Vector& center, double radius, int nodes) {
  const int d = static_cast<int>(center.size());
  if (d == 1) {
    return tensor_rule({center.array() - radius, center.array() + radius}, nodes);
  }
  const GaussLegendre gl = gauss_legendre(nodes);
  const int n_angle = 2 * nodes;
  std::vector<Vector> pts;
  std::vector<double> wts;
  for (int ir = 0; ir < nodes; ++ir) {
    const double r = 0.5 * radius * (gl.nodes[ir] + 1.0);
    const double wr = 0.5 * radius * gl.weights[ir];
    for (int ia = 0; ia < n_angle; ++ia) {
      const double theta = 2.0 * std::numbers::pi * ia / n_angle;
      const double wa = 2.0 * std::numbers::pi / n_angle;
      if (d == 2) {
        pts.push_back(center + r * Vector{{std::cos(theta), std::sin(theta)}});
        wts.push_back(wr * wa * r);
        continue;
      }
      for (int ic = 0; ic < nodes; ++ic) {
        const double c = gl.nodes[ic];
        const double s = std::sqrt(1.0 - c * c);
        pts.push_back(center + r * Vector{{s * std::cos(theta), s * std::sin(theta), c}});
        wts.push_back(wr * wa * gl.weights[ic] * r * r);
      }
    }
  }
  QuadratureRule rule{PointMatrix(d, static_cast<Eigen::Index>(pts.size())),
                      Vector(static_cast<Eigen::Index>(pts.size()))};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rule.points.col(static_cast<Eigen::Index>(i)) = pts[i];
    rule.weights(static_cast<Eigen::Index>(i)) = wts[i];
  }
  return rule;
}

QuadratureRule unit_ball_tensor_rule(int dim, int nodes) {
  const GaussLegendre gl = gauss_legendre(nodes);
  Eigen::Index total = 1;
  for (int axis = 0; axis < dim; ++axis) total *= nodes;
  QuadratureRule rule{PointMatrix(dim, total), Vector(total)};
  std::vector<int> index(dim, 0);
  for (Eigen::Index n = 0; n < total; ++n) {
    // Fill from the last axis down; each axis spans the chord left over.
    double remaining = 1.0;
    double weight = 1.0;
    for (int axis = dim - 1; axis >= 0; --axis) {
      const double half = std::sqrt(std::max(remaining, 0.0));
      const double x = half * gl.nodes[index[axis]];
      rule.points(axis, n) = x;
      weight *= half * gl.weights[index[axis]];
      remaining -= x * x;
    }
    rule.weights(n) = weight;
    int axis = 0;
    while (axis < dim && ++index[axis] == nodes) index[axis++] = 0;
  }
  return rule;
}

namespace {

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace

Vector halton_point(std::uint64_t index, int dim) {
  static constexpr int kBases[] = {2, 3, 5};
  if (dim < 1 || dim > 3) throw Error("Halton points are provided for d <= 3");
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x(i) = radical_inverse(index, kBases[i]);
  return x;
}

PointMatrix halton_points(int n, int dim) {
  PointMatrix out(dim, n);
  for (int i = 0; i < n; ++i) out.col(i) = halton_point(static_cast<std::uint64_t>(i) + 1, dim);
  return out;
}

}  // namespace surfspline
