#pragma once

#include "surfspline/geometry.hpp"
#include "surfspline/polybasis.hpp"
#include "surfspline/quadrature.hpp"
#include "surfspline/test_functions.hpp"

#include <memory>
#include <vector>

namespace surfspline {

/// exp(-1/(1 - |x|^2)) inside the open unit ball, 0 elsewhere.
double bump(const Eigen::Ref<const Vector>& x);

/// phi(x) = P(x) * bump(x) with P a combination of monomials whose exponents
/// are all even. Unit mass, and moments vanish for 0 < |alpha| <= m - 1.
class Mollifier {
 public:
  Mollifier(int dim, int m, std::vector<MultiIndex> terms, Vector coeffs, int quad_nodes);

  int dim() const { return dim_; }
  int m() const { return m_; }
  const std::vector<MultiIndex>& terms() const { return terms_; }
  const Vector& coeffs() const { return coeffs_; }
  int quad_nodes() const { return quad_nodes_; }

  double operator()(const Eigen::Ref<const Vector>& x) const;

  /// Construction-resolution rule restricted to |t| < 1, with weights
  /// already multiplied by phi(t).
  const QuadratureRule& kernel() const { return kernel_; }

 private:
  int dim_;
  int m_;
  std::vector<MultiIndex> terms_;
  Vector coeffs_;
  int quad_nodes_;
  QuadratureRule kernel_;
};

/// 64 Gauss-Legendre nodes per axis for d <= 2, 48 for d = 3.
int default_mollifier_nodes(int dim);

/// Solves the moment system for the multiplier at `quad_nodes` nodes per axis
/// (0: default). Throws if the system is singular.
Mollifier build_mollifier(int d, int m, int quad_nodes = 0);

/// Integral of phi(x) x^alpha by the ball-mapped tensor Gauss-Legendre rule
/// with `nodes` per axis (0: the mollifier's own resolution). phi vanishes
/// outside the ball, so this is the integral over [-1,1]^d.
double moment(const Mollifier& phi, const MultiIndex& alpha, int nodes = 0);

struct MomentRow {
  MultiIndex alpha;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Moments for |alpha| <= m - 1 at twice the construction resolution
/// against the mass-1 / vanishing targets (1e-8 for the mass, 1e-6 otherwise).
std::vector<MomentRow> verify_moments(const Mollifier& phi);

/// (phi_eps * f)(x) = sum over kernel nodes of w phi(t) f(x - eps t).
double mollify(const ScalarField& f, const Mollifier& phi, double eps,
               const Eigen::Ref<const Vector>& x);

/// Smooth radial cutoff: 1 for r <= inner, 0 for r >= outer.
double radial_cutoff(double r, double inner, double outer);

/// Smoothed interpolation data F = phi_delta * H with delta = q/4 and
/// H = f + sum_a eta_a (P_a f - f), where P_a f is the local Lagrange
/// projection onto Pi_{m-1} at a template with a as its first point and eta_a
/// cuts off between delta and 2 delta around a.
class SmoothedData {
 public:
  SmoothedData(TestFunction f, PointSet nodes, int m, Mollifier phi);

  const TestFunction& original() const { return f_; }
  const PointSet& nodes() const { return nodes_; }
  int m() const { return m_; }
  double delta() const { return delta_; }
  double blend_inner() const { return delta_; }
  double blend_outer() const { return 2.0 * delta_; }
  const std::vector<Polynomial>& local_polynomials() const { return local_; }
  const Mollifier& mollifier() const { return phi_; }

  double blended(const Eigen::Ref<const Vector>& x) const;  // H
  double operator()(const Eigen::Ref<const Vector>& x) const;  // F

 private:
  TestFunction f_;
  PointSet nodes_;
  int m_;
  Mollifier phi_;
  double delta_;
  std::vector<Polynomial> local_;
};

/// Throws when f cannot be evaluated on the node domain dilated by 3 delta
/// or when 2m <= d.
SmoothedData smoothed_interpolation_data(const TestFunction& f, const PointSet& nodes, int m,
                                         const Mollifier& phi);

}  // namespace surfspline
