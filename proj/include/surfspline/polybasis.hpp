#pragma once

#include "surfspline/geometry.hpp"

#include <compare>
#include <map>
#include <vector>

namespace surfspline {

/// Exponent tuple alpha in Z_+^d.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);

  int dim() const { return static_cast<int>(entries_.size()); }
  int order() const { return order_; }
  int operator[](int i) const { return entries_[i]; }
  const std::vector<int>& entries() const { return entries_; }

  // alpha! = prod alpha_i!
  double factorial() const;
  // x^alpha
  double power_of(const Eigen::Ref<const Vector>& x) const;

  bool operator==(const MultiIndex&) const = default;
  // Graded order first, then reverse lexicographic on entries, which puts
  // (2,0) < (1,1) < (0,2).
  std::strong_ordering operator<=>(const MultiIndex& other) const;

 private:
  std::vector<int> entries_;
  int order_ = 0;
};

std::string to_string(const MultiIndex& alpha);

/// C(degree + d, d).
int poly_dim(int d, int degree);

/// All alpha with |alpha| = exact_order, graded-lex order.
std::vector<MultiIndex> multi_indices(int d, int exact_order);

/// Multinomial weights c_alpha = k!/alpha! for |alpha| = k, so that
/// sum c_alpha x^(2 alpha) = |x|^(2k).
std::map<MultiIndex, double> blh_coefficients(int d, int k);

/// Polynomials on R^d of total degree <= degree, with a monomial basis in
/// graded-lex order.
class PolySpace {
 public:
  PolySpace(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const std::vector<MultiIndex>& basis() const { return basis_; }
  int index_of(const MultiIndex& alpha) const;

  /// Row of basis monomials evaluated at y.
  Vector monomials(const Eigen::Ref<const Vector>& y) const;
  /// N x ell matrix of basis monomials at the columns of points.
  Eigen::MatrixXd vandermonde(const PointMatrix& points) const;

  bool operator==(const PolySpace& other) const {
    return dim_ == other.dim_ && degree_ == other.degree_;
  }

 private:
  int dim_;
  int degree_;
  std::vector<MultiIndex> basis_;
};

/// y = (x - center) / scale. Keeps Vandermonde matrices of small or far-off
/// point clusters well scaled.
struct AffineFrame {
  Vector center;
  double scale = 1.0;

  static AffineFrame identity(int dim) { return {Vector::Zero(dim), 1.0}; }
  /// Bounding-box midpoint and half the largest extent.
  static AffineFrame fit_to(const PointMatrix& points);

  Vector apply(const Eigen::Ref<const Vector>& x) const { return (x - center) / scale; }
  PointMatrix apply(const PointMatrix& points) const;
};

/// p(x) = sum_j coeffs_j * ((x - center)/scale)^(basis_j).
class Polynomial {
 public:
  Polynomial(PolySpace space, Vector coeffs, AffineFrame frame);
  Polynomial(PolySpace space, Vector coeffs);

  static Polynomial zero(const PolySpace& space) {
    return Polynomial(space, Vector::Zero(space.size()));
  }

  const PolySpace& space() const { return space_; }
  const Vector& coeffs() const { return coeffs_; }
  const AffineFrame& frame() const { return frame_; }

  double operator()(const Eigen::Ref<const Vector>& x) const;
  /// D^alpha p at x.
  double derivative(const MultiIndex& alpha, const Eigen::Ref<const Vector>& x) const;

  /// Same polynomial with coefficients in the plain monomial basis x^alpha.
  Polynomial in_monomial_basis() const;

 private:
  PolySpace space_;
  Vector coeffs_;
  AffineFrame frame_;
};

struct UnisolvenceCheck {
  bool unisolvent = false;
  int rank = 0;
  double condition = 0.0;  // sigma_max / sigma_min of the normalized Vandermonde
};

/// Numerical rank test of the Vandermonde matrix after affine normalization.
/// Singular values below sigma_max * ell * 1e-12 count as zero.
UnisolvenceCheck check_unisolvent(const PointMatrix& points, const PolySpace& space);

/// The unique p in the space with p(points_i) = values_i; needs exactly ell
/// unisolvent points. Throws UnisolvenceError otherwise.
Polynomial lagrange_project(const PointMatrix& points, const Vector& values,
                            const PolySpace& space);

inline constexpr double kTemplateConditionBound = 1e8;

/// ell unisolvent points inside the closed ball, the first one equal to the
/// centre when requested.
PointMatrix pick_unisolvent_in_ball(const Vector& center, double radius, const PolySpace& space,
                                    bool require_center_first);

}  // namespace surfspline
