#pragma once

#include "surfspline/geometry.hpp"
#include "surfspline/polybasis.hpp"

#include <iosfwd>
#include <string>

namespace surfspline {

enum class KernelBranch { power, power_log };

/// psi(r) = r^(2k-d) for odd d, r^(2k-d) log r for even d.
class BasicFunction {
 public:
  BasicFunction(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int exponent() const { return exponent_; }
  KernelBranch branch() const { return branch_; }

  double operator()(double r) const;

 private:
  int dim_;
  int order_;
  int exponent_;
  KernelBranch branch_;
};

/// Throws "order too low for dimension" unless 2k > d.
BasicFunction basic_function(int d, int k);

/// [[Psi, P], [P^T, 0]] with Psi_ij = psi(|a_i - a_j|) and P_ij the j-th
/// monomial of Pi_{k-1} at a_i.
struct SaddleSystem {
  Eigen::MatrixXd matrix;
  int n_nodes = 0;
  int n_poly = 0;
};

/// Assembled in the coordinates given; throws UnisolvenceError first when the
/// nodes do not determine Pi_{k-1}.
SaddleSystem assemble(const PointMatrix& nodes, const BasicFunction& basic);
SaddleSystem assemble(const PointSet& nodes, const BasicFunction& basic);

struct SolveDiagnostics {
  double rcond = 0.0;             // reciprocal 1-norm condition estimate
  std::string method;             // "ldlt" or "qr"
  double interpolation_residual = 0.0;  // max |Sf(a) - f(a)| / data scale
  double nbc_residual = 0.0;
  double condition() const { return rcond > 0.0 ? 1.0 / rcond : INFINITY; }
};

inline constexpr double kMinRcond = 1e-14;

/// Fitted surface spline Sf(x) = sum_a mu_a psi(|x - a|) + p(x).
class SurfaceSplineModel {
 public:
  SurfaceSplineModel(PointMatrix nodes, Vector mu, Polynomial tail, BasicFunction basic,
                     AffineFrame frame, SolveDiagnostics diagnostics = {});

  const PointMatrix& nodes() const { return nodes_; }
  const Vector& mu() const { return mu_; }
  const Polynomial& tail() const { return tail_; }
  const BasicFunction& basic() const { return basic_; }
  const AffineFrame& frame() const { return frame_; }
  const SolveDiagnostics& diagnostics() const { return diagnostics_; }
  int dim() const { return basic_.dim(); }
  int size() const { return static_cast<int>(nodes_.cols()); }

  double operator()(const Eigen::Ref<const Vector>& x) const { return evaluate(x); }
  double evaluate(const Eigen::Ref<const Vector>& x) const;
  Vector evaluate_many(const PointMatrix& xs) const;

 private:
  PointMatrix nodes_;
  Vector mu_;
  Polynomial tail_;
  BasicFunction basic_;
  AffineFrame frame_;  // frame used for the solve; nbc_residual measures in it
  SolveDiagnostics diagnostics_;
};

struct FitOptions {
  int refinement_steps = 2;
  // LDL^T results with rcond below this trigger the QR fallback.
  double fallback_rcond = 1e-12;
};

/// Solves the interpolation system with natural boundary conditions.
/// Throws UnisolvenceError or ConditioningError.
SurfaceSplineModel fit(const PointSet& nodes, const Vector& values, int k,
                       const FitOptions& options = {});
SurfaceSplineModel fit(const PointMatrix& nodes, const Vector& values, int k,
                       const FitOptions& options = {});

/// max over tail-basis monomials q of |sum_a mu_a q(a)| / (|mu|_1 max_a |q(a)|),
/// with monomials taken in the model's solve frame.
double nbc_residual(const SurfaceSplineModel& model);

void write_model(std::ostream& out, const SurfaceSplineModel& model);
SurfaceSplineModel read_model(std::istream& in);

}  // namespace surfspline
