#pragma once

#include "surfspline/geometry.hpp"
#include "surfspline/mollifier.hpp"
#include "surfspline/polybasis.hpp"
#include "surfspline/test_functions.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace surfspline {

/// Integration region for seminorms: a box or a ball, optionally minus a
/// small ball around a singular point.
struct Region {
  enum class Shape { box, ball };
  Shape shape = Shape::box;
  Box box;
  Vector center;
  double radius = 0.0;
  std::optional<Vector> exclusion_center;
  double exclusion_radius = 0.0;

  static Region of_box(Box b);
  static Region of_ball(Vector center, double radius);
  static Region of_domain(const Domain& domain);
  Region excluding(Vector center, double radius) const;
  int dim() const;
};

struct SeminormOptions {
  int nodes = 12;   // Gauss-Legendre nodes per panel (radial/angular for balls)
  int panels = 4;   // composite panels per axis, boxes only
  bool finite_differences = false;  // ignore analytic derivatives
};

/// (sum_{|alpha| = m} c_alpha int |D^alpha f|^2)^(1/2) by quadrature.
double beppo_levi_seminorm(const TestFunction& f, const Region& region, int m,
                           const SeminormOptions& options = {});
double beppo_levi_seminorm(const TestFunction& f, const Domain& domain, int m,
                           const SeminormOptions& options = {});

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LpSampler {
  int halton_samples = 1 << 14;  // d >= 2
  int grid_points = 1025;        // d = 1
};

/// Sample points for lp_error: a uniform grid in d = 1, Halton points inside
/// the domain otherwise.
PointMatrix lp_sample_points(const Domain& domain, const LpSampler& sampler = {});

/// (mean |v|^p * volume)^(1/p), or max |v| for p = inf.
double lp_norm_of_samples(const Vector& values, double p, double volume);

double lp_error(const ScalarField& f, const ScalarField& g, const Domain& domain, double p,
                const LpSampler& sampler = {});

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  int used = 0;
  std::vector<std::string> warnings;
};

/// Least-squares slope of log(error) against log(h). Non-positive errors are
/// dropped with a warning; fewer than three remaining levels throws
/// InsufficientLevelsError.
RateFit fit_rate(const std::vector<double>& hs, const std::vector<double>& errors);

/// j - d/2 + d/p for p >= 2 (d/inf = 0), j for 1 <= p < 2.
double theory_rate(int j, int d, double p);

/// "inf" or the shortest decimal, as used in report keys (p_inf, p_2).
std::string p_label(double p);

struct StudyConfig {
  std::string function = "sine";
  int d = 1;
  int k = 2;
  int m = 0;  // smoothness order for rough functions; 0 derives it from beta
  DomainKind domain = DomainKind::unit_cube;
  std::vector<double> p_values{kInf};
  std::vector<double> h_levels{0.2, 0.1, 0.05, 0.025};
  std::uint64_t seed = 0;
  int fill_resolution = 0;
  LpSampler sampler;
  bool parallel = false;
};

struct StudyLevel {
  double target_h = 0.0;
  std::uint64_t seed = 0;
  double h = 0.0;
  double q = 0.0;
  double rho = 0.0;
  int n = 0;
  std::vector<double> errors;  // aligned with p_values
  double rcond = 0.0;
  double nbc_residual = 0.0;
  double interpolation_residual = 0.0;
  std::string status = "ok";  // or the failure class
  std::string message;
  bool ok() const { return status == "ok"; }
};

struct StudyReport {
  StudyConfig config;
  std::vector<StudyLevel> levels;       // decreasing target h
  std::vector<std::optional<RateFit>> rates;  // aligned with p_values
  std::vector<double> theory;           // aligned with p_values
  bool exact = false;                   // every error <= 1e-8; rates skipped
  std::vector<std::string> warnings;

  int successful_levels() const;
};

/// Smoothness order driving the theoretical rate: k for smooth functions; for
/// rough ones the configured m, or else the largest integer below beta + d/2
/// (capped at k), which is the highest m with |x - x0|^beta in BL^m locally.
int rate_order(const StudyConfig& cfg, const TestFunction& f);

StudyReport convergence_study(const StudyConfig& cfg);

struct InstabilityConfig {
  std::string function = "abs_power:1.5";
  int d = 2;
  int k = 2;
  DomainKind domain = DomainKind::unit_cube;
  double base_h = 0.1;
  std::vector<double> factors{1, 4, 16, 64, 256};
  std::uint64_t seed = 0;
  int fill_resolution = 0;
  LpSampler sampler;
};

struct InstabilityRow {
  double factor = 1.0;
  int n = 0;
  double h = 0.0;
  double q = 0.0;
  double rho = 0.0;
  double condition = 0.0;  // 1 / rcond
  double max_mu = 0.0;
  double l1_norm = 0.0;    // ||S f||_{L_1(Omega)}
  std::string status = "ok";  // "fit_failed" when the solve is rejected
  std::string message;
};

struct InstabilityReport {
  InstabilityConfig config;
  std::vector<InstabilityRow> rows;
};

InstabilityReport instability_study(const InstabilityConfig& cfg);

struct CovRow {
  double h = 1.0;
  Vector a;
  Vector t;
  double lhs = 0.0;        // |f o sigma|_{m, Omega}
  double rhs = 0.0;        // h^(m - d/2) |f|_{m, sigma(Omega)}
  double discrepancy = 0.0;  // |lhs - rhs| / max(|rhs|, tiny)
};

struct CovReport {
  std::vector<CovRow> rows;
  double max_discrepancy = 0.0;
};

/// Compares |f o sigma|_{m,Omega} with h^(m-d/2) |f|_{m,sigma(Omega)} for
/// sigma(x) = a + h (x - t) and Omega the unit cube. Both sides use finite
/// differences, so the identity map gives identical numbers.
CovReport scaling_check_cov(const TestFunction& f, int m, const std::vector<double>& scales,
                            const Vector& a, const Vector& t, const SeminormOptions& options = {});

struct ConvolutionRow {
  double h = 0.0;
  double seminorm = 0.0;    // |phi_h * f|_k
  double normalized = 0.0;  // seminorm * h^(k - m)
};

struct ConvolutionReport {
  int m = 0;
  int k = 0;
  std::vector<ConvolutionRow> rows;
  RateFit rate;
  bool tail_nonincreasing = false;  // normalized value at the finest h <= the one before
};

struct ConvolutionOptions {
  int x_nodes = 8;           // Gauss-Legendre nodes per x panel
  double x_panel_width = 0.25;  // in units of h
  int t_nodes = 8;
  int t_panels = 64;         // per axis over [-1, 1]
};

/// |phi_h * f|_k for each h with phi built for moment order m; D^alpha falls
/// on phi. f must have a bounded support box.
ConvolutionReport convolution_scaling_check(const TestFunction& f, int m, int k,
                                            const std::vector<double>& hs,
                                            const ConvolutionOptions& options = {});

}  // namespace surfspline
