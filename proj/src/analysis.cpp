#include "surfspline/analysis.hpp"

#include "surfspline/errors.hpp"
#include "surfspline/quadrature.hpp"
#include "surfspline/text.hpp"

#include <algorithm>
#include <cmath>

namespace surfspline {

Region Region::of_box(Box b) {
  Region r;
  r.shape = Shape::box;
  r.box = std::move(b);
  return r;
}

Region Region::of_ball(Vector center, double radius) {
  Region r;
  r.shape = Shape::ball;
  r.center = std::move(center);
  r.radius = radius;
  return r;
}

Region Region::of_domain(const Domain& domain) {
  if (domain.kind() == DomainKind::unit_cube) return of_box(domain.bounding_box());
  return of_ball(Vector::Zero(domain.dim()), 1.0);
}

Region Region::excluding(Vector center, double radius) const {
  Region r = *this;
  r.exclusion_center = std::move(center);
  r.exclusion_radius = radius;
  return r;
}

int Region::dim() const {
  return shape == Shape::box ? box.dim() : static_cast<int>(center.size());
}

namespace {

QuadratureRule region_rule(const Region& region, const SeminormOptions& options) {
  if (region.shape == Region::Shape::box) return tensor_rule(region.box, options.nodes, options.panels);
  return ball_rule(region.center, region.radius, options.nodes);
}

}  // namespace

double beppo_levi_seminorm(const TestFunction& f, const Region& region, int m,
                           const SeminormOptions& options) {
  const int d = region.dim();
  if (f.dim != d) throw Error("test function dimension does not match the region");
  const QuadratureRule rule = region_rule(region, options);
  const auto coeffs = blh_coefficients(d, m);
  double total = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    const Vector x = rule.points.col(i);
    if (region.exclusion_center && (x - *region.exclusion_center).norm() < region.exclusion_radius) continue;
    double integrand = 0.0;
    for (const auto& [alpha, c] : coeffs) {
      const double v = options.finite_differences ? finite_difference(f.value, alpha, x) : f.partial(alpha, x);
      if (!std::isfinite(v)) {
        std::string where;
        for (int j = 0; j < d; ++j) where += (j ? "," : "") + format_g(x(j), 6);
        throw Error("derivative " + to_string(alpha) + " of '" + f.name + "' is not finite at (" + where + ")");
      }
      integrand += c * v * v;
    }
    total += rule.weights(i) * integrand;
  }
  return std::sqrt(total);
}

double beppo_levi_seminorm(const TestFunction& f, const Domain& domain, int m,
                           const SeminormOptions& options) {
  return beppo_levi_seminorm(f, Region::of_domain(domain), m, options);
}

PointMatrix lp_sample_points(const Domain& domain, const LpSampler& sampler) {
  const int d = domain.dim();
  const Box box = domain.bounding_box();
  if (d == 1) {
    const int n = sampler.grid_points;
    PointMatrix out(1, n);
    for (int i = 0; i < n; ++i) out(0, i) = box.lower(0) + (box.upper(0) - box.lower(0)) * i / (n - 1.0);
    return out;
  }
  const PointMatrix unit = halton_points(sampler.halton_samples, d);
  std::vector<Eigen::Index> keep;
  PointMatrix mapped(d, unit.cols());
  for (Eigen::Index i = 0; i < unit.cols(); ++i) {
    mapped.col(i) = box.lower.array() + (box.upper - box.lower).array() * unit.col(i).array();
    if (domain.contains(mapped.col(i))) keep.push_back(i);
  }
  PointMatrix out(d, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = mapped.col(keep[j]);
  return out;
}

double lp_norm_of_samples(const Vector& values, double p, double volume) {
  if (values.size() == 0) throw Error("no samples for the L_p norm");
  if (std::isinf(p)) return values.cwiseAbs().maxCoeff();
  if (!(p >= 1.0)) throw Error("L_p exponent must be in [1, inf]");
  const double mean = values.cwiseAbs().array().pow(p).mean();
  return std::pow(mean * volume, 1.0 / p);
}

double lp_error(const ScalarField& f, const ScalarField& g, const Domain& domain, double p,
                const LpSampler& sampler) {
  const PointMatrix x = lp_sample_points(domain, sampler);
  Vector diff(x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    const Vector xi = x.col(i);
    diff(i) = f(xi) - g(xi);
  }
  return lp_norm_of_samples(diff, p, domain.volume());
}

RateFit fit_rate(const std::vector<double>& hs, const std::vector<double>& errors) {
  if (hs.size() != errors.size()) throw Error("fit_rate: h and error lists differ in length");
  RateFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) {
      fit.warnings.push_back("level h=" + format_g(hs[i], 6) + " excluded: error " + format_g(errors[i], 6));
      continue;
    }
    lx.push_back(std::log(hs[i]));
    ly.push_back(std::log(errors[i]));
  }
  fit.used = static_cast<int>(lx.size());
  if (fit.used < 3) {
    throw InsufficientLevelsError("rate fit needs at least 3 levels with positive error, have " +
                                  std::to_string(fit.used));
  }
  const double n = fit.used;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < fit.used; ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < fit.used; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw InsufficientLevelsError("rate fit needs distinct h values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (int i = 0; i < fit.used; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

double theory_rate(int j, int d, double p) {
  if (p >= 2.0) return j - 0.5 * d + (std::isinf(p) ? 0.0 : d / p);
  return j;
}

std::string p_label(double p) { return std::isinf(p) ? "inf" : format_g(p, 6); }

CovReport scaling_check_cov(const TestFunction& f, int m, const std::vector<double>& scales,
                            const Vector& a, const Vector& t, const SeminormOptions& options) {
  const int d = f.dim;
  if (a.size() != d || t.size() != d) throw Error("scaling check: a and t must have dimension d");
  SeminormOptions fd = options;
  fd.finite_differences = true;
  const Box unit{Vector::Zero(d), Vector::Ones(d)};
  CovReport report;
  for (double h : scales) {
    if (!(h > 0.0)) throw Error("scaling check: h must be positive");
    CovRow row;
    row.h = h;
    row.a = a;
    row.t = t;
    row.lhs = beppo_levi_seminorm(compose_affine(f, h, a, t), Region::of_box(unit), m, fd);
    // sigma(Omega) for the unit cube; with h > 0 the corners map in order.
    const Box image{a + h * (unit.lower - t), a + h * (unit.upper - t)};
    const double factor = std::pow(h, m - 0.5 * d);
    row.rhs = factor * beppo_levi_seminorm(f, Region::of_box(image), m, fd);
    row.discrepancy = std::abs(row.lhs - row.rhs) / std::max(std::abs(row.rhs), 1e-300);
    report.max_discrepancy = std::max(report.max_discrepancy, row.discrepancy);
    report.rows.push_back(std::move(row));
  }
  return report;
}

ConvolutionReport convolution_scaling_check(const TestFunction& f, int m, int k,
                                            const std::vector<double>& hs_in,
                                            const ConvolutionOptions& options) {
  const int d = f.dim;
  if (d < 1 || d > 2) throw Error("convolution scaling check supports d = 1 or 2");
  if (!f.support) throw Error("convolution scaling check needs a compactly supported function");
  std::vector<double> hs = hs_in;
  std::sort(hs.begin(), hs.end(), std::greater<>());

  const Mollifier phi = build_mollifier(d, m);
  const ScalarField phi_value = [&phi](const Vector& t) { return phi(t); };
  const auto coeffs = blh_coefficients(d, k);

  // D^alpha phi at the convolution nodes, shared by every h.
  const Box cube{Vector::Constant(d, -1.0), Vector::Constant(d, 1.0)};
  const QuadratureRule t_full = tensor_rule(cube, options.t_nodes, options.t_panels);
  std::vector<Vector> t_points;
  std::vector<std::vector<double>> t_weights(coeffs.size());
  for (int i = 0; i < t_full.size(); ++i) {
    const Vector t = t_full.points.col(i);
    if (t.squaredNorm() >= 1.0) continue;
    t_points.push_back(t);
    std::size_t a = 0;
    for (const auto& entry : coeffs) {
      t_weights[a++].push_back(t_full.weights(i) * finite_difference(phi_value, entry.first, t));
    }
  }

  ConvolutionReport report;
  report.m = m;
  report.k = k;
  std::vector<double> seminorms;
  for (double h : hs) {
    if (!(h > 0.0)) throw Error("convolution scaling check: h must be positive");
    const Box region{f.support->lower.array() - h, f.support->upper.array() + h};
    const double width = (region.upper - region.lower).maxCoeff();
    const int panels = std::max(1, static_cast<int>(std::ceil(width / (options.x_panel_width * h))));
    const QuadratureRule x_rule = tensor_rule(region, options.x_nodes, panels);
    const double scale = std::pow(h, -k);
    double total = 0.0;
    Vector y(d);
    for (int i = 0; i < x_rule.size(); ++i) {
      const auto x = x_rule.points.col(i);
      std::size_t a = 0;
      double integrand = 0.0;
      for (const auto& entry : coeffs) {
        double conv = 0.0;
        for (std::size_t j = 0; j < t_points.size(); ++j) {
          y = x - h * t_points[j];
          conv += t_weights[a][j] * f(y);
        }
        conv *= scale;
        integrand += entry.second * conv * conv;
        ++a;
      }
      total += x_rule.weights(i) * integrand;
    }
    ConvolutionRow row;
    row.h = h;
    row.seminorm = std::sqrt(total);
    row.normalized = row.seminorm * std::pow(h, k - m);
    seminorms.push_back(row.seminorm);
    report.rows.push_back(row);
  }
  report.rate = fit_rate(hs, seminorms);
  const std::size_t n = report.rows.size();
  report.tail_nonincreasing = n >= 2 && report.rows[n - 1].normalized <= report.rows[n - 2].normalized;
  return report;
}

}  // namespace surfspline
