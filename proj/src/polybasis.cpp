#include "surfspline/polybasis.hpp"

#include "surfspline/errors.hpp"
#include "surfspline/rng.hpp"
#include "surfspline/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace surfspline {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw Error("multi-index entries must be non-negative");
  }
  order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

double MultiIndex::factorial() const {
  double out = 1.0;
  for (int e : entries_) out *= std::tgamma(e + 1.0);
  return out;
}

double MultiIndex::power_of(const Eigen::Ref<const Vector>& x) const {
  double out = 1.0;
  for (int i = 0; i < dim(); ++i) {
    for (int p = 0; p < entries_[i]; ++p) out *= x(i);
  }
  return out;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = order_ <=> other.order_; c != 0) return c;
  return other.entries_ <=> entries_;
}

std::string to_string(const MultiIndex& alpha) {
  std::string out = "(";
  for (int i = 0; i < alpha.dim(); ++i) {
    if (i) out += ',';
    out += std::to_string(alpha[i]);
  }
  return out + ")";
}

int poly_dim(int d, int degree) {
  if (d < 1 || degree < 0) throw Error("poly_dim needs d >= 1 and degree >= 0");
  // C(degree + d, d) by the multiplicative formula; exact in integers.
  long long out = 1;
  for (int i = 1; i <= d; ++i) out = out * (degree + i) / i;
  return static_cast<int>(out);
}

std::vector<MultiIndex> multi_indices(int d, int exact_order) {
  if (d < 1 || exact_order < 0) throw Error("multi_indices needs d >= 1 and order >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> entries(d, 0);
  // Depth-first with the leading entry descending gives graded-lex order.
  auto recurse = [&](auto&& self, int axis, int remaining) -> void {
    if (axis == d - 1) {
      entries[axis] = remaining;
      out.emplace_back(entries);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      entries[axis] = e;
      self(self, axis + 1, remaining - e);
    }
  };
  recurse(recurse, 0, exact_order);
  return out;
}

std::map<MultiIndex, double> blh_coefficients(int d, int k) {
  if (d < 1 || k < 1) throw Error("blh_coefficients needs d >= 1 and k >= 1");
  std::map<MultiIndex, double> out;
  const double k_factorial = std::tgamma(k + 1.0);
  for (const MultiIndex& alpha : multi_indices(d, k)) {
    out.emplace(alpha, std::round(k_factorial / alpha.factorial()));
  }
  return out;
}

PolySpace::PolySpace(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1 || degree < 0) throw Error("PolySpace needs dim >= 1 and degree >= 0");
  for (int order = 0; order <= degree; ++order) {
    for (MultiIndex& alpha : multi_indices(dim, order)) basis_.push_back(std::move(alpha));
  }
}

int PolySpace::index_of(const MultiIndex& alpha) const {
  const auto it = std::lower_bound(basis_.begin(), basis_.end(), alpha);
  if (it == basis_.end() || *it != alpha) return -1;
  return static_cast<int>(it - basis_.begin());
}

Vector PolySpace::monomials(const Eigen::Ref<const Vector>& y) const {
  // powers(i, p) = y_i^p
  Eigen::MatrixXd powers(dim_, degree_ + 1);
  for (int i = 0; i < dim_; ++i) {
    powers(i, 0) = 1.0;
    for (int p = 1; p <= degree_; ++p) powers(i, p) = powers(i, p - 1) * y(i);
  }
  Vector out(size());
  for (int j = 0; j < size(); ++j) {
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) v *= powers(i, basis_[j][i]);
    out(j) = v;
  }
  return out;
}

Eigen::MatrixXd PolySpace::vandermonde(const PointMatrix& points) const {
  Eigen::MatrixXd v(points.cols(), size());
  for (Eigen::Index i = 0; i < points.cols(); ++i) v.row(i) = monomials(points.col(i)).transpose();
  return v;
}

AffineFrame AffineFrame::fit_to(const PointMatrix& points) {
  const int d = static_cast<int>(points.rows());
  if (points.cols() == 0) return identity(d);
  const Vector lo = points.rowwise().minCoeff();
  const Vector hi = points.rowwise().maxCoeff();
  const double half_extent = 0.5 * (hi - lo).maxCoeff();
  return {0.5 * (lo + hi), half_extent > 0.0 ? half_extent : 1.0};
}

PointMatrix AffineFrame::apply(const PointMatrix& points) const {
  return (points.colwise() - center) / scale;
}

Polynomial::Polynomial(PolySpace space, Vector coeffs, AffineFrame frame)
    : space_(std::move(space)), coeffs_(std::move(coeffs)), frame_(std::move(frame)) {
  if (coeffs_.size() != space_.size()) throw Error("polynomial coefficient count mismatch");
  if (frame_.center.size() != space_.dim()) throw Error("polynomial frame dimension mismatch");
}

Polynomial::Polynomial(PolySpace space, Vector coeffs)
    : Polynomial(space, std::move(coeffs), AffineFrame::identity(space.dim())) {}

double Polynomial::operator()(const Eigen::Ref<const Vector>& x) const {
  return space_.monomials(frame_.apply(x)).dot(coeffs_);
}

double Polynomial::derivative(const MultiIndex& alpha, const Eigen::Ref<const Vector>& x) const {
  const Vector y = frame_.apply(x);
  double total = 0.0;
  for (int j = 0; j < space_.size(); ++j) {
    const MultiIndex& beta = space_.basis()[j];
    double term = coeffs_(j);
    for (int i = 0; i < space_.dim() && term != 0.0; ++i) {
      if (beta[i] < alpha[i]) {
        term = 0.0;
        break;
      }
      for (int p = 0; p < alpha[i]; ++p) term *= beta[i] - p;
      for (int p = 0; p < beta[i] - alpha[i]; ++p) term *= y(i);
    }
    total += term;
  }
  return total / std::pow(frame_.scale, alpha.order());
}

Polynomial Polynomial::in_monomial_basis() const {
  const int d = space_.dim();
  Vector out = Vector::Zero(space_.size());
  for (int j = 0; j < space_.size(); ++j) {
    const MultiIndex& beta = space_.basis()[j];
    const double lead = coeffs_(j) / std::pow(frame_.scale, beta.order());
    // Expand prod_i (x_i - c_i)^beta_i over all gamma <= beta.
    std::vector<int> gamma(d, 0);
    while (true) {
      double term = lead;
      for (int i = 0; i < d; ++i) {
        const int n = beta[i], r = gamma[i];
        term *= std::round(std::tgamma(n + 1.0) / (std::tgamma(r + 1.0) * std::tgamma(n - r + 1.0)));
        term *= std::pow(-frame_.center(i), n - r);
      }
      out(space_.index_of(MultiIndex(gamma))) += term;
      int axis = 0;
      while (axis < d && ++gamma[axis] > beta[axis]) gamma[axis++] = 0;
      if (axis == d) break;
    }
  }
  return Polynomial(space_, out);
}

namespace {

struct NormalizedSvd {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd;
  UnisolvenceCheck check;
};

NormalizedSvd normalized_svd(const PointMatrix& y, const PolySpace& space) {
  const Eigen::MatrixXd v = space.vandermonde(y);
  NormalizedSvd out{Eigen::JacobiSVD<Eigen::MatrixXd>(v, Eigen::ComputeThinU | Eigen::ComputeThinV),
                    {}};
  const Vector& sigma = out.svd.singularValues();
  const int ell = space.size();
  if (sigma.size() == 0 || sigma(0) == 0.0) {
    out.check = {false, 0, INFINITY};
    return out;
  }
  const double threshold = sigma(0) * ell * 1e-12;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) rank += sigma(i) > threshold ? 1 : 0;
  const double smallest = sigma.size() < ell ? 0.0 : sigma(sigma.size() - 1);
  out.check = {rank == ell, rank, smallest > 0.0 ? sigma(0) / smallest : INFINITY};
  return out;
}

}  // namespace

UnisolvenceCheck check_unisolvent(const PointMatrix& points, const PolySpace& space) {
  if (points.cols() == 0) throw Error("check_unisolvent needs at least one point");
  return normalized_svd(AffineFrame::fit_to(points).apply(points), space).check;
}

Polynomial lagrange_project(const PointMatrix& points, const Vector& values,
                            const PolySpace& space) {
  if (points.cols() != space.size() || values.size() != space.size()) {
    throw Error("lagrange_project needs exactly ell = " + std::to_string(space.size()) +
                " points and values");
  }
  const AffineFrame frame = AffineFrame::fit_to(points);
  const NormalizedSvd fact = normalized_svd(frame.apply(points), space);
  if (!fact.check.unisolvent) {
    throw UnisolvenceError("interpolation points are not unisolvent (condition " +
                               format_g(fact.check.condition, 6) + ")",
                           fact.check.condition);
  }
  Vector coeffs = fact.svd.solve(values);
  return Polynomial(space, std::move(coeffs), frame);
}

namespace {

PointMatrix axis_template(const Vector& center, double radius, const PolySpace& space) {
  const int d = space.dim();
  const double r = 0.5 * radius;
  std::vector<Vector> pts{center};
  if (space.degree() >= 1) {
    for (int i = 0; i < d; ++i) pts.push_back(center + r * Vector::Unit(d, i));
  }
  if (space.degree() >= 2) {
    for (int i = 0; i < d; ++i) pts.push_back(center - r * Vector::Unit(d, i));
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        pts.push_back(center + r * (Vector::Unit(d, i) + Vector::Unit(d, j)) / std::sqrt(2.0));
      }
    }
  }
  PointMatrix out(d, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = pts[i];
  return out;
}

bool acceptable(const PointMatrix& pts, const PolySpace& space) {
  if (pts.cols() != space.size()) return false;
  const UnisolvenceCheck c = check_unisolvent(pts, space);
  return c.unisolvent && c.condition <= kTemplateConditionBound;
}

}  // namespace

PointMatrix pick_unisolvent_in_ball(const Vector& center, double radius, const PolySpace& space,
                                    bool require_center_first) {
  if (!(radius > 0.0)) throw Error("pick_unisolvent_in_ball needs radius > 0");
  if (center.size() != space.dim()) throw Error("centre dimension does not match the space");
  if (space.degree() <= 2) {
    PointMatrix pts = axis_template(center, radius, space);
    if (acceptable(pts, space)) return pts;
  }
  // Seeded rejection sampling for spaces the template does not cover.
  const int d = space.dim();
  CounterRng rng(0x7e4a11a7ULL + static_cast<std::uint64_t>(space.degree()) * 131 + d);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    PointMatrix pts(d, space.size());
    for (int j = 0; j < space.size(); ++j) {
      if (j == 0 && require_center_first) {
        pts.col(0) = center;
        continue;
      }
      Vector u(d);
      for (int i = 0; i < d; ++i) u(i) = rng.normal();
      const double rho = 0.9 * radius * std::pow(rng.uniform(), 1.0 / d);
      pts.col(j) = center + rho * u.normalized();
    }
    if (acceptable(pts, space)) return pts;
  }
  throw Error("could not find a unisolvent point set in the ball");
}

}  // namespace surfspline
