#include "surfspline/mollifier.hpp"

#include "surfspline/errors.hpp"
#include "surfspline/text.hpp"

#include <cmath>

namespace surfspline {

double bump(const Eigen::Ref<const Vector>& x) {
  const double r2 = x.squaredNorm();
  if (r2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r2));
}

namespace {

std::vector<MultiIndex> even_terms(int d, int max_order) {
  std::vector<MultiIndex> out;
  for (int order = 0; order <= max_order; order += 2) {
    for (const MultiIndex& half : multi_indices(d, order / 2)) {
      std::vector<int> e = half.entries();
      for (int& v : e) v *= 2;
      out.emplace_back(std::move(e));
    }
  }
  return out;
}

MultiIndex sum(const MultiIndex& a, const MultiIndex& b) {
  std::vector<int> e = a.entries();
  for (int i = 0; i < a.dim(); ++i) e[i] += b[i];
  return MultiIndex(std::move(e));
}

}  // namespace

Mollifier::Mollifier(int dim, int m, std::vector<MultiIndex> terms, Vector coeffs, int quad_nodes)
    : dim_(dim), m_(m), terms_(std::move(terms)), coeffs_(std::move(coeffs)), quad_nodes_(quad_nodes) {
  if (static_cast<int>(terms_.size()) != coeffs_.size()) throw Error("mollifier term count mismatch");
  const QuadratureRule full = unit_ball_tensor_rule(dim_, quad_nodes_);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < full.points.cols(); ++i) {
    if (full.points.col(i).squaredNorm() < 1.0) keep.push_back(i);
  }
  kernel_.points.resize(dim_, static_cast<Eigen::Index>(keep.size()));
  kernel_.weights.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    kernel_.points.col(jj) = full.points.col(keep[j]);
    kernel_.weights(jj) = full.weights(keep[j]) * (*this)(full.points.col(keep[j]));
  }
}

double Mollifier::operator()(const Eigen::Ref<const Vector>& x) const {
  const double b = bump(x);
  if (b == 0.0) return 0.0;
  double p = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) p += coeffs_(static_cast<Eigen::Index>(i)) * terms_[i].power_of(x);
  return p * b;
}

int default_mollifier_nodes(int dim) { return dim <= 2 ? 64 : 48; }

Mollifier build_mollifier(int d, int m, int quad_nodes) {
  if (d < 1 || d > kMaxDimension) throw Error("mollifier dimension must be 1, 2 or 3");
  if (m < 1) throw Error("mollifier moment order must be at least 1");
  if (quad_nodes == 0) quad_nodes = default_mollifier_nodes(d);
  if (quad_nodes < 1) throw Error("mollifier quadrature needs at least one node");

  // Conditions for even alpha with |alpha| <= m - 1; odd moments vanish by
  // symmetry. The matrix is a Gram matrix under the bump weight, hence SPD.
  const std::vector<MultiIndex> terms = even_terms(d, m - 1);
  const int n = static_cast<int>(terms.size());
  const QuadratureRule rule = unit_ball_tensor_rule(d, quad_nodes);
  Vector w(rule.size());
  for (int i = 0; i < rule.size(); ++i) w(i) = rule.weights(i) * bump(rule.points.col(i));

  Eigen::MatrixXd gram(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const MultiIndex ab = sum(terms[a], terms[b]);
      double acc = 0.0;
      for (int i = 0; i < rule.size(); ++i) acc += w(i) * ab.power_of(rule.points.col(i));
      gram(a, b) = gram(b, a) = acc;
    }
  }
  Vector rhs = Vector::Zero(n);
  rhs(0) = 1.0;
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw Error("mollifier moment system is singular");
  return Mollifier(d, m, terms, llt.solve(rhs), quad_nodes);
}

double moment(const Mollifier& phi, const MultiIndex& alpha, int nodes) {
  if (nodes == 0) nodes = phi.quad_nodes();
  const QuadratureRule rule = unit_ball_tensor_rule(phi.dim(), nodes);
  double acc = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    const auto t = rule.points.col(i);
    acc += rule.weights(i) * phi(t) * alpha.power_of(t);
  }
  return acc;
}

std::vector<MomentRow> verify_moments(const Mollifier& phi) {
  std::vector<MomentRow> rows;
  for (int order = 0; order <= phi.m() - 1; ++order) {
    for (const MultiIndex& alpha : multi_indices(phi.dim(), order)) {
      MomentRow row;
      row.alpha = alpha;
      row.value = moment(phi, alpha, 2 * phi.quad_nodes());
      row.target = order == 0 ? 1.0 : 0.0;
      row.tolerance = order == 0 ? 1e-8 : 1e-6;
      row.pass = std::abs(row.value - row.target) <= row.tolerance;
      rows.push_back(row);
    }
  }
  return rows;
}

double mollify(const ScalarField& f, const Mollifier& phi, double eps,
               const Eigen::Ref<const Vector>& x) {
  if (!(eps > 0.0)) throw Error("mollifier scale must be positive");
  const QuadratureRule& k = phi.kernel();
  double acc = 0.0;
  Vector y(x.size());
  for (int i = 0; i < k.size(); ++i) {
    y = x - eps * k.points.col(i);
    acc += k.weights(i) * f(y);
  }
  return acc;
}

double radial_cutoff(double r, double inner, double outer) {
  return smooth_step((outer - r) / (outer - inner));
}

SmoothedData::SmoothedData(TestFunction f, PointSet nodes, int m, Mollifier phi)
    : f_(std::move(f)), nodes_(std::move(nodes)), m_(m), phi_(std::move(phi)) {
  if (nodes_.size() < 2) throw Error("smoothed data needs at least two nodes");
  delta_ = 0.25 * separation(nodes_);
  const PolySpace space(nodes_.dim(), m_ - 1);
  for (int i = 0; i < nodes_.size(); ++i) {
    const Vector a = nodes_.point(i);
    const PointMatrix c = pick_unisolvent_in_ball(a, delta_, space, true);
    Vector values(c.cols());
    for (Eigen::Index j = 0; j < c.cols(); ++j) values(j) = f_(c.col(j));
    local_.push_back(lagrange_project(c, values, space));
  }
}

double SmoothedData::blended(const Eigen::Ref<const Vector>& x) const {
  // Blend regions of distinct nodes are disjoint since 2 delta = q/2.
  const double outer = blend_outer();
  for (int i = 0; i < nodes_.size(); ++i) {
    const double r = (x - nodes_.point(i)).norm();
    if (r >= outer) continue;
    const double eta = radial_cutoff(r, delta_, outer);
    if (eta == 1.0) return local_[i](x);
    const double fx = f_(x);
    return fx + eta * (local_[i](x) - fx);
  }
  return f_(x);
}

double SmoothedData::operator()(const Eigen::Ref<const Vector>& x) const {
  return mollify([this](const Vector& y) { return blended(y); }, phi_, delta_, x);
}

SmoothedData smoothed_interpolation_data(const TestFunction& f, const PointSet& nodes, int m,
                                         const Mollifier& phi) {
  const int d = nodes.dim();
  if (2 * m <= d) throw Error("order too low for dimension");
  if (phi.dim() != d || phi.m() != m) throw Error("mollifier does not match (d, m)");
  if (f.dim != d) throw Error("test function dimension does not match the nodes");
  if (nodes.size() < 2) throw Error("smoothed data needs at least two nodes");
  const double delta = 0.25 * separation(nodes);
  if (f.valid_region) {
    const Box box = nodes.domain().bounding_box();
    const Vector lo = box.lower.array() - 3.0 * delta;
    const Vector hi = box.upper.array() + 3.0 * delta;
    if (!f.valid_region->contains(lo) || !f.valid_region->contains(hi)) {
      throw Error("test function '" + f.name + "' is not evaluable on the node domain dilated by 3*delta = " +
                  format_g(3.0 * delta, 6) + "; shrink the node domain");
    }
  }
  return SmoothedData(f, nodes, m, phi);
}

}  // namespace surfspline
