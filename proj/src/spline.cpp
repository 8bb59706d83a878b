#include "surfspline/spline.hpp"

#include "surfspline/errors.hpp"
#include "surfspline/text.hpp"

#include <lapacke.h>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace surfspline {

BasicFunction::BasicFunction(int dim, int order)
    : dim_(dim),
      order_(order),
      exponent_(2 * order - dim),
      branch_(dim % 2 == 0 ? KernelBranch::power_log : KernelBranch::power) {
  if (dim < 1) throw Error("dimension must be positive");
  if (2 * order <= dim) throw Error("order too low for dimension");
}

double BasicFunction::operator()(double r) const {
  if (r <= 0.0) return 0.0;
  double p = 1.0;
  for (int i = 0; i < exponent_; ++i) p *= r;
  return branch_ == KernelBranch::power ? p : p * std::log(r);
}

BasicFunction basic_function(int d, int k) { return BasicFunction(d, k); }

SaddleSystem assemble(const PointMatrix& nodes, const BasicFunction& basic) {
  const int n = static_cast<int>(nodes.cols());
  if (nodes.rows() != basic.dim()) throw Error("node dimension does not match the basic function");
  const PolySpace space(basic.dim(), basic.order() - 1);
  const UnisolvenceCheck check = check_unisolvent(nodes, space);
  if (!check.unisolvent) {
    throw UnisolvenceError("nodes are not unisolvent for polynomials of degree " +
                               std::to_string(space.degree()) + " (condition " +
                               format_g(check.condition, 6) + ")",
                           check.condition);
  }
  const int ell = space.size();
  SaddleSystem sys{Eigen::MatrixXd::Zero(n + ell, n + ell), n, ell};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = basic((nodes.col(i) - nodes.col(j)).norm());
      sys.matrix(i, j) = v;
      sys.matrix(j, i) = v;
    }
    sys.matrix(i, i) = basic(0.0);
    const Vector row = space.monomials(nodes.col(i));
    sys.matrix.block(i, n, 1, ell) = row.transpose();
    sys.matrix.block(n, i, ell, 1) = row;
  }
  return sys;
}

SaddleSystem assemble(const PointSet& nodes, const BasicFunction& basic) {
  return assemble(nodes.points(), basic);
}

namespace {

// Bunch-Kaufman LDL^T with a column-pivoted QR fallback.
class SaddleSolver {
 public:
  SaddleSolver(const Eigen::MatrixXd& a, double fallback_rcond) : a_(a) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    factor_ = a;
    ipiv_.resize(n);
    const double anorm = LAPACKE_dlansy(LAPACK_COL_MAJOR, '1', 'L', n, factor_.data(), n);
    const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, factor_.data(), n, ipiv_.data());
    if (info == 0) {
      LAPACKE_dsycon(LAPACK_COL_MAJOR, 'L', n, factor_.data(), n, ipiv_.data(), anorm, &rcond_);
    } else {
      rcond_ = 0.0;
    }
    if (info != 0 || rcond_ < fallback_rcond) {
      qr_.compute(a);
      const Vector diag = qr_.matrixR().diagonal().cwiseAbs();
      rcond_ = diag.maxCoeff() > 0.0 ? diag.minCoeff() / diag.maxCoeff() : 0.0;
      method_ = "qr";
    }
  }

  double rcond() const { return rcond_; }
  const std::string& method() const { return method_; }

  Vector solve(const Vector& rhs) const {
    if (method_ == "qr") return qr_.solve(rhs);
    Vector x = rhs;
    const lapack_int n = static_cast<lapack_int>(a_.rows());
    LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', n, 1, factor_.data(), n, ipiv_.data(), x.data(), n);
    return x;
  }

  Vector solve_refined(const Vector& rhs, int steps) const {
    Vector x = solve(rhs);
    for (int i = 0; i < steps; ++i) x += solve(rhs - a_ * x);
    return x;
  }

 private:
  const Eigen::MatrixXd& a_;
  Eigen::MatrixXd factor_;
  std::vector<lapack_int> ipiv_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  double rcond_ = 0.0;
  std::string method_ = "ldlt";
};

}  // namespace

SurfaceSplineModel::SurfaceSplineModel(PointMatrix nodes, Vector mu, Polynomial tail,
                                       BasicFunction basic, AffineFrame frame,
                                       SolveDiagnostics diagnostics)
    : nodes_(std::move(nodes)),
      mu_(std::move(mu)),
      tail_(std::move(tail)),
      basic_(basic),
      frame_(std::move(frame)),
      diagnostics_(std::move(diagnostics)) {
  if (mu_.size() != nodes_.cols()) throw Error("coefficient count does not match node count");
  if (tail_.space() != PolySpace(basic_.dim(), basic_.order() - 1)) {
    throw Error("tail polynomial space does not match the spline order");
  }
}

double SurfaceSplineModel::evaluate(const Eigen::Ref<const Vector>& x) const {
  double sum = tail_(x);
  for (Eigen::Index j = 0; j < nodes_.cols(); ++j) {
    if (mu_(j) != 0.0) sum += mu_(j) * basic_((x - nodes_.col(j)).norm());
  }
  return sum;
}

Vector SurfaceSplineModel::evaluate_many(const PointMatrix& xs) const {
  Vector out(xs.cols());
  for (Eigen::Index i = 0; i < xs.cols(); ++i) out(i) = evaluate(xs.col(i));
  return out;
}

SurfaceSplineModel fit(const PointMatrix& nodes, const Vector& values, int k,
                       const FitOptions& options) {
  const int d = static_cast<int>(nodes.rows());
  const BasicFunction basic = basic_function(d, k);
  const int n = static_cast<int>(nodes.cols());
  if (values.size() != n) throw Error("value count does not match node count");
  if (n == 0) throw Error("cannot fit an empty node set");

  // Solve in a unit frame; psi(s r') = s^e psi(r') + s^e log(s) r'^e, and the
  // second term is absorbed into the polynomial tail below.
  const AffineFrame frame = AffineFrame::fit_to(nodes);
  const PointMatrix y = frame.apply(nodes);
  const SaddleSystem sys = assemble(y, basic);
  const int ell = sys.n_poly;

  const SaddleSolver solver(sys.matrix, options.fallback_rcond);
  if (!(solver.rcond() >= kMinRcond)) {
    throw ConditioningError("interpolation system is ill-conditioned (rcond " +
                                format_g(solver.rcond(), 6) + ")",
                            solver.rcond());
  }
  Vector rhs = Vector::Zero(n + ell);
  rhs.head(n) = values;
  const Vector sol = solver.solve_refined(rhs, options.refinement_steps);
  const Vector mu_unit = sol.head(n);
  Vector tail_coeffs = sol.tail(ell);

  const PolySpace space(d, k - 1);
  const double scale_power = std::pow(frame.scale, basic.exponent());
  if (basic.branch() == KernelBranch::power_log && frame.scale != 1.0) {
    const double log_s = std::log(frame.scale);
    const PointMatrix probe = pick_unisolvent_in_ball(Vector::Zero(d), 1.0, space, false);
    Vector corr(ell);
    for (int i = 0; i < ell; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        acc += mu_unit(j) * std::pow((probe.col(i) - y.col(j)).norm(), basic.exponent());
      }
      corr(i) = -log_s * acc;
    }
    tail_coeffs += lagrange_project(probe, corr, space).in_monomial_basis().coeffs();
  }

  SolveDiagnostics diag;
  diag.rcond = solver.rcond();
  diag.method = solver.method();
  SurfaceSplineModel model(nodes, mu_unit / scale_power, Polynomial(space, tail_coeffs, frame),
                           basic, frame, diag);
  const double data_scale = values.cwiseAbs().maxCoeff() > 0.0 ? values.cwiseAbs().maxCoeff() : 1.0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(model(nodes.col(i)) - values(i)));
  diag.interpolation_residual = worst / data_scale;
  diag.nbc_residual = nbc_residual(model);
  return SurfaceSplineModel(nodes, model.mu(), model.tail(), basic, frame, diag);
}

SurfaceSplineModel fit(const PointSet& nodes, const Vector& values, int k,
                       const FitOptions& options) {
  return fit(nodes.points(), values, k, options);
}

double nbc_residual(const SurfaceSplineModel& model) {
  const double mu_l1 = model.mu().lpNorm<1>();
  if (mu_l1 == 0.0) return 0.0;
  const PolySpace& space = model.tail().space();
  const Eigen::MatrixXd v = space.vandermonde(model.frame().apply(model.nodes()));
  double worst = 0.0;
  for (int j = 0; j < space.size(); ++j) {
    const double peak = v.col(j).cwiseAbs().maxCoeff();
    if (peak == 0.0) continue;
    worst = std::max(worst, std::abs(v.col(j).dot(model.mu())) / (mu_l1 * peak));
  }
  return worst;
}

namespace {

void write_row(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << format_exact(v(i));
  }
  out << '\n';
}

}  // namespace

void write_model(std::ostream& out, const SurfaceSplineModel& model) {
  const Polynomial tail = model.tail().in_monomial_basis();
  out << "# surface_spline d=" << model.dim() << " k=" << model.basic().order()
      << " N=" << model.size() << " ell=" << tail.space().size() << '\n';
  for (int i = 0; i < model.size(); ++i) write_row(out, model.nodes().col(i));
  write_row(out, model.mu());
  write_row(out, tail.coeffs());
}

SurfaceSplineModel read_model(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line) || line.rfind("# surface_spline", 0) != 0) {
    throw ParseError("expected '# surface_spline' header", line_no);
  }
  int d = 0, k = 0, n = -1, ell = -1;
  std::istringstream header(line.substr(16));
  std::string token;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError("bad header field '" + token + "'", line_no);
    const std::string key = token.substr(0, eq);
    const int value = static_cast<int>(parse_int(token.substr(eq + 1), key));
    if (key == "d") d = value;
    else if (key == "k") k = value;
    else if (key == "N") n = value;
    else if (key == "ell") ell = value;
  }
  if (d < 1 || k < 1 || n < 0 || ell < 1) throw ParseError("incomplete model header", line_no);
  auto next_row = [&](int expected) {
    if (!std::getline(in, line)) throw ParseError("unexpected end of model file", line_no + 1);
    ++line_no;
    std::vector<double> row = parse_csv_row(line, line_no);
    if (static_cast<int>(row.size()) != expected) {
      throw ParseError("expected " + std::to_string(expected) + " fields", line_no);
    }
    return Vector(Eigen::Map<const Vector>(row.data(), expected));
  };
  PointMatrix nodes(d, n);
  for (int i = 0; i < n; ++i) nodes.col(i) = next_row(d);
  Vector mu = n > 0 ? next_row(n) : Vector();
  if (n == 0 && std::getline(in, line)) ++line_no;
  Vector tail = next_row(ell);
  const PolySpace space(d, k - 1);
  if (space.size() != ell) throw ParseError("ell does not match d and k", 1);
  SurfaceSplineModel model(nodes, mu, Polynomial(space, tail), basic_function(d, k),
                           AffineFrame::fit_to(nodes));
  SolveDiagnostics diag;
  diag.nbc_residual = nbc_residual(model);
  return SurfaceSplineModel(nodes, model.mu(), model.tail(), model.basic(), model.frame(), diag);
}

}  // namespace surfspline
