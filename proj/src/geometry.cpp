#include "surfspline/geometry.hpp"

#include "surfspline/errors.hpp"
#include "surfspline/rng.hpp"
#include "surfspline/text.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

namespace surfspline {

std::string_view to_string(DomainKind kind) {
  return kind == DomainKind::unit_cube ? "unit_cube" : "unit_ball";
}

DomainKind parse_domain_kind(std::string_view text) {
  if (text == "unit_cube") return DomainKind::unit_cube;
  if (text == "unit_ball") return DomainKind::unit_ball;
  throw Error("unknown domain kind '" + std::string(text) + "'");
}

double Box::volume() const { return (upper - lower).prod(); }

bool Box::contains(const Eigen::Ref<const Vector>& x) const {
  return x.size() == lower.size() && (x.array() >= lower.array()).all() &&
         (x.array() <= upper.array()).all();
}

Domain::Domain(DomainKind kind, int dim) : kind_(kind), dim_(dim) {
  if (dim < 1 || dim > kMaxDimension) {
    throw Error("domain dimension must be in [1, " + std::to_string(kMaxDimension) + "], got " +
                std::to_string(dim));
  }
}

bool Domain::contains(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != dim_) return false;
  if (kind_ == DomainKind::unit_cube) return (x.array() >= 0.0).all() && (x.array() <= 1.0).all();
  return x.squaredNorm() <= 1.0;
}

double Domain::volume() const {
  if (kind_ == DomainKind::unit_cube) return 1.0;
  const double half = 0.5 * dim_;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double Domain::diameter() const {
  return kind_ == DomainKind::unit_cube ? std::sqrt(static_cast<double>(dim_)) : 2.0;
}

Box Domain::bounding_box() const {
  if (kind_ == DomainKind::unit_cube) return {Vector::Zero(dim_), Vector::Ones(dim_)};
  return {Vector::Constant(dim_, -1.0), Vector::Ones(dim_)};
}

PointSet::PointSet(Domain domain, PointMatrix points, std::optional<std::uint64_t> seed)
    : domain_(domain), points_(std::move(points)), seed_(seed) {
  if (points_.cols() > 0 && points_.rows() != domain_.dim()) {
    throw Error("point dimension " + std::to_string(points_.rows()) +
                " does not match domain dimension " + std::to_string(domain_.dim()));
  }
  if (points_.cols() == 0) points_.resize(domain_.dim(), 0);
  for (Eigen::Index i = 0; i < points_.cols(); ++i) {
    if (!domain_.contains(points_.col(i))) {
      throw Error("point " + std::to_string(i) + " lies outside the " +
                  std::string(to_string(domain_.kind())));
    }
  }
  for (Eigen::Index i = 0; i < points_.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < points_.cols(); ++j) {
      if ((points_.col(i) - points_.col(j)).squaredNorm() == 0.0) {
        throw Error("points " + std::to_string(i) + " and " + std::to_string(j) +
                    " coincide");
      }
    }
  }
}

PointSet PointSet::with_metrics(int resolution) const {
  PointSet out = *this;
  out.fill_h_ = fill_distance(*this, resolution);
  out.fill_resolution_ = resolution;
  if (size() >= 2) out.separation_q_ = separation(*this);
  return out;
}

PointSet PointSet::with_point(const Eigen::Ref<const Vector>& x) const {
  PointMatrix grown(dim(), size() + 1);
  grown.leftCols(size()) = points_;
  grown.col(size()) = x;
  return PointSet(domain_, std::move(grown), seed_);
}

int default_fill_resolution(int dim) { return dim <= 2 ? 201 : 51; }

double probe_discretization_bound(const Domain& domain, int resolution) {
  const Box box = domain.bounding_box();
  const double spacing = (box.upper(0) - box.lower(0)) / (resolution - 1);
  return 0.5 * spacing * std::sqrt(static_cast<double>(domain.dim()));
}

namespace {

// Calls visit(x) for every probe-grid point of the domain's bounding box that
// lies in the domain.
template <class Visit>
void for_each_probe(const Domain& domain, int resolution, Visit&& visit) {
  const int d = domain.dim();
  const Box box = domain.bounding_box();
  std::vector<int> index(d, 0);
  Vector x(d);
  const double step = (box.upper(0) - box.lower(0)) / (resolution - 1);
  while (true) {
    for (int i = 0; i < d; ++i) x(i) = box.lower(i) + step * index[i];
    if (domain.kind() == DomainKind::unit_cube || x.squaredNorm() <= 1.0 + 1e-12) visit(x);
    int axis = 0;
    while (axis < d && ++index[axis] == resolution) index[axis++] = 0;
    if (axis == d) break;
  }
}

double min_sq_distance(const PointMatrix& nodes, const Vector& x) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < nodes.cols(); ++j) {
    best = std::min(best, (nodes.col(j) - x).squaredNorm());
  }
  return best;
}

}  // namespace

double fill_distance(const PointSet& points, int resolution) {
  if (points.empty()) throw Error("empty set has undefined fill distance");
  if (resolution < 2) throw Error("fill distance probe resolution must be at least 2");
  double worst = 0.0;
  for_each_probe(points.domain(), resolution, [&](const Vector& x) {
    worst = std::max(worst, min_sq_distance(points.points(), x));
  });
  return std::sqrt(worst);
}

double fill_distance(const PointSet& points) {
  return fill_distance(points, default_fill_resolution(points.dim()));
}

double separation(const PointSet& points) {
  if (points.size() < 2) throw Error("separation needs at least 2 points");
  const PointMatrix& p = points.points();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < p.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < p.cols(); ++j) {
      best = std::min(best, (p.col(i) - p.col(j)).squaredNorm());
    }
  }
  return 0.5 * std::sqrt(best);
}

double mesh_ratio(const PointSet& points, int resolution) {
  if (points.size() < 2) throw Error("mesh ratio needs at least 2 points");
  return fill_distance(points, resolution) / separation(points);
}

double mesh_ratio(const PointSet& points) {
  return mesh_ratio(points, default_fill_resolution(points.dim()));
}

namespace {

// Jittered grid with n cells per axis over the bounding box; points closer
// than floor_distance to an already accepted point are dropped.
PointMatrix jittered_grid(const Domain& domain, int cells, double jitter, CounterRng rng) {
  const int d = domain.dim();
  const Box box = domain.bounding_box();
  const double s = (box.upper(0) - box.lower(0)) / cells;
  std::vector<Vector> kept;
  std::vector<int> index(d, 0);
  Vector center(d), x(d);
  const double floor_sq = 0.25 * s * s;
  while (true) {
    for (int i = 0; i < d; ++i) center(i) = box.lower(i) + s * (index[i] + 0.5);
    bool usable = domain.contains(center);
    if (usable) {
      x = center;
      // Redraw the jitter a few times if it leaves a curved domain.
      for (int attempt = 0; attempt < 8; ++attempt) {
        Vector trial(d);
        for (int i = 0; i < d; ++i) trial(i) = center(i) + rng.uniform(-jitter, jitter) * s;
        if (domain.contains(trial)) {
          x = trial;
          break;
        }
      }
      for (const Vector& k : kept) {
        if ((k - x).squaredNorm() < floor_sq) {
          usable = false;
          break;
        }
      }
      if (usable) kept.push_back(x);
    }
    int axis = 0;
    while (axis < d && ++index[axis] == cells) index[axis++] = 0;
    if (axis == d) break;
  }
  PointMatrix out(d, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = kept[i];
  return out;
}

}  // namespace

PointSet generate_quasi_uniform(const Domain& domain, double target_h, std::uint64_t seed,
                                const QuasiUniformOptions& options) {
  if (!(target_h > 0.0 && target_h < 1.0)) throw Error("target_h must lie in (0, 1)");
  const int d = domain.dim();
  const Box box = domain.bounding_box();
  const double extent = box.upper(0) - box.lower(0);
  const int base_cells =
      std::max(1, static_cast<int>(std::ceil(extent / (options.spacing_factor * target_h))));
  if (std::pow(static_cast<double>(base_cells), d) > options.max_nodes) {
    throw Error("node budget exceeded");
  }
  const int resolution =
      options.fill_resolution > 0 ? options.fill_resolution : default_fill_resolution(d);

  // A single jitter draw can miss the coverage or mesh-ratio window; walk a
  // fixed sequence of (cell count, sub-stream) candidates so the result stays
  // a pure function of the inputs.
  const CounterRng root(seed);
  const int offsets[] = {0, 1, -1, 2};
  for (int attempt = 0; attempt < 16; ++attempt) {
    const int cells = base_cells + offsets[attempt % 4];
    if (cells < 1 || std::pow(static_cast<double>(cells), d) > options.max_nodes) continue;
    PointMatrix p = jittered_grid(domain, cells, options.jitter, root.split(attempt));
    if (p.cols() == 0) continue;
    PointSet set(domain, std::move(p), seed);
    const double h = fill_distance(set, resolution);
    if (h < 0.5 * target_h || h > 1.5 * target_h) continue;
    if (set.size() >= 2) {
      const double q = separation(set);
      if (q < target_h / 8.0 || h / q > 4.0) continue;
    }
    return set.with_metrics(resolution);
  }
  throw Error("quasi-uniform generation failed to meet the mesh-ratio window for target_h=" +
              format_g(target_h, 6));
}

PointSet generate_clustered(const Domain& domain, double base_h, double cluster_factor,
                            std::uint64_t seed, const QuasiUniformOptions& options,
                            const std::optional<Vector>& anchor) {
  if (!(cluster_factor >= 1.0)) throw Error("cluster_factor must be >= 1");
  const PointSet base = generate_quasi_uniform(domain, base_h, seed, options);
  if (base.size() < 2) throw Error("clustered generation needs a base set with >= 2 points");
  const int d = domain.dim();
  const double q_base = separation(base);
  // The satellite pair distance 2 q_base / factor sets the new separation to
  // q_base / factor.
  const double offset = 2.0 * q_base / cluster_factor;

  CounterRng rng = CounterRng(seed).split(0xc1a5);
  std::vector<int> order(base.size());
  for (int i = 0; i < base.size(); ++i) order[i] = i;
  for (int i = base.size() - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  if (anchor) {
    if (anchor->size() != d) throw Error("clustered generation: anchor dimension mismatch");
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return (base.point(a) - *anchor).norm() < (base.point(b) - *anchor).norm();
    });
  }

  std::optional<Vector> fallback;
  double fallback_clearance = -1.0;
  const int directions = d == 1 ? 2 : 64;
  for (int node : order) {
    const Vector a = base.point(node);
    for (int trial = 0; trial < directions; ++trial) {
      Vector u(d);
      if (d == 1) {
        u(0) = trial == 0 ? 1.0 : -1.0;
      } else {
        for (int i = 0; i < d; ++i) u(i) = rng.normal();
        u.normalize();
      }
      const Vector s = a + offset * u;
      if (!domain.contains(s)) continue;
      double clearance = std::numeric_limits<double>::infinity();
      for (int j = 0; j < base.size(); ++j) {
        if (j != node) clearance = std::min(clearance, (base.point(j) - s).norm());
      }
      if (clearance >= offset) {
        return base.with_point(s).with_metrics(base.fill_resolution().value());
      }
      if (clearance > fallback_clearance) {
        fallback_clearance = clearance;
        fallback = s;
      }
    }
  }
  if (!fallback) throw Error("clustered generation: every satellite direction leaves the domain");
  return base.with_point(*fallback).with_metrics(base.fill_resolution().value());
}

void write_points_csv(std::ostream& out, const PointSet& points) {
  out << "# d=" << points.dim() << " domain=" << to_string(points.domain().kind()) << " seed=";
  if (points.generation_seed()) {
    out << *points.generation_seed();
  } else {
    out << "none";
  }
  out << '\n';
  for (int i = 0; i < points.size(); ++i) {
    for (int j = 0; j < points.dim(); ++j) {
      if (j) out << ',';
      out << format_exact(points.point(i)(j));
    }
    out << '\n';
  }
}

PointSet read_points_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  ++line_no;
  if (line.empty() || line[0] != '#') throw ParseError("header must start with '#'", line_no);

  std::optional<int> dim;
  std::optional<DomainKind> kind;
  std::optional<std::uint64_t> seed;
  std::istringstream header(line.substr(1));
  std::string token;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "d") {
        dim = std::stoi(value);
      } else if (key == "domain") {
        kind = parse_domain_kind(value);
      } else if (key == "seed" && value != "none") {
        seed = std::stoull(value);
      }
    } catch (const std::exception& e) {
      throw ParseError("bad header field '" + token + "'", line_no);
    }
  }
  if (!dim) throw ParseError("header lacks d=<dimension>", line_no);
  const Domain domain(kind.value_or(DomainKind::unit_cube), *dim);

  std::vector<Vector> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line[0] == '#') continue;
    const std::vector<double> fields = parse_csv_row(line, line_no);
    if (static_cast<int>(fields.size()) != *dim) {
      throw ParseError("expected " + std::to_string(*dim) + " coordinates, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    rows.push_back(Eigen::Map<const Vector>(fields.data(), *dim));
  }
  PointMatrix p(*dim, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) p.col(static_cast<Eigen::Index>(i)) = rows[i];
  return PointSet(domain, std::move(p), seed);
}

}  // namespace surfspline
