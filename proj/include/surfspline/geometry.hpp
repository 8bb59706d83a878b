#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace surfspline {

using Vector = Eigen::VectorXd;
// Point sets are stored column-wise: one column per point, one row per axis.
using PointMatrix = Eigen::MatrixXd;

inline constexpr int kMaxDimension = 3;

enum class DomainKind { unit_cube, unit_ball };

std::string_view to_string(DomainKind kind);
DomainKind parse_domain_kind(std::string_view text);

/// Axis-aligned box, used for bounding boxes and integration regions.
struct Box {
  Vector lower;
  Vector upper;

  int dim() const { return static_cast<int>(lower.size()); }
  double volume() const;
  bool contains(const Eigen::Ref<const Vector>& x) const;
};

/// The unit cube [0,1]^d or the closed unit ball centred at the origin.
class Domain {
 public:
  Domain(DomainKind kind, int dim);

  static Domain unit_cube(int dim) { return {DomainKind::unit_cube, dim}; }
  static Domain unit_ball(int dim) { return {DomainKind::unit_ball, dim}; }

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }

  bool contains(const Eigen::Ref<const Vector>& x) const;
  double volume() const;
  double diameter() const;
  Box bounding_box() const;

  bool operator==(const Domain&) const = default;

 private:
  DomainKind kind_;
  int dim_;
};

/// Scattered nodes inside a domain. Construction checks that every node lies
/// in the domain and that nodes are pairwise distinct.
class PointSet {
 public:
  PointSet(Domain domain, PointMatrix points, std::optional<std::uint64_t> seed = {});

  const Domain& domain() const { return domain_; }
  const PointMatrix& points() const { return points_; }
  int dim() const { return domain_.dim(); }
  int size() const { return static_cast<int>(points_.cols()); }
  bool empty() const { return points_.cols() == 0; }
  auto point(int i) const { return points_.col(i); }
  std::optional<std::uint64_t> generation_seed() const { return seed_; }

  // Cached metrics; set by with_metrics() and always equal to a fresh
  // computation at the recorded probe resolution.
  std::optional<double> fill_h() const { return fill_h_; }
  std::optional<double> separation_q() const { return separation_q_; }
  std::optional<int> fill_resolution() const { return fill_resolution_; }

  PointSet with_metrics(int resolution) const;
  PointSet with_point(const Eigen::Ref<const Vector>& x) const;

 private:
  Domain domain_;
  PointMatrix points_;
  std::optional<std::uint64_t> seed_;
  std::optional<double> fill_h_;
  std::optional<double> separation_q_;
  std::optional<int> fill_resolution_;
};

/// Default probe resolution per axis: 201 for d <= 2, 51 for d = 3.
int default_fill_resolution(int dim);

/// Half the probe-grid cell diagonal; the probe estimate of the fill distance
/// under-shoots the true supremum by at most this amount.
double probe_discretization_bound(const Domain& domain, int resolution);

/// Max over a tensor probe grid (restricted to the domain) of the distance to
/// the nearest node.
double fill_distance(const PointSet& points, int resolution);
double fill_distance(const PointSet& points);

/// Half of the minimum pairwise distance.
double separation(const PointSet& points);

double mesh_ratio(const PointSet& points, int resolution);
double mesh_ratio(const PointSet& points);

struct QuasiUniformOptions {
  int max_nodes = 20000;
  int fill_resolution = 0;  // 0: default_fill_resolution
  double spacing_factor = 1.3;
  double jitter = 0.25;
};

/// Jittered grid whose fill distance lies within [0.5, 1.5] * target_h and
/// whose mesh ratio is at most 4. Deterministic in (domain, target_h, seed).
PointSet generate_quasi_uniform(const Domain& domain, double target_h, std::uint64_t seed,
                                const QuasiUniformOptions& options = {});

/// A quasi-uniform base set plus one satellite node placed so that the
/// separation shrinks to q_base / cluster_factor. The satellite attaches to
/// the node nearest `anchor` when given, otherwise to a seeded random node;
/// nodes further down the order are tried when no direction fits.
PointSet generate_clustered(const Domain& domain, double base_h, double cluster_factor,
                            std::uint64_t seed, const QuasiUniformOptions& options = {},
                            const std::optional<Vector>& anchor = {});

// CSV: "# d=<d> domain=<kind> seed=<seed>" then one row per point.
void write_points_csv(std::ostream& out, const PointSet& points);
PointSet read_points_csv(std::istream& in);

}  // namespace surfspline
