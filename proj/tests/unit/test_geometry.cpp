#include "oracles/geometry_oracle.hpp"
#include "surfspline/errors.hpp"
#include "surfspline/geometry.hpp"
#include "surfspline/quadrature.hpp"
#include "surfspline/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace surfspline;

namespace {

PointSet square_vertices() {
  PointMatrix p(2, 4);
  p << 0, 1, 0, 1, 0, 0, 1, 1;
  return PointSet(Domain::unit_cube(2), p);
}

PointSet regular_grid(int cells) {
  const double s = 1.0 / cells;
  PointMatrix p(2, cells * cells);
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) p.col(i * cells + j) << (i + 0.5) * s, (j + 0.5) * s;
  }
  return PointSet(Domain::unit_cube(2), p);
}

bool in_cube(const Eigen::VectorXd& x) { return (x.array() >= 0).all() && (x.array() <= 1).all(); }

}  // namespace

TEST_CASE("domain membership, volume and diameter") {
  const Domain cube = Domain::unit_cube(2);
  CHECK(cube.contains(Vector{{0.0, 1.0}}));
  CHECK_FALSE(cube.contains(Vector{{1.0 + 1e-15, 0.5}}));
  CHECK(cube.volume() == 1.0);
  CHECK(cube.diameter() == doctest::Approx(std::sqrt(2.0)));
  const Domain ball = Domain::unit_ball(3);
  CHECK(ball.contains(Vector{{1.0, 0.0, 0.0}}));
  CHECK_FALSE(ball.contains(Vector{{0.8, 0.8, 0.0}}));
  CHECK(ball.volume() == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  CHECK(Domain::unit_ball(2).volume() == doctest::Approx(std::numbers::pi));
  CHECK_THROWS(Domain(DomainKind::unit_cube, 0));
  CHECK(parse_domain_kind("unit_ball") == DomainKind::unit_ball);
  CHECK_THROWS(parse_domain_kind("sphere"));
}

TEST_CASE("point sets reject outside and duplicate points") {
  PointMatrix outside(1, 1);
  outside << 1.5;
  CHECK_THROWS(PointSet(Domain::unit_cube(1), outside));
  PointMatrix dup(1, 2);
  dup << 0.3, 0.3;
  CHECK_THROWS(PointSet(Domain::unit_cube(1), dup));
}

TEST_CASE("fill distance examples") {
  SUBCASE("centre of the unit ball") {
    PointMatrix c = PointMatrix::Zero(2, 1);
    const PointSet s(Domain::unit_ball(2), c);
    const double h = fill_distance(s, 201);
    CHECK(std::abs(h - 1.0) <= 0.02);
    // The probe grid only under-covers by at most the recorded bound.
    CHECK(1.0 - h <= probe_discretization_bound(s.domain(), 201));
  }
  SUBCASE("unit square vertices") {
    CHECK(fill_distance(square_vertices(), 201) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  }
  SUBCASE("jittered grid against a brute-force probe") {
    CounterRng rng(11);
    PointMatrix p(2, 100);
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        p.col(i * 10 + j) << (i + 0.5 + rng.uniform(-0.25, 0.25)) * 0.1, (j + 0.5 + rng.uniform(-0.25, 0.25)) * 0.1;
      }
    }
    const PointSet s(Domain::unit_cube(2), p);
    const double h = fill_distance(s, 201);
    CHECK(h > 0.0);
    CHECK(h <= 0.1 * std::sqrt(2.0));
    const double brute = oracle::probe_fill_distance(p, 0.0, 1.0, 501, in_cube);
    CHECK(fill_distance(s, 501) == doctest::Approx(brute).epsilon(1e-12));
    CHECK(std::abs(h - brute) <= probe_discretization_bound(s.domain(), 201) + probe_discretization_bound(s.domain(), 501));
  }
  SUBCASE("empty set") {
    const PointSet empty(Domain::unit_cube(2), PointMatrix(2, 0));
    try {
      fill_distance(empty, 11);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()) == "empty set has undefined fill distance");
    }
  }
}

TEST_CASE("fill distance refines monotonically up to the probe bound") {
  const PointSet s = generate_quasi_uniform(Domain::unit_ball(2), 0.2, 3);
  double prev = fill_distance(s, 21);
  for (int res : {41, 81, 161, 321}) {
    const double h = fill_distance(s, res);
    CHECK(h >= prev - probe_discretization_bound(s.domain(), res) - 1e-15);
    CHECK(h <= s.domain().diameter());
    prev = h;
  }
}

TEST_CASE("separation examples") {
  PointMatrix two(1, 2);
  two << 0.0, 1.0;
  CHECK(separation(PointSet(Domain::unit_cube(1), two)) == 0.5);
  CHECK(separation(square_vertices()) == 0.5);
  const PointMatrix halton = halton_points(100, 2);
  CHECK(separation(PointSet(Domain::unit_cube(2), halton)) == oracle::half_min_pair_distance(halton));
  PointMatrix one(1, 1);
  one << 0.5;
  CHECK_THROWS(separation(PointSet(Domain::unit_cube(1), one)));
}

TEST_CASE("separation cannot grow when a point is added") {
  CounterRng rng(5);
  const PointSet s = generate_quasi_uniform(Domain::unit_cube(2), 0.15, 9);
  const double q = separation(s);
  for (int i = 0; i < 20; ++i) {
    const Vector x{{rng.uniform(), rng.uniform()}};
    CHECK(separation(s.with_point(x)) <= q);
  }
}

TEST_CASE("mesh ratio examples") {
  SUBCASE("regular grid") {
    const PointSet g = regular_grid(10);
    const double s = 0.1;
    CHECK(fill_distance(g, 401) == doctest::Approx(s * std::sqrt(2.0) / 2).epsilon(0.05));
    CHECK(separation(g) == doctest::Approx(s / 2).epsilon(1e-12));
    CHECK(mesh_ratio(g, 401) == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
    CHECK(fill_distance(g, 401) == doctest::Approx(oracle::probe_fill_distance(g.points(), 0, 1, 401, in_cube)));
  }
  SUBCASE("two points in d = 1") {
    PointMatrix two(1, 2);
    two << 0.0, 1.0;
    const PointSet s(Domain::unit_cube(1), two);
    CHECK(fill_distance(s, 201) == doctest::Approx(0.5));
    CHECK(mesh_ratio(s, 201) == doctest::Approx(1.0));
  }
  SUBCASE("clustering by 4 multiplies the mesh ratio by at least 4") {
    const Domain dom = Domain::unit_cube(2);
    const PointSet base = generate_quasi_uniform(dom, 0.2, 1);
    const PointSet clustered = generate_clustered(dom, 0.2, 4.0, 1);
    auto rho = [](const PointSet& s) {
      return oracle::probe_fill_distance(s.points(), 0, 1, 201, in_cube) / oracle::half_min_pair_distance(s.points());
    };
    CHECK(rho(clustered) >= 4.0 * rho(base) * (1 - 1e-12));
  }
}

TEST_CASE("quasi-uniform generator contract") {
  SUBCASE("unit square, target 0.2, seed 7") {
    const PointSet s = generate_quasi_uniform(Domain::unit_cube(2), 0.2, 7);
    CHECK(mesh_ratio(s) <= 4.0);
  }
  SUBCASE("unit interval, target 0.5, seed 0") {
    const PointSet s = generate_quasi_uniform(Domain::unit_cube(1), 0.5, 0);
    CHECK(s.size() >= 2);
    CHECK(fill_distance(s) <= 0.75);
  }
  SUBCASE("determinism") {
    const PointSet a = generate_quasi_uniform(Domain::unit_ball(2), 0.1, 42);
    const PointSet b = generate_quasi_uniform(Domain::unit_ball(2), 0.1, 42);
    CHECK(a.points() == b.points());
    const PointSet c = generate_quasi_uniform(Domain::unit_ball(2), 0.1, 43);
    CHECK(a.points() != c.points());
  }
  SUBCASE("node budget") {
    try {
      generate_quasi_uniform(Domain::unit_cube(3), 0.005, 0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()) == "node budget exceeded");
    }
  }
}

TEST_CASE("quasi-uniform post-conditions hold across domains and seeds") {
  for (int d = 1; d <= 3; ++d) {
    for (DomainKind kind : {DomainKind::unit_cube, DomainKind::unit_ball}) {
      for (double th : {0.3, 0.15}) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
          const Domain dom(kind, d);
          const PointSet s = generate_quasi_uniform(dom, th, seed);
          CAPTURE(d);
          CAPTURE(th);
          CAPTURE(seed);
          const double h = fill_distance(s, *s.fill_resolution());
          CHECK(*s.fill_h() == h);
          CHECK(h >= 0.5 * th);
          CHECK(h <= 1.5 * th);
          if (s.size() >= 2) {
            CHECK(*s.separation_q() == separation(s));
            CHECK(separation(s) >= th / 8);
            CHECK(h / separation(s) <= 4.0);
          }
        }
      }
    }
  }
}

TEST_CASE("clustered generator") {
  const Domain dom = Domain::unit_cube(2);
  const PointSet base = generate_quasi_uniform(dom, 0.2, 3);
  const double q_base = oracle::half_min_pair_distance(base.points());
  SUBCASE("factor 1 keeps the mesh ratio within 10%") {
    const PointSet c = generate_clustered(dom, 0.2, 1.0, 3);
    CHECK(mesh_ratio(c) == doctest::Approx(mesh_ratio(base)).epsilon(0.10));
  }
  SUBCASE("factor 16 shrinks the separation to q/16") {
    const PointSet c = generate_clustered(dom, 0.2, 16.0, 3);
    CHECK(oracle::half_min_pair_distance(c.points()) == doctest::Approx(q_base / 16).epsilon(0.01));
    CHECK(fill_distance(c) <= fill_distance(base));
  }
  SUBCASE("anchor selects the nearest node") {
    const Vector anchor{{0.51, 0.49}};
    const PointSet c = generate_clustered(dom, 0.2, 64.0, 3, {}, anchor);
    int nearest = 0;
    for (int i = 1; i < base.size(); ++i) {
      if ((base.point(i) - anchor).norm() < (base.point(nearest) - anchor).norm()) nearest = i;
    }
    const Vector sat = c.point(c.size() - 1);
    CHECK((sat - base.point(nearest)).norm() == doctest::Approx(2 * q_base / 64).epsilon(1e-12));
  }
  SUBCASE("invalid factor") { CHECK_THROWS(generate_clustered(dom, 0.2, 0.5, 3)); }
}

TEST_CASE("points CSV round trip and line-numbered errors") {
  const PointSet s = generate_quasi_uniform(Domain::unit_ball(2), 0.3, 8);
  std::stringstream buf;
  write_points_csv(buf, s);
  const PointSet back = read_points_csv(buf);
  CHECK(back.points() == s.points());
  CHECK(back.domain() == s.domain());
  CHECK(back.generation_seed() == s.generation_seed());

  std::stringstream bad("# d=2 domain=unit_cube seed=none\n0.1,0.2\n0.3,abc\n");
  try {
    read_points_csv(bad);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}
