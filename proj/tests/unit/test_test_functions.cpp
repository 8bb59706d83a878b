#include "surfspline/errors.hpp"
#include "surfspline/rng.hpp"
#include "surfspline/test_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace surfspline;

namespace {

// Central differences at step 1e-5 for |alpha| <= 2; third derivatives use
// the extrapolated stencil since 1e-5 loses everything to rounding there;
// that stencil is 1e-2 wide, so rough functions keep it further away.
void check_against_differences(const TestFunction& f, int max_order, std::uint64_t seed,
                               double lo = 0.0, double hi = 1.0) {
  CounterRng rng(seed);
  int checked = 0;
  while (checked < 20) {
    Vector x(f.dim);
    for (int i = 0; i < f.dim; ++i) x(i) = rng.uniform(lo, hi);
    if (f.smoothness == Smoothness::rough && (x - f.singular_point).norm() < 1e-2) continue;
    ++checked;
    const bool near = f.smoothness == Smoothness::rough && (x - f.singular_point).norm() < 0.1;
    for (int order = 1; order <= (near ? 2 : max_order); ++order) {
      for (const MultiIndex& alpha : multi_indices(f.dim, order)) {
        const double exact = f.partial(alpha, x);
        const double fd = order <= 2 ? central_difference(f.value, alpha, x, 1e-5)
                                     : finite_difference(f.value, alpha, x);
        CAPTURE(f.name);
        CAPTURE(to_string(alpha));
        CHECK(std::abs(exact - fd) <= 1e-4 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

}  // namespace

TEST_CASE("analytic derivatives match finite differences") {
  for (int d = 1; d <= 3; ++d) {
    check_against_differences(sine_product(d), 3, 1);
    check_against_differences(gaussian_bump(d), 3, 2);
    check_against_differences(abs_power(d, 1.5), 3, 3);
    check_against_differences(abs_power(d, 0.6), 2, 4);
  }
  check_against_differences(franke(), 3, 5);
  const PolySpace s(2, 3);
  Vector c(s.size());
  for (int i = 0; i < s.size(); ++i) c(i) = 0.1 * (i + 1) * (i % 2 ? -1 : 1);
  check_against_differences(polynomial_function(Polynomial(s, c)), 3, 6);
}

TEST_CASE("finite differences of known functions") {
  const ScalarField cube = [](const Vector& x) { return x(0) * x(0) * x(0) * x(1); };
  const Vector x{{0.4, -1.2}};
  CHECK(finite_difference(cube, MultiIndex({1, 0}), x) == doctest::Approx(3 * 0.16 * -1.2).epsilon(1e-9));
  CHECK(finite_difference(cube, MultiIndex({2, 1}), x) == doctest::Approx(6 * 0.4).epsilon(1e-9));
  CHECK(finite_difference(cube, MultiIndex({3, 1}), x) == doctest::Approx(6.0).epsilon(1e-6));
}

TEST_CASE("catalog values") {
  CHECK(sine_product(1)(Vector{{0.25}}) == doctest::Approx(1.0));
  CHECK(sine_product(2)(Vector{{0.25, 0.5}}) == doctest::Approx(-1.0));
  const TestFunction a = abs_power(2, 1.5);
  CHECK(a(a.singular_point) == 0.0);
  CHECK(a.smoothness == Smoothness::rough);
  CHECK(a.rough_exponent == 1.5);
  CHECK(a(Vector(a.singular_point + Vector{{0.3, 0.4}})) == doctest::Approx(std::pow(0.5, 1.5)));
  CHECK(default_singular_point(3).size() == 3);
  CHECK(gaussian_bump(2).smoothness == Smoothness::smooth);
  // Franke's function at the centre, from its closed form.
  const double x = 0.5, y = 0.5;
  const double ref = 0.75 * std::exp(-(std::pow(9 * x - 2, 2) + std::pow(9 * y - 2, 2)) / 4) +
                     0.75 * std::exp(-std::pow(9 * x + 1, 2) / 49 - (9 * y + 1) / 10) +
                     0.5 * std::exp(-(std::pow(9 * x - 7, 2) + std::pow(9 * y - 3, 2)) / 4) -
                     0.2 * std::exp(-std::pow(9 * x - 4, 2) - std::pow(9 * y - 7, 2));
  CHECK(franke()(Vector{{x, y}}) == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("compactly supported profiles") {
  const TestFunction h = hat();
  CHECK(h(Vector{{0.5}}) == 1.0);
  CHECK(h(Vector{{0.625}}) == 0.5);
  CHECK(h(Vector{{0.8}}) == 0.0);
  CHECK(h.partial(MultiIndex({1}), Vector{{0.4}}) == 4.0);
  REQUIRE(h.support);
  CHECK(h.support->lower(0) == 0.25);
  const TestFunction p = plateau();
  CHECK(p(Vector{{0.5}}) == 1.0);
  CHECK(p(Vector{{0.05}}) == 0.0);
  CHECK(p(Vector{{0.95}}) == 0.0);
  CHECK(p(Vector{{0.2}}) == doctest::Approx(0.5));
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  CHECK(smooth_step(-1) == 0.0);
  CHECK(smooth_step(2) == 1.0);
}

TEST_CASE("compositions") {
  const TestFunction g = gaussian_bump(2);
  const Vector a{{0.2, 0.1}}, t{{0.5, 0.5}};
  const TestFunction c = compose_affine(g, 2.0, a, t);
  const Vector x{{0.6, 0.3}};
  CHECK(c(x) == g(Vector(a + 2.0 * (x - t))));
  Eigen::MatrixXd r(2, 2);
  r << 0, -1, 1, 0;
  CHECK(compose_linear(g, r)(x) == g(Vector(r * x)));
}

TEST_CASE("lookup by name") {
  CHECK(make_test_function("sine", 2).dim == 2);
  CHECK(make_test_function("abs_power:0.6", 1).rough_exponent == 0.6);
  const TestFunction q = make_test_function("poly:0.5/-1.25/2", 2);
  CHECK(q(Vector{{1.0, 1.0}}) == doctest::Approx(1.25));
  CHECK_THROWS(make_test_function("poly:1/2", 2));
  CHECK_THROWS(make_test_function("franke", 3));
  CHECK_THROWS(make_test_function("hat", 2));
  CHECK_THROWS_AS(make_test_function("nope", 1), Error);
}
