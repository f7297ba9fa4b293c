#include <doctest.h>

#include <cmath>

#include "axicd/errors.hpp"
#include "axicd/geometry.hpp"

using namespace axicd;

namespace {
Geometry flat_geometry(double L, int n, double f = 0.5) {
  return metric_coefficients(FreeBoundaryCurve::flat(L, n, f), build_reference_grid(L, n, n));
}

Geometry wavy_geometry(double L, int n) {
  std::vector<double> s(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) s[i] = 0.5 + 0.03 * (1 - std::cos(2 * M_PI * i / n));
  return metric_coefficients(FreeBoundaryCurve(L, s), build_reference_grid(L, n, n));
}
}  // namespace

TEST_CASE("grid construction validates its inputs") {
  CHECK_THROWS_AS(build_reference_grid(0.0, 32, 32), SolverError);
  CHECK_THROWS_AS(build_reference_grid(1.0, 8, 32), SolverError);
  const ReferenceGrid g = build_reference_grid(3.0, 30, 20);
  CHECK(g.nodes() == 31 * 21);
  CHECK(g.x(30) == doctest::Approx(3.0));
  CHECK(g.index(2, 5) == 2 * 21 + 5);
}

TEST_CASE("free boundary band and anchor are enforced") {
  const ReferenceGrid g = build_reference_grid(1.0, 16, 16);
  std::vector<double> s(17, 0.5);
  s[8] = 0.7;
  CHECK_THROWS_AS(metric_coefficients(FreeBoundaryCurve(1.0, s), g), SolverError);
  s.assign(17, 0.55);
  CHECK_THROWS_AS(metric_coefficients(FreeBoundaryCurve(1.0, s), g), SolverError);
}

TEST_CASE("flat boundary gives the trivial map") {
  const Geometry geo = flat_geometry(2.0, 16);
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 16; ++j) {
      CHECK(geo.radius(i, j) == doctest::Approx(0.5 * j / 16.0));
      CHECK(geo.alpha_at(i, j) == 0.0);
    }
}

TEST_CASE("gradient is exact for quadratics, including the ends and the axis") {
  const Geometry geo = flat_geometry(2.0, 16);
  Field2D F(geo.grid, AxisKind::even);
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 16; ++j) {
      const double x = geo.x(i), r = geo.radius(i, j);
      F(i, j) = x * x - 0.5 * x + 3 * r * r;
    }
  const Gradient G = gradient(F, geo, XEnd::one_sided);
  double err = 0.0;
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 16; ++j) {
      const double x = geo.x(i), r = geo.radius(i, j);
      err = std::max({err, std::abs(G.dx(i, j) - (2 * x - 0.5)), std::abs(G.dr(i, j) - 6 * r)});
    }
  CHECK(err < 1e-11);
}

TEST_CASE("gradient on a curved boundary converges at second order") {
  auto error = [](int n) {
    const Geometry geo = wavy_geometry(2.0, n);
    Field2D F(geo.grid, AxisKind::even);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) F(i, j) = std::sin(geo.x(i)) * std::cos(2 * geo.radius(i, j));
    const Gradient G = gradient(F, geo, XEnd::one_sided);
    double e = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const double x = geo.x(i), r = geo.radius(i, j);
        e = std::max(e, std::abs(G.dx(i, j) - std::cos(x) * std::cos(2 * r)));
        e = std::max(e, std::abs(G.dr(i, j) + 2 * std::sin(x) * std::sin(2 * r)));
      }
    return e;
  };
  const double e1 = error(32), e2 = error(64);
  CHECK(std::log2(e1 / e2) > 1.8);
}

TEST_CASE("meridional integral of r dr dx is exact on a flat boundary") {
  const Geometry geo = flat_geometry(1.0, 16);
  const Field2D one(geo.grid, AxisKind::even, 1.0);
  CHECK(meridional_integral(one, geo) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("boundary frames are orthonormal with the normal pointing outward") {
  const Geometry geo = wavy_geometry(2.0, 32);
  const BoundaryFrame b = boundary_frames(geo.f);
  for (int i = 0; i <= 32; ++i) {
    CHECK(b.tau_x[i] * b.n_x[i] + b.tau_r[i] * b.n_r[i] == doctest::Approx(0.0));
    CHECK(b.n_x[i] * b.n_x[i] + b.n_r[i] * b.n_r[i] == doctest::Approx(1.0));
    CHECK(b.n_r[i] > 0.0);
  }
}
