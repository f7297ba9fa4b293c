#include <doctest.h>

#include <cmath>

#include "axicd/errors.hpp"
#include "axicd/transport.hpp"

using namespace axicd;

namespace {
Geometry flat(double L, int nx, int nr) {
  return metric_coefficients(FreeBoundaryCurve::flat(L, nx), build_reference_grid(L, nx, nr));
}

EntranceProfile background_profile(const GasModel& gm) {
  ProfileSpec s;
  s.family = "background";
  return make_profile(s, gm);
}
}  // namespace

TEST_CASE("stream function of a uniform flux is c r^2 / 2") {
  const Geometry geo = flat(1.0, 16, 16);
  const double c = 0.3;
  const Field2D q(geo.grid, AxisKind::even, c);
  for (Quadrature rule : {Quadrature::trapezoid, Quadrature::simpson}) {
    const Field2D w = compute_stream_h(q, geo, 0.1, rule);
    for (int i = 0; i <= 16; ++i)
      for (int j = 0; j <= 16; ++j) {
        const double r = geo.radius(i, j);
        CHECK(std::abs(w(i, j) - 0.5 * c * r * r) < 1e-15);
      }
    for (double total : column_flux(q, geo, rule)) CHECK(total == doctest::Approx(c * 0.125));
  }
}

TEST_CASE("stream function rejects a flux below the floor") {
  const Geometry geo = flat(1.0, 16, 16);
  Field2D q(geo.grid, AxisKind::even, 0.3);
  q(5, 7) = 0.1;
  try {
    compute_stream_h(q, geo, 0.15);
    FAIL("floor violation accepted");
  } catch (const SolverError& e) {
    CHECK(e.error_class() == ErrorClass::transport_degeneracy);
  }
}

TEST_CASE("entrance flux map inverts its samples") {
  std::vector<double> r, w;
  for (int j = 0; j <= 32; ++j) {
    r.push_back(0.5 * j / 32);
    w.push_back(0.3 * r.back() * r.back() * (1 + 0.1 * r.back()));
  }
  const EntranceFluxMap map(r, w);
  for (int j = 0; j <= 32; ++j) {
    CHECK(map(r[j]) == doctest::Approx(w[j]).epsilon(1e-13));
    CHECK(map.inverse(w[j]) == doctest::Approx(r[j]).epsilon(1e-10));
  }
  w[10] = w[9];
  CHECK_THROWS_AS(EntranceFluxMap(r, w), SolverError);
}

TEST_CASE("footpoints of the background flow are the radii themselves") {
  const GasModel gm;
  const Geometry geo = flat(2.0, 16, 16);
  const Field2D q(geo.grid, AxisKind::even, gm.gas.rho0_minus * gm.gas.u0);
  const Field2D w = compute_stream_h(q, geo, 0.5 * gm.gas.rho0_minus * gm.gas.u0);
  const Field2D R0 = compute_footpoint_R0(w, build_entrance_flux_map(w, geo), geo);
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 16; ++j) CHECK(std::abs(R0(i, j) - geo.radius(i, j)) < 1e-13);

  const TransportedFields W = transport_SLambda(background_profile(gm), R0);
  CHECK(W.S.max_abs() == doctest::Approx(gm.bg.S0_minus));
  CHECK(W.Lambda.max_abs() == 0.0);
}

TEST_CASE("excess flux beyond the entrance total is an error") {
  const GasModel gm;
  const Geometry geo = flat(2.0, 16, 16);
  Field2D q(geo.grid, AxisKind::even, 0.3);
  for (int j = 0; j <= 16; ++j) q(8, j) = 0.33;
  const Field2D w = compute_stream_h(q, geo, 0.1);
  CHECK_THROWS_AS(compute_footpoint_R0(w, build_entrance_flux_map(w, geo), geo), SolverError);
}

TEST_CASE("extension weights satisfy the three moment identities") {
  for (int m = 0; m <= 2; ++m) CHECK(std::abs(extension_moment(m) - 1.0) < 1e-12);
}

TEST_CASE("extension reproduces quadratics across the contact line") {
  const Geometry geo = flat(1.0, 16, 32);
  TransportedFields W{Field2D(geo.grid, AxisKind::even), Field2D(geo.grid, AxisKind::even)};
  auto quad = [](double y) { return 1.0 + 0.2 * (y - 1) - 0.3 * (y - 1) * (y - 1); };
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 32; ++j) {
      W.S(i, j) = quad(j / 32.0);
      W.Lambda(i, j) = 2 * quad(j / 32.0);
    }
  const StripField strip = extend_W(W, geo);
  for (int i = 0; i <= 16; ++i)
    for (int m = 0; m <= 64; ++m) {
      CHECK(std::abs(strip.S(i, m) - quad(m / 32.0)) < 1e-12);
      CHECK(std::abs(strip.Lambda(i, m) - 2 * quad(m / 32.0)) < 1e-12);
    }
  // S_at works in physical radius: y = r / f
  CHECK(strip.S_at(3, 0.6) == doctest::Approx(quad(1.2)).epsilon(1e-12));
}

TEST_CASE("bilinear interpolation is exact for bilinear functions") {
  const Geometry geo = flat(2.0, 16, 16);
  Field2D F(geo.grid, AxisKind::even);
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 16; ++j) F(i, j) = 1 + geo.x(i) * (2 - 3 * geo.radius(i, j));
  CHECK(interpolate_field(F, geo, 0.77, 0.31) == doctest::Approx(1 + 0.77 * (2 - 0.93)));
}

TEST_CASE("streamlines of a parallel flow stay at their starting radius") {
  const GasModel gm;
  const Geometry geo = flat(2.0, 16, 16);
  const VelocityField u{Field2D(geo.grid, AxisKind::even, gm.gas.u0), Field2D(geo.grid, AxisKind::odd),
                        Field2D(geo.grid, AxisKind::odd)};
  const Streamline s = trace_streamline_oracle(u, geo, 0.3, 50);
  CHECK(s.reached_exit);
  for (double r : s.r) CHECK(r == doctest::Approx(0.3));
}

TEST_CASE("initial strip carries entrance data along horizontal lines") {
  const GasModel gm;
  ProfileSpec spec;
  spec.sigma_scale = 1e-2;
  const EntranceProfile p = make_profile(spec, gm);
  const Geometry geo = flat(2.0, 16, 32);
  const StripField strip = initial_strip(p, geo);
  for (int i : {0, 8, 16})
    for (int j = 0; j <= 32; ++j) {
      const double r = geo.radius(i, j);
      CHECK(strip.S(i, j) == doctest::Approx(p.S_en(r)).epsilon(1e-14));
      CHECK(strip.Lambda(i, j) == doctest::Approx(p.Lambda_en(r)).epsilon(1e-14));
    }
  CHECK(strip_change(strip, strip, gm.bg.S0_minus, gm.gas.u0) == 0.0);
}
