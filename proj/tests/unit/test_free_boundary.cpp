#include <doctest.h>

#include <cmath>

#include "axicd/errors.hpp"
#include "axicd/free_boundary.hpp"

using namespace axicd;

namespace {
Geometry flat(double L, int n) {
  return metric_coefficients(FreeBoundaryCurve::flat(L, n), build_reference_grid(L, n, n));
}

ErrorClass class_of(auto&& fn) {
  try {
    fn();
  } catch (const SolverError& e) {
    return e.error_class();
  }
  FAIL("expected a SolverError");
  return ErrorClass::internal_consistency;
}
}  // namespace

TEST_CASE("background interface leaves exactly the inflow kinetic energy") {
  const GasModel gm;
  CHECK(interface_radicand(gm, gm.bg.S0_minus, 0.0, 0.5) ==
        doctest::Approx(gm.gas.u0 * gm.gas.u0).epsilon(1e-13));
  const RobinData rd = robin_data_B(FreeBoundaryCurve::flat(1.0, 16), gm.bg.S0_minus, 0.0, gm);
  for (double b : rd.B) CHECK(std::abs(b) < 1e-14);
}

TEST_CASE("swirl at the interface reduces the radicand by (Lambda/f)^2") {
  const GasModel gm;
  const double base = interface_radicand(gm, gm.bg.S0_minus, 0.0, 0.5);
  CHECK(interface_radicand(gm, gm.bg.S0_minus, 0.01, 0.5) == doctest::Approx(base - 4e-4));
}

TEST_CASE("interface without kinetic energy is rejected") {
  const GasModel gm;
  CHECK(class_of([&] { robin_data_B(FreeBoundaryCurve::flat(1.0, 16), 10.0, 0.0, gm); }) ==
        ErrorClass::interface_energy);
}

TEST_CASE("mass-flux update reproduces the closed-form radius") {
  // rho u_x = rho0 u0 (1 + e x / L) gives f = sqrt(1 - e x / L) / 2
  const GasModel gm;
  const double q0 = gm.gas.rho0_minus * gm.gas.u0, e = 0.2, L = 2.0;
  const Geometry geo = flat(L, 32);
  Field2D q(geo.grid, AxisKind::even);
  for (int i = 0; i <= 32; ++i)
    for (int j = 0; j <= 32; ++j) q(i, j) = q0 * (1 + e * geo.x(i) / L);
  const FreeBoundaryUpdate up = update_free_boundary(geo.f, q, gm, geo);
  for (int i = 0; i <= 32; ++i)
    CHECK(up.f[i] == doctest::Approx(0.5 * std::sqrt(1 - e * geo.x(i) / L)).epsilon(1e-13));
  CHECK(up.anchor_drift < 1e-15);
  CHECK(up.entrance_flux == doctest::Approx(q0 * 0.125));
}

TEST_CASE("mass-flux update fails loudly on collapse or a starved column") {
  const GasModel gm;
  const double q0 = gm.gas.rho0_minus * gm.gas.u0;
  const Geometry geo = flat(1.0, 16);
  Field2D q(geo.grid, AxisKind::even);
  for (int i = 0; i <= 16; ++i)
    for (int j = 0; j <= 16; ++j) q(i, j) = q0 * (1 + 0.8 * geo.x(i));
  CHECK(class_of([&] { update_free_boundary(geo.f, q, gm, geo); }) ==
        ErrorClass::free_boundary_collapse);
  Field2D low(geo.grid, AxisKind::even, 0.4 * q0);
  CHECK(class_of([&] { update_free_boundary(geo.f, low, gm, geo); }) ==
        ErrorClass::transport_degeneracy);
}

TEST_CASE("streamline ODE residual vanishes for a flat boundary in parallel flow") {
  const GasModel gm;
  const Geometry geo = flat(1.0, 16);
  const VelocityField u{Field2D(geo.grid, AxisKind::even, gm.gas.u0), Field2D(geo.grid, AxisKind::odd),
                        Field2D(geo.grid, AxisKind::odd)};
  const OdeResidual res = free_boundary_ode_residual(geo.f, u);
  CHECK(res.max == 0.0);
  CHECK(res.r.size() == 17u);
}

TEST_CASE("streamline ODE residual is second order for a tangent flow") {
  auto residual = [](int n) {
    std::vector<double> s(static_cast<std::size_t>(n) + 1);
    const double L = 2.0;
    auto f = [&](double x) { return 0.5 + 0.02 * (1 - std::cos(M_PI * x / L)); };
    auto fp = [&](double x) { return 0.02 * M_PI / L * std::sin(M_PI * x / L); };
    for (int i = 0; i <= n; ++i) s[i] = f(L * i / n);
    const Geometry geo = metric_coefficients(FreeBoundaryCurve(L, s), build_reference_grid(L, n, 16));
    VelocityField u{Field2D(geo.grid, AxisKind::even, 0.3), Field2D(geo.grid, AxisKind::odd),
                    Field2D(geo.grid, AxisKind::odd)};
    for (int i = 0; i <= n; ++i) u.ur(i, 16) = 0.3 * fp(geo.x(i));
    return free_boundary_ode_residual(geo.f, u).max;
  };
  const double r1 = residual(32), r2 = residual(64);
  CHECK(r2 < 1e-4);
  CHECK(std::log2(r1 / r2) > 1.8);
}
