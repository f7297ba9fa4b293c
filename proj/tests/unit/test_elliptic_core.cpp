#include <doctest.h>

#include <cmath>

#include "axicd/elliptic.hpp"
#include "axicd/verification.hpp"

using namespace axicd;

TEST_CASE("quadrature form of the remainder flux matches its closed form") {
  const GasModel gm;
  const LinearizationCoefficients a = assemble_linearization_aii(gm);
  const double S0 = gm.bg.S0_minus;
  for (double dS : {0.0, 1e-3, -2e-3})
    for (double d : {0.0, 1e-3, 5e-3}) {
      const std::array<double, 3> ds{d, -0.5 * d, 0.0};
      const std::array<double, 3> v{0.2 * d, 0.3 * d, 1e-3};
      const auto q = remainder_flux(gm, a, S0 * (1 + dS), ds, v);
      const auto c = remainder_flux_closed(gm, a, S0 * (1 + dS), ds, v);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(q[k] - c[k]) < 1e-12);
    }
}

TEST_CASE("remainder flux is quadratic in the perturbation") {
  const GasModel gm;
  const LinearizationCoefficients a = assemble_linearization_aii(gm);
  auto size = [&](double t) {
    const auto F = remainder_flux_closed(gm, a, gm.bg.S0_minus, {t, t, 0.0}, {0.0, 0.0, 0.0});
    return std::hypot(F[0], F[1]);
  };
  CHECK(size(0.0) < 1e-15);
  const double ratio = size(2e-3) / size(1e-3);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("linearization coefficients are elliptic for subsonic inflow") {
  const GasModel gm;
  const LinearizationCoefficients a = assemble_linearization_aii(gm);
  CHECK(a.a11 > 0.0);
  CHECK(a.a22 > 0.0);
  CHECK(a.a11 < a.a22);  // axial direction softened by the Mach number
}

TEST_CASE("zero potentials reconstruct the uniform stream") {
  const GasModel gm;
  const Geometry geo = metric_coefficients(FreeBoundaryCurve::flat(1.0, 16),
                                           build_reference_grid(1.0, 16, 16));
  const Field2D z(geo.grid, AxisKind::even), zo(geo.grid, AxisKind::odd);
  const VelocityField u = reconstruct_velocity(gm, geo, z, zo, z);
  for (std::size_t k = 0; k < u.ux.v.size(); ++k) {
    CHECK(u.ux.v[k] == gm.gas.u0);
    CHECK(u.ur.v[k] == 0.0);
    CHECK(u.uth.v[k] == 0.0);
  }
}

TEST_CASE("potential operator converges at second order on a curved boundary") {
  const ConvergenceStudy s = manufactured_phi_study({16, 32, 64});
  CHECK(s.errors.back() < 1e-3);
  CHECK(s.min_order() >= 1.9);
}

TEST_CASE("stream operator converges at second order with the Robin condition") {
  const ConvergenceStudy s = manufactured_psi_study({16, 32, 64});
  CHECK(s.errors.back() < 1e-3);
  CHECK(s.min_order() >= 1.9);
}

TEST_CASE("stream operator agrees with the radial ODE") {
  CHECK(radial_ode_oracle_error(32) <= 1e-6);
  const double e1 = radial_ode_oracle_error(32, true), e2 = radial_ode_oracle_error(64, true);
  CHECK(e2 < 1e-5);
  CHECK(std::log2(e1 / e2) > 1.9);
}

TEST_CASE("vorticity source vanishes without entropy or swirl gradients") {
  const GasModel gm;
  const Geometry geo = metric_coefficients(FreeBoundaryCurve::flat(1.0, 16),
                                           build_reference_grid(1.0, 16, 16));
  const Field2D S(geo.grid, AxisKind::even, gm.bg.S0_minus);
  const Field2D z(geo.grid, AxisKind::even);
  const Field2D zo(geo.grid, AxisKind::odd);
  const VelocityField q = reconstruct_velocity(gm, geo, z, zo, z);
  const Field2D G = assemble_source_G(gm, geo, S, z, zo, zo, q);
  CHECK(G.max_abs() == 0.0);
}
