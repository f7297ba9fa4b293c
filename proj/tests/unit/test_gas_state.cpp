#include <doctest.h>

#include <cmath>

#include "axicd/errors.hpp"
#include "axicd/gas_state.hpp"

using namespace axicd;

namespace {
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

TEST_CASE("background constants follow from the gas parameters") {
  GasParameters g;
  g.gamma = 1.4;
  g.p0 = 2.0;
  g.rho0_minus = 1.5;
  g.rho0_plus = 0.5;
  g.u0 = 0.4;
  const BackgroundState b = derive_background(g);
  CHECK(b.S0_minus == doctest::Approx(2.0 / std::pow(1.5, 1.4)).epsilon(1e-15));
  CHECK(b.S0_plus == doctest::Approx(2.0 / std::pow(0.5, 1.4)).epsilon(1e-15));
  CHECK(b.B0_minus == doctest::Approx(0.08 + 3.5 * 2.0 / 1.5).epsilon(1e-15));
  CHECK(b.B0_plus == doctest::Approx(3.5 * 2.0 / 0.5).epsilon(1e-15));
  CHECK(b.c0 == doctest::Approx(std::sqrt(1.4 * 2.0 / 1.5)).epsilon(1e-15));
}

TEST_CASE("density law returns the background density at the background state") {
  const GasModel gm;
  const double rho = density_H(gm.bg.S0_minus, {gm.gas.u0, 0, 0}, gm.bg.B0_minus, gm.gas.gamma);
  CHECK(std::abs(rho - gm.gas.rho0_minus) < 1e-14);
}

TEST_CASE("density law conserves the Bernoulli energy") {
  const GasModel gm;
  const double g = gm.gas.gamma;
  for (double S : {0.9, 1.0, 1.2})
    for (double ux : {0.1, 0.3, 0.5}) {
      const VelocityTriple q{ux, 0.05, -0.07};
      const double rho = density_H(S, q, gm.bg.B0_minus, g);
      const double p = S * std::pow(rho, g);
      CHECK(std::abs(bernoulli_of(q, rho, p, g) - gm.bg.B0_minus) < 1e-13);
    }
}

TEST_CASE("cavitation and supersonic states are rejected") {
  const GasModel gm;
  const double B0 = gm.bg.B0_minus;
  const double qmax = std::sqrt(2 * B0);
  CHECK(class_of([&] { density_H(1.0, {qmax * 1.01, 0, 0}, B0, 1.4); }) == ErrorClass::cavitation);
  CHECK(class_of([&] { density_H(-1.0, {0.1, 0, 0}, B0, 1.4); }) == ErrorClass::cavitation);
  // sonic speed at fixed B0 is sqrt(2 B0 (g-1)/(g+1)); just above it is supersonic
  const double q_sonic = std::sqrt(2 * B0 * 0.4 / 2.4);
  CHECK(class_of([&] { density_H(1.0, {q_sonic * 1.01, 0, 0}, B0, 1.4); }) == ErrorClass::supersonic);
  CHECK_NOTHROW(density_H(1.0, {q_sonic * 0.99, 0, 0}, B0, 1.4));
}

TEST_CASE("gas validation names the violated rule") {
  GasParameters g;
  g.gamma = 1.0;
  CHECK(class_of([&] { validate_gas(g); }) == ErrorClass::config);
  g = GasParameters{};
  g.u0 = 2.0 * std::sqrt(g.gamma * g.p0 / g.rho0_minus);
  try {
    validate_gas(g);
    FAIL("supersonic inflow accepted");
  } catch (const SolverError& e) {
    CHECK(e.error_class() == ErrorClass::supersonic);
    CHECK(std::string(e.what()).find("subsonic") != std::string::npos);
  }
}

TEST_CASE("velocity from potentials uses the axis limits at r = 0") {
  const VelocityTriple a = velocity_from_potentials(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 2.0);
  CHECK(a.ux == doctest::Approx(0.1 + 0.5 + 0.15));
  CHECK(a.ur == doctest::Approx(0.2 - 0.4));
  CHECK(a.uth == doctest::Approx(0.3));
  const VelocityTriple b = velocity_from_potentials(0.1, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.7);
  CHECK(b.ux == doctest::Approx(1.1));
  CHECK(b.uth == doctest::Approx(0.7));
  CHECK(class_of([] { velocity_from_potentials(0, 0, 0.1, 0, 0, 0, 0.0); }) ==
        ErrorClass::axis_compatibility);
}

TEST_CASE("background-relative density law matches the closed form") {
  GasParameters g;
  g.p0 = 1.7;
  g.rho0_minus = 1.3;
  const GasModel gm(g);
  for (double S : {0.8 * gm.bg.S0_minus, gm.bg.S0_minus, 1.1 * gm.bg.S0_minus}) {
    const VelocityTriple q{0.28, 0.02, 0.01};
    const double a = gm.density(S, q);
    CHECK(a == doctest::Approx(density_H(S, q, gm.bg.B0_minus, g.gamma)).epsilon(1e-14));
    CHECK(gm.pressure(S, a) == doctest::Approx(S * std::pow(a, g.gamma)).epsilon(1e-14));
  }
  const GasModel unit;
  const double rho = unit.density(unit.bg.S0_minus, {unit.gas.u0, 0, 0});
  CHECK(rho == unit.gas.rho0_minus);
  CHECK(unit.pressure(unit.bg.S0_minus, rho) == unit.gas.p0);
}
