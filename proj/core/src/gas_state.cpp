#include "axicd/gas_state.hpp"

#include <cmath>
#include <sstream>

#include "axicd/errors.hpp"

namespace axicd {

void validate_gas(const GasParameters& g) {
  if (!(g.gamma > 1.0)) fail(ErrorClass::config, "gamma must exceed 1");
  if (!(g.p0 > 0.0)) fail(ErrorClass::config, "p0 must be positive");
  if (!(g.rho0_minus > 0.0)) fail(ErrorClass::config, "rho0_minus must be positive");
  if (!(g.rho0_plus > 0.0)) fail(ErrorClass::config, "rho0_plus must be positive");
  if (!(g.u0 > 0.0)) fail(ErrorClass::config, "u0 must be positive");
  const double c0 = std::sqrt(g.gamma * g.p0 / g.rho0_minus);
  if (!(g.u0 < c0)) {
    std::ostringstream os;
    os << "u0 not subsonic: u0=" << g.u0 << " >= c0=" << c0;
    fail(ErrorClass::supersonic, os.str());
  }
}

BackgroundState derive_background(const GasParameters& g) {
  validate_gas(g);
  BackgroundState b;
  const double k = g.gamma / (g.gamma - 1.0);
  b.S0_minus = g.p0 / std::pow(g.rho0_minus, g.gamma);
  b.S0_plus = g.p0 / std::pow(g.rho0_plus, g.gamma);
  b.B0_minus = 0.5 * g.u0 * g.u0 + k * g.p0 / g.rho0_minus;
  b.B0_plus = k * g.p0 / g.rho0_plus;
  b.c0 = std::sqrt(g.gamma * g.p0 / g.rho0_minus);
  return b;
}

GasModel::GasModel(const GasParameters& g) : gas(g), bg(derive_background(g)) {}

double GasModel::density(double S, double q2) const {
  const double e = bg.B0_minus - 0.5 * q2;
  if (!(e > 0.0) || !(S > 0.0)) {
    std::ostringstream os;
    os << "cavitation: B0 - |q|^2/2 = " << e << ", S = " << S;
    fail(ErrorClass::cavitation, os.str());
  }
  const double e0 = bg.B0_minus - 0.5 * gas.u0 * gas.u0;
  return gas.rho0_minus * std::pow((bg.S0_minus / S) * (e / e0), 1.0 / (gas.gamma - 1.0));
}

double GasModel::density(double S, const VelocityTriple& q, bool checked) const {
  const double q2 = q.norm2();
  const double rho = density(S, q2);
  if (checked && !(q2 < sound_speed2(S, rho, gas.gamma))) {
    std::ostringstream os;
    os << "supersonic state: |q|^2 = " << q2 << ", c^2 = " << sound_speed2(S, rho, gas.gamma);
    fail(ErrorClass::supersonic, os.str());
  }
  return rho;
}

double GasModel::pressure(double S, double rho) const {
  return gas.p0 * (S / bg.S0_minus) * std::pow(rho / gas.rho0_minus, gas.gamma);
}

double density_H_unchecked(double S, double q2, double B0, double gamma) {
  const double e = B0 - 0.5 * q2;
  if (!(e > 0.0) || !(S > 0.0)) {
    std::ostringstream os;
    os << "cavitation: B0 - |q|^2/2 = " << e << ", S = " << S;
    fail(ErrorClass::cavitation, os.str());
  }
  return std::pow((gamma - 1.0) / (gamma * S) * e, 1.0 / (gamma - 1.0));
}

double density_H(double S, const VelocityTriple& q, double B0, double gamma) {
  const double q2 = q.norm2();
  const double rho = density_H_unchecked(S, q2, B0, gamma);
  if (!(q2 < sound_speed2(S, rho, gamma))) {
    std::ostringstream os;
    os << "supersonic state: |q|^2 = " << q2 << ", c^2 = " << sound_speed2(S, rho, gamma);
    fail(ErrorClass::supersonic, os.str());
  }
  return rho;
}

VelocityTriple velocity_from_potentials(double dphi_dx, double dphi_dr, double psi,
                                        double dpsi_dx, double dpsi_dr, double Lambda,
                                        double r, double dLambda_dr) {
  VelocityTriple u;
  if (r > 0.0) {
    u.ux = dphi_dx + dpsi_dr + psi / r;
    u.ur = dphi_dr - dpsi_dx;
    u.uth = Lambda / r;
    return u;
  }
  if (psi != 0.0 || Lambda != 0.0)
    fail(ErrorClass::axis_compatibility, "psi and Lambda must vanish on the axis");
  u.ux = dphi_dx + 2.0 * dpsi_dr;
  u.ur = dphi_dr - dpsi_dx;
  u.uth = dLambda_dr;
  return u;
}

double bernoulli_of(const VelocityTriple& u, double rho, double p, double gamma) {
  return 0.5 * u.norm2() + gamma * p / ((gamma - 1.0) * rho);
}

}  // namespace axicd
