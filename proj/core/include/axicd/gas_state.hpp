#pragma once

#include <cmath>

namespace axicd {

struct GasParameters {
  double gamma = 1.4;
  double p0 = 1.0;
  double rho0_minus = 1.0;
  double u0 = 0.3;
  double rho0_plus = 1.0;  // outer layer, never evolved
};

struct BackgroundState {
  double S0_minus = 0, S0_plus = 0;
  double B0_minus = 0, B0_plus = 0;
  double c0 = 0;  // inner sound speed
};

/// Throws SolverError(config) for non-positive inputs or gamma <= 1, and
/// SolverError(supersonic) when u0 >= c0.
void validate_gas(const GasParameters& gas);

BackgroundState derive_background(const GasParameters& gas);

struct VelocityTriple {
  double ux = 0, ur = 0, uth = 0;
  double norm2() const { return ux * ux + ur * ur + uth * uth; }
};

/// Gas parameters together with their derived background; what most
/// routines actually need.
struct GasModel {
  GasParameters gas;
  BackgroundState bg;
  explicit GasModel(const GasParameters& g);
  GasModel() : GasModel(GasParameters{}) {}

  /// Inner-layer density law written relative to the background, so the
  /// background state maps to rho0 and p0 without rounding. Same errors as
  /// density_H; the subsonic gate only when checked is set.
  double density(double S, const VelocityTriple& q, bool checked = true) const;
  double density(double S, double q2) const;  // unchecked
  double pressure(double S, double rho) const;
};

/// Density from entropy and velocity at fixed Bernoulli energy B0.
/// Throws cavitation when B0 - |q|^2/2 <= 0 or S <= 0, supersonic when the
/// resulting state has |q|^2 >= gamma*S*rho^(gamma-1).
double density_H(double S, const VelocityTriple& q, double B0, double gamma);

/// Same closed form without the subsonicity gate; cavitation still throws.
double density_H_unchecked(double S, double q2, double B0, double gamma);

/// Velocity from the potential gradient, the angular stream component and
/// the angular momentum density. At r == 0 the axis limits are used; psi and
/// Lambda must vanish there (axis_compatibility otherwise).
VelocityTriple velocity_from_potentials(double dphi_dx, double dphi_dr, double psi,
                                        double dpsi_dx, double dpsi_dr, double Lambda,
                                        double r, double dLambda_dr = 0.0);

double bernoulli_of(const VelocityTriple& u, double rho, double p, double gamma);

/// Squared sound speed gamma*p/rho written through S and rho.
inline double sound_speed2(double S, double rho, double gamma) {
  return gamma * S * std::pow(rho, gamma - 1.0);
}

}  // namespace axicd
