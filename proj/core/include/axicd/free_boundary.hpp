#pragma once

#include <vector>

#include "axicd/elliptic.hpp"
#include "axicd/gas_state.hpp"
#include "axicd/geometry.hpp"

namespace axicd {

/// 2(B0 - gamma/(gamma-1) p0^(1-1/gamma) S^(1/gamma)) - (Lambda/f)^2: twice
/// the kinetic energy left for the meridional and axial motion at the
/// interface pressure.
double interface_radicand(const GasModel& gm, double S, double Lambda, double f);

struct RobinData {
  std::vector<double> B;
  double min_radicand = 0;
};

/// B = sqrt(radicand) - u0 / sqrt(1 + f'^2) per axial node. S and Lambda are
/// the values carried by the boundary streamline. Throws interface_energy
/// when the radicand is negative anywhere.
RobinData robin_data_B(const FreeBoundaryCurve& f, double S_interface, double Lambda_interface,
                       const GasModel& gm);

struct FreeBoundaryUpdate {
  FreeBoundaryCurve f;
  double anchor_drift = 0;   // |f(0) - 1/2| before re-anchoring
  double min_radicand = 0;   // smallest f^2 argument, must stay >= 1/16
  std::vector<double> column_flux;
  double entrance_flux = 0;
};

/// f^2 = f*^2 + 2/(rho0 u0) (entrance flux - column flux at f*), columnwise
/// trapezoid in eta. Throws transport_degeneracy below the mass-flux floor
/// and free_boundary_collapse when the argument drops under 1/16.
FreeBoundaryUpdate update_free_boundary(const FreeBoundaryCurve& f_star, const Field2D& rho_ux,
                                        const GasModel& gm, const Geometry& geo);

struct OdeResidual {
  std::vector<double> r;  // f' - u_r/u_x on the contact row
  double max = 0, l2 = 0;
};

OdeResidual free_boundary_ode_residual(const FreeBoundaryCurve& f, const VelocityField& u);

}  // namespace axicd
