#pragma once

#include <array>
#include <memory>
#include <vector>

#include "axicd/gas_state.hpp"
#include "axicd/geometry.hpp"

namespace axicd {

struct LinearizationCoefficients {
  double a11 = 1, a22 = 1, a33 = 1;
};

/// Diagonal coefficients of the flux linearized at the background state.
/// Throws SolverError(ellipticity) when a11 degenerates (u0 near c0).
LinearizationCoefficients assemble_linearization_aii(const GasModel& gm);

/// Remainder flux at one point: entropy S, potential-correction gradient
/// ds = (d/dx, d/dr, 0) and transversal velocity v = (t_x, t_r, t_theta).
/// The parameter-line integrals use 4-point Gauss-Legendre.
std::array<double, 3> remainder_flux(const GasModel& gm, const LinearizationCoefficients& a,
                                     double S, const std::array<double, 3>& ds,
                                     const std::array<double, 3>& v);

/// Closed form of the same quantity: a*ds - (rho*q - rho0*u0*e_x).
std::array<double, 3> remainder_flux_closed(const GasModel& gm, const LinearizationCoefficients& a,
                                            double S, const std::array<double, 3>& ds,
                                            const std::array<double, 3>& v);

struct FluxField {
  Field2D Fx, Fr;
};

struct VelocityField {
  Field2D ux, ur, uth;
};

/// Velocity u0 e_x + grad(phi_corr) + curl(psi e_theta) + (Lambda/r) e_theta.
VelocityField reconstruct_velocity(const GasModel& gm, const Geometry& geo, const Field2D& phi_corr,
                                   const Field2D& psi, const Field2D& Lambda);

/// Remainder flux at every node from the current fields.
FluxField assemble_flux_F(const GasModel& gm, const LinearizationCoefficients& a,
                          const Geometry& geo, const Field2D& S, const Field2D& phi_corr,
                          const Field2D& psi, const Field2D& Lambda);

/// Axisymmetric divergence dFx/dx + (1/r) d(r Fr)/dr at the nodes where the
/// potential equation is solved; zero on Dirichlet nodes.
Field2D flux_divergence(const FluxField& F, const Geometry& geo);

/// Vorticity source for the angular stream equation, zero on the axis.
/// Throws SolverError(transport_degeneracy) if u_x < u0/2 somewhere.
Field2D assemble_source_G(const GasModel& gm, const Geometry& geo, const Field2D& S,
                          const Field2D& Lambda, const Field2D& dr_S, const Field2D& dr_Lambda,
                          const VelocityField& q);

/// Factorized operator a11 d_xx + a22 (d_rr + d_r / r) on one geometry with
/// Dirichlet data: entrance values, zero on the exit and the contact row.
class PhiSolver {
 public:
  PhiSolver(const LinearizationCoefficients& a, const Geometry& geo);
  /// rhs: divergence of the flux at interior nodes; entrance: nr+1 values.
  Field2D solve(const Field2D& rhs, const std::vector<double>& entrance) const;
  double last_relative_residual() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Factorized operator -(d_xx + d_rr + d_r/r - 1/r^2) with psi = 0 on the
/// axis, zero axial slope at both ends and the Robin condition
/// grad(psi).n + (n_r/r) psi = B on the contact row.
class PsiSolver {
 public:
  explicit PsiSolver(const Geometry& geo);
  /// robin: nx+1 values of B along the contact row.
  Field2D solve(const Field2D& source, const std::vector<double>& robin) const;
  double last_relative_residual() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

Field2D solve_phi(const FluxField& F, const std::vector<double>& entrance,
                  const LinearizationCoefficients& a, const Geometry& geo);
Field2D solve_psi(const Field2D& source, const std::vector<double>& robin, const Geometry& geo);

}  // namespace axicd
