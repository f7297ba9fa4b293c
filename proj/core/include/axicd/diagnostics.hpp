#pragma once

#include <array>
#include <string>
#include <vector>

#include "axicd/entrance_profile.hpp"
#include "axicd/free_boundary.hpp"
#include "axicd/state.hpp"

namespace axicd {

struct DiagnosticsConfig {
  int windows = 10;             // axial windows for far-field statistics
  double decay_fraction = 0.25; // final / first window threshold
};

struct WindowStats {
  double x0 = 0, x1 = 0;
  double ur_max = 0, dx_ur_max = 0, dr_ur_max = 0;
  double ur_c1 = 0;               // ur_max + dx_ur_max + dr_ur_max
  double radial_balance = 0;      // max |dp/dr - rho u_theta^2 / r|
  double centrifugal_max = 0;     // max rho u_theta^2 / r
  double pressure_deviation = 0;  // max |p - p0|
  double omega_max = 0;
};

struct DiagnosticsReport {
  // residuals of continuity, radial momentum, entropy and angular-momentum
  // transport at interior nodes
  std::array<double, 4> euler_residual{};
  double bernoulli_deviation = 0;
  double stream_bernoulli_residual = 0;

  double interface_pressure_nodal = 0, interface_pressure_trace = 0;
  double interface_normal_nodal = 0, interface_normal_trace = 0;

  std::vector<double> flux_imbalance;  // relative, per column, Simpson in eta
  double flux_imbalance_max = 0;

  double subsonic_margin_min = 0;  // min (c^2 - |u|^2) / c0^2
  double degeneracy_floor_ratio = 0;  // min rho (c^2 - u_x^2 - u_r^2) / (rho0 (c0^2 - u0^2) / 4)
  double rho_min = 0;
  double rho_floor_ratio = 0;  // rho_min / (rho0 / 2)
  double max_abs_Lambda = 0;

  double omega_agreement = 0;  // max |(-r rho u_r) - d_x h|
  double omega_entrance_error = 0;
  double omega_axis_max = 0;

  OdeResidual ode;

  std::vector<WindowStats> windows;
  double decay_fraction = 0.25;
  bool ur_decay = false, balance_decay = false, pressure_decay = false, omega_decay = false;
};

/// omega = -r rho u_r from the fields.
Field2D compute_omega_direct(const SolutionState& s);
/// omega = d_x h with h built by quadrature of r rho u_x.
Field2D compute_omega_stream(const SolutionState& s);

DiagnosticsReport invariant_report(const GasModel& gm, const EntranceProfile& profile,
                                   const SolutionState& s);

/// Fills the windowed far-field section of d.
void farfield_report(const GasModel& gm, const SolutionState& s, const DiagnosticsConfig& cfg,
                     DiagnosticsReport& d);

DiagnosticsReport full_diagnostics(const GasModel& gm, const EntranceProfile& profile,
                                   const SolutionState& s, const DiagnosticsConfig& cfg);

/// Quadratic extrapolation of the contact-row value from rows nr-1..nr-3.
double interface_trace(const Field2D& F, int i);

}  // namespace axicd
