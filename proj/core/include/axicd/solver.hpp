#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "axicd/diagnostics.hpp"
#include "axicd/entrance_profile.hpp"
#include "axicd/free_boundary.hpp"
#include "axicd/state.hpp"
#include "axicd/transport.hpp"

namespace axicd {

struct SolverConfig {
  double L = 10.0;
  int nx = 64, nr = 64;
  double tol_inner = 1e-10, tol_middle = 1e-9, tol_outer = 1e-8;
  int max_iter_inner = 50, max_iter_middle = 50, max_iter_outer = 50;
  double relax_inner = 1.0, relax_middle = 1.0, relax_outer = 1.0;
  double max_wall_seconds = 600.0;
  // gate thresholds checked by solve_full
  double gate_flux_coeff = 10.0;  // relative flux imbalance <= coeff * h^2
  double gate_ode_coeff = 10.0;   // interface ODE residual <= coeff * h^2
  double gate_bernoulli = 1e-10;
  double gate_linear_residual = 1e-9;
};

/// Throws SolverError(config) for non-positive tolerances, relaxation
/// outside (0, 1], iteration caps below 1 or a bad grid.
void validate_solver_config(const SolverConfig& c);

struct LevelHistory {
  std::vector<double> changes;  // successive-change norms
  std::vector<double> ratios;   // changes[k] / changes[k-1]
  bool converged = false;
  int iterations() const { return static_cast<int>(changes.size()); }
};

struct SolveReport {
  bool converged = false;         // levels converged and every gate passed
  bool levels_converged = false;
  std::string error_class;        // empty when no error was raised
  std::string error_message;
  std::string error_cause;        // state error wrapped into a divergence
  int exit_code = 0;

  double L = 0;
  int nx = 0, nr = 0;
  double sigma_scale = 0, sigma = 0;

  LevelHistory outer;
  std::vector<LevelHistory> middle;  // one per outer iteration
  LevelHistory last_inner;
  int inner_solves = 0, inner_iterations = 0;  // started, including a failed one
  double inner_max_ratio = 0;

  // final residuals
  double elliptic_residual = 0;   // largest relative linear-solve residual
  double inner_change = 0, middle_change = 0, outer_change = 0;
  double transport_clamp = 0;     // largest clamped stream-function excess
  double ode_residual_max = 0, ode_residual_l2 = 0;
  double flux_balance = 0;        // solver-quadrature relative imbalance
  double anchor_drift = 0;
  double min_interface_radicand = 0;
  double f_deviation = 0;         // max |f - 1/2|
  double u_deviation = 0;         // max |u - u0 e_x|

  std::vector<std::pair<std::string, bool>> gates;
  double wall_seconds = 0;
};

/// Everything frozen while the inner (phi, psi) iteration runs.
struct InnerProblem {
  const GasModel* gm = nullptr;
  LinearizationCoefficients a;
  Geometry geo;
  Field2D S, Lambda, dr_S, dr_Lambda;
  std::vector<double> entrance;  // potential correction on the entrance column
  RobinData robin;
  std::optional<PhiSolver> phi_solver;
  std::optional<PsiSolver> psi_solver;
};

InnerProblem make_inner_problem(const GasModel& gm, const EntranceProfile& profile,
                                const Geometry& geo, const TransportedFields& W,
                                const std::vector<double>& entrance);

/// Deadline shared by the nested loops.
struct SolveClock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double budget_seconds = 600.0;
  double elapsed() const;
  void check() const;  // throws time_budget
};

struct InnerResult {
  Field2D phi, psi;
  LevelHistory history;
  double linear_residual = 0;
};

/// Alternating psi / phi solves at frozen (f, S, Lambda) until the
/// successive change drops below tol_inner.
InnerResult solve_inner_phipsi(const InnerProblem& prob, Field2D phi, Field2D psi,
                               const SolverConfig& cfg, const SolveClock& clock,
                               SolveReport* report = nullptr);

struct MiddleResult {
  Geometry geo;
  Field2D phi, psi;
  TransportedFields W;  // strip data sampled on geo
  DerivedFields derived;
  LevelHistory history;
  FreeBoundaryUpdate last_update;
  double linear_residual = 0;
};

/// Free-boundary loop at frozen strip data, starting from f_init.
MiddleResult solve_middle_f(const GasModel& gm, const EntranceProfile& profile,
                            const StripField& strip, const SolverConfig& cfg,
                            const FreeBoundaryCurve& f_init, Field2D phi, Field2D psi,
                            const std::vector<double>& entrance, const SolveClock& clock,
                            SolveReport* report = nullptr);

/// Outer transport loop. Writes histories into report as it goes, so a
/// partial report survives an exception.
SolutionState solve_outer_W(const GasModel& gm, const EntranceProfile& profile,
                            const SolverConfig& cfg, SolveReport& report,
                            const SolveClock& clock);

struct SolveResult {
  std::optional<SolutionState> state;
  std::optional<DiagnosticsReport> diagnostics;
  SolveReport report;
};

struct ProblemSpec {
  GasParameters gas;
  ProfileSpec profile;
  SolverConfig solver;
  DiagnosticsConfig diagnostics;
};

/// Runs the outer loop, the diagnostics and the gates. Never throws a
/// SolverError; failures land in report.error_*.
SolveResult solve_full(const GasModel& gm, const EntranceProfile& profile,
                       const SolverConfig& cfg, const DiagnosticsConfig& dcfg);
SolveResult solve_full(const ProblemSpec& spec);

/// Gate evaluation shared by solve_full and the diagnose command.
void evaluate_gates(SolveReport& report, const DiagnosticsReport& d, const SolverConfig& cfg);

}  // namespace axicd
