#pragma once

#include <string>
#include <vector>

#include "axicd/solver.hpp"

namespace axicd {

struct RunConfig {
  GasParameters gas;
  ProfileSpec profile;
  SolverConfig solver;
  DiagnosticsConfig diagnostics;
  std::vector<double> sweep_scales{1e-3, 2e-3, 4e-3};
  std::string output_dir = "axicd_out";

  ProblemSpec problem() const { return {gas, profile, solver, diagnostics}; }
};

/// INI text with sections gas, profile, grid, solver, diagnostics, sweep,
/// output. Unknown sections or keys throw SolverError(config) naming the
/// key path. The result is not validated.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Checks every downstream invariant (gas, profile, grid, solver,
/// diagnostics, sweep) before any solve starts.
void validate_run_config(const RunConfig& c);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);
/// Strict full-string parse; throws SolverError(io) with context.
double parse_double(const std::string& text, const std::string& context);

void write_fields_csv(const std::string& path, const SolutionState& s);
void write_free_boundary_csv(const std::string& path, const SolutionState& s);
std::string report_json(const SolveReport& r);
std::string diagnostics_json(const DiagnosticsReport& d);

/// Rebuilds a solution from fields.csv and free_boundary.csv written by
/// write_fields_csv / write_free_boundary_csv on the grid of cfg.
SolutionState read_solution(const std::string& dir, const SolverConfig& cfg);

/// Solves and writes fields.csv, free_boundary.csv, report.json,
/// diagnostics.json (when available) and timing.json into dir. Returns the
/// process exit code.
int run_and_write(const RunConfig& c, const std::string& dir);

/// One subdirectory per sigma scale, solved concurrently, plus
/// sweep_summary.csv. Returns 0 only if every run converged.
int run_sweep(const RunConfig& c, const std::string& dir);

/// Recomputes diagnostics.json from the fields stored in run_dir and
/// writes it into out_dir.
int run_diagnose(const RunConfig& c, const std::string& run_dir, const std::string& out_dir);

}  // namespace axicd
