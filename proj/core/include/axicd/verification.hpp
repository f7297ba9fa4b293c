#pragma once

#include <functional>
#include <string>
#include <vector>

#include "axicd/solver.hpp"

namespace axicd {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Max-norm errors of a manufactured-solution study and the observed orders
/// between successive grids.
struct ConvergenceStudy {
  std::vector<int> sizes;
  std::vector<double> errors;
  std::vector<double> orders;
  double min_order() const;
};

/// Potential operator on a curved boundary with a closed-form solution that
/// vanishes on the exit and the contact row. Grids are n x n, L = 2.
ConvergenceStudy manufactured_phi_study(const std::vector<int>& sizes);

/// Stream operator with the Robin contact condition and a closed-form
/// solution that is odd in r and flat at both ends.
ConvergenceStudy manufactured_psi_study(const std::vector<int>& sizes);

/// Stream solve on a flat boundary with x-independent data against an RK4
/// shooting solution of the radial ODE. Without a source the closed form
/// B r / 2 is checked as well; cubic_source adds the source r, whose
/// discrete solution carries an O(h^2) error. Returns the max-norm gap.
double radial_ode_oracle_error(int nr, bool cubic_source = false);

/// Reference problem used by the suite: default gas, bump profile.
ProblemSpec reference_problem(double sigma_scale, double L, int nx, int nr);

/// Runs criteria 1-11. progress, if set, receives each result as it lands.
std::vector<CriterionResult> run_acceptance_suite(
    const std::function<void(const CriterionResult&)>& progress = {});

}  // namespace axicd
