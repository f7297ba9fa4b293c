#include <doctest.h>

#include <cmath>

#include "axicd/config_io.hpp"
#include "axicd/errors.hpp"
#include "axicd/solver.hpp"
#include "axicd/verification.hpp"

using namespace axicd;

TEST_CASE("solver configuration is validated") {
  SolverConfig c;
  CHECK_NOTHROW(validate_solver_config(c));
  c.relax_outer = 1.5;
  CHECK_THROWS_AS(validate_solver_config(c), SolverError);
  c = SolverConfig{};
  c.tol_inner = 0.0;
  CHECK_THROWS_AS(validate_solver_config(c), SolverError);
  c = SolverConfig{};
  c.nx = 8;
  CHECK_THROWS_AS(validate_solver_config(c), SolverError);
}

TEST_CASE("background problem is a fixed point reached immediately") {
  const SolveResult r = solve_full(reference_problem(0.0, 2.0, 32, 32));
  REQUIRE(r.state);
  CHECK(r.report.converged);
  CHECK(r.report.exit_code == 0);
  CHECK(r.report.outer.iterations() == 1);
  CHECK(r.report.f_deviation == 0.0);
  CHECK(r.report.u_deviation < 1e-13);
  for (const auto& [name, ok] : r.report.gates) CHECK_MESSAGE(ok, name);
}

TEST_CASE("small perturbation converges with contracting loops and passing gates") {
  const SolveResult r = solve_full(reference_problem(1e-3, 2.0, 32, 32));
  REQUIRE(r.state);
  REQUIRE(r.diagnostics);
  CHECK(r.report.converged);
  CHECK(r.report.error_class.empty());
  CHECK(r.report.inner_max_ratio < 0.5);
  for (double q : r.report.outer.ratios) CHECK(q < 1.0);
  for (const auto& [name, ok] : r.report.gates) CHECK_MESSAGE(ok, name);
  CHECK(r.report.f_deviation > 0.0);
  CHECK(r.report.f_deviation < 1e-2);
  CHECK(r.state->geo.f[0] == 0.5);
}

TEST_CASE("large data ends in a classified divergence with a partial report") {
  const SolveResult r = solve_full(reference_problem(0.5, 10.0, 32, 32));
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.exit_code == exit_code_for(ErrorClass::inner_divergence));
  const std::string& ec = r.report.error_class;
  CHECK((ec == "inner_divergence" || ec == "middle_divergence" || ec == "outer_divergence"));
  CHECK_FALSE(r.report.error_message.empty());
  CHECK(r.report.inner_solves > 0);
}

TEST_CASE("wall-clock budget is enforced") {
  ProblemSpec p = reference_problem(1e-3, 2.0, 64, 64);
  p.solver.max_wall_seconds = 1e-4;
  const SolveResult r = solve_full(p);
  CHECK(r.report.error_class == "time_budget");
  CHECK(r.report.exit_code == exit_code_for(ErrorClass::time_budget));
}

TEST_CASE("solves are deterministic") {
  const ProblemSpec p = reference_problem(2e-3, 2.0, 32, 32);
  const SolveResult a = solve_full(p), b = solve_full(p);
  CHECK(report_json(a.report) == report_json(b.report));
  REQUIRE(a.state);
  REQUIRE(b.state);
  CHECK(a.state->psi.v == b.state->psi.v);
}

TEST_CASE("response is linear in the perturbation scale") {
  const SolveResult a = solve_full(reference_problem(1e-3, 2.0, 32, 32));
  const SolveResult b = solve_full(reference_problem(2e-3, 2.0, 32, 32));
  REQUIRE(a.report.converged);
  REQUIRE(b.report.converged);
  CHECK(b.report.f_deviation / a.report.f_deviation == doctest::Approx(2.0).epsilon(0.05));
  CHECK(b.report.u_deviation / a.report.u_deviation == doctest::Approx(2.0).epsilon(0.05));
}
