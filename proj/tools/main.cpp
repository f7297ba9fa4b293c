#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <regex>

#include "axicd/config_io.hpp"
#include "axicd/errors.hpp"
#include "axicd/verification.hpp"

namespace {

struct Overrides {
  std::string config, out, grid;
  std::optional<double> sigma_scale;
  std::optional<int> seed, windows;
};

void add_run_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory (overrides [output] dir)");
  cmd->add_option("--grid", o.grid, "grid as NXxNR, e.g. 64x64");
  cmd->add_option("--sigma-scale", o.sigma_scale, "multiplier of the profile perturbation");
  cmd->add_option("--seed", o.seed, "seed for the random profile family");
  cmd->add_option("--windows", o.windows, "number of far-field windows");
}

axicd::RunConfig load(const Overrides& o) {
  axicd::RunConfig c = o.config.empty() ? axicd::RunConfig{} : axicd::parse_config_file(o.config);
  if (!o.out.empty()) c.output_dir = o.out;
  if (!o.grid.empty()) {
    std::smatch m;
    if (!std::regex_match(o.grid, m, std::regex(R"((\d+)[xX](\d+))")))
      axicd::fail(axicd::ErrorClass::config, "--grid expects NXxNR, got '" + o.grid + "'");
    c.solver.nx = std::stoi(m[1]);
    c.solver.nr = std::stoi(m[2]);
  }
  if (o.sigma_scale) c.profile.sigma_scale = *o.sigma_scale;
  if (o.seed) {
    if (*o.seed < 0) axicd::fail(axicd::ErrorClass::config, "--seed must be non-negative");
    c.profile.seed = static_cast<std::uint64_t>(*o.seed);
  }
  if (o.windows) c.diagnostics.windows = *o.windows;
  axicd::validate_run_config(c);
  return c;
}

int report_error(const axicd::SolverError& e) {
  std::cerr << "error[" << axicd::error_class_name(e.error_class()) << "]: " << e.what() << '\n';
  return axicd::exit_code_for(e.error_class());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady axisymmetric subsonic jet with a contact discontinuity"};
  app.require_subcommand(1);

  Overrides solve_o, sweep_o, diag_o;
  std::string run_dir;
  auto* solve = app.add_subcommand("solve", "solve one configuration and write its outputs");
  add_run_flags(solve, solve_o);
  auto* sweep = app.add_subcommand("sweep", "solve once per [sweep] scale, concurrently");
  add_run_flags(sweep, sweep_o);
  auto* diagnose = app.add_subcommand("diagnose", "recompute diagnostics from written fields");
  add_run_flags(diagnose, diag_o);
  diagnose->add_option("--run", run_dir, "directory written by solve")->required()->check(CLI::ExistingDirectory);
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const axicd::RunConfig c = load(solve_o);
      const int code = axicd::run_and_write(c, c.output_dir);
      std::cout << "wrote " << c.output_dir << " (exit code " << code << ")\n";
      return code;
    }
    if (*sweep) {
      const axicd::RunConfig c = load(sweep_o);
      const int code = axicd::run_sweep(c, c.output_dir);
      std::cout << "wrote " << c.output_dir << "/sweep_summary.csv (exit code " << code << ")\n";
      return code;
    }
    if (*diagnose) {
      if (diag_o.out.empty()) diag_o.out = run_dir;
      const axicd::RunConfig c = load(diag_o);
      const int code = axicd::run_diagnose(c, run_dir, c.output_dir);
      std::cout << "wrote " << c.output_dir << "/diagnostics.json\n";
      return code;
    }
    if (*verify) {
      bool all = true;
      axicd::run_acceptance_suite([&](const axicd::CriterionResult& r) {
        all = all && r.passed;
        std::printf("criterion %2d %s: %s | %s\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        std::fflush(stdout);
      });
      return all ? 0 : 1;
    }
  } catch (const axicd::SolverError& e) {
    return report_error(e);
  }
  return 0;
}
