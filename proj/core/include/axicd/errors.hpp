#pragma once

#include <stdexcept>
#include <string>

namespace axicd {

enum class ErrorClass {
  config,
  cavitation,
  supersonic,
  axis_compatibility,
  ellipticity,
  geometry,
  interface_energy,
  free_boundary_collapse,
  transport_degeneracy,
  flux_imbalance,
  extension_range,
  linear_solver,
  inner_divergence,
  middle_divergence,
  outer_divergence,
  internal_consistency,
  time_budget,
  io,
};

/// Stable machine-readable name, e.g. "inner_divergence".
const char* error_class_name(ErrorClass c);

/// Process exit code used by the command-line driver for this class.
int exit_code_for(ErrorClass c);

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorClass c, const std::string& what)
      : std::runtime_error(what), class_(c) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

[[noreturn]] void fail(ErrorClass c, const std::string& what);

}  // namespace axicd
