#include "axicd/errors.hpp"

namespace axicd {

const char* error_class_name(ErrorClass c) {
  switch (c) {
    case ErrorClass::config: return "config";
    case ErrorClass::cavitation: return "cavitation";
    case ErrorClass::supersonic: return "supersonic";
    case ErrorClass::axis_compatibility: return "axis_compatibility";
    case ErrorClass::ellipticity: return "ellipticity";
    case ErrorClass::geometry: return "geometry";
    case ErrorClass::interface_energy: return "interface_energy";
    case ErrorClass::free_boundary_collapse: return "free_boundary_collapse";
    case ErrorClass::transport_degeneracy: return "transport_degeneracy";
    case ErrorClass::flux_imbalance: return "flux_imbalance";
    case ErrorClass::extension_range: return "extension_range";
    case ErrorClass::linear_solver: return "linear_solver";
    case ErrorClass::inner_divergence: return "inner_divergence";
    case ErrorClass::middle_divergence: return "middle_divergence";
    case ErrorClass::outer_divergence: return "outer_divergence";
    case ErrorClass::internal_consistency: return "internal_consistency";
    case ErrorClass::time_budget: return "time_budget";
    case ErrorClass::io: return "io";
  }
  return "unknown";
}

int exit_code_for(ErrorClass c) {
  switch (c) {
    case ErrorClass::config:
    case ErrorClass::io: return 2;
    case ErrorClass::cavitation:
    case ErrorClass::supersonic:
    case ErrorClass::axis_compatibility:
    case ErrorClass::ellipticity: return 3;
    case ErrorClass::geometry:
    case ErrorClass::interface_energy:
    case ErrorClass::free_boundary_collapse: return 4;
    case ErrorClass::inner_divergence:
    case ErrorClass::middle_divergence:
    case ErrorClass::outer_divergence: return 5;
    case ErrorClass::transport_degeneracy:
    case ErrorClass::flux_imbalance:
    case ErrorClass::extension_range: return 6;
    case ErrorClass::linear_solver:
    case ErrorClass::internal_consistency: return 7;
    case ErrorClass::time_budget: return 8;
  }
  return 9;
}

void fail(ErrorClass c, const std::string& what) { throw SolverError(c, what); }

}  // namespace axicd
