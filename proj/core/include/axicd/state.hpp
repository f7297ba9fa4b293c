#pragma once

#include "axicd/elliptic.hpp"
#include "axicd/gas_state.hpp"
#include "axicd/geometry.hpp"

namespace axicd {

/// Converged (or last) iterate of the full problem on one geometry.
struct SolutionState {
  Geometry geo;
  Field2D phi;  // potential minus u0 x
  Field2D psi;
  Field2D S, Lambda;
  VelocityField u;
  Field2D rho, p;
};

struct DerivedFields {
  VelocityField u;
  Field2D rho, p;
};

/// u from the potentials, rho = H(S, u), p = S rho^gamma. With checked set,
/// cavitation and supersonic nodes throw.
DerivedFields compute_derived(const GasModel& gm, const Geometry& geo, const Field2D& phi,
                              const Field2D& psi, const Field2D& S, const Field2D& Lambda,
                              bool checked = true);

}  // namespace axicd
