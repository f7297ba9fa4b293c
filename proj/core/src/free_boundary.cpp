#include "axicd/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "axicd/errors.hpp"
#include "axicd/transport.hpp"

namespace axicd {

double interface_radicand(const GasModel& gm, double S, double Lambda, double f) {
  // B0 - h(S) with h(S) = h0 (S/S0)^(1/gamma) and B0 - h0 = u0^2/2, arranged
  // so the background evaluates to u0^2 exactly
  const double g = gm.gas.gamma;
  const double h0 = g / (g - 1.0) * gm.gas.p0 / gm.gas.rho0_minus;
  const double dh = h0 * (1.0 - std::pow(S / gm.bg.S0_minus, 1.0 / g));
  const double swirl = Lambda / f;
  return gm.gas.u0 * gm.gas.u0 + 2.0 * dh - swirl * swirl;
}

RobinData robin_data_B(const FreeBoundaryCurve& f, double S_interface, double Lambda_interface,
                       const GasModel& gm) {
  RobinData out;
  out.B.resize(static_cast<std::size_t>(f.nx()) + 1);
  out.min_radicand = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= f.nx(); ++i) {
    const double rad = interface_radicand(gm, S_interface, Lambda_interface, f[i]);
    out.min_radicand = std::min(out.min_radicand, rad);
    if (!(rad >= 0.0)) {
      std::ostringstream os;
      os << "interface energy radicand " << rad << " < 0 at x=" << i * f.h()
         << "; entrance data too large";
      fail(ErrorClass::interface_energy, os.str());
    }
    const double fp = f.slope(i);
    out.B[static_cast<std::size_t>(i)] = std::sqrt(rad) - gm.gas.u0 / std::sqrt(1.0 + fp * fp);
  }
  return out;
}

FreeBoundaryUpdate update_free_boundary(const FreeBoundaryCurve& f_star, const Field2D& rho_ux,
                                        const GasModel& gm, const Geometry& geo) {
  const double m0 = gm.gas.rho0_minus * gm.gas.u0;
  const ReferenceGrid& g = geo.grid;
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.nr; ++j)
      if (!(rho_ux(i, j) >= 0.5 * m0)) {
        std::ostringstream os;
        os << "mass-flux floor violated in the free-boundary update: rho u_x = " << rho_ux(i, j)
           << " at (x=" << geo.x(i) << ", r=" << geo.radius(i, j) << ")";
        fail(ErrorClass::transport_degeneracy, os.str());
      }
  FreeBoundaryUpdate up;
  up.column_flux = column_flux(rho_ux, geo, Quadrature::trapezoid);
  up.entrance_flux = up.column_flux.front();
  if (!(up.entrance_flux > 0.0))
    fail(ErrorClass::transport_degeneracy, "entrance mass flux is not positive");
  std::vector<double> f(static_cast<std::size_t>(g.nx) + 1);
  up.min_radicand = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= g.nx; ++i) {
    const double fs = f_star[i];
    const double arg = fs * fs + 2.0 / m0 * (up.entrance_flux - up.column_flux[i]);
    up.min_radicand = std::min(up.min_radicand, arg);
    if (!(arg >= 1.0 / 16.0)) {
      std::ostringstream os;
      os << "free boundary collapse: f^2 = " << arg << " < 1/16 at x=" << geo.x(i);
      fail(ErrorClass::free_boundary_collapse, os.str());
    }
    f[static_cast<std::size_t>(i)] = std::sqrt(arg);
  }
  up.anchor_drift = std::abs(f.front() - 0.5);
  f.front() = 0.5;
  up.f = FreeBoundaryCurve(g.L, std::move(f));
  return up;
}

OdeResidual free_boundary_ode_residual(const FreeBoundaryCurve& f, const VelocityField& u) {
  OdeResidual out;
  const int nx = f.nx();
  const int top = u.ux.nr;
  out.r.resize(static_cast<std::size_t>(nx) + 1);
  double acc = 0.0;
  for (int i = 0; i <= nx; ++i) {
    const double res = f.slope(i) - u.ur(i, top) / u.ux(i, top);
    out.r[static_cast<std::size_t>(i)] = res;
    out.max = std::max(out.max, std::abs(res));
    const double w = (i == 0 || i == nx) ? 0.5 : 1.0;
    acc += w * res * res;
  }
  out.l2 = std::sqrt(acc / nx);
  return out;
}

}  // namespace axicd
