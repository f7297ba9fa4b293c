#include "axicd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "axicd/transport.hpp"

namespace axicd {

namespace {

Field2D product(const Field2D& a, const Field2D& b) {
  Field2D c = a;
  for (std::size_t k = 0; k < c.v.size(); ++k) c.v[k] *= b.v[k];
  return c;
}

Field2D stream_function(const SolutionState& s) {
  return compute_stream_h(product(s.rho, s.u.ux), s.geo, -std::numeric_limits<double>::infinity(),
                          Quadrature::trapezoid);
}

bool decays(double first, double last, double fraction) {
  if (first == 0.0) return last == 0.0;
  return last <= fraction * first;
}

}  // namespace

double interface_trace(const Field2D& F, int i) {
  const int n = F.nr;
  return 3.0 * F(i, n - 1) - 3.0 * F(i, n - 2) + F(i, n - 3);
}

Field2D compute_omega_direct(const SolutionState& s) {
  const ReferenceGrid& g = s.geo.grid;
  Field2D w(g, AxisKind::even);
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 1; j <= g.nr; ++j) w(i, j) = -s.geo.radius(i, j) * s.rho(i, j) * s.u.ur(i, j);
  return w;
}

Field2D compute_omega_stream(const SolutionState& s) {
  return gradient(stream_function(s), s.geo, XEnd::one_sided).dx;
}

DiagnosticsReport invariant_report(const GasModel& gm, const EntranceProfile& profile,
                                   const SolutionState& s) {
  const Geometry& geo = s.geo;
  const ReferenceGrid& g = geo.grid;
  const double gam = gm.gas.gamma, p0 = gm.gas.p0, B0 = gm.bg.B0_minus;
  DiagnosticsReport d;

  const Field2D mx = product(s.rho, s.u.ux), mr = product(s.rho, s.u.ur);
  const Gradient gmx = gradient(mx, geo, XEnd::one_sided), gmr = gradient(mr, geo, XEnd::one_sided);
  const Gradient gur = gradient(s.u.ur, geo, XEnd::one_sided);
  const Gradient gp = gradient(s.p, geo, XEnd::one_sided);
  const Gradient gS = gradient(s.S, geo, XEnd::one_sided);
  const Gradient gL = gradient(s.Lambda, geo, XEnd::one_sided);
  for (int i = 1; i < g.nx; ++i) {
    for (int j = 1; j < g.nr; ++j) {
      const double r = geo.radius(i, j), rho = s.rho(i, j);
      const double ux = s.u.ux(i, j), ur = s.u.ur(i, j), ut = s.u.uth(i, j);
      const double res[4] = {
          gmx.dx(i, j) + gmr.dr(i, j) + mr(i, j) / r,
          rho * (ux * gur.dx(i, j) + ur * gur.dr(i, j)) - rho * ut * ut / r + gp.dr(i, j),
          rho * (ux * gS.dx(i, j) + ur * gS.dr(i, j)),
          rho * (ux * gL.dx(i, j) + ur * gL.dr(i, j))};
      for (int k = 0; k < 4; ++k) d.euler_residual[k] = std::max(d.euler_residual[k], std::abs(res[k]));
    }
  }

  const Field2D h = stream_function(s);
  const Gradient gh = gradient(h, geo, XEnd::one_sided);
  const double c0sq = gm.bg.c0 * gm.bg.c0;
  const double floor = gm.gas.rho0_minus * (c0sq - gm.gas.u0 * gm.gas.u0) / 4.0;
  d.subsonic_margin_min = std::numeric_limits<double>::infinity();
  d.degeneracy_floor_ratio = std::numeric_limits<double>::infinity();
  d.rho_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.nr; ++j) {
      const double r = geo.radius(i, j), rho = s.rho(i, j), p = s.p(i, j), S = s.S(i, j);
      const VelocityTriple u{s.u.ux(i, j), s.u.ur(i, j), s.u.uth(i, j)};
      d.bernoulli_deviation = std::max(d.bernoulli_deviation, std::abs(bernoulli_of(u, rho, p, gam) - B0));
      const double gh2 = gh.dx(i, j) * gh.dx(i, j) + gh.dr(i, j) * gh.dr(i, j);
      const double L = s.Lambda(i, j);
      const double sb = B0 * r * r * rho * rho - 0.5 * (gh2 + L * L * rho * rho) -
                        r * r * gam / (gam - 1.0) * S * std::pow(rho, gam + 1.0);
      d.stream_bernoulli_residual = std::max(d.stream_bernoulli_residual, std::abs(sb));
      const double c2 = gam * p / rho;
      d.subsonic_margin_min = std::min(d.subsonic_margin_min, (c2 - u.norm2()) / c0sq);
      d.degeneracy_floor_ratio =
          std::min(d.degeneracy_floor_ratio, rho * (c2 - u.ux * u.ux - u.ur * u.ur) / floor);
      d.rho_min = std::min(d.rho_min, rho);
      d.max_abs_Lambda = std::max(d.max_abs_Lambda, std::abs(L));
    }
  }
  d.rho_floor_ratio = d.rho_min / (0.5 * gm.gas.rho0_minus);

  const int top = g.nr;
  for (int i = 0; i <= g.nx; ++i) {
    const double fp = geo.f.slope(i), norm = std::sqrt(1.0 + fp * fp);
    d.interface_pressure_nodal = std::max(d.interface_pressure_nodal, std::abs(s.p(i, top) - p0));
    d.interface_pressure_trace =
        std::max(d.interface_pressure_trace, std::abs(interface_trace(s.p, i) - p0));
    const double un = (-fp * s.u.ux(i, top) + s.u.ur(i, top)) / norm;
    const double un_tr = (-fp * interface_trace(s.u.ux, i) + interface_trace(s.u.ur, i)) / norm;
    d.interface_normal_nodal = std::max(d.interface_normal_nodal, std::abs(un));
    d.interface_normal_trace = std::max(d.interface_normal_trace, std::abs(un_tr));
  }

  const std::vector<double> cf = column_flux(product(s.rho, s.u.ux), geo, Quadrature::simpson);
  d.flux_imbalance.resize(cf.size());
  for (std::size_t i = 0; i < cf.size(); ++i) {
    d.flux_imbalance[i] = std::abs(cf[i] - cf.front()) / cf.front();
    d.flux_imbalance_max = std::max(d.flux_imbalance_max, d.flux_imbalance[i]);
  }

  const Field2D wd = compute_omega_direct(s), ws = gh.dx;
  d.omega_agreement = max_abs_diff(wd, ws);
  for (int j = 0; j <= g.nr; ++j) {
    const double r = geo.radius(0, j);
    d.omega_entrance_error = std::max(
        d.omega_entrance_error, std::abs(wd(0, j) + r * s.rho(0, j) * profile.ur_en(r)));
  }
  for (int i = 0; i <= g.nx; ++i)
    d.omega_axis_max = std::max({d.omega_axis_max, std::abs(wd(i, 0)), std::abs(ws(i, 0))});

  d.ode = free_boundary_ode_residual(geo.f, s.u);
  return d;
}

void farfield_report(const GasModel& gm, const SolutionState& s, const DiagnosticsConfig& cfg,
                     DiagnosticsReport& d) {
  const Geometry& geo = s.geo;
  const ReferenceGrid& g = geo.grid;
  const Gradient gur = gradient(s.u.ur, geo, XEnd::one_sided);
  const Gradient gp = gradient(s.p, geo, XEnd::one_sided);
  const Field2D omega = compute_omega_direct(s);
  const int W = std::max(1, cfg.windows);
  d.decay_fraction = cfg.decay_fraction;
  d.windows.assign(static_cast<std::size_t>(W), WindowStats{});
  for (int k = 0; k < W; ++k) {
    WindowStats& w = d.windows[static_cast<std::size_t>(k)];
    w.x0 = g.L * k / W;
    w.x1 = g.L * (k + 1) / W;
    const int i0 = static_cast<int>(std::ceil(static_cast<double>(g.nx) * k / W - 1e-9));
    const int i1 = static_cast<int>(std::floor(static_cast<double>(g.nx) * (k + 1) / W + 1e-9));
    for (int i = i0; i <= i1; ++i) {
      for (int j = 0; j <= g.nr; ++j) {
        w.ur_max = std::max(w.ur_max, std::abs(s.u.ur(i, j)));
        w.pressure_deviation = std::max(w.pressure_deviation, std::abs(s.p(i, j) - gm.gas.p0));
        w.omega_max = std::max(w.omega_max, std::abs(omega(i, j)));
        // contact-row values are pinned by the interface condition, so
        // radial differences reaching that row only see the jump to them
        if (j == 0 || j > g.nr - 2) continue;
        w.dx_ur_max = std::max(w.dx_ur_max, std::abs(gur.dx(i, j)));
        w.dr_ur_max = std::max(w.dr_ur_max, std::abs(gur.dr(i, j)));
        const double ut = s.u.uth(i, j);
        const double cf = s.rho(i, j) * ut * ut / geo.radius(i, j);
        w.centrifugal_max = std::max(w.centrifugal_max, cf);
        w.radial_balance = std::max(w.radial_balance, std::abs(gp.dr(i, j) - cf));
      }
    }
    w.ur_c1 = w.ur_max + w.dx_ur_max + w.dr_ur_max;
  }
  const WindowStats& a = d.windows.front();
  const WindowStats& b = d.windows.back();
  d.ur_decay = decays(a.ur_c1, b.ur_c1, cfg.decay_fraction);
  d.balance_decay = decays(a.radial_balance, b.radial_balance, cfg.decay_fraction);
  d.pressure_decay = decays(a.pressure_deviation, b.pressure_deviation, cfg.decay_fraction);
  d.omega_decay = b.omega_max <= a.omega_max;
}

DiagnosticsReport full_diagnostics(const GasModel& gm, const EntranceProfile& profile,
                                   const SolutionState& s, const DiagnosticsConfig& cfg) {
  DiagnosticsReport d = invariant_report(gm, profile, s);
  farfield_report(gm, s, cfg, d);
  return d;
}

}  // namespace axicd
