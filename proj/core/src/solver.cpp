#include "axicd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "axicd/errors.hpp"

namespace axicd {

DerivedFields compute_derived(const GasModel& gm, const Geometry& geo, const Field2D& phi,
                              const Field2D& psi, const Field2D& S, const Field2D& Lambda,
                              bool checked) {
  const ReferenceGrid& g = geo.grid;
  DerivedFields d{reconstruct_velocity(gm, geo, phi, psi, Lambda), Field2D(g, AxisKind::even),
                  Field2D(g, AxisKind::even)};
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.nr; ++j) {
      const VelocityTriple u{d.u.ux(i, j), d.u.ur(i, j), d.u.uth(i, j)};
      double rho;
      try {
        rho = gm.density(S(i, j), u, checked);
      } catch (const SolverError& e) {
        std::ostringstream os;
        os << e.what() << " at node (x=" << geo.x(i) << ", r=" << geo.radius(i, j) << ")";
        throw SolverError(e.error_class(), os.str());
      }
      d.rho(i, j) = rho;
      d.p(i, j) = gm.pressure(S(i, j), rho);
    }
  }
  return d;
}

void validate_solver_config(const SolverConfig& c) {
  auto bad = [](const std::string& m) { fail(ErrorClass::config, m); };
  if (!(c.L > 0)) bad("grid.L must be positive");
  if (c.nx < 16 || c.nr < 16) bad("grid.nx and grid.nr must be at least 16");
  for (double t : {c.tol_inner, c.tol_middle, c.tol_outer})
    if (!(t > 0)) bad("solver tolerances must be positive");
  for (double w : {c.relax_inner, c.relax_middle, c.relax_outer})
    if (!(w > 0 && w <= 1)) bad("solver relaxation factors must lie in (0, 1]");
  for (int m : {c.max_iter_inner, c.max_iter_middle, c.max_iter_outer})
    if (m < 1) bad("solver max_iter values must be at least 1");
  if (!(c.max_wall_seconds > 0)) bad("solver.max_wall_seconds must be positive");
  if (!(c.gate_flux_coeff > 0 && c.gate_ode_coeff > 0 && c.gate_bernoulli > 0 &&
        c.gate_linear_residual > 0))
    bad("gate thresholds must be positive");
}

double SolveClock::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void SolveClock::check() const {
  if (elapsed() > budget_seconds) {
    std::ostringstream os;
    os << "wall-time budget of " << budget_seconds << " s exhausted";
    fail(ErrorClass::time_budget, os.str());
  }
}

namespace {

bool is_state_error(ErrorClass c) {
  return c == ErrorClass::cavitation || c == ErrorClass::supersonic ||
         c == ErrorClass::transport_degeneracy;
}

// Runs body; state errors raised by an iterate are reported as divergence of
// the level, with the original class kept as the cause.
template <class Body>
auto guard_level(ErrorClass level, SolveReport* report, Body&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const SolverError& e) {
    if (!is_state_error(e.error_class())) throw;
    if (report && report->error_cause.empty()) report->error_cause = error_class_name(e.error_class());
    throw SolverError(level, std::string("iterate left the admissible set (") +
                                 error_class_name(e.error_class()) + "): " + e.what());
  }
}

void record(LevelHistory& h, double change) {
  if (!h.changes.empty()) {
    const double prev = h.changes.back();
    h.ratios.push_back(prev > 0 ? change / prev : (change > 0 ? INFINITY : 0.0));
  }
  h.changes.push_back(change);
}

// Three successive non-contracting steps, or a non-finite change.
bool diverging(const LevelHistory& h) {
  if (!std::isfinite(h.changes.back())) return true;
  if (h.ratios.size() < 3) return false;
  for (std::size_t k = h.ratios.size() - 3; k < h.ratios.size(); ++k)
    if (!(h.ratios[k] >= 1.0)) return false;
  return true;
}

std::string history_text(const LevelHistory& h) {
  std::ostringstream os;
  os << "changes [";
  for (std::size_t k = 0; k < h.changes.size(); ++k) os << (k ? ", " : "") << h.changes[k];
  os << "]";
  return os.str();
}

Field2D blend(const Field2D& old, const Field2D& fresh, double w) {
  if (w == 1.0) return fresh;
  Field2D out = fresh;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = old.v[k] + w * (fresh.v[k] - old.v[k]);
  return out;
}

Field2D radial_derivative(const Field2D& F, const Geometry& geo) {
  return gradient(F, geo, XEnd::one_sided).dr;
}

std::vector<double> entrance_values(const EntranceProfile& p, const ReferenceGrid& g) {
  std::vector<double> e(static_cast<std::size_t>(g.nr) + 1);
  for (int j = 0; j <= g.nr; ++j) e[j] = j == g.nr ? 0.0 : entrance_potential(p, 0.5 * g.eta(j));
  return e;
}

}  // namespace

InnerProblem make_inner_problem(const GasModel& gm, const EntranceProfile& profile,
                                const Geometry& geo, const TransportedFields& W,
                                const std::vector<double>& entrance) {
  InnerProblem prob;
  prob.gm = &gm;
  prob.a = assemble_linearization_aii(gm);
  prob.geo = geo;
  prob.S = W.S;
  prob.Lambda = W.Lambda;
  prob.dr_S = radial_derivative(W.S, geo);
  prob.dr_Lambda = radial_derivative(W.Lambda, geo);
  prob.entrance = entrance;
  prob.robin = robin_data_B(geo.f, profile.S_en(0.5), profile.Lambda_en(0.5), gm);
  prob.phi_solver.emplace(prob.a, prob.geo);
  prob.psi_solver.emplace(prob.geo);
  return prob;
}

InnerResult solve_inner_phipsi(const InnerProblem& prob, Field2D phi, Field2D psi,
                               const SolverConfig& cfg, const SolveClock& clock,
                               SolveReport* report) {
  const GasModel& gm = *prob.gm;
  const Geometry& geo = prob.geo;
  InnerResult res;
  const double scale = 0.5 * gm.gas.u0;
  if (report) report->inner_solves++;
  for (int k = 1; k <= cfg.max_iter_inner; ++k) {
    clock.check();
    if (report) report->inner_iterations++;
    Field2D psi_new, phi_new;
    guard_level(ErrorClass::inner_divergence, report, [&] {
      const VelocityField u = reconstruct_velocity(gm, geo, phi, psi, prob.Lambda);
      const Field2D G = assemble_source_G(gm, geo, prob.S, prob.Lambda, prob.dr_S, prob.dr_Lambda, u);
      psi_new = blend(psi, prob.psi_solver->solve(G, prob.robin.B), cfg.relax_inner);
      const FluxField F = assemble_flux_F(gm, prob.a, geo, prob.S, phi, psi_new, prob.Lambda);
      phi_new = blend(phi, prob.phi_solver->solve(flux_divergence(F, geo), prob.entrance),
                      cfg.relax_inner);
      return 0;
    });
    res.linear_residual = std::max({res.linear_residual, prob.phi_solver->last_relative_residual(),
                                    prob.psi_solver->last_relative_residual()});
    const double change = std::max(max_abs_diff(phi_new, phi), max_abs_diff(psi_new, psi)) / scale;
    record(res.history, change);
    phi = std::move(phi_new);
    psi = std::move(psi_new);
    if (report) {
      if (!res.history.ratios.empty())
        report->inner_max_ratio = std::max(report->inner_max_ratio, res.history.ratios.back());
    }
    if (change < cfg.tol_inner) {
      res.history.converged = true;
      break;
    }
    if (diverging(res.history)) {
      if (report) report->last_inner = res.history;
      fail(ErrorClass::inner_divergence,
           "inner iteration is not contracting; " + history_text(res.history));
    }
  }
  if (report) report->last_inner = res.history;
  if (!res.history.converged)
    fail(ErrorClass::inner_divergence, "inner iteration hit max_iter_inner; " + history_text(res.history));
  res.phi = std::move(phi);
  res.psi = std::move(psi);
  return res;
}

MiddleResult solve_middle_f(const GasModel& gm, const EntranceProfile& profile,
                            const StripField& strip, const SolverConfig& cfg,
                            const FreeBoundaryCurve& f_init, Field2D phi, Field2D psi,
                            const std::vector<double>& entrance, const SolveClock& clock,
                            SolveReport* report) {
  const ReferenceGrid grid = build_reference_grid(cfg.L, cfg.nx, cfg.nr);
  FreeBoundaryCurve f = f_init;
  MiddleResult res;
  LevelHistory* hist = &res.history;
  if (report) {
    report->middle.emplace_back();
    hist = &report->middle.back();
  }
  for (int k = 1; k <= cfg.max_iter_middle; ++k) {
    clock.check();
    Geometry geo = metric_coefficients(f, grid);
    TransportedFields W = strip.sample(geo);
    const InnerProblem prob = make_inner_problem(gm, profile, geo, W, entrance);
    InnerResult inner = solve_inner_phipsi(prob, std::move(phi), std::move(psi), cfg, clock, report);
    res.linear_residual = std::max(res.linear_residual, inner.linear_residual);
    FreeBoundaryUpdate up;
    DerivedFields derived = guard_level(ErrorClass::middle_divergence, report, [&] {
      DerivedFields d = compute_derived(gm, geo, inner.phi, inner.psi, W.S, W.Lambda, true);
      Field2D rho_ux = d.rho;
      for (std::size_t n = 0; n < rho_ux.v.size(); ++n) rho_ux.v[n] *= d.u.ux.v[n];
      up = update_free_boundary(f, rho_ux, gm, geo);
      return d;
    });
    std::vector<double> next = up.f.samples();
    if (cfg.relax_middle != 1.0)
      for (int i = 0; i <= grid.nx; ++i)
        next[i] = f[i] + cfg.relax_middle * (next[i] - f[i]);
    next.front() = 0.5;
    FreeBoundaryCurve f_new(cfg.L, std::move(next));
    double change = 0.0;
    for (int i = 0; i <= grid.nx; ++i) change = std::max(change, std::abs(f_new[i] - f[i]));
    change /= 0.5;
    record(*hist, change);
    phi = inner.phi;
    psi = inner.psi;
    const bool done = change < cfg.tol_middle;
    if (done || k == cfg.max_iter_middle || diverging(*hist)) {
      res.geo = std::move(geo);
      res.phi = std::move(inner.phi);
      res.psi = std::move(inner.psi);
      res.W = std::move(W);
      res.derived = std::move(derived);
      res.last_update = std::move(up);
    }
    if (done) {
      hist->converged = true;
      break;
    }
    if (diverging(*hist))
      fail(ErrorClass::middle_divergence, "free-boundary iteration is not contracting; " +
                                              history_text(*hist));
    f_new.check_band();
    f = std::move(f_new);
  }
  if (!hist->converged)
    fail(ErrorClass::middle_divergence,
         "free-boundary iteration hit max_iter_middle; " + history_text(*hist));
  if (report) res.history = *hist;
  return res;
}

SolutionState solve_outer_W(const GasModel& gm, const EntranceProfile& profile,
                            const SolverConfig& cfg, SolveReport& report,
                            const SolveClock& clock) {
  const ReferenceGrid grid = build_reference_grid(cfg.L, cfg.nx, cfg.nr);
  const std::vector<double> entrance = entrance_values(profile, grid);
  FreeBoundaryCurve f = FreeBoundaryCurve::flat(cfg.L, cfg.nx);
  const Geometry flat = metric_coefficients(f, grid);
  StripField strip = initial_strip(profile, flat);
  Field2D phi(grid, AxisKind::even), psi(grid, AxisKind::odd);
  const double m0 = gm.gas.rho0_minus * gm.gas.u0;
  for (int k = 1; k <= cfg.max_iter_outer; ++k) {
    clock.check();
    MiddleResult mid = solve_middle_f(gm, profile, strip, cfg, f, phi, psi, entrance, clock, &report);
    report.elliptic_residual = std::max(report.elliptic_residual, mid.linear_residual);
    const Geometry& geo = mid.geo;
    double clamp = 0.0;
    TransportedFields W = guard_level(ErrorClass::outer_divergence, &report, [&] {
      Field2D rho_ux = mid.derived.rho;
      for (std::size_t n = 0; n < rho_ux.v.size(); ++n) rho_ux.v[n] *= mid.derived.u.ux.v[n];
      const Field2D w = compute_stream_h(rho_ux, geo, 0.5 * m0);
      const EntranceFluxMap map = build_entrance_flux_map(w, geo);
      const Field2D R0 = compute_footpoint_R0(w, map, geo, 1e-6, &clamp);
      return transport_SLambda(profile, R0);
    });
    report.transport_clamp = clamp;
    if (cfg.relax_outer != 1.0) {
      W.S = blend(mid.W.S, W.S, cfg.relax_outer);
      W.Lambda = blend(mid.W.Lambda, W.Lambda, cfg.relax_outer);
    }
    StripField next = extend_W(W, geo);
    const double change = strip_change(next, strip, profile.S0, gm.gas.u0);
    record(report.outer, change);
    f = geo.f;
    phi = mid.phi;
    psi = mid.psi;
    strip = std::move(next);
    report.middle_change = mid.history.changes.empty() ? 0.0 : mid.history.changes.back();
    report.inner_change = report.last_inner.changes.empty() ? 0.0 : report.last_inner.changes.back();
    report.outer_change = change;
    report.anchor_drift = mid.last_update.anchor_drift;
    if (change < cfg.tol_outer) {
      report.outer.converged = true;
      SolutionState s;
      s.geo = geo;
      s.phi = std::move(mid.phi);
      s.psi = std::move(mid.psi);
      DerivedFields d = guard_level(ErrorClass::outer_divergence, &report, [&] {
        return compute_derived(gm, geo, s.phi, s.psi, W.S, W.Lambda, true);
      });
      s.S = std::move(W.S);
      s.Lambda = std::move(W.Lambda);
      s.u = std::move(d.u);
      s.rho = std::move(d.rho);
      s.p = std::move(d.p);
      return s;
    }
    if (diverging(report.outer)) {
      std::ostringstream os;
      os << "transport iteration is not contracting at sigma=" << profile.sigma << "; "
         << history_text(report.outer);
      fail(ErrorClass::outer_divergence, os.str());
    }
  }
  std::ostringstream os;
  os << "transport iteration hit max_iter_outer at sigma=" << profile.sigma << "; "
     << history_text(report.outer);
  fail(ErrorClass::outer_divergence, os.str());
}

void evaluate_gates(SolveReport& r, const DiagnosticsReport& d, const SolverConfig& cfg) {
  const double hxi = 1.0 / r.nx, heta = 1.0 / r.nr;
  const double h2_ref = std::max(hxi, heta) * std::max(hxi, heta);
  const double h_phys = std::max(r.L * hxi, 0.5 * heta);
  r.gates.clear();
  r.gates.emplace_back("levels_converged", r.levels_converged);
  r.gates.emplace_back("subsonic_margin_positive", d.subsonic_margin_min > 0.0);
  r.gates.emplace_back("degeneracy_floor", d.degeneracy_floor_ratio >= 1.0);
  r.gates.emplace_back("density_floor", d.rho_floor_ratio >= 1.0);
  r.gates.emplace_back("bernoulli", d.bernoulli_deviation <= cfg.gate_bernoulli);
  r.gates.emplace_back("flux_balance", d.flux_imbalance_max <= cfg.gate_flux_coeff * h2_ref);
  r.gates.emplace_back("ode_residual", d.ode.max <= cfg.gate_ode_coeff * h_phys * h_phys);
  r.gates.emplace_back("linear_residual", r.elliptic_residual <= cfg.gate_linear_residual);
  bool all = true;
  for (const auto& g : r.gates) all = all && g.second;
  r.converged = all;
  r.exit_code = all ? 0 : 1;
}

SolveResult solve_full(const GasModel& gm, const EntranceProfile& profile,
                       const SolverConfig& cfg, const DiagnosticsConfig& dcfg) {
  SolveResult out;
  SolveReport& r = out.report;
  r.L = cfg.L;
  r.nx = cfg.nx;
  r.nr = cfg.nr;
  r.sigma = profile.sigma;
  SolveClock clock;
  clock.budget_seconds = cfg.max_wall_seconds;
  try {
    validate_solver_config(cfg);
    validate_profile(profile);
    out.state = solve_outer_W(gm, profile, cfg, r, clock);
    r.levels_converged = true;
    const SolutionState& s = *out.state;
    out.diagnostics = full_diagnostics(gm, profile, s, dcfg);
    const DiagnosticsReport& d = *out.diagnostics;
    r.ode_residual_max = d.ode.max;
    r.ode_residual_l2 = d.ode.l2;
    // solver-quadrature balance
    Field2D rho_ux = s.rho;
    for (std::size_t n = 0; n < rho_ux.v.size(); ++n) rho_ux.v[n] *= s.u.ux.v[n];
    const std::vector<double> cf = column_flux(rho_ux, s.geo, Quadrature::trapezoid);
    for (double c : cf) r.flux_balance = std::max(r.flux_balance, std::abs(c - cf.front()) / cf.front());
    r.min_interface_radicand =
        robin_data_B(s.geo.f, profile.S_en(0.5), profile.Lambda_en(0.5), gm).min_radicand;
    for (int i = 0; i <= s.geo.grid.nx; ++i) {
      r.f_deviation = std::max(r.f_deviation, std::abs(s.geo.f[i] - 0.5));
      for (int j = 0; j <= s.geo.grid.nr; ++j) {
        const double dx = s.u.ux(i, j) - gm.gas.u0, dr = s.u.ur(i, j), dt = s.u.uth(i, j);
        r.u_deviation = std::max(r.u_deviation, std::sqrt(dx * dx + dr * dr + dt * dt));
      }
    }
    evaluate_gates(r, d, cfg);
  } catch (const SolverError& e) {
    r.converged = false;
    r.error_class = error_class_name(e.error_class());
    r.error_message = e.what();
    r.exit_code = exit_code_for(e.error_class());
  }
  r.wall_seconds = clock.elapsed();
  return out;
}

SolveResult solve_full(const ProblemSpec& spec) {
  SolveResult out;
  try {
    validate_gas(spec.gas);
    const GasModel gm(spec.gas);
    const EntranceProfile profile = make_profile(spec.profile, gm);
    out = solve_full(gm, profile, spec.solver, spec.diagnostics);
  } catch (const SolverError& e) {
    out.report.error_class = error_class_name(e.error_class());
    out.report.error_message = e.what();
    out.report.exit_code = exit_code_for(e.error_class());
  }
  out.report.sigma_scale = spec.profile.sigma_scale;
  return out;
}

}  // namespace axicd
