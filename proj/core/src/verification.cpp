#include "axicd/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "axicd/errors.hpp"

namespace axicd {

namespace {

constexpr double kPi = std::numbers::pi;

double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Curved contact line f(x) = 1/2 + b (1 - cos(2 pi x / L)), flat at both ends.
struct BumpCurve {
  double L = 2.0, b = 0.03;
  double k() const { return 2 * kPi / L; }
  double f(double x) const { return 0.5 + b * (1 - std::cos(k() * x)); }
  double fp(double x) const { return b * k() * std::sin(k() * x); }
  double fpp(double x) const { return b * k() * k() * std::cos(k() * x); }

  Geometry geometry(int n) const {
    std::vector<double> s(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) s[i] = f(L * i / n);
    return metric_coefficients(FreeBoundaryCurve(L, std::move(s)), build_reference_grid(L, n, n));
  }
};

}  // namespace

double ConvergenceStudy::min_order() const {
  if (orders.empty()) return 0.0;
  return *std::min_element(orders.begin(), orders.end());
}

ConvergenceStudy manufactured_phi_study(const std::vector<int>& sizes) {
  // phi = (f^2 - r^2) s(x), s = sin(pi (L - x) / (2 L)): zero on the exit and the contact line
  const BumpCurve c;
  const LinearizationCoefficients a{1.6, 1.0, 1.0};
  const double w = kPi / (2 * c.L);
  auto s = [&](double x) { return std::sin(w * (c.L - x)); };
  auto sp = [&](double x) { return -w * std::cos(w * (c.L - x)); };
  auto exact = [&](double x, double r) { return (c.f(x) * c.f(x) - r * r) * s(x); };
  auto op = [&](double x) {
    const double f = c.f(x), fp = c.fp(x), fpp = c.fpp(x);
    const double F = f * f, Fp = 2 * f * fp, Fpp = 2 * fp * fp + 2 * f * fpp;
    // returns (phi_xx without the -r^2 s'' part, coefficient of r^2)
    return std::pair{Fpp * s(x) + 2 * Fp * sp(x) - F * w * w * s(x), w * w * s(x)};
  };
  ConvergenceStudy st;
  for (int n : sizes) {
    const Geometry geo = c.geometry(n);
    const ReferenceGrid& g = geo.grid;
    Field2D rhs(g, AxisKind::even);
    std::vector<double> entrance(static_cast<std::size_t>(g.nr) + 1);
    for (int i = 0; i <= g.nx; ++i) {
      const double x = geo.x(i);
      const auto [base, r2coef] = op(x);
      for (int j = 0; j <= g.nr; ++j) {
        const double r = geo.radius(i, j);
        const double phi_xx = base + r2coef * r * r;
        const double radial = -4.0 * s(x);  // phi_rr + phi_r / r
        rhs(i, j) = a.a11 * phi_xx + a.a22 * radial;
      }
    }
    for (int j = 0; j <= g.nr; ++j) entrance[j] = exact(0.0, geo.radius(0, j));
    const Field2D phi = PhiSolver(a, geo).solve(rhs, entrance);
    double err = 0.0;
    for (int i = 0; i <= g.nx; ++i)
      for (int j = 0; j <= g.nr; ++j)
        err = std::max(err, std::abs(phi(i, j) - exact(geo.x(i), geo.radius(i, j))));
    st.sizes.push_back(n);
    st.errors.push_back(err);
  }
  for (std::size_t k = 1; k < st.errors.size(); ++k)
    st.orders.push_back(observed_order(st.errors[k - 1], st.errors[k]));
  return st;
}

ConvergenceStudy manufactured_psi_study(const std::vector<int>& sizes) {
  // psi = h(x) r cos r, h = 1 + 0.3 cos(pi x / L)
  const BumpCurve c;
  const double w = kPi / c.L;
  auto h = [&](double x) { return 1.0 + 0.3 * std::cos(w * x); };
  auto hp = [&](double x) { return -0.3 * w * std::sin(w * x); };
  auto hpp = [&](double x) { return -0.3 * w * w * std::cos(w * x); };
  auto q = [](double r) { return r * std::cos(r); };
  auto qp = [](double r) { return std::cos(r) - r * std::sin(r); };
  // q'' + q'/r - q/r^2
  auto qop = [](double r) { return -3.0 * std::sin(r) - r * std::cos(r); };
  ConvergenceStudy st;
  for (int n : sizes) {
    const Geometry geo = c.geometry(n);
    const ReferenceGrid& g = geo.grid;
    Field2D src(g, AxisKind::odd);
    std::vector<double> robin(static_cast<std::size_t>(g.nx) + 1);
    for (int i = 0; i <= g.nx; ++i) {
      const double x = geo.x(i);
      for (int j = 0; j <= g.nr; ++j) {
        const double r = geo.radius(i, j);
        src(i, j) = -(hpp(x) * q(r) + h(x) * qop(r));
      }
      const double f = c.f(x), fp = c.fp(x);
      robin[i] = (-fp * hp(x) * q(f) + h(x) * qp(f) + h(x) * q(f) / f) / std::sqrt(1 + fp * fp);
    }
    const Field2D psi = PsiSolver(geo).solve(src, robin);
    double err = 0.0;
    for (int i = 0; i <= g.nx; ++i)
      for (int j = 0; j <= g.nr; ++j)
        err = std::max(err, std::abs(psi(i, j) - h(geo.x(i)) * q(geo.radius(i, j))));
    st.sizes.push_back(n);
    st.errors.push_back(err);
  }
  for (std::size_t k = 1; k < st.errors.size(); ++k)
    st.orders.push_back(observed_order(st.errors[k - 1], st.errors[k]));
  return st;
}

double radial_ode_oracle_error(int nr, bool cubic_source) {
  const double f = 0.5, B = 0.7;
  const Geometry geo = metric_coefficients(FreeBoundaryCurve::flat(1.0, 16, f),
                                           build_reference_grid(1.0, 16, nr));
  const ReferenceGrid& g = geo.grid;
  const double src_scale = cubic_source ? 1.0 : 0.0;

  // shoot psi'' = -s r - psi'/r + psi/r^2 from the axis series a r - s r^3/8
  auto shoot = [&](double a, std::vector<double>* nodes) {
    const int sub = 64;
    const double dr = f / (nr * sub);
    double r = dr * 1e-3;
    double y0 = a * r - src_scale * r * r * r / 8, y1 = a - src_scale * 3 * r * r / 8;
    auto rhs = [&](double rr, double u, double v) { return -src_scale * rr - v / rr + u / (rr * rr); };
    if (nodes) nodes->assign(1, 0.0);
    for (int j = 0; j < nr; ++j) {
      for (int k = 0; k < sub; ++k) {
        const double step = (j == 0 && k == 0) ? dr - r : dr;
        const double k1u = y1, k1v = rhs(r, y0, y1);
        const double k2u = y1 + 0.5 * step * k1v, k2v = rhs(r + 0.5 * step, y0 + 0.5 * step * k1u, k2u);
        const double k3u = y1 + 0.5 * step * k2v, k3v = rhs(r + 0.5 * step, y0 + 0.5 * step * k2u, k3u);
        const double k4u = y1 + step * k3v, k4v = rhs(r + step, y0 + step * k3u, k4u);
        y0 += step / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
        y1 += step / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        r += step;
      }
      if (nodes) nodes->push_back(y0);
    }
    return y1 + y0 / f;  // Robin functional on the flat contact line
  };
  const double R0 = shoot(0.0, nullptr), R1 = shoot(1.0, nullptr);
  std::vector<double> oracle;
  shoot((B - R0) / (R1 - R0), &oracle);

  Field2D src(g, AxisKind::odd);
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.nr; ++j) src(i, j) = src_scale * geo.radius(i, j);
  const std::vector<double> robin(static_cast<std::size_t>(g.nx) + 1, B);
  const Field2D psi = PsiSolver(geo).solve(src, robin);
  double err = 0.0;
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.nr; ++j) {
      err = std::max(err, std::abs(psi(i, j) - oracle[j]));
      if (!cubic_source) err = std::max(err, std::abs(psi(i, j) - 0.5 * B * geo.radius(i, j)));
    }
  return err;
}

ProblemSpec reference_problem(double sigma_scale, double L, int nx, int nr) {
  ProblemSpec p;
  p.profile.family = sigma_scale == 0.0 ? "background" : "bump";
  p.profile.sigma_scale = sigma_scale;
  p.solver.L = L;
  p.solver.nx = nx;
  p.solver.nr = nr;
  return p;
}

// ---------------------------------------------------------------------------

namespace {

struct Run {
  ProblemSpec spec;
  SolveResult res;
  bool ok() const { return res.report.converged && res.state && res.diagnostics; }
};

Run run(const ProblemSpec& spec) { return Run{spec, solve_full(spec)}; }

std::string run_label(const Run& r) {
  std::ostringstream os;
  os << "L=" << r.spec.solver.L << " " << r.spec.solver.nx << "x" << r.spec.solver.nr
     << " scale=" << r.spec.profile.sigma_scale;
  if (!r.res.report.error_class.empty()) os << " error=" << r.res.report.error_class;
  else if (!r.res.report.converged) os << " not converged";
  return os.str();
}

// Largest deviation of S and Lambda along traced streamlines from their
// entrance values, both relative to the entrance perturbation scale.
double streamline_transport_error(const Run& r) {
  const GasModel gm(r.spec.gas);
  const EntranceProfile p = make_profile(r.spec.profile, gm);
  const SolutionState& s = *r.res.state;
  double err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double r0 = (k + 0.5) / 40.0;
    const Streamline line = trace_streamline_oracle(s.u, s.geo, r0, 400);
    const double S_ref = p.S_en(r0), L_ref = p.Lambda_en(r0);
    for (std::size_t n = 0; n < line.x.size(); ++n) {
      err = std::max(err, std::abs(interpolate_field(s.S, s.geo, line.x[n], line.r[n]) - S_ref));
      err = std::max(err, std::abs(interpolate_field(s.Lambda, s.geo, line.x[n], line.r[n]) - L_ref));
    }
  }
  return err;
}

struct ExtensionJumps {
  double value = 0, slope = 0;
};

// One-sided quadratic extrapolation to y = 1 from each side of the strip and
// one-sided second-order slopes, compared across the contact line.
ExtensionJumps extension_jumps(const Run& r) {
  const SolutionState& s = *r.res.state;
  const StripField strip = extend_W(TransportedFields{s.S, s.Lambda}, s.geo);
  const int n = strip.nr();
  const double h = 1.0 / n;
  ExtensionJumps out;
  for (int i = 0; i < strip.columns(); ++i) {
    for (int comp = 0; comp < 2; ++comp) {
      auto v = [&](int m) { return comp == 0 ? strip.S(i, m) : strip.Lambda(i, m); };
      const double in_val = 3 * v(n - 1) - 3 * v(n - 2) + v(n - 3);
      const double out_val = 3 * v(n + 1) - 3 * v(n + 2) + v(n + 3);
      const double in_slope = (3 * v(n) - 4 * v(n - 1) + v(n - 2)) / (2 * h);
      const double out_slope = (-3 * v(n) + 4 * v(n + 1) - v(n + 2)) / (2 * h);
      out.value = std::max(out.value, std::abs(in_val - out_val));
      out.slope = std::max(out.slope, std::abs(in_slope - out_slope));
    }
  }
  return out;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(
    const std::function<void(const CriterionResult&)>& progress) {
  std::vector<CriterionResult> out;
  auto emit = [&](CriterionResult c) {
    if (progress) progress(c);
    out.push_back(std::move(c));
  };

  // shared refinement pair and sweep, solved concurrently
  auto fut_coarse = std::async(std::launch::async, run, reference_problem(1e-3, 2.0, 64, 64));
  auto fut_fine = std::async(std::launch::async, run, reference_problem(1e-3, 2.0, 128, 128));
  std::vector<std::future<Run>> fut_sweep;
  for (double sc : {1e-3, 2e-3, 4e-3})
    fut_sweep.push_back(std::async(std::launch::async, run, reference_problem(sc, 2.0, 64, 64)));

  // 1: background exactness
  const auto t0 = std::chrono::steady_clock::now();
  const Run bg = run(reference_problem(0.0, 10.0, 64, 64));
  const double bg_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  {
    const double secs = bg_secs;
    CriterionResult c{1, "background exactness", false, run_label(bg)};
    if (bg.ok()) {
      const auto& rep = bg.res.report;
      const auto& d = *bg.res.diagnostics;
      const SolutionState& s = *bg.res.state;
      const GasParameters& gas = bg.spec.gas;
      double field_dev = 0.0;
      for (int i = 0; i <= s.geo.grid.nx; ++i) field_dev = std::max(field_dev, std::abs(s.geo.f[i] - 0.5));
      for (std::size_t k = 0; k < s.p.v.size(); ++k) {
        field_dev = std::max({field_dev, std::abs(s.u.ux.v[k] - gas.u0), std::abs(s.u.ur.v[k]),
                              std::abs(s.u.uth.v[k]), std::abs(s.rho.v[k] - gas.rho0_minus),
                              std::abs(s.p.v[k] - gas.p0)});
      }
      const double residual = std::max(
          {rep.elliptic_residual, rep.outer_change, rep.middle_change, rep.inner_change,
           rep.ode_residual_max, rep.flux_balance, d.euler_residual[0], d.euler_residual[1],
           d.euler_residual[2], d.euler_residual[3], d.bernoulli_deviation,
           d.stream_bernoulli_residual, d.interface_pressure_nodal, d.interface_normal_nodal,
           d.flux_imbalance_max});
      c.passed = field_dev <= 1e-10 && residual <= 1e-10 && secs < 5.0;
      c.detail = "field deviation " + sci(field_dev) + ", max residual " + sci(residual) +
                 ", runtime " + sci(secs) + " s";
    }
    emit(c);
  }

  const Run coarse = fut_coarse.get();
  const Run fine = fut_fine.get();
  std::vector<Run> sweep;
  for (auto& f : fut_sweep) sweep.push_back(f.get());

  // 2: linear response
  {
    CriterionResult c{2, "linear small-data response", false, {}};
    bool all = true;
    for (const Run& r : sweep) all = all && r.ok();
    if (!all) {
      for (const Run& r : sweep) c.detail += run_label(r) + "; ";
    } else {
      bool pass = true;
      std::ostringstream os;
      for (std::size_t k = 1; k < sweep.size(); ++k) {
        const double rf = sweep[k].res.report.f_deviation / sweep[k - 1].res.report.f_deviation;
        const double ru = sweep[k].res.report.u_deviation / sweep[k - 1].res.report.u_deviation;
        pass = pass && std::abs(rf / 2 - 1) <= 0.2 && std::abs(ru / 2 - 1) <= 0.2;
        os << "ratios f " << rf << " u " << ru << "; ";
      }
      c.passed = pass;
      c.detail = os.str() + "target 2 +/- 20%";
    }
    emit(c);
  }

  const bool pair_ok = coarse.ok() && fine.ok();
  const std::string pair_fail = run_label(coarse) + "; " + run_label(fine);

  // 3: mass-flux conservation
  {
    CriterionResult c{3, "mass-flux conservation", false, pair_fail};
    if (pair_ok) {
      const double e0 = coarse.res.diagnostics->flux_imbalance_max;
      const double e1 = fine.res.diagnostics->flux_imbalance_max;
      const double h = 1.0 / 128;
      const double bound = fine.spec.solver.gate_flux_coeff * h * h;
      const double ratio = e0 / e1;
      c.passed = ratio >= 3.0 && ratio <= 5.5 && e1 <= bound;
      c.detail = "imbalance " + sci(e0) + " -> " + sci(e1) + ", ratio " + sci(ratio) +
                 " (band [3, 5.5]), bound C h^2 = " + sci(bound);
    }
    emit(c);
  }

  // 4: Bernoulli constancy over every converged run of the suite
  {
    CriterionResult c{4, "Bernoulli constancy", false, {}};
    double worst = 0.0;
    int count = 0;
    for (const Run* r : std::initializer_list<const Run*>{&bg, &coarse, &fine, &sweep[0], &sweep[1], &sweep[2]}) {
      if (!r->ok()) continue;
      worst = std::max(worst, r->res.diagnostics->bernoulli_deviation);
      ++count;
    }
    c.passed = count > 0 && worst <= 1e-10;
    c.detail = "max |B - B0| " + sci(worst) + " over " + std::to_string(count) + " converged runs";
    emit(c);
  }

  // 5: interface conditions
  {
    CriterionResult c{5, "contact interface conditions", false, pair_fail};
    if (pair_ok) {
      const auto& d0 = *coarse.res.diagnostics;
      const auto& d1 = *fine.res.diagnostics;
      const double rp = d0.interface_pressure_trace / d1.interface_pressure_trace;
      const double rn = d0.interface_normal_trace / d1.interface_normal_trace;
      c.passed = rp >= 3.0 && rn >= 3.0 && d1.interface_pressure_trace < 1e-4 &&
                 d1.interface_normal_trace < 1e-4;
      c.detail = "|p - p0| " + sci(d0.interface_pressure_trace) + " -> " +
                 sci(d1.interface_pressure_trace) + " (order " + sci(std::log2(rp)) + "), |u.n| " +
                 sci(d0.interface_normal_trace) + " -> " + sci(d1.interface_normal_trace) +
                 " (order " + sci(std::log2(rn)) + ")";
    }
    emit(c);
  }

  // 6: transport along traced streamlines
  {
    CriterionResult c{6, "streamline transport oracle", false, pair_fail};
    if (pair_ok) {
      try {
        const double e0 = streamline_transport_error(coarse);
        const double e1 = streamline_transport_error(fine);
        const double ratio = e0 / e1;
        c.passed = ratio >= 3.0 && ratio <= 5.5 && e1 <= 1e-5;
        c.detail = "error " + sci(e0) + " -> " + sci(e1) + ", ratio " + sci(ratio);
      } catch (const SolverError& e) {
        c.detail = std::string("streamline tracing failed: ") + e.what();
      }
    }
    emit(c);
  }

  // 7: extension operator
  {
    CriterionResult c{7, "extension operator", false, {}};
    double moment = 0.0;
    for (int m = 0; m <= 2; ++m) moment = std::max(moment, std::abs(extension_moment(m) - 1.0));
    c.detail = "moment error " + sci(moment);
    if (!pair_ok) {
      c.detail += "; " + pair_fail;
    } else {
      const ExtensionJumps j0 = extension_jumps(coarse), j1 = extension_jumps(fine);
      const double rv = j0.value / j1.value, rs = j0.slope / j1.slope;
      c.passed = moment <= 1e-12 && rv >= 3.0 && rs >= 3.0;
      c.detail += ", value jump " + sci(j0.value) + " -> " + sci(j1.value) + ", slope jump " +
                  sci(j0.slope) + " -> " + sci(j1.slope);
    }
    emit(c);
  }

  // far-field runs: L = 10 with ten windows
  auto farfield = [](double amp_nu) {
    ProblemSpec p = reference_problem(1e-3, 10.0, 160, 32);
    p.profile.amp_nu = amp_nu;
    return run(p);
  };
  auto fut_noswirl = std::async(std::launch::async, farfield, 0.0);
  const Run swirl = farfield(1.0);
  const Run noswirl = fut_noswirl.get();

  // 8: zero swirl
  {
    CriterionResult c{8, "zero-swirl homogenization", false, run_label(noswirl)};
    if (noswirl.ok()) {
      const auto& d = *noswirl.res.diagnostics;
      const double first = d.windows.front().pressure_deviation;
      const double last = d.windows.back().pressure_deviation;
      c.passed = d.max_abs_Lambda <= 1e-12 && last <= 0.25 * first;
      c.detail = "max |Lambda| " + sci(d.max_abs_Lambda) + ", |p - p0| window " + sci(first) +
                 " -> " + sci(last) + " (" + sci(last / first) + " of first)";
    }
    emit(c);
  }

  // 9: far-field balance
  {
    CriterionResult c{9, "far-field balance", false, run_label(swirl)};
    if (swirl.ok()) {
      const auto& d = *swirl.res.diagnostics;
      const WindowStats& a = d.windows.front();
      const WindowStats& b = d.windows.back();
      c.passed = b.ur_c1 <= 0.25 * a.ur_c1 && b.radial_balance <= 0.25 * a.radial_balance;
      c.detail = "u_r C1 " + sci(a.ur_c1) + " -> " + sci(b.ur_c1) + ", radial balance " +
                 sci(a.radial_balance) + " -> " + sci(b.radial_balance) + " (" +
                 sci(b.radial_balance / a.radial_balance) + " of first)";
    }
    emit(c);
  }

  // 10: elliptic correctness
  {
    CriterionResult c{10, "elliptic correctness", false, {}};
    const std::vector<int> sizes{16, 32, 64, 128};
    const ConvergenceStudy phi = manufactured_phi_study(sizes);
    const ConvergenceStudy psi = manufactured_psi_study(sizes);
    const double ode = radial_ode_oracle_error(64);
    c.passed = phi.min_order() >= 1.9 && psi.min_order() >= 1.9 && ode <= 1e-6;
    c.detail = "phi min order " + sci(phi.min_order()) + ", psi min order " +
               sci(psi.min_order()) + ", radial ODE error " + sci(ode);
    emit(c);
  }

  // 11: failure honesty
  {
    CriterionResult c{11, "failure honesty", false, {}};
    ProblemSpec p = reference_problem(0.5, 10.0, 64, 64);
    p.solver.max_wall_seconds = 60.0;
    const auto t_fail = std::chrono::steady_clock::now();
    const SolveResult r = solve_full(p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_fail).count();
    const std::string& ec = r.report.error_class;
    const bool divergence =
        ec == "inner_divergence" || ec == "middle_divergence" || ec == "outer_divergence";
    const bool partial = r.report.outer.iterations() + r.report.inner_solves > 0;
    c.passed = divergence && partial && !r.report.converged && r.report.exit_code != 0 &&
               secs <= p.solver.max_wall_seconds;
    c.detail = "error " + (ec.empty() ? std::string("none") : ec) +
               (r.report.error_cause.empty() ? "" : " (cause " + r.report.error_cause + ")") +
               ", exit code " + std::to_string(r.report.exit_code) + ", " + sci(secs) + " s";
    emit(c);
  }

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

}  // namespace axicd
