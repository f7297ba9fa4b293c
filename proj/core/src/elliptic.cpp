#include "axicd/elliptic.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

#include "axicd/errors.hpp"

namespace axicd {

LinearizationCoefficients assemble_linearization_aii(const GasModel& gm) {
  const double rho = gm.gas.rho0_minus, u0 = gm.gas.u0, c0 = gm.bg.c0;
  LinearizationCoefficients a;
  a.a11 = rho * (1.0 - u0 * u0 / (c0 * c0));
  a.a22 = rho;
  a.a33 = rho;
  if (!(a.a11 > 1e-8 * rho)) {
    std::ostringstream os;
    os << "linearization degenerate: a11 = " << a.a11 << " (u0 too close to c0)";
    fail(ErrorClass::ellipticity, os.str());
  }
  return a;
}

namespace {

struct DensityPartials {
  double H, dS, dq[3];
};

DensityPartials density_partials(const GasModel& gm, double S, const double q[3]) {
  const double g = gm.gas.gamma;
  const double q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
  const double H = gm.density(S, q2);
  const double E = gm.bg.B0_minus - 0.5 * q2;
  DensityPartials d;
  d.H = H;
  d.dS = -H / ((g - 1.0) * S);
  for (int k = 0; k < 3; ++k) d.dq[k] = -H * q[k] / ((g - 1.0) * E);
  return d;
}

}  // namespace

std::array<double, 3> remainder_flux(const GasModel& gm, const LinearizationCoefficients& a,
                                     double S, const std::array<double, 3>& ds,
                                     const std::array<double, 3>& v) {
  using GL = boost::math::quadrature::gauss<double, 4>;
  const double S0 = gm.bg.S0_minus;
  const double dS = S - S0;
  const double s0[3] = {gm.gas.u0, 0.0, 0.0};
  const double aii[3] = {a.a11, a.a22, a.a33};

  std::array<double, 3> F{};
  {
    const double q[3] = {s0[0] + ds[0] + v[0], ds[1] + v[1], ds[2] + v[2]};
    const double q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
    const double H = gm.density(S, q2);
    for (int i = 0; i < 3; ++i) F[i] = -H * v[i];
  }
  const auto& xs = GL::abscissa();
  const auto& ws = GL::weights();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    for (int side = -1; side <= 1; side += 2) {
      if (xs[k] == 0.0 && side == 1) continue;
      const double tau = 0.5 * (1.0 + side * xs[k]);
      const double w = 0.5 * ws[k];
      const double St = S0 + tau * dS;
      const double s[3] = {s0[0] + tau * ds[0], s0[1] + tau * ds[1], s0[2] + tau * ds[2]};
      const double q[3] = {s[0] + tau * v[0], s[1] + tau * v[1], s[2] + tau * v[2]};
      const DensityPartials d = density_partials(gm, St, q);
      const double dqv = d.dq[0] * v[0] + d.dq[1] * v[1] + d.dq[2] * v[2];
      for (int i = 0; i < 3; ++i) {
        // entropy and transversal directions of the flux derivative
        double acc = s[i] * (d.dS * dS + dqv);
        // gradient direction, minus its value at the background
        for (int j = 0; j < 3; ++j) {
          const double dA = (i == j ? d.H : 0.0) + s[i] * d.dq[j] - (i == j ? aii[i] : 0.0);
          acc += ds[j] * dA;
        }
        F[i] -= w * acc;
      }
    }
  }
  return F;
}

std::array<double, 3> remainder_flux_closed(const GasModel& gm, const LinearizationCoefficients& a,
                                            double S, const std::array<double, 3>& ds,
                                            const std::array<double, 3>& v) {
  const double q[3] = {gm.gas.u0 + ds[0] + v[0], ds[1] + v[1], ds[2] + v[2]};
  const double q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
  const double H = gm.density(S, q2);
  const double m0 = gm.gas.rho0_minus * gm.gas.u0;
  return {a.a11 * ds[0] - (H * q[0] - m0), a.a22 * ds[1] - H * q[1], a.a33 * ds[2] - H * q[2]};
}

VelocityField reconstruct_velocity(const GasModel& gm, const Geometry& geo, const Field2D& phi_corr,
                                   const Field2D& psi, const Field2D& Lambda) {
  const ReferenceGrid& g = geo.grid;
  const Gradient gphi = gradient(phi_corr, geo, XEnd::one_sided);
  const Gradient gpsi = gradient(psi, geo, XEnd::even);
  VelocityField u{Field2D(g, AxisKind::even), Field2D(g, AxisKind::odd),
                  Field2D(g, AxisKind::odd)};
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.nr; ++j) {
      const double r = geo.radius(i, j);
      if (j == 0) {
        u.ux(i, j) = gm.gas.u0 + gphi.dx(i, j) + 2.0 * gpsi.dr(i, j);
        u.ur(i, j) = 0.0;
        u.uth(i, j) = 0.0;
      } else {
        u.ux(i, j) = gm.gas.u0 + gphi.dx(i, j) + gpsi.dr(i, j) + psi(i, j) / r;
        u.ur(i, j) = gphi.dr(i, j) - gpsi.dx(i, j);
        u.uth(i, j) = Lambda(i, j) / r;
      }
    }
  }
  return u;
}

FluxField assemble_flux_F(const GasModel& gm, const LinearizationCoefficients& a,
                          const Geometry& geo, const Field2D& S, const Field2D& phi_corr,
                          const Field2D& psi, const Field2D& Lambda) {
  const ReferenceGrid& g = geo.grid;
  const Gradient gphi = gradient(phi_corr, geo, XEnd::one_sided);
  const Gradient gpsi = gradient(psi, geo, XEnd::even);
  FluxField F{Field2D(g, AxisKind::even), Field2D(g, AxisKind::odd)};
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.nr; ++j) {
      const double r = geo.radius(i, j);
      std::array<double, 3> ds{gphi.dx(i, j), j == 0 ? 0.0 : gphi.dr(i, j), 0.0};
      std::array<double, 3> v{};
      if (j == 0) {
        v = {2.0 * gpsi.dr(i, j), 0.0, 0.0};
      } else {
        v = {gpsi.dr(i, j) + psi(i, j) / r, -gpsi.dx(i, j), Lambda(i, j) / r};
      }
      std::array<double, 3> Fi;
      try {
        Fi = remainder_flux(gm, a, S(i, j), ds, v);
      } catch (const SolverError& e) {
        std::ostringstream os;
        os << e.what() << " at node (x=" << geo.x(i) << ", r=" << r << ")";
        throw SolverError(e.error_class(), os.str());
      }
      F.Fx(i, j) = Fi[0];
      F.Fr(i, j) = j == 0 ? 0.0 : Fi[1];
    }
  }
  return F;
}

Field2D flux_divergence(const FluxField& F, const Geometry& geo) {
  const ReferenceGrid& g = geo.grid;
  Field2D d(g, AxisKind::even);
  for (int i = 1; i < g.nx; ++i) {
    const double invf = geo.inv_f[i];
    for (int j = 0; j < g.nr; ++j) {
      const double dFx = d_xi(F.Fx, g, i, j, XEnd::one_sided) / g.L;
      if (j == 0) {
        d(i, j) = dFx + 2.0 * d_eta(F.Fr, g, i, j) * invf;
      } else {
        d(i, j) = dFx + geo.alpha_at(i, j) * d_eta(F.Fx, g, i, j) + d_eta(F.Fr, g, i, j) * invf +
                  F.Fr(i, j) / geo.radius(i, j);
      }
    }
  }
  return d;
}

Field2D assemble_source_G(const GasModel& gm, const Geometry& geo, const Field2D& S,
                          const Field2D& Lambda, const Field2D& dr_S, const Field2D& dr_Lambda,
                          const VelocityField& q) {
  const ReferenceGrid& g = geo.grid;
  const double gam = gm.gas.gamma;
  Field2D G(g, AxisKind::odd);
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.nr; ++j) {
      const double ux = q.ux(i, j);
      if (!(ux >= 0.5 * gm.gas.u0)) {
        std::ostringstream os;
        os << "axial velocity floor violated: u_x = " << ux << " at (x=" << geo.x(i)
           << ", r=" << geo.radius(i, j) << ")";
        fail(ErrorClass::transport_degeneracy, os.str());
      }
      if (j == 0) continue;
      const double r = geo.radius(i, j);
      const VelocityTriple u{ux, q.ur(i, j), q.uth(i, j)};
      const double rho = gm.density(S(i, j), u.norm2());
      const double swirl = Lambda(i, j) / r;  // Lambda / r^2 = swirl / r
      G(i, j) = (std::pow(rho, gam - 1.0) / (gam - 1.0) * dr_S(i, j) +
                 swirl * dr_Lambda(i, j) / r) / ux;
    }
  }
  return G;
}

// ---------------------------------------------------------------------------

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

struct RowBuilder {
  Triplets& t;
  int row;
  const ReferenceGrid& g;
  double scale;
  void add(int i, int j, double c) {
    if (c != 0.0) t.emplace_back(row, g.index(i, j), c * scale);
  }
};

// Metric pieces of the pulled-back second-order operator
// cxx d_xixi + cee d_etaeta + cxe d_xieta + ce d_eta.
struct Coeffs {
  double cxx, cee, cxe, ce;
};

Coeffs interior_coeffs(const Geometry& geo, int i, int j, double ax, double ar) {
  const ReferenceGrid& g = geo.grid;
  const double f = geo.f[i], fp = geo.f.slope(i), fpp = geo.f.curvature(i);
  const double eta = g.eta(j);
  const double gg = fp / f;
  const double gp = fpp / f - gg * gg;
  const double alpha = -eta * gg;
  Coeffs c;
  c.cxx = ax / (g.L * g.L);
  c.cee = ax * alpha * alpha + ar / (f * f);
  c.cxe = 2.0 * ax * alpha / g.L;
  c.ce = ax * eta * (gg * gg - gp) + ar / (eta * f * f);
  return c;
}

// Adds c * d_xieta with the sign-adaptive seven-point stencil.
void add_mixed(RowBuilder& b, int i, int j, double c, double hx, double he) {
  if (c == 0.0) return;
  const double w = std::abs(c) / (2.0 * hx * he);
  if (c > 0) {
    b.add(i + 1, j + 1, w);
    b.add(i - 1, j - 1, w);
  } else {
    b.add(i + 1, j - 1, w);
    b.add(i - 1, j + 1, w);
  }
  b.add(i + 1, j, -w);
  b.add(i - 1, j, -w);
  b.add(i, j + 1, -w);
  b.add(i, j - 1, -w);
  b.add(i, j, 2 * w);
}

struct Factorized {
  ReferenceGrid grid;
  SpMat A;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  mutable double residual = 0.0;

  void factorize(const Triplets& t, const char* what) {
    A.resize(grid.nodes(), grid.nodes());
    A.setFromTriplets(t.begin(), t.end());
    A.makeCompressed();
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
      fail(ErrorClass::linear_solver, std::string(what) + ": factorization failed (" +
                                          lu.lastErrorMessage() + ")");
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b, const char* what) const {
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) fail(ErrorClass::linear_solver, std::string(what) + ": solve failed");
    const double bn = std::max(b.lpNorm<Eigen::Infinity>(), 1e-300);
    residual = (A * x - b).lpNorm<Eigen::Infinity>() / bn;
    if (!(residual <= 1e-9) && b.lpNorm<Eigen::Infinity>() > 0.0) {
      std::ostringstream os;
      os << what << ": relative residual " << residual << " above tolerance";
      fail(ErrorClass::linear_solver, os.str());
    }
    if (!x.allFinite()) fail(ErrorClass::linear_solver, std::string(what) + ": non-finite solution");
    return x;
  }
};

}  // namespace

struct PhiSolver::Impl : Factorized {
  double scale = 1.0;
};

PhiSolver::PhiSolver(const LinearizationCoefficients& a, const Geometry& geo)
    : impl_(std::make_shared<Impl>()) {
  const ReferenceGrid& g = geo.grid;
  impl_->grid = g;
  const double hx = g.hxi, he = g.heta;
  impl_->scale = he * he;
  Triplets t;
  t.reserve(static_cast<std::size_t>(g.nodes()) * 10);
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.nr; ++j) {
      const int row = g.index(i, j);
      if (i == 0 || i == g.nx || j == g.nr) {
        t.emplace_back(row, row, 1.0);
        continue;
      }
      RowBuilder b{t, row, g, impl_->scale};
      const double f = geo.f[i];
      const double cxx = a.a11 / (g.L * g.L);
      b.add(i + 1, j, cxx / (hx * hx));
      b.add(i - 1, j, cxx / (hx * hx));
      b.add(i, j, -2.0 * cxx / (hx * hx));
      if (j == 0) {
        // axis: (1/r) d_r -> d_rr, even ghost across r = 0
        const double c = 2.0 * a.a22 / (f * f) * 2.0 / (he * he);
        b.add(i, 1, c);
        b.add(i, 0, -c);
        continue;
      }
      const Coeffs c = interior_coeffs(geo, i, j, a.a11, a.a22);
      b.add(i, j + 1, c.cee / (he * he) + c.ce / (2 * he));
      b.add(i, j - 1, c.cee / (he * he) - c.ce / (2 * he));
      b.add(i, j, -2.0 * c.cee / (he * he));
      add_mixed(b, i, j, c.cxe, hx, he);
    }
  }
  impl_->factorize(t, "potential solve");
}

Field2D PhiSolver::solve(const Field2D& rhs, const std::vector<double>& entrance) const {
  const ReferenceGrid& g = impl_->grid;
  if (static_cast<int>(entrance.size()) != g.nr + 1)
    fail(ErrorClass::internal_consistency, "potential solve: entrance data size mismatch");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(g.nodes());
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.nr; ++j) {
      const int row = g.index(i, j);
      if (i == 0) b[row] = entrance[static_cast<std::size_t>(j)];
      else if (i == g.nx || j == g.nr) b[row] = 0.0;
      else b[row] = rhs(i, j) * impl_->scale;
    }
  }
  const Eigen::VectorXd x = impl_->solve(b, "potential solve");
  Field2D out(g, AxisKind::even);
  for (int k = 0; k < g.nodes(); ++k) out.v[static_cast<std::size_t>(k)] = x[k];
  return out;
}

double PhiSolver::last_relative_residual() const { return impl_->residual; }

struct PsiSolver::Impl : Factorized {
  double scale = 1.0;
  std::vector<double> robin_weight;  // sqrt(1 + f'^2) per column
};

PsiSolver::PsiSolver(const Geometry& geo) : impl_(std::make_shared<Impl>()) {
  const ReferenceGrid& g = geo.grid;
  impl_->grid = g;
  const double hx = g.hxi, he = g.heta;
  impl_->scale = he * he;
  impl_->robin_weight.resize(static_cast<std::size_t>(g.nx) + 1);
  Triplets t;
  t.reserve(static_cast<std::size_t>(g.nodes()) * 10);
  for (int i = 0; i <= g.nx; ++i) {
    const double f = geo.f[i], fp = geo.f.slope(i);
    impl_->robin_weight[i] = std::sqrt(1.0 + fp * fp);
    for (int j = 0; j <= g.nr; ++j) {
      const int row = g.index(i, j);
      if (j == 0) {
        t.emplace_back(row, row, 1.0);
        continue;
      }
      if (j == g.nr) {
        // -f' psi_xi / L + (1 + f'^2)/f psi_eta + psi / f = B sqrt(1 + f'^2)
        RowBuilder b{t, row, g, he};
        if (i > 0 && i < g.nx && fp != 0.0) {
          b.add(i + 1, j, -fp / (g.L * 2 * hx));
          b.add(i - 1, j, fp / (g.L * 2 * hx));
        }
        const double ce = (1.0 + fp * fp) / f;
        b.add(i, j, 4.0 * ce / (2 * he) + 1.0 / f);
        b.add(i, j - 1, -7.0 * ce / (2 * he));
        b.add(i, j - 2, 4.0 * ce / (2 * he));
        b.add(i, j - 3, -ce / (2 * he));
        continue;
      }
      // rows carry the negated operator
      RowBuilder b{t, row, g, -impl_->scale};
      const Coeffs c = interior_coeffs(geo, i, j, 1.0, 1.0);
      const double cx = c.cxx / (hx * hx);
      if (i == 0) {
        b.add(1, j, 2 * cx);
        b.add(0, j, -2 * cx);
      } else if (i == g.nx) {
        b.add(i - 1, j, 2 * cx);
        b.add(i, j, -2 * cx);
      } else {
        b.add(i + 1, j, cx);
        b.add(i - 1, j, cx);
        b.add(i, j, -2 * cx);
        add_mixed(b, i, j, c.cxe, hx, he);
      }
      // radial part d_r((1/r) d_r(r psi)) in flux form, which keeps the
      // truncation error bounded next to the axis; the metric remainder
      // uses central differences
      const double f2 = f * f;
      const double rem_ee = c.cee - 1.0 / f2;
      const double rem_e = c.ce - 1.0 / (g.eta(j) * f2);
      const double jp = j + 0.5, jm = j - 0.5;
      const double rad = 1.0 / (f2 * he * he);
      b.add(i, j + 1, rad * (j + 1) / jp + rem_ee / (he * he) + rem_e / (2 * he));
      b.add(i, j - 1, rad * (j - 1) / jm + rem_ee / (he * he) - rem_e / (2 * he));
      b.add(i, j, -rad * j * (1.0 / jp + 1.0 / jm) - 2.0 * rem_ee / (he * he));
    }
  }
  impl_->factorize(t, "stream solve");
}

Field2D PsiSolver::solve(const Field2D& source, const std::vector<double>& robin) const {
  const ReferenceGrid& g = impl_->grid;
  if (static_cast<int>(robin.size()) != g.nx + 1)
    fail(ErrorClass::internal_consistency, "stream solve: Robin data size mismatch");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(g.nodes());
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 1; j <= g.nr; ++j) {
      const int row = g.index(i, j);
      if (j == g.nr) b[row] = robin[static_cast<std::size_t>(i)] * impl_->robin_weight[i] * g.heta;
      else b[row] = source(i, j) * impl_->scale;
    }
  }
  const Eigen::VectorXd x = impl_->solve(b, "stream solve");
  Field2D out(g, AxisKind::odd);
  for (int k = 0; k < g.nodes(); ++k) out.v[static_cast<std::size_t>(k)] = x[k];
  for (int i = 0; i <= g.nx; ++i) out(i, 0) = 0.0;
  return out;
}

double PsiSolver::last_relative_residual() const { return impl_->residual; }

Field2D solve_phi(const FluxField& F, const std::vector<double>& entrance,
                  const LinearizationCoefficients& a, const Geometry& geo) {
  return PhiSolver(a, geo).solve(flux_divergence(F, geo), entrance);
}

Field2D solve_psi(const Field2D& source, const std::vector<double>& robin, const Geometry& geo) {
  return PsiSolver(geo).solve(source, robin);
}

}  // namespace axicd
