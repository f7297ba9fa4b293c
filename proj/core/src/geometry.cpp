#include "axicd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "axicd/errors.hpp"
#include "axicd/interp.hpp"

namespace axicd {

ReferenceGrid build_reference_grid(double L, int nx, int nr) {
  if (!(L > 0.0)) fail(ErrorClass::geometry, "grid: L must be positive");
  if (nx < 16 || nr < 16) {
    std::ostringstream os;
    os << "grid: nx and nr must be >= 16 (got " << nx << "x" << nr << ")";
    fail(ErrorClass::geometry, os.str());
  }
  ReferenceGrid g;
  g.L = L;
  g.nx = nx;
  g.nr = nr;
  g.hxi = 1.0 / nx;
  g.heta = 1.0 / nr;
  return g;
}

double Field2D::max_abs() const {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

double max_abs_diff(const Field2D& a, const Field2D& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.v.size(); ++k) m = std::max(m, std::abs(a.v[k] - b.v[k]));
  return m;
}

FreeBoundaryCurve::FreeBoundaryCurve(double L, std::vector<double> samples)
    : L_(L), f_(std::move(samples)) {
  const int n = static_cast<int>(f_.size()) - 1;
  if (n < 2) fail(ErrorClass::geometry, "free boundary needs at least 3 samples");
  const double h = L_ / n;
  fp_.assign(f_.size(), 0.0);
  fpp_.assign(f_.size(), 0.0);
  for (int i = 1; i < n; ++i) {
    fp_[i] = (f_[i + 1] - f_[i - 1]) / (2 * h);
    fpp_[i] = (f_[i + 1] - 2 * f_[i] + f_[i - 1]) / (h * h);
  }
  raw_entry_ = (-3 * f_[0] + 4 * f_[1] - f_[2]) / (2 * h);
  raw_exit_ = (3 * f_[n] - 4 * f_[n - 1] + f_[n - 2]) / (2 * h);
  fp_[0] = 0.0;
  fp_[n] = 0.0;
  // even reflection about the ends, consistent with the clamped slopes
  fpp_[0] = 2 * (f_[1] - f_[0]) / (h * h);
  fpp_[n] = 2 * (f_[n - 1] - f_[n]) / (h * h);
}

FreeBoundaryCurve FreeBoundaryCurve::flat(double L, int nx, double value) {
  return FreeBoundaryCurve(L, std::vector<double>(static_cast<std::size_t>(nx) + 1, value));
}

double FreeBoundaryCurve::at(double x) const {
  return lagrange4_uniform(f_.data(), static_cast<int>(f_.size()), h(), std::clamp(x, 0.0, L_));
}

double FreeBoundaryCurve::slope_at(double x) const {
  const double s = std::clamp(x, 0.0, L_) / h();
  const int i = std::min(static_cast<int>(s), nx() - 1);
  const double t = s - i;
  return (1 - t) * fp_[i] + t * fp_[i + 1];
}

void FreeBoundaryCurve::check_band() const {
  for (std::size_t i = 0; i < f_.size(); ++i) {
    if (!(f_[i] >= 0.375 && f_[i] <= 0.625)) {
      std::ostringstream os;
      os << "free boundary left the band [3/8, 5/8]: f(" << (i * h()) << ") = " << f_[i];
      fail(ErrorClass::geometry, os.str());
    }
  }
  if (f_[0] != 0.5) fail(ErrorClass::geometry, "free boundary must be anchored at f(0) = 1/2");
}

Geometry metric_coefficients(const FreeBoundaryCurve& f, const ReferenceGrid& grid) {
  if (f.nx() != grid.nx) fail(ErrorClass::geometry, "free boundary and grid sizes differ");
  f.check_band();
  Geometry geo;
  geo.grid = grid;
  geo.f = f;
  const std::size_t n = static_cast<std::size_t>(grid.nodes());
  geo.r.resize(n);
  geo.alpha.resize(n);
  geo.jacobian.resize(n);
  geo.inv_f.resize(static_cast<std::size_t>(grid.nx) + 1);
  for (int i = 0; i <= grid.nx; ++i) {
    const double fi = f[i];
    geo.inv_f[i] = 1.0 / fi;
    for (int j = 0; j <= grid.nr; ++j) {
      const std::size_t k = static_cast<std::size_t>(grid.index(i, j));
      const double eta = grid.eta(j);
      geo.r[k] = eta * fi;
      geo.alpha[k] = -eta * f.slope(i) / fi;
      geo.jacobian[k] = geo.r[k] * fi;
    }
  }
  return geo;
}

BoundaryFrame boundary_frames(const FreeBoundaryCurve& f) {
  BoundaryFrame b;
  const int n = f.nx();
  b.tau_x.resize(n + 1);
  b.tau_r.resize(n + 1);
  b.n_x.resize(n + 1);
  b.n_r.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = f.slope(i);
    const double w = 1.0 / std::sqrt(1.0 + s * s);
    b.tau_x[i] = w;
    b.tau_r[i] = s * w;
    b.n_x[i] = -s * w;
    b.n_r[i] = w;
  }
  return b;
}

// One-sided ends: central difference with a cubically extrapolated ghost
// node. Its leading truncation term equals the interior one, so derived
// quantities stay smooth up to the boundary.
double d_xi(const Field2D& F, const ReferenceGrid& g, int i, int j, XEnd end) {
  const double h = g.hxi;
  if (i == 0) {
    if (end == XEnd::even) return 0.0;
    return (-4 * F(0, j) + 7 * F(1, j) - 4 * F(2, j) + F(3, j)) / (2 * h);
  }
  if (i == g.nx) {
    if (end == XEnd::even) return 0.0;
    return (4 * F(i, j) - 7 * F(i - 1, j) + 4 * F(i - 2, j) - F(i - 3, j)) / (2 * h);
  }
  return (F(i + 1, j) - F(i - 1, j)) / (2 * h);
}

double d_eta(const Field2D& F, const ReferenceGrid& g, int i, int j) {
  const double h = g.heta;
  if (j == 0) return F.axis == AxisKind::even ? 0.0 : F(i, 1) / h;  // odd ghost
  if (j == g.nr)
    return (4 * F(i, j) - 7 * F(i, j - 1) + 4 * F(i, j - 2) - F(i, j - 3)) / (2 * h);
  return (F(i, j + 1) - F(i, j - 1)) / (2 * h);
}

Gradient gradient(const Field2D& F, const Geometry& geo, XEnd end) {
  const ReferenceGrid& g = geo.grid;
  Gradient G{Field2D(g, AxisKind::even), Field2D(g, AxisKind::even)};
  G.dr.axis = F.axis == AxisKind::even ? AxisKind::odd : AxisKind::even;
  G.dx.axis = F.axis;
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.nr; ++j) {
      const double de = d_eta(F, g, i, j);
      G.dx(i, j) = d_xi(F, g, i, j, end) / g.L + geo.alpha_at(i, j) * de;
      G.dr(i, j) = de * geo.inv_f[i];
    }
  }
  return G;
}

double meridional_integral(const Field2D& F, const Geometry& geo) {
  const ReferenceGrid& g = geo.grid;
  double acc = 0.0;
  for (int i = 0; i <= g.nx; ++i) {
    const double wi = (i == 0 || i == g.nx) ? 0.5 : 1.0;
    for (int j = 0; j <= g.nr; ++j) {
      const double wj = (j == 0 || j == g.nr) ? 0.5 : 1.0;
      acc += wi * wj * F(i, j) * geo.jacobian[static_cast<std::size_t>(g.index(i, j))];
    }
  }
  return acc * g.hxi * g.heta * g.L;
}

}  // namespace axicd
