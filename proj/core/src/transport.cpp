#include "axicd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "axicd/errors.hpp"

namespace axicd {

namespace {

void check_floor(const Field2D& rho_ux, const Geometry& geo, double floor) {
  const ReferenceGrid& g = geo.grid;
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.nr; ++j)
      if (!(rho_ux(i, j) >= floor)) {
        std::ostringstream os;
        os << "mass-flux floor violated: rho u_x = " << rho_ux(i, j) << " < " << floor
           << " at (x=" << geo.x(i) << ", r=" << geo.radius(i, j) << ")";
        fail(ErrorClass::transport_degeneracy, os.str());
      }
}

// Cumulative integral of samples v on a uniform grid of spacing h.
void cumulative(const double* v, int n, double h, Quadrature rule, double* out) {
  out[0] = 0.0;
  if (rule == Quadrature::trapezoid) {
    for (int j = 1; j <= n; ++j) out[j] = out[j - 1] + 0.5 * h * (v[j - 1] + v[j]);
    return;
  }
  for (int j = 1; j <= n; ++j) {
    if (j % 2 == 0) {
      out[j] = out[j - 2] + h / 3.0 * (v[j - 2] + 4 * v[j - 1] + v[j]);
    } else if (j == 1) {
      out[j] = h / 12.0 * (5 * v[0] + 8 * v[1] - v[2]);
    } else {
      out[j] = out[j - 3] + 3.0 * h / 8.0 * (v[j - 3] + 3 * v[j - 2] + 3 * v[j - 1] + v[j]);
    }
  }
}

}  // namespace

Field2D compute_stream_h(const Field2D& rho_ux, const Geometry& geo, double flux_floor,
                         Quadrature rule) {
  check_floor(rho_ux, geo, flux_floor);
  const ReferenceGrid& g = geo.grid;
  Field2D w(g, AxisKind::even);
  std::vector<double> integrand(static_cast<std::size_t>(g.nr) + 1), acc(integrand.size());
  for (int i = 0; i <= g.nx; ++i) {
    const double f = geo.f[i];
    for (int j = 0; j <= g.nr; ++j) integrand[j] = f * f * g.eta(j) * rho_ux(i, j);
    cumulative(integrand.data(), g.nr, g.heta, rule, acc.data());
    for (int j = 0; j <= g.nr; ++j) w(i, j) = acc[j];
  }
  return w;
}

std::vector<double> column_flux(const Field2D& rho_ux, const Geometry& geo, Quadrature rule) {
  const ReferenceGrid& g = geo.grid;
  std::vector<double> out(static_cast<std::size_t>(g.nx) + 1);
  std::vector<double> integrand(static_cast<std::size_t>(g.nr) + 1), acc(integrand.size());
  for (int i = 0; i <= g.nx; ++i) {
    const double f = geo.f[i];
    for (int j = 0; j <= g.nr; ++j) integrand[j] = f * f * g.eta(j) * rho_ux(i, j);
    cumulative(integrand.data(), g.nr, g.heta, rule, acc.data());
    out[i] = acc[g.nr];
  }
  return out;
}

EntranceFluxMap::EntranceFluxMap(const std::vector<double>& r, const std::vector<double>& w) {
  std::vector<double> s(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) s[k] = r[k] * r[k];
  try {
    map_ = MonotoneCubic(std::move(s), w);
  } catch (const std::invalid_argument& e) {
    fail(ErrorClass::transport_degeneracy, std::string("entrance flux map: ") + e.what());
  }
  if (w.front() != 0.0 || !map_.strictly_increasing())
    fail(ErrorClass::transport_degeneracy,
         "entrance flux map is not strictly increasing (sign change of rho u_x at the entrance)");
  r_max_ = r.back();
}

double EntranceFluxMap::inverse(double w) const {
  if (w <= 0.0) return 0.0;
  return std::sqrt(map_.inverse(w));
}

EntranceFluxMap build_entrance_flux_map(const Field2D& w, const Geometry& geo) {
  const ReferenceGrid& g = geo.grid;
  std::vector<double> r(static_cast<std::size_t>(g.nr) + 1), col(r.size());
  for (int j = 0; j <= g.nr; ++j) {
    r[j] = geo.radius(0, j);
    col[j] = w(0, j);
  }
  return EntranceFluxMap(r, col);
}

Field2D compute_footpoint_R0(const Field2D& w, const EntranceFluxMap& map, const Geometry& geo,
                             double rel_tol, double* clamped_excess) {
  const ReferenceGrid& g = geo.grid;
  const double total = map.total();
  double worst = 0.0;
  Field2D R0(g, AxisKind::odd);
  const double lo = 1.0 / std::sqrt(3.0), hi = std::sqrt(3.0);
  for (int i = 0; i <= g.nx; ++i) {
    for (int j = 0; j <= g.nr; ++j) {
      double wv = w(i, j);
      if (wv > total) {
        const double excess = (wv - total) / total;
        if (excess > rel_tol) {
          std::ostringstream os;
          os << "stream function exceeds the entrance flux by " << excess << " (relative) at x="
             << geo.x(i);
          fail(ErrorClass::flux_imbalance, os.str());
        }
        worst = std::max(worst, excess);
        wv = total;
      }
      const double R = (i == 0) ? geo.radius(0, j) : map.inverse(wv);
      R0(i, j) = R;
      if (j > 0) {
        const double ratio = R / geo.radius(i, j);
        if (!(ratio >= lo && ratio <= hi)) {
          std::ostringstream os;
          os << "footpoint ratio R0/r = " << ratio << " outside [1/sqrt3, sqrt3] at (x="
             << geo.x(i) << ", r=" << geo.radius(i, j) << ")";
          fail(ErrorClass::transport_degeneracy, os.str());
        }
      }
    }
  }
  if (clamped_excess) *clamped_excess = worst;
  return R0;
}

TransportedFields transport_SLambda(const EntranceProfile& p, const Field2D& R0) {
  TransportedFields W{Field2D(), Field2D()};
  W.S = R0;
  W.S.axis = AxisKind::even;
  W.Lambda = R0;
  W.Lambda.axis = AxisKind::even;
  for (std::size_t k = 0; k < R0.v.size(); ++k) {
    const double R = R0.v[k];
    W.S.v[k] = p.S_en(R);
    W.Lambda.v[k] = R * p.nu_en(R);
  }
  return W;
}

Field2D swirl_velocity(const Field2D& R0, const EntranceProfile& p, const Geometry& geo) {
  const ReferenceGrid& g = geo.grid;
  Field2D V(g, AxisKind::odd);
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 1; j <= g.nr; ++j) {
      const double R = R0(i, j);
      V(i, j) = R / geo.radius(i, j) * p.nu_en(R);
    }
  return V;
}

// ---------------------------------------------------------------------------

StripField::StripField(std::vector<double> f, int nr)
    : f_(std::move(f)), nr_(nr),
      S_(f_.size() * static_cast<std::size_t>(2 * nr + 1), 0.0),
      L_(f_.size() * static_cast<std::size_t>(2 * nr + 1), 0.0) {}

double StripField::S_at(int i, double r) const {
  const double y = r / f_[static_cast<std::size_t>(i)];
  return lagrange4_uniform(&S_[idx(i, 0)], 2 * nr_ + 1, 1.0 / nr_, y);
}

double StripField::Lambda_at(int i, double r) const {
  const double y = r / f_[static_cast<std::size_t>(i)];
  return lagrange4_uniform(&L_[idx(i, 0)], 2 * nr_ + 1, 1.0 / nr_, y);
}

TransportedFields StripField::sample(const Geometry& geo) const {
  const ReferenceGrid& g = geo.grid;
  if (g.nx + 1 != columns() || g.nr != nr_)
    fail(ErrorClass::internal_consistency, "strip field and grid sizes differ");
  TransportedFields W{Field2D(g, AxisKind::even), Field2D(g, AxisKind::even)};
  for (int i = 0; i <= g.nx; ++i) {
    const bool same = geo.f[i] == f_[static_cast<std::size_t>(i)];
    for (int j = 0; j <= g.nr; ++j) {
      if (same) {
        W.S(i, j) = S(i, j);
        W.Lambda(i, j) = Lambda(i, j);
      } else {
        const double r = geo.radius(i, j);
        W.S(i, j) = S_at(i, r);
        W.Lambda(i, j) = j == 0 ? 0.0 : Lambda_at(i, r);
      }
    }
  }
  return W;
}

double extension_moment(int m) {
  double acc = 0.0;
  for (int k = 1; k <= 3; ++k) acc += kExtensionWeights[k - 1] * std::pow(-1.0 / k, m);
  return acc;
}

StripField extend_W(const TransportedFields& W, const Geometry& geo) {
  const ReferenceGrid& g = geo.grid;
  std::vector<double> f(static_cast<std::size_t>(g.nx) + 1);
  for (int i = 0; i <= g.nx; ++i) f[i] = geo.f[i];
  StripField out(f, g.nr);
  std::vector<double> cs(static_cast<std::size_t>(g.nr) + 1), cl(cs.size());
  for (int i = 0; i <= g.nx; ++i) {
    if (!(2.0 * f[i] >= 0.75))
      fail(ErrorClass::extension_range, "extension strip does not reach r = 3/4");
    for (int j = 0; j <= g.nr; ++j) {
      cs[j] = W.S(i, j);
      cl[j] = W.Lambda(i, j);
      out.S(i, j) = cs[j];
      out.Lambda(i, j) = cl[j];
    }
    for (int m = 1; m <= g.nr; ++m) {
      const double z = m * g.heta;  // y - 1
      double s = 0.0, l = 0.0;
      for (int k = 1; k <= 3; ++k) {
        const double y = 1.0 - z / k;
        if (y < -1e-14) fail(ErrorClass::extension_range, "reflected sample left the inner region");
        const double c = kExtensionWeights[k - 1];
        if (k == 1) {
          s += c * cs[static_cast<std::size_t>(g.nr - m)];
          l += c * cl[static_cast<std::size_t>(g.nr - m)];
        } else {
          s += c * lagrange4_uniform(cs.data(), g.nr + 1, g.heta, y);
          l += c * lagrange4_uniform(cl.data(), g.nr + 1, g.heta, y);
        }
      }
      out.S(i, g.nr + m) = s;
      out.Lambda(i, g.nr + m) = l;
    }
  }
  return out;
}

StripField initial_strip(const EntranceProfile& p, const Geometry& geo) {
  const ReferenceGrid& g = geo.grid;
  Field2D R0(g, AxisKind::odd);
  for (int i = 0; i <= g.nx; ++i)
    for (int j = 0; j <= g.nr; ++j) R0(i, j) = std::min(geo.radius(i, j), 0.5);
  return extend_W(transport_SLambda(p, R0), geo);
}

double strip_change(const StripField& a, const StripField& b, double S0, double u0) {
  double m = 0.0;
  const int K = 2 * a.nr();
  for (int i = 0; i < a.columns(); ++i)
    for (int k = 0; k <= K; ++k) {
      const double r = 0.75 * k / K;
      m = std::max(m, std::abs(a.S_at(i, r) - b.S_at(i, r)) / S0);
      m = std::max(m, std::abs(a.Lambda_at(i, r) - b.Lambda_at(i, r)) / (0.5 * u0));
    }
  return m;
}

// ---------------------------------------------------------------------------

double interpolate_field(const Field2D& F, const Geometry& geo, double x, double r) {
  const ReferenceGrid& g = geo.grid;
  const double L = g.L;
  x = std::clamp(x, 0.0, L);
  const double xi = x / L;
  const double eta = std::clamp(r / geo.f.at(x), 0.0, 1.0);
  const int i = std::min(static_cast<int>(xi / g.hxi), g.nx - 1);
  const int j = std::min(static_cast<int>(eta / g.heta), g.nr - 1);
  const double s = xi / g.hxi - i, t = eta / g.heta - j;
  return (1 - s) * (1 - t) * F(i, j) + s * (1 - t) * F(i + 1, j) + (1 - s) * t * F(i, j + 1) +
         s * t * F(i + 1, j + 1);
}

Streamline trace_streamline_oracle(const VelocityField& u, const Geometry& geo, double r_start,
                                   int steps) {
  const double L = geo.grid.L;
  const double dx = L / steps;
  auto slope = [&](double x, double r) {
    const double f = geo.f.at(x);
    if (r < -1e-12 || r > f * (1.0 + 1e-6)) {
      std::ostringstream os;
      os << "streamline left the inner region at x=" << x << " (r=" << r << ", f=" << f << ")";
      fail(ErrorClass::internal_consistency, os.str());
    }
    const double ux = interpolate_field(u.ux, geo, x, r);
    if (!(ux > 0.0)) fail(ErrorClass::transport_degeneracy, "streamline: non-positive u_x");
    return interpolate_field(u.ur, geo, x, r) / ux;
  };
  Streamline s;
  s.x.reserve(static_cast<std::size_t>(steps) + 1);
  s.r.reserve(static_cast<std::size_t>(steps) + 1);
  double x = 0.0, r = r_start;
  s.x.push_back(x);
  s.r.push_back(r);
  for (int n = 0; n < steps; ++n) {
    const double k1 = slope(x, r);
    const double k2 = slope(x + 0.5 * dx, r + 0.5 * dx * k1);
    const double k3 = slope(x + 0.5 * dx, r + 0.5 * dx * k2);
    const double k4 = slope(x + dx, r + dx * k3);
    r += dx / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    x = (n + 1) * dx;
    s.x.push_back(x);
    s.r.push_back(r);
  }
  s.reached_exit = true;
  return s;
}

}  // namespace axicd
