#pragma once

#include <vector>

#include "axicd/elliptic.hpp"
#include "axicd/entrance_profile.hpp"
#include "axicd/geometry.hpp"
#include "axicd/interp.hpp"

namespace axicd {

enum class Quadrature { trapezoid, simpson };

/// Cumulative mass flux w(x, r) = integral_0^r s rho u_x ds along each column.
/// Throws SolverError(transport_degeneracy) when rho u_x < rho0 u0 / 2.
Field2D compute_stream_h(const Field2D& rho_ux, const Geometry& geo, double flux_floor,
                         Quadrature rule = Quadrature::trapezoid);

/// Column integral integral_0^{f(x)} t rho u_x dt for every axial node.
std::vector<double> column_flux(const Field2D& rho_ux, const Geometry& geo, Quadrature rule);

/// Entrance flux map r -> w(0, r), interpolated monotone-cubically in r^2
/// (the map is linear in r^2 near the axis).
class EntranceFluxMap {
 public:
  EntranceFluxMap() = default;
  /// w_column[j] at radii r[j], strictly increasing from w(0) = 0.
  EntranceFluxMap(const std::vector<double>& r, const std::vector<double>& w_column);

  double operator()(double r) const { return map_(r * r); }
  double inverse(double w) const;
  double total() const { return map_.y_back(); }
  double r_max() const { return r_max_; }

 private:
  MonotoneCubic map_;
  double r_max_ = 0.5;
};

EntranceFluxMap build_entrance_flux_map(const Field2D& w, const Geometry& geo);

/// Footpoint radius R0 = G^{-1}(w). Values above the entrance total by more
/// than rel_tol throw flux_imbalance; smaller excesses are clamped and the
/// largest clamp is reported through clamped_excess.
Field2D compute_footpoint_R0(const Field2D& w, const EntranceFluxMap& map, const Geometry& geo,
                             double rel_tol = 1e-6, double* clamped_excess = nullptr);

struct TransportedFields {
  Field2D S, Lambda;
};

TransportedFields transport_SLambda(const EntranceProfile& p, const Field2D& R0);

/// Swirl speed Lambda / r = (R0/r) nu_en(R0), zero on the axis.
Field2D swirl_velocity(const Field2D& R0, const EntranceProfile& p, const Geometry& geo);

/// (S, Lambda) on the strip 0 <= r <= 3/4, stored per axial column as
/// samples uniform in y = r / f(x) for y in [0, 2]; values for y > 1 come
/// from the three-point reflection with weights (6, -32, 27).
class StripField {
 public:
  StripField() = default;
  StripField(std::vector<double> f, int nr);

  int columns() const { return static_cast<int>(f_.size()); }
  int nr() const { return nr_; }
  double column_radius(int i) const { return f_[static_cast<std::size_t>(i)]; }
  double& S(int i, int m) { return S_[idx(i, m)]; }
  double& Lambda(int i, int m) { return L_[idx(i, m)]; }
  double S(int i, int m) const { return S_[idx(i, m)]; }
  double Lambda(int i, int m) const { return L_[idx(i, m)]; }

  /// Cubic interpolation in y on column i at physical radius r <= 2 f.
  double S_at(int i, double r) const;
  double Lambda_at(int i, double r) const;

  /// Nodal fields on a (possibly different) geometry with the same columns.
  TransportedFields sample(const Geometry& geo) const;

 private:
  std::vector<double> f_;
  int nr_ = 0;
  std::vector<double> S_, L_;
  std::size_t idx(int i, int m) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(2 * nr_ + 1) +
           static_cast<std::size_t>(m);
  }
};

/// Reflection weights c_i and the moment sums sum_i c_i (-1/i)^m, m = 0,1,2.
inline constexpr double kExtensionWeights[3] = {6.0, -32.0, 27.0};
double extension_moment(int m);

/// Extends nodal (S, Lambda) on r <= f to the strip r <= 2 f >= 3/4.
StripField extend_W(const TransportedFields& W, const Geometry& geo);

/// Strip field built from entrance data along horizontal streamlines.
StripField initial_strip(const EntranceProfile& p, const Geometry& geo);

/// Max change between two strip fields on fixed radii r in [0, 3/4],
/// entropy relative to S0 and angular momentum relative to u0 / 2.
double strip_change(const StripField& a, const StripField& b, double S0, double u0);

struct Streamline {
  std::vector<double> x, r;
  bool reached_exit = false;
};

/// RK4 integration of dr/dx = u_r / u_x through bilinearly interpolated
/// nodal velocities, starting at (0, r_start). Verification only.
Streamline trace_streamline_oracle(const VelocityField& u, const Geometry& geo, double r_start,
                                   int steps);

/// Bilinear interpolation of a nodal field at a physical point.
double interpolate_field(const Field2D& F, const Geometry& geo, double x, double r);

}  // namespace axicd
