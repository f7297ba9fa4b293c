#pragma once

#include <vector>

namespace axicd {

struct ReferenceGrid {
  double L = 1.0;
  int nx = 16, nr = 16;  // cell counts; nodes are (nx+1) x (nr+1)
  double hxi = 1.0 / 16, heta = 1.0 / 16;

  double xi(int i) const { return i * hxi; }
  double eta(int j) const { return j * heta; }
  double x(int i) const { return L * xi(i); }
  double hx() const { return L * hxi; }
  int nodes() const { return (nx + 1) * (nr + 1); }
  int index(int i, int j) const { return i * (nr + 1) + j; }
};

/// Throws SolverError(geometry) for L <= 0 or nx, nr < 16.
ReferenceGrid build_reference_grid(double L, int nx, int nr);

enum class AxisKind { even, odd };

/// Nodal grid function on the reference rectangle, column-major in x.
struct Field2D {
  int nx = 0, nr = 0;
  AxisKind axis = AxisKind::even;
  std::vector<double> v;

  Field2D() = default;
  Field2D(const ReferenceGrid& g, AxisKind kind, double value = 0.0)
      : nx(g.nx), nr(g.nr), axis(kind), v(static_cast<std::size_t>(g.nodes()), value) {}

  double& operator()(int i, int j) { return v[static_cast<std::size_t>(i * (nr + 1) + j)]; }
  double operator()(int i, int j) const { return v[static_cast<std::size_t>(i * (nr + 1) + j)]; }
  double max_abs() const;
};

double max_abs_diff(const Field2D& a, const Field2D& b);

/// Contact radius sampled on the axial nodes. Slopes use centred
/// differences with second-order one-sided end stencils, then the end
/// slopes are clamped to zero.
class FreeBoundaryCurve {
 public:
  FreeBoundaryCurve() = default;
  FreeBoundaryCurve(double L, std::vector<double> samples);
  static FreeBoundaryCurve flat(double L, int nx, double value = 0.5);

  double L() const { return L_; }
  int nx() const { return static_cast<int>(f_.size()) - 1; }
  double h() const { return L_ / nx(); }
  double operator[](int i) const { return f_[static_cast<std::size_t>(i)]; }
  double slope(int i) const { return fp_[static_cast<std::size_t>(i)]; }
  double curvature(int i) const { return fpp_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& samples() const { return f_; }
  const std::vector<double>& slopes() const { return fp_; }
  /// Unclamped one-sided end slopes, reported as a diagnostic.
  double raw_end_slope(bool exit_end) const { return exit_end ? raw_exit_ : raw_entry_; }

  /// Cubic interpolation between samples.
  double at(double x) const;
  double slope_at(double x) const;

  /// Throws SolverError(geometry) unless 3/8 <= f <= 5/8 and f(0) = 1/2.
  void check_band() const;

 private:
  double L_ = 1.0;
  std::vector<double> f_, fp_, fpp_;
  double raw_entry_ = 0, raw_exit_ = 0;
};

/// Chain-rule coefficients of the map (x, r) -> (x/L, r/f(x)) at every node.
struct Geometry {
  ReferenceGrid grid;
  FreeBoundaryCurve f;
  std::vector<double> r;          // physical radius eta*f
  std::vector<double> alpha;      // d/dx = (1/L) d/dxi + alpha d/deta, alpha = -eta f'/f
  std::vector<double> inv_f;      // d/dr = inv_f d/deta (per column)
  std::vector<double> jacobian;   // r * f, for area quadrature in (x, eta)

  double radius(int i, int j) const { return r[static_cast<std::size_t>(grid.index(i, j))]; }
  double alpha_at(int i, int j) const { return alpha[static_cast<std::size_t>(grid.index(i, j))]; }
  double x(int i) const { return grid.x(i); }
};

/// Throws SolverError(geometry) if f leaves its band.
Geometry metric_coefficients(const FreeBoundaryCurve& f, const ReferenceGrid& grid);

struct BoundaryFrame {
  std::vector<double> tau_x, tau_r, n_x, n_r;
};

BoundaryFrame boundary_frames(const FreeBoundaryCurve& f);

/// End treatment in the axial direction for first differences.
enum class XEnd { one_sided, even };

/// Reference-coordinate first differences at a node.
double d_xi(const Field2D& F, const ReferenceGrid& g, int i, int j, XEnd end);
double d_eta(const Field2D& F, const ReferenceGrid& g, int i, int j);

/// Physical gradient of a nodal field.
struct Gradient {
  Field2D dx, dr;
};
Gradient gradient(const Field2D& F, const Geometry& geo, XEnd end);

/// Area integral of a nodal field over the meridional section, trapezoid in
/// both reference directions with the Jacobian r*f: integral of F r dr dx.
double meridional_integral(const Field2D& F, const Geometry& geo);

}  // namespace axicd
